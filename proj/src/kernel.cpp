#include "oped/kernel.hpp"

#include "oped/chebyshev.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace oped {

namespace {

// Per-m trigonometric tables shared by the kernel evaluators.
struct ViewTrig {
  Eigen::ArrayXd cos_phi, sin_phi;    // per view nu = 0..2m
  Eigen::ArrayXd cos_psi, sin_psi;    // per offset j = 1..2m
  Eigen::ArrayXd cos_half, sin_half;  // cos(psi_j/2), sin(psi_j/2)
  Eigen::ArrayXd alt_sign;            // (-1)^j, j = 1..2m
  Eigen::MatrixXd smat;               // (2m+1) x 2m, smat(k, j-1) = sin((k+1) psi_j)
};

const ViewTrig& view_trig(int m) {
  // entries are immutable and never evicted, so a per-thread memo of the
  // last lookup skips the lock on the hot path
  thread_local int last_m = 0;
  thread_local const ViewTrig* last = nullptr;
  if (m == last_m && last != nullptr) return *last;
  static std::mutex mu;
  static std::map<int, std::unique_ptr<const ViewTrig>> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(m);
  if (it == cache.end()) {
    const AngleGrid& g = angle_grid(m);
    auto vt = std::make_unique<ViewTrig>();
    vt->cos_phi = g.phi.cos();
    vt->sin_phi = g.phi.sin();
    vt->cos_psi = g.psi.cos();
    vt->sin_psi = g.psi.sin();
    vt->cos_half = (g.psi / 2).cos();
    vt->sin_half = (g.psi / 2).sin();
    vt->alt_sign.resize(2 * m);
    for (int jj = 0; jj < 2 * m; ++jj) vt->alt_sign[jj] = (jj % 2 == 0) ? -1.0 : 1.0;
    vt->smat.resize(2 * m + 1, 2 * m);
    for (int k = 0; k <= 2 * m; ++k)
      for (int jj = 0; jj < 2 * m; ++jj)
        vt->smat(k, jj) = std::sin((k + 1) * g.psi[jj]);
    it = cache.emplace(m, std::move(vt)).first;
  }
  last_m = m;
  last = it->second.get();
  return *last;
}

void check_view(int m, int nu) {
  if (m < 1) throw std::invalid_argument("kernel: m must be >= 1");
  if (nu < 0 || nu > 2 * m) throw std::invalid_argument("kernel: nu out of range");
}

void check_offset(int m, int j) {
  if (j < 1 || j > 2 * m) throw std::invalid_argument("kernel: j out of range");
}

double view_projection(const ViewTrig& vt, int nu, const Eigen::Vector2d& p) {
  return p.x() * vt.cos_phi[nu] + p.y() * vt.sin_phi[nu];
}

// Fallback band around the removable singularity cos theta_nu = cos psi_j,
// where both denominators of the compact formula vanish.
double delta_sing(int m) { return 1e-6 / (2 * m + 1); }

// Width of the band where the compact formula is evaluated in the
// cancellation-free half-angle form instead of directly.
constexpr double kNearBand = 0.05;

double sum_term(int m, int jj, double proj, const ViewTrig& vt) {
  const int n1 = 2 * m + 1;
  double acc = 0.0;
  double up = 0.0, uc = 1.0;  // U_{-1}, U_0 at proj
  for (int k = 0; k <= 2 * m; ++k) {
    acc += (k + 1) * vt.smat(k, jj) * uc;
    const double un = 2.0 * proj * uc - up;
    up = uc;
    uc = un;
  }
  return acc / (double(n1) * n1);
}

// One term inside the band |c - cos psi_j| < kNearBand, where the direct
// form of the compact formula cancels. c is the clamped view projection,
// sa2/ca2 are sin/cos of acos(c)/2.
double near_term(int m, int jj, double c, double sa2, double ca2, double proj,
                 const ViewTrig& vt) {
  const int n1 = 2 * m + 1;
  const double ad = std::abs(c - vt.cos_psi[jj]);
  const double sp = vt.sin_psi[jj];
  if (ad < delta_sing(m)) return sum_term(m, jj, proj, vt);
  const double sina = 2.0 * sa2 * ca2;
  if (sina < 1e-6) return sum_term(m, jj, proj, vt);  // rim corner
  // Half-angle form: with a = acos(c), delta = a - psi_j, sigma = a + psi_j,
  //   1 - (-1)^j T_{2m+1}(c) = 2 sin^2((2m+1) delta/2)
  //   (c - cos psi_j)^2      = 4 sin^2(delta/2) sin^2(sigma/2)
  // and sin((2m+1)u)/sin(u) = U_{2m}(cos u) removes the 0/0 pair.
  const double cosd2 = ca2 * vt.cos_half[jj] + sa2 * vt.sin_half[jj];
  const double sins2 = sa2 * vt.cos_half[jj] + ca2 * vt.sin_half[jj];
  const double dd = cheb_u(2 * m, cosd2);
  const double cd = cheb_t(n1, cosd2);
  const double t1 = -sp * dd * dd / (4.0 * sins2 * sins2);
  const double t2 = sp * n1 * dd * cd / (2.0 * sina * sins2);
  return (t1 + t2) / (double(n1) * n1);
}

}  // namespace

Multiplier eta_default() {
  Multiplier eta;
  eta.smoothness = 3;
  eta.eval = [](double t) {
    if (t <= 1.0) return t >= 0.0 ? 1.0 : 0.0;
    if (t >= 2.0) return 0.0;
    const double u = t - 1.0;
    const double u4 = u * u * u * u;
    const double blend = u4 * (35.0 + u * (-84.0 + u * (70.0 - 20.0 * u)));
    return 1.0 - blend;
  };
  return eta;
}

double phi_nu(int m, int nu, double t, const Eigen::Vector2d& p) {
  check_view(m, nu);
  const double proj = view_projection(view_trig(m), nu, p);
  double acc = 0.0;
  double ut_p = 0.0, ut_c = 1.0;  // U_k(t)
  double uv_p = 0.0, uv_c = 1.0;  // U_k(proj)
  for (int k = 0; k <= 2 * m; ++k) {
    acc += (k + 1) * ut_c * uv_c;
    const double ut_n = 2.0 * t * ut_c - ut_p;
    const double uv_n = 2.0 * proj * uv_c - uv_p;
    ut_p = ut_c;
    ut_c = ut_n;
    uv_p = uv_c;
    uv_c = uv_n;
  }
  return acc / (2 * m + 1);
}

double kernel_sum(int m, int j, int nu, const Eigen::Vector2d& p) {
  check_view(m, nu);
  check_offset(m, j);
  const ViewTrig& vt = view_trig(m);
  return sum_term(m, j - 1, view_projection(vt, nu, p), vt);
}

double kernel_closed(int m, int j, int nu, const Eigen::Vector2d& p) {
  check_offset(m, j);
  // evaluates the full row so the scalar and row paths agree bitwise
  Eigen::ArrayXd row(2 * m);
  kernel_closed_row(m, nu, p, row);
  return row[j - 1];
}

void kernel_closed_row(int m, int nu, const Eigen::Vector2d& p,
                       Eigen::Ref<Eigen::ArrayXd> out) {
  check_view(m, nu);
  if (out.size() != 2 * m)
    throw std::invalid_argument("kernel_closed_row: buffer size must be 2m");
  const ViewTrig& vt = view_trig(m);
  const int n1 = 2 * m + 1;
  const double proj = view_projection(vt, nu, p);
  const double c = std::clamp(proj, -1.0, 1.0);
  // T_{2m+1}(c) and U_{2m}(c), the two interleaved recurrences
  double tp = 1.0, tc = c;
  double up = 1.0, uc = 2.0 * c;
  for (int k = 2; k <= 2 * m; ++k) {
    const double tn = 2.0 * c * tc - tp;
    const double un = 2.0 * c * uc - up;
    tp = tc;
    tc = tn;
    up = uc;
    uc = un;
  }
  const double t1c = 2.0 * c * tc - tp;
  const double u0c = uc;

  // direct form, vectorized over j; near-band entries are patched below
  const double inv_norm = 1.0 / (double(n1) * n1);
  const auto d = c - vt.cos_psi;
  out = -vt.sin_psi *
        ((1.0 - t1c * vt.alt_sign) + (n1 * u0c) * vt.alt_sign * d) /
        (2.0 * d.square()) * inv_norm;

  const double sa2 = std::sqrt((1.0 - c) / 2.0);
  const double ca2 = std::sqrt((1.0 + c) / 2.0);
  for (int jj = 0; jj < 2 * m; ++jj)
    if (std::abs(c - vt.cos_psi[jj]) < kNearBand)
      out[jj] = near_term(m, jj, c, sa2, ca2, proj, vt);
}

Eigen::ArrayXd kernel_closed_row(int m, int nu, const Eigen::Vector2d& p) {
  Eigen::ArrayXd row(2 * m);
  kernel_closed_row(m, nu, p, row);
  return row;
}

double kernel_eta(int m, int j, int nu, const Eigen::Vector2d& p,
                  const Multiplier& eta) {
  check_view(m, nu);
  check_offset(m, j);
  const ViewTrig& vt = view_trig(m);
  const double proj = view_projection(vt, nu, p);
  const int n1 = 2 * m + 1;
  double acc = 0.0;
  double up = 0.0, uc = 1.0;
  for (int k = 0; k <= 2 * m; ++k) {
    acc += eta(double(k) / m) * (k + 1) * vt.smat(k, j - 1) * uc;
    const double un = 2.0 * proj * uc - up;
    up = uc;
    uc = un;
  }
  return acc / (double(n1) * n1);
}

void kernel_eta_row(int m, int nu, const Eigen::Vector2d& p,
                    const Multiplier& eta, Eigen::Ref<Eigen::ArrayXd> out) {
  check_view(m, nu);
  if (out.size() != 2 * m)
    throw std::invalid_argument("kernel_eta_row: buffer size must be 2m");
  const ViewTrig& vt = view_trig(m);
  const double proj = view_projection(vt, nu, p);
  const int n1 = 2 * m + 1;
  Eigen::VectorXd u(n1);
  double up = 0.0, uc = 1.0;
  for (int k = 0; k <= 2 * m; ++k) {
    u[k] = eta(double(k) / m) * (k + 1) * uc / (double(n1) * n1);
    const double un = 2.0 * proj * uc - up;
    up = uc;
    uc = un;
  }
  out = (vt.smat.transpose() * u).array();
}

Eigen::ArrayXd kernel_eta_row(int m, int nu, const Eigen::Vector2d& p,
                              const Multiplier& eta) {
  Eigen::ArrayXd row(2 * m);
  kernel_eta_row(m, nu, p, eta, row);
  return row;
}

KernelTable build_table(int m, const ImageGrid& grid, TableVariant variant,
                        const Multiplier* eta) {
  if (grid.width < 1 || grid.height < 1)
    throw std::invalid_argument("build_table: empty grid");
  if (variant == TableVariant::eta && eta == nullptr)
    throw std::invalid_argument("build_table: eta variant needs a multiplier");
  angle_grid(m);  // validates m
  KernelTable table;
  table.m = m;
  table.grid = grid;
  table.variant = variant;
  table.slot.assign(std::size_t(grid.width) * grid.height, -1);
  for (int q = 0; q < grid.height; ++q)
    for (int p = 0; p < grid.width; ++p)
      if (grid.masked(p, q))
        table.slot[std::size_t(q) * grid.width + p] = table.slots++;
  table.values.resize(std::int64_t(table.slots) * (2 * m + 1) * (2 * m));
  for (int q = 0; q < grid.height; ++q)
    for (int p = 0; p < grid.width; ++p) {
      const int s = table.slot[std::size_t(q) * grid.width + p];
      if (s < 0) continue;
      const Eigen::Vector2d center(grid.x(p), grid.y(q));
      for (int nu = 0; nu <= 2 * m; ++nu) {
        const std::int64_t base = (std::int64_t(s) * (2 * m + 1) + nu) * (2 * m);
        Eigen::Ref<Eigen::ArrayXd> row = table.values.segment(base, 2 * m);
        if (variant == TableVariant::plain)
          kernel_closed_row(m, nu, center, row);
        else
          kernel_eta_row(m, nu, center, *eta, row);
      }
    }
  return table;
}

namespace {

static_assert(std::endian::native == std::endian::little,
              "table cache assumes a little-endian host");

constexpr char kTableMagic[8] = {'O', 'P', 'E', 'D', 'T', 'B', 'L', '1'};

struct Fnv1a {
  std::uint64_t state = 14695981039346656037ULL;
  void feed(const void* data, std::size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
      state ^= bytes[i];
      state *= 1099511628211ULL;
    }
  }
};

}  // namespace

void save_table(const std::string& path, const KernelTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open table file for writing: " + path);
  out.write(kTableMagic, sizeof(kTableMagic));
  const std::int64_t header[5] = {table.m, std::int64_t(table.variant),
                                  table.grid.width, table.grid.height,
                                  table.slots};
  Fnv1a sum;
  sum.feed(header, sizeof(header));
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  sum.feed(table.slot.data(), table.slot.size() * sizeof(std::int32_t));
  out.write(reinterpret_cast<const char*>(table.slot.data()),
            std::streamsize(table.slot.size() * sizeof(std::int32_t)));
  sum.feed(table.values.data(), std::size_t(table.values.size()) * sizeof(double));
  out.write(reinterpret_cast<const char*>(table.values.data()),
            std::streamsize(table.values.size() * sizeof(double)));
  out.write(reinterpret_cast<const char*>(&sum.state), sizeof(sum.state));
  if (!out) throw std::runtime_error("short write to table file: " + path);
}

KernelTable load_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open table file: " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kTableMagic, sizeof(magic)) != 0)
    throw std::runtime_error("not a kernel table file: " + path);
  std::int64_t header[5];
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  if (!in) throw std::runtime_error("truncated table file: " + path);
  KernelTable table;
  table.m = int(header[0]);
  table.variant = TableVariant(header[1]);
  if (table.m < 1 || header[2] < 1 || header[3] < 1 || header[4] < 0 ||
      (header[1] != 0 && header[1] != 1))
    throw std::runtime_error("corrupt table header: " + path);
  table.grid = ImageGrid(int(header[2]), int(header[3]));
  table.slots = int(header[4]);
  Fnv1a sum;
  sum.feed(header, sizeof(header));
  table.slot.resize(std::size_t(table.grid.width) * table.grid.height);
  in.read(reinterpret_cast<char*>(table.slot.data()),
          std::streamsize(table.slot.size() * sizeof(std::int32_t)));
  table.values.resize(std::int64_t(table.slots) * (2 * table.m + 1) *
                      (2 * table.m));
  in.read(reinterpret_cast<char*>(table.values.data()),
          std::streamsize(std::size_t(table.values.size()) * sizeof(double)));
  std::uint64_t stored = 0;
  in.read(reinterpret_cast<char*>(&stored), sizeof(stored));
  if (!in) throw std::runtime_error("truncated table file: " + path);
  sum.feed(table.slot.data(), table.slot.size() * sizeof(std::int32_t));
  sum.feed(table.values.data(), std::size_t(table.values.size()) * sizeof(double));
  if (sum.state != stored)
    throw std::runtime_error("table checksum mismatch: " + path);
  return table;
}

}  // namespace oped
