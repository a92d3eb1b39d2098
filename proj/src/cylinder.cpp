#include "oped/cylinder.hpp"

#include "oped/chebyshev.hpp"
#include "oped/grids.hpp"

#include <cmath>
#include <stdexcept>

namespace oped {

namespace {

void check_sinogram3d(const Sinogram3D& s) {
  if (s.m < 1 || s.n < 1 || !(s.L > 0))
    throw std::invalid_argument("reconstruct3d: invalid sinogram parameters");
  if (int(s.slices.size()) != s.n || s.zs.size() != s.n)
    throw std::invalid_argument("reconstruct3d: slice count does not match n");
  for (const auto& slice : s.slices)
    if (slice.rows() != 2 * s.m + 1 || slice.cols() != 2 * s.m)
      throw std::invalid_argument("reconstruct3d: slice shape does not match m");
}

// suffix(k) = sum_{l=0}^{2m-k} p_l(w) p_l(z)
Eigen::ArrayXd pl_suffix(int m, double w, double z, double L) {
  const Eigen::ArrayXd pw = scaled_cheb_t_all(2 * m, w, L);
  const Eigen::ArrayXd pz = scaled_cheb_t_all(2 * m, z, L);
  Eigen::ArrayXd prefix(2 * m + 1);
  double acc = 0.0;
  for (int l = 0; l <= 2 * m; ++l) {
    acc += pw[l] * pz[l];
    prefix[l] = acc;
  }
  Eigen::ArrayXd suffix(2 * m + 1);
  for (int k = 0; k <= 2 * m; ++k) suffix[k] = prefix[2 * m - k];
  return suffix;
}

}  // namespace

double phi_nu_3d(int m, int nu, double w, double t, const Eigen::Vector3d& p,
                 double L) {
  if (m < 1) throw std::invalid_argument("phi_nu_3d: m must be >= 1");
  if (nu < 0 || nu > 2 * m) throw std::invalid_argument("phi_nu_3d: nu out of range");
  const AngleGrid& g = angle_grid(m);
  const Eigen::ArrayXd suffix = pl_suffix(m, w, p.z(), L);
  const double proj = p.x() * std::cos(g.phi[nu]) + p.y() * std::sin(g.phi[nu]);
  double acc = 0.0;
  double ut_p = 0.0, ut_c = 1.0;
  double uv_p = 0.0, uv_c = 1.0;
  for (int k = 0; k <= 2 * m; ++k) {
    acc += (k + 1) * ut_c * uv_c * suffix[k];
    const double ut_n = 2.0 * t * ut_c - ut_p;
    const double uv_n = 2.0 * proj * uv_c - uv_p;
    ut_p = ut_c;
    ut_c = ut_n;
    uv_p = uv_c;
    uv_c = uv_n;
  }
  return acc;
}

double reconstruct3d_point(const Sinogram3D& s, const Eigen::Vector3d& p) {
  check_sinogram3d(s);
  if (p.head<2>().squaredNorm() > 1.0 || p.z() < 0.0 || p.z() > s.L)
    throw std::domain_error("reconstruct3d_point: point outside the cylinder");
  const int m = s.m;
  const AngleGrid& g = angle_grid(m);
  const int n1 = 2 * m + 1;
  double acc = 0.0;
  for (int nu = 0; nu <= 2 * m; ++nu)
    for (int jj = 0; jj < 2 * m; ++jj) {
      const double coef = std::sin(g.psi[jj]) / (double(s.n) * n1 * n1);
      for (int i = 0; i < s.n; ++i)
        acc += s.slices[i](nu, jj) * coef *
               phi_nu_3d(m, nu, s.zs[i], g.t[jj], p, s.L);
    }
  return acc;
}

CylinderImage reconstruct3d(const Sinogram3D& s, const ImageGrid& grid,
                            const Eigen::ArrayXd& zs, double fill) {
  check_sinogram3d(s);
  for (Eigen::Index i = 0; i < zs.size(); ++i)
    if (zs[i] < 0.0 || zs[i] > s.L)
      throw std::domain_error("reconstruct3d: evaluation height outside [0, L]");

  const int m = s.m;
  const int n1 = 2 * m + 1;
  const AngleGrid& g = angle_grid(m);

  // sin((k+1) psi_j) = sin(psi_j) U_k(cos psi_j): the geometry factor of the
  // kernel, shared across slices.
  Eigen::MatrixXd smat(n1, 2 * m);
  for (int k = 0; k <= 2 * m; ++k)
    for (int jj = 0; jj < 2 * m; ++jj)
      smat(k, jj) = std::sin((k + 1) * g.psi[jj]);

  // Regroup the data per view: gview[nu](j, i) = gamma_{nu, j, i}.
  std::vector<Eigen::MatrixXd> gview(n1, Eigen::MatrixXd(2 * m, s.n));
  for (int i = 0; i < s.n; ++i)
    for (int nu = 0; nu < n1; ++nu)
      for (int jj = 0; jj < 2 * m; ++jj) gview[nu](jj, i) = s.slices[i](nu, jj);

  CylinderImage out;
  out.grid = grid;
  out.zs = zs;
  out.fill = fill;
  out.slices.assign(zs.size(), Eigen::ArrayXXd::Constant(grid.height, grid.width, fill));

  const double norm = 1.0 / (double(s.n) * n1 * n1);
  for (Eigen::Index zi = 0; zi < zs.size(); ++zi) {
    // S(k, i) = sum_{l<=2m-k} p_l(z_i) p_l(z)
    Eigen::MatrixXd S(n1, s.n);
    for (int i = 0; i < s.n; ++i) S.col(i) = pl_suffix(m, s.zs[i], zs[zi], s.L).matrix();
    // C(nu, k) = norm * sum_j sin((k+1) psi_j) sum_i gamma_{nu,j,i} S(k, i)
    Eigen::MatrixXd C(n1, n1);
    for (int nu = 0; nu < n1; ++nu) {
      const Eigen::MatrixXd a = gview[nu] * S.transpose();  // (2m) x (2m+1)
      for (int k = 0; k < n1; ++k) C(nu, k) = norm * smat.row(k).dot(a.col(k));
    }
    // value(p, z) = sum_nu sum_k (k+1) U_k(x cos phi_nu + y sin phi_nu) C(nu, k)
    Eigen::ArrayXXd& img = out.slices[zi];
    for (int q = 0; q < grid.height; ++q)
      for (int p = 0; p < grid.width; ++p) {
        if (!grid.masked(p, q)) continue;
        const double x = grid.x(p), y = grid.y(q);
        double acc = 0.0;
        for (int nu = 0; nu < n1; ++nu) {
          const double proj = x * std::cos(g.phi[nu]) + y * std::sin(g.phi[nu]);
          double up = 0.0, uc = 1.0;
          for (int k = 0; k < n1; ++k) {
            acc += (k + 1) * uc * C(nu, k);
            const double un = 2.0 * proj * uc - up;
            up = uc;
            uc = un;
          }
        }
        img(q, p) = acc;
      }
  }
  return out;
}

}  // namespace oped
