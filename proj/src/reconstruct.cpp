#include "oped/reconstruct.hpp"

#include "oped/chebyshev.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace oped {

namespace {

// Neumaier compensated accumulator; keeps the polynomial-reproduction
// tolerances realistic at m = 8 without changing the summation order.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    const double t = sum + v;
    comp += (std::abs(sum) >= std::abs(v)) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

void check_sinogram(const Sinogram2D& s) {
  if (s.m < 1 || s.data.rows() != 2 * s.m + 1 || s.data.cols() != 2 * s.m)
    throw std::invalid_argument("reconstruct: sinogram shape does not match m");
}

double accumulate_closed(const Sinogram2D& s, const Eigen::Vector2d& p) {
  CompensatedSum acc;
  Eigen::ArrayXd row(2 * s.m);
  for (int nu = 0; nu <= 2 * s.m; ++nu) {
    kernel_closed_row(s.m, nu, p, row);
    for (int jj = 0; jj < 2 * s.m; ++jj) acc.add(s.data(nu, jj) * row[jj]);
  }
  return acc.value();
}

// rows(nu, p, q, center, row) fills the 2m kernel values of one view.
template <typename RowFn>
Image raster(const Sinogram2D& s, const ImageGrid& grid, double fill,
             RowFn&& rows) {
  Image img;
  img.grid = grid;
  img.fill = fill;
  img.values = Eigen::ArrayXXd::Constant(grid.height, grid.width, fill);
  Eigen::ArrayXd row(2 * s.m);
  for (int q = 0; q < grid.height; ++q)
    for (int p = 0; p < grid.width; ++p) {
      if (!grid.masked(p, q)) continue;
      const Eigen::Vector2d center(grid.x(p), grid.y(q));
      CompensatedSum acc;
      for (int nu = 0; nu <= 2 * s.m; ++nu) {
        rows(nu, p, q, center, row);
        for (int jj = 0; jj < 2 * s.m; ++jj) acc.add(s.data(nu, jj) * row[jj]);
      }
      img.values(q, p) = acc.value();
    }
  return img;
}

}  // namespace

Image reconstruct(const Sinogram2D& s, const ImageGrid& grid,
                  const KernelTable* table, double fill) {
  check_sinogram(s);
  if (table != nullptr) {
    if (table->m != s.m)
      throw std::invalid_argument("reconstruct: table m does not match sinogram");
    if (!(table->grid == grid))
      throw std::invalid_argument("reconstruct: table grid does not match");
    if (table->variant != TableVariant::plain)
      throw std::invalid_argument("reconstruct: table holds the eta variant");
    return raster(s, grid, fill,
                  [&](int nu, int p, int q, const Eigen::Vector2d&,
                      Eigen::ArrayXd& row) {
                    const int slot = table->slot_at(p, q);
                    for (int jj = 0; jj < 2 * s.m; ++jj)
                      row[jj] = table->value(slot, nu, jj);
                  });
  }
  return raster(s, grid, fill,
                [&](int nu, int, int, const Eigen::Vector2d& c,
                    Eigen::ArrayXd& row) { kernel_closed_row(s.m, nu, c, row); });
}

double reconstruct_point(const Sinogram2D& s, const Eigen::Vector2d& p) {
  check_sinogram(s);
  if (p.squaredNorm() > 1.0)
    throw std::domain_error("reconstruct_point: point outside the unit disk");
  return accumulate_closed(s, p);
}

Image reconstruct_eta(const Sinogram2D& s, const ImageGrid& grid,
                      const Multiplier& eta, double fill) {
  check_sinogram(s);
  return raster(s, grid, fill,
                [&](int nu, int, int, const Eigen::Vector2d& c,
                    Eigen::ArrayXd& row) { kernel_eta_row(s.m, nu, c, eta, row); });
}

Image reconstruct_general(const Eigen::MatrixXd& raw, const QuadratureRule& rule,
                          int m, const ImageGrid& grid, double fill) {
  if (m < 1) throw std::invalid_argument("reconstruct_general: m must be >= 1");
  const Eigen::Index n = rule.nodes.size();
  if (raw.rows() != 2 * m + 1 || raw.cols() != n)
    throw std::invalid_argument("reconstruct_general: data shape mismatch");
  if (rule.weights.size() != n)
    throw std::invalid_argument("reconstruct_general: malformed rule");
  for (Eigen::Index j = 0; j < n; ++j)
    if (!(std::abs(rule.nodes[j]) < 1.0))
      throw std::invalid_argument("reconstruct_general: node not inside (-1, 1)");

  // The Gauss rule with 2m nodes lands exactly on the tabulated kernel grid;
  // take the closed-kernel fast path there.
  if (n == 2 * m) {
    const QuadratureRule gauss = gauss_u_rule(2 * m);
    if ((rule.nodes == gauss.nodes).all() && (rule.weights == gauss.weights).all()) {
      Sinogram2D s;
      s.m = m;
      s.data = raw;
      return reconstruct(s, grid, nullptr, fill);
    }
  }

  // scale_j = lambda_j / (2 sqrt(1 - t_j^2)); ukt(k, j) = U_k(t_j)
  Eigen::ArrayXd scale(n);
  for (Eigen::Index j = 0; j < n; ++j)
    scale[j] = rule.weights[j] / (2.0 * std::sqrt(1.0 - rule.nodes[j] * rule.nodes[j]));
  Eigen::MatrixXd ukt(2 * m + 1, n);
  for (Eigen::Index j = 0; j < n; ++j)
    ukt.col(j) = cheb_u_all(2 * m, rule.nodes[j]).matrix();

  const AngleGrid& g = angle_grid(m);
  Image img;
  img.grid = grid;
  img.fill = fill;
  img.values = Eigen::ArrayXXd::Constant(grid.height, grid.width, fill);
  Eigen::VectorXd wk(2 * m + 1);
  for (int q = 0; q < grid.height; ++q)
    for (int p = 0; p < grid.width; ++p) {
      if (!grid.masked(p, q)) continue;
      const double x = grid.x(p), y = grid.y(q);
      CompensatedSum acc;
      for (int nu = 0; nu <= 2 * m; ++nu) {
        const double proj = x * std::cos(g.phi[nu]) + y * std::sin(g.phi[nu]);
        double up = 0.0, uc = 1.0;
        for (int k = 0; k <= 2 * m; ++k) {
          wk[k] = (k + 1) * uc / (2 * m + 1);
          const double un = 2.0 * proj * uc - up;
          up = uc;
          uc = un;
        }
        const Eigen::VectorXd phi_at_nodes = ukt.transpose() * wk;
        for (Eigen::Index j = 0; j < n; ++j)
          acc.add(raw(nu, j) * scale[j] * phi_at_nodes[j]);
      }
      img.values(q, p) = acc.value();
    }
  return img;
}

}  // namespace oped
