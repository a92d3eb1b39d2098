#include "oped/analysis.hpp"

#include "oped/grids.hpp"
#include "oped/reconstruct.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oped {

namespace {

double lebesgue_with(const Eigen::ArrayXd& sin_psi, int m,
                     const Eigen::Vector2d& p, Eigen::ArrayXd& row) {
  double acc = 0.0;
  for (int nu = 0; nu <= 2 * m; ++nu) {
    kernel_closed_row(m, nu, p, row);
    acc += (sin_psi * row.abs()).sum();
  }
  return acc;
}

}  // namespace

double lebesgue(int m, const Eigen::Vector2d& p) {
  if (p.squaredNorm() > 1.0)
    throw std::domain_error("lebesgue: point outside the unit disk");
  const AngleGrid& g = angle_grid(m);
  const Eigen::ArrayXd sin_psi = g.psi.sin();
  Eigen::ArrayXd row(2 * m);
  return lebesgue_with(sin_psi, m, p, row);
}

NormScan norm_scan(const std::vector<int>& ms, int grid_res) {
  if (grid_res < 64)
    throw std::invalid_argument("norm_scan: grid_res must be >= 64");
  NormScan scan;
  scan.ms = ms;
  scan.maxima.resize(Eigen::Index(ms.size()));
  scan.ratios.resize(Eigen::Index(ms.size()));
  const ImageGrid grid(grid_res, grid_res);
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const int m = ms[i];
    const Eigen::ArrayXd sin_psi = angle_grid(m).psi.sin();
    Eigen::ArrayXd row(2 * m);
    const double eps = std::numbers::pi / (4 * m + 2);
    double best = lebesgue_with(sin_psi, m, {std::cos(eps), std::sin(eps)}, row);
    for (int q = 0; q < grid.height; ++q)
      for (int p = 0; p < grid.width; ++p)
        if (grid.masked(p, q))
          best = std::max(best,
                          lebesgue_with(sin_psi, m, {grid.x(p), grid.y(q)}, row));
    scan.maxima[Eigen::Index(i)] = best;
    scan.ratios[Eigen::Index(i)] = best / (m * std::log(m + 1.0));
  }
  return scan;
}

double s2m_oracle(const std::function<double(double, double)>& projection,
                  int m, const Eigen::Vector2d& p, int dense_order) {
  if (dense_order < 4 * m)
    throw std::invalid_argument("s2m_oracle: dense_order must be >= 4m");
  if (p.squaredNorm() > 1.0)
    throw std::domain_error("s2m_oracle: point outside the unit disk");
  const AngleGrid& g = angle_grid(m);
  const QuadratureRule rule = gauss_u_rule(dense_order);
  double acc = 0.0;
  for (int nu = 0; nu <= 2 * m; ++nu) {
    // (1/pi) int R(f;t) Phi_nu(t;p) dt
    //   = (1/2) sum_q lambda_q R(f;t_q)/sqrt(1-t_q^2) Phi_nu(t_q; p)
    double view = 0.0;
    for (Eigen::Index q = 0; q < rule.nodes.size(); ++q) {
      const double t = rule.nodes[q];
      view += rule.weights[q] * projection(g.phi[nu], t) /
              std::sqrt(1.0 - t * t) * phi_nu(m, nu, t, p);
    }
    acc += view / 2.0;
  }
  return acc;
}

double s2m_oracle(const Phantom& ph, int m, const Eigen::Vector2d& p,
                  int dense_order) {
  return s2m_oracle(
      [&ph](double theta, double t) { return radon_phantom(ph, theta, t); }, m,
      p, dense_order);
}

ErrorMetrics error_metrics(const Image& img,
                           const std::function<double(double, double)>& ref) {
  ErrorMetrics metrics;
  double sq = 0.0;
  std::int64_t count = 0;
  const ImageGrid& grid = img.grid;
  if (img.values.rows() != grid.height || img.values.cols() != grid.width)
    throw std::invalid_argument("error_metrics: image does not match its grid");
  for (int q = 0; q < grid.height; ++q)
    for (int p = 0; p < grid.width; ++p) {
      if (!grid.masked(p, q)) continue;
      const double d = std::abs(img.values(q, p) - ref(grid.x(p), grid.y(q)));
      metrics.linf = std::max(metrics.linf, d);
      sq += d * d;
      ++count;
    }
  metrics.l2 = count > 0 ? std::sqrt(sq / double(count)) : 0.0;
  return metrics;
}

std::vector<ConvergenceRow> convergence_study(
    const std::function<double(double, double)>& ref,
    const std::function<Sinogram2D(int)>& sino_source, const std::vector<int>& ms,
    int grid_res, TableVariant variant) {
  const ImageGrid grid(grid_res, grid_res);
  const Multiplier eta = eta_default();
  std::vector<ConvergenceRow> rows;
  rows.reserve(ms.size());
  for (int m : ms) {
    const Sinogram2D s = sino_source(m);
    const Image img = (variant == TableVariant::eta)
                          ? reconstruct_eta(s, grid, eta)
                          : reconstruct(s, grid);
    const ErrorMetrics e = error_metrics(img, ref);
    rows.push_back({m, e.linf, e.l2});
  }
  return rows;
}

std::vector<ConvergenceRow> convergence_study(const Phantom& ph,
                                              const std::vector<int>& ms,
                                              int grid_res,
                                              TableVariant variant) {
  return convergence_study(
      [&ph](double x, double y) { return ph(x, y); },
      [&ph](int m) { return sinogram2d(ph, m); }, ms, grid_res, variant);
}

}  // namespace oped
