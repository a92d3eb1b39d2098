#pragma once

#include "oped/image.hpp"
#include "oped/kernel.hpp"
#include "oped/phantom.hpp"

#include <Eigen/Core>

#include <functional>
#include <vector>

namespace oped {

/// Lebesgue function Lambda_m(p) = sum_nu sum_j sin(psi_j) |T_{j,nu}(p)|;
/// its maximum over the disk is the uniform operator norm of the
/// reconstruction.
double lebesgue(int m, const Eigen::Vector2d& p);

/// Growth scan of max Lambda_m against the m log(m+1) comparator.
struct NormScan {
  std::vector<int> ms;
  Eigen::ArrayXd maxima;  ///< per-m maximum over grid pixels and the witness point
  Eigen::ArrayXd ratios;  ///< maxima / (m log(m+1))
};

/// Maximum of Lambda_m over the masked pixels of a grid_res x grid_res raster
/// plus the analytic witness point (cos(pi/(4m+2)), sin(pi/(4m+2))).
NormScan norm_scan(const std::vector<int>& ms, int grid_res);

/// Truncated orthogonal expansion S_{2m} f(p), with the t-integrals computed
/// by a dense Gauss rule applied to R_{phi_nu}(f; t)/sqrt(1-t^2). Independent
/// oracle for the reconstruction operators. `projection(theta, t)` must
/// return R_theta(f; t); dense_order must be >= 4m.
double s2m_oracle(const std::function<double(double, double)>& projection,
                  int m, const Eigen::Vector2d& p, int dense_order);

/// Phantom overload: projections from the analytic Radon formulas.
double s2m_oracle(const Phantom& ph, int m, const Eigen::Vector2d& p,
                  int dense_order);

struct ErrorMetrics {
  double linf = 0.0;
  double l2 = 0.0;
};

/// Max and root-mean-square deviation from a pointwise reference, taken over
/// masked pixels only.
ErrorMetrics error_metrics(const Image& img,
                           const std::function<double(double, double)>& ref);

struct ConvergenceRow {
  int m = 0;
  double linf = 0.0;
  double l2 = 0.0;
};

/// Per-m reconstruction error against a pointwise reference; the sinogram
/// source supplies the Radon data for each m.
std::vector<ConvergenceRow> convergence_study(
    const std::function<double(double, double)>& ref,
    const std::function<Sinogram2D(int)>& sino_source, const std::vector<int>& ms,
    int grid_res, TableVariant variant = TableVariant::plain);

/// Analytic-phantom convenience overload.
std::vector<ConvergenceRow> convergence_study(const Phantom& ph,
                                              const std::vector<int>& ms,
                                              int grid_res,
                                              TableVariant variant =
                                                  TableVariant::plain);

}  // namespace oped
