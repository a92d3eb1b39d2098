#pragma once

#include "oped/grids.hpp"
#include "oped/image.hpp"
#include "oped/kernel.hpp"
#include "oped/phantom.hpp"

#include <Eigen/Core>

namespace oped {

/// Reconstruction from parallel-beam data:
///   value(p) = sum_{nu=0}^{2m} sum_{j=1}^{2m} data(nu, j) T_{j,nu}(p)
/// for masked pixels, `fill` elsewhere. Kernels come from the table when one
/// is given (it must match m and the grid), otherwise from kernel_closed on
/// the fly. Accumulation is nu-outer, j-inner with compensated summation.
Image reconstruct(const Sinogram2D& s, const ImageGrid& grid,
                  const KernelTable* table = nullptr, double fill = 0.0);

/// Single-point evaluation with the same accumulation order as the raster
/// path. p must lie in the closed unit disk.
double reconstruct_point(const Sinogram2D& s, const Eigen::Vector2d& p);

/// Multiplier variant of reconstruct.
Image reconstruct_eta(const Sinogram2D& s, const ImageGrid& grid,
                      const Multiplier& eta, double fill = 0.0);

/// Reconstruction from projections sampled on an arbitrary quadrature rule
/// for the sqrt(1-t^2) weight:
///   value(p) = sum_nu sum_j raw(nu, j) lambda_j Phi_nu(t_j; p)/(2 sqrt(1-t_j^2)).
/// raw is (2m+1) x rule.nodes.size(); nodes must lie strictly inside (-1, 1).
Image reconstruct_general(const Eigen::MatrixXd& raw, const QuadratureRule& rule,
                          int m, const ImageGrid& grid, double fill = 0.0);

}  // namespace oped
