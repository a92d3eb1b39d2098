#pragma once

#include "oped/image.hpp"
#include "oped/phantom.hpp"

#include <Eigen/Core>

#include <vector>

namespace oped {

/// Cylinder summation kernel
///   Phi_nu(w, t; x, y, z) = sum_{k=0}^{2m} (k+1) U_k(t) U_k(phi_nu; x, y)
///                           sum_{l=0}^{2m-k} p_l(w) p_l(z),
/// with p_l the orthonormal Chebyshev family on [0, L].
double phi_nu_3d(int m, int nu, double w, double t, const Eigen::Vector3d& p,
                 double L);

/// Raster stack on the cylinder; slices[i](q, p) is the value at height zs[i].
struct CylinderImage {
  ImageGrid grid;
  Eigen::ArrayXd zs;
  std::vector<Eigen::ArrayXXd> slices;
  double fill = 0.0;
};

/// Cylinder reconstruction
///   value(p, z) = sum_nu sum_j sum_i gamma_{nu,j,i}
///                 [sin psi_j / (n (2m+1)^2)] Phi_nu(z_i, cos psi_j; p, z).
/// Evaluation heights zs are caller-chosen in [0, L] and independent of the
/// quadrature slices z_i.
CylinderImage reconstruct3d(const Sinogram3D& s, const ImageGrid& grid,
                            const Eigen::ArrayXd& zs, double fill = 0.0);

/// Single-point evaluation by the direct triple sum; (x, y) must lie in the
/// closed unit disk and z in [0, L].
double reconstruct3d_point(const Sinogram3D& s, const Eigen::Vector3d& p);

}  // namespace oped
