#pragma once

#include <Eigen/Core>

namespace oped {

/// Angle/offset grid for resolution parameter m: 2m+1 equally spaced view
/// angles and 2m parallel offsets per view. The offsets t_j = cos(j pi/(2m+1))
/// are exactly the zeros of U_{2m}.
struct AngleGrid {
  int m = 0;
  Eigen::ArrayXd phi;  ///< phi[nu]  = 2 pi nu/(2m+1), nu = 0..2m, in [0, 2pi)
  Eigen::ArrayXd psi;  ///< psi[j-1] = j pi/(2m+1),    j  = 1..2m, in (0, pi)
  Eigen::ArrayXd t;    ///< t[j-1]   = cos psi_j, strictly decreasing in (-1, 1)
};

/// Grids are computed once per m and cached immutably; the returned reference
/// stays valid for the lifetime of the process and is safe to share across
/// threads. Throws std::invalid_argument for m < 1 (the offset set would be
/// empty and the reconstruction operator degenerate).
const AngleGrid& angle_grid(int m);

/// Quadrature rule in the normalization
///   (2/pi) int_{-1}^{1} g(t) sqrt(1-t^2) dt ~ sum_j weights[j] g(nodes[j]),
/// with weights summing to 1. `exactness` is the highest polynomial degree
/// integrated without error.
struct QuadratureRule {
  Eigen::ArrayXd nodes;
  Eigen::ArrayXd weights;
  int exactness = 0;

  template <typename F>
  double operator()(F&& g) const {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < nodes.size(); ++i) acc += weights[i] * g(nodes[i]);
    return acc;
  }
};

/// Gauss rule for the weight sqrt(1-t^2): nodes cos(j pi/(n+1)), weights
/// 2 sin^2(j pi/(n+1))/(n+1), exact for degrees <= 2n-1.
QuadratureRule gauss_u_rule(int n);

/// Gauss nodes for the Chebyshev weight on [0, L]:
///   (1/pi) int_0^L g(z) dz/sqrt(z(L-z)) ~ (1/n) sum_i g(z_i),
/// z_i = L(1 + cos((2i+1) pi/(2n)))/2, exact for degrees <= 2n-1.
Eigen::ArrayXd gauss_t_nodes(int n, double L);

}  // namespace oped
