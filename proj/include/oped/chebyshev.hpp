#pragma once

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>

namespace oped {

/// Chebyshev polynomial of the second kind, U_k, by the three-term
/// recurrence U_0 = 1, U_1 = 2x, U_{k+1} = 2x U_k - U_{k-1}.
/// The recurrence stays regular at x = +-1, where |U_k| = k+1.
template <typename Scalar>
Scalar cheb_u(int k, Scalar x) {
  if (k < 0) throw std::invalid_argument("cheb_u: degree must be >= 0");
  Scalar prev = Scalar(1);
  if (k == 0) return prev;
  Scalar cur = Scalar(2) * x;
  for (int i = 1; i < k; ++i) {
    const Scalar next = Scalar(2) * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Chebyshev polynomial of the first kind, T_k.
template <typename Scalar>
Scalar cheb_t(int k, Scalar x) {
  if (k < 0) throw std::invalid_argument("cheb_t: degree must be >= 0");
  Scalar prev = Scalar(1);
  if (k == 0) return prev;
  Scalar cur = x;
  for (int i = 1; i < k; ++i) {
    const Scalar next = Scalar(2) * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// U_0(x) .. U_{kmax}(x) in one recurrence pass.
inline Eigen::ArrayXd cheb_u_all(int kmax, double x) {
  if (kmax < 0) throw std::invalid_argument("cheb_u_all: degree must be >= 0");
  Eigen::ArrayXd u(kmax + 1);
  u[0] = 1.0;
  if (kmax >= 1) u[1] = 2.0 * x;
  for (int k = 2; k <= kmax; ++k) u[k] = 2.0 * x * u[k - 1] - u[k - 2];
  return u;
}

/// Ridge polynomial U_k(theta; x, y) = U_k(x cos theta + y sin theta).
/// Constant along lines perpendicular to (cos theta, sin theta).
inline double ridge_u(int k, double theta, const Eigen::Vector2d& p) {
  return cheb_u(k, p.x() * std::cos(theta) + p.y() * std::sin(theta));
}

/// Orthonormal polynomials for the Chebyshev weight (1/pi)/sqrt(z(L-z))
/// on [0, L]: p_0 = 1, p_l(z) = sqrt(2) T_l(2z/L - 1) for l >= 1.
inline double scaled_cheb_t(int l, double z, double L) {
  if (l < 0) throw std::invalid_argument("scaled_cheb_t: degree must be >= 0");
  if (!(L > 0)) throw std::invalid_argument("scaled_cheb_t: L must be positive");
  if (z < 0.0 || z > L) throw std::domain_error("scaled_cheb_t: z outside [0, L]");
  if (l == 0) return 1.0;
  return std::sqrt(2.0) * cheb_t(l, 2.0 * z / L - 1.0);
}

/// p_0(z) .. p_{lmax}(z) in one pass.
inline Eigen::ArrayXd scaled_cheb_t_all(int lmax, double z, double L) {
  if (lmax < 0) throw std::invalid_argument("scaled_cheb_t_all: degree must be >= 0");
  if (!(L > 0)) throw std::invalid_argument("scaled_cheb_t_all: L must be positive");
  if (z < 0.0 || z > L) throw std::domain_error("scaled_cheb_t_all: z outside [0, L]");
  Eigen::ArrayXd p(lmax + 1);
  p[0] = 1.0;
  if (lmax == 0) return p;
  const double x = 2.0 * z / L - 1.0;
  const double s2 = std::sqrt(2.0);
  double tprev = 1.0, tcur = x;
  p[1] = s2 * tcur;
  for (int l = 2; l <= lmax; ++l) {
    const double tnext = 2.0 * x * tcur - tprev;
    tprev = tcur;
    tcur = tnext;
    p[l] = s2 * tcur;
  }
  return p;
}

}  // namespace oped
