#pragma once

#include <Eigen/Core>

#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace oped {

/// One weighted ellipse indicator. The density contribution is `weight`
/// inside the (closed) ellipse and 0 outside.
struct EllipseComponent {
  Eigen::Vector2d center{0.0, 0.0};
  double a = 1.0;         ///< semi-axis along the rotated x direction, > 0
  double b = 1.0;         ///< semi-axis along the rotated y direction, > 0
  double rotation = 0.0;  ///< radians, counterclockwise
  double weight = 1.0;

  bool contains(double x, double y) const;
  /// center norm + max semi-axis; <= 1 keeps the ellipse inside the unit disk.
  double reach() const { return center.norm() + std::max(a, b); }
};

/// Polynomial on the disk stored in the ridge orthonormal basis
///   { U_k(theta_{j,k}; .) : 0 <= j <= k <= degree },  theta_{j,k} = j pi/(k+1).
/// The triangular coefficient array has (degree+1)(degree+2)/2 entries.
class RidgePolynomial {
 public:
  RidgePolynomial() : RidgePolynomial(0) {}
  explicit RidgePolynomial(int degree);

  int degree() const { return degree_; }
  double coeff(int k, int j) const { return c_[index(k, j)]; }
  void set_coeff(int k, int j, double c) { c_[index(k, j)] = c; }
  void add_coeff(int k, int j, double c) { c_[index(k, j)] += c; }
  double coeff_l1() const { return c_.abs().sum(); }

  /// Pointwise value sum_{k,j} c_{k,j} U_k(theta_{j,k}; x, y).
  double operator()(double x, double y) const;

  static double basis_angle(int k, int j);

 private:
  int index(int k, int j) const;
  int degree_ = 0;
  Eigen::ArrayXd c_;
};

/// Exact basis coefficients of a bivariate polynomial given as a callable.
/// Uses the rotation identity between disk integrals and projections, with a
/// Gauss rule in t and Gauss-Legendre along each line; exact (up to roundoff)
/// whenever f is a polynomial of total degree <= degree.
RidgePolynomial ridge_project(const std::function<double(double, double)>& f,
                              int degree);

/// Test density: weighted ellipse indicators plus an optional polynomial part.
struct Phantom {
  std::vector<EllipseComponent> ellipses;
  std::optional<RidgePolynomial> poly;

  double operator()(double x, double y) const;
  /// Cheap upper bound for max |f| on the disk.
  double sup_bound() const;
};

struct PhantomParseError : std::runtime_error {
  PhantomParseError(int line_, const std::string& what_)
      : std::runtime_error(what_), line(line_) {}
  int line;
};

/// Phantom description format, one component per line:
///   ellipse cx cy a b rot weight
///   poly k j c
/// '#' starts a comment; blank lines are ignored. Ellipses must satisfy
/// |center| + max(a,b) <= 1 + 1e-12. Throws PhantomParseError with the
/// offending 1-based line number.
Phantom parse_phantom(std::istream& in);
Phantom load_phantom(const std::string& path);

/// Chord integral of one ellipse over the line x cos(theta) + y sin(theta) = t.
double radon_ellipse(const EllipseComponent& e, double theta, double t);

/// Closed-form projection of a ridge-basis polynomial: each basis term
/// contributes 2/(k+1) sqrt(1-t^2) U_k(t) times its value at
/// (cos theta, sin theta). Exact, no quadrature.
double radon_poly(const RidgePolynomial& p, double theta, double t);

/// Projection of a full phantom (ellipses + polynomial part).
double radon_phantom(const Phantom& ph, double theta, double t);

/// Brute-force projection oracle: Gauss-Legendre of the given order applied to
/// s -> f(t cos theta - s sin theta, t sin theta + s cos theta) over
/// [-sqrt(1-t^2), sqrt(1-t^2)].
double radon_numeric(const std::function<double(double, double)>& f,
                     double theta, double t, int order);

/// Plain Gauss-Legendre rule on [-1, 1] (unit weight), nodes ascending;
/// the line-integral rule behind radon_numeric. Computed by Golub-Welsch on
/// the Jacobi matrix and cached per order.
struct LegendreRule {
  Eigen::ArrayXd nodes;
  Eigen::ArrayXd weights;
};
const LegendreRule& gauss_legendre(int order);

/// Parallel-beam samples: data(nu, j-1) = R_{phi_nu}(f; cos psi_j).
struct Sinogram2D {
  int m = 0;
  Eigen::MatrixXd data;  // (2m+1) x 2m
};

Sinogram2D sinogram2d(const Phantom& ph, int m);

/// Stacked parallel-beam samples on the Gauss slices z_i of the cylinder.
struct Sinogram3D {
  int m = 0;
  int n = 0;
  double L = 1.0;
  Eigen::ArrayXd zs;                    ///< slice coordinates, = gauss_t_nodes(n, L)
  std::vector<Eigen::MatrixXd> slices;  ///< n entries, each (2m+1) x 2m
};

Sinogram3D sinogram3d(const std::function<Phantom(double)>& slice_at, int m,
                      int n, double L);

}  // namespace oped
