#include "oped/phantom.hpp"

#include "oped/chebyshev.hpp"
#include "oped/grids.hpp"

#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

namespace oped {

const LegendreRule& gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<const LegendreRule>> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) {
    // Golub-Welsch: eigen-decompose the symmetric Jacobi matrix of the
    // Legendre recurrence; nodes are the eigenvalues, weights come from the
    // first eigenvector components.
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(order, order);
    for (int k = 1; k < order; ++k) {
      const double b = k / std::sqrt(4.0 * k * k - 1.0);
      jac(k, k - 1) = b;
      jac(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
    auto rule = std::make_unique<LegendreRule>();
    rule->nodes = es.eigenvalues().array();
    rule->weights = 2.0 * es.eigenvectors().row(0).array().square();
    it = cache.emplace(order, std::move(rule)).first;
  }
  return *it->second;
}

bool EllipseComponent::contains(double x, double y) const {
  const double dx = x - center.x();
  const double dy = y - center.y();
  const double cr = std::cos(rotation), sr = std::sin(rotation);
  const double u = (dx * cr + dy * sr) / a;
  const double v = (-dx * sr + dy * cr) / b;
  return u * u + v * v <= 1.0;
}

RidgePolynomial::RidgePolynomial(int degree) : degree_(degree) {
  if (degree < 0) throw std::invalid_argument("RidgePolynomial: degree must be >= 0");
  c_ = Eigen::ArrayXd::Zero((degree + 1) * (degree + 2) / 2);
}

int RidgePolynomial::index(int k, int j) const {
  if (k < 0 || k > degree_ || j < 0 || j > k)
    throw std::invalid_argument("RidgePolynomial: coefficient index out of range");
  return k * (k + 1) / 2 + j;
}

double RidgePolynomial::basis_angle(int k, int j) {
  return j * std::numbers::pi / (k + 1);
}

double RidgePolynomial::operator()(double x, double y) const {
  double acc = 0.0;
  for (int k = 0; k <= degree_; ++k)
    for (int j = 0; j <= k; ++j) {
      const double c = c_[k * (k + 1) / 2 + j];
      if (c != 0.0) acc += c * ridge_u(k, basis_angle(k, j), {x, y});
    }
  return acc;
}

RidgePolynomial ridge_project(const std::function<double(double, double)>& f,
                              int degree) {
  RidgePolynomial out(degree);
  // c_{k,j} = (1/pi) int_{B^2} f U_k(theta_{j,k}; .)
  //         = (1/2) * (2/pi) int [R_{theta_{j,k}}(f;t)/sqrt(1-t^2)] U_k(t) sqrt(1-t^2) dt.
  // For polynomial f of total degree <= degree the integrand in t has degree
  // <= 2*degree, and each line integral is a polynomial in s of the same
  // total degree.
  const QuadratureRule rule = gauss_u_rule(degree + 1);
  const int line_order = degree + 2;
  for (int k = 0; k <= degree; ++k)
    for (int j = 0; j <= k; ++j) {
      const double theta = RidgePolynomial::basis_angle(k, j);
      double acc = 0.0;
      for (Eigen::Index q = 0; q < rule.nodes.size(); ++q) {
        const double t = rule.nodes[q];
        const double r = radon_numeric(f, theta, t, line_order);
        acc += rule.weights[q] * r / std::sqrt(1.0 - t * t) * cheb_u(k, t);
      }
      out.set_coeff(k, j, acc / 2.0);
    }
  return out;
}

double Phantom::operator()(double x, double y) const {
  double acc = 0.0;
  for (const auto& e : ellipses)
    if (e.contains(x, y)) acc += e.weight;
  if (poly) acc += (*poly)(x, y);
  return acc;
}

double Phantom::sup_bound() const {
  double acc = 0.0;
  for (const auto& e : ellipses) acc += std::abs(e.weight);
  if (poly) {
    // |U_k| <= k+1 on [-1, 1]
    for (int k = 0; k <= poly->degree(); ++k)
      for (int j = 0; j <= k; ++j) acc += std::abs(poly->coeff(k, j)) * (k + 1);
  }
  return acc;
}

Phantom parse_phantom(std::istream& in) {
  Phantom ph;
  int maxdeg = -1;
  std::vector<std::array<double, 3>> poly_terms;  // k, j, c
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind)) continue;  // blank or comment-only line
    if (kind == "ellipse") {
      EllipseComponent e;
      double cx, cy;
      if (!(ls >> cx >> cy >> e.a >> e.b >> e.rotation >> e.weight))
        throw PhantomParseError(lineno, "ellipse needs: cx cy a b rot weight");
      e.center = {cx, cy};
      if (!(e.a > 0.0) || !(e.b > 0.0))
        throw PhantomParseError(lineno, "ellipse semi-axes must be positive");
      if (e.reach() > 1.0 + 1e-12)
        throw PhantomParseError(lineno, "ellipse sticks out of the unit disk");
      ph.ellipses.push_back(e);
    } else if (kind == "poly") {
      int k, j;
      double c;
      if (!(ls >> k >> j >> c))
        throw PhantomParseError(lineno, "poly needs: k j c");
      if (k < 0 || j < 0 || j > k)
        throw PhantomParseError(lineno, "poly requires 0 <= j <= k");
      poly_terms.push_back({double(k), double(j), c});
      maxdeg = std::max(maxdeg, k);
    } else {
      throw PhantomParseError(lineno, "unknown component '" + kind + "'");
    }
    std::string extra;
    if (ls >> extra)
      throw PhantomParseError(lineno, "trailing tokens after component");
  }
  if (maxdeg >= 0) {
    RidgePolynomial p(maxdeg);
    for (const auto& t : poly_terms)
      p.add_coeff(int(t[0]), int(t[1]), t[2]);
    ph.poly = std::move(p);
  }
  return ph;
}

Phantom load_phantom(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open phantom file: " + path);
  return parse_phantom(in);
}

double radon_ellipse(const EllipseComponent& e, double theta, double t) {
  if (std::abs(t) > 1.0) throw std::domain_error("radon_ellipse: |t| > 1");
  const double beta = theta - e.rotation;
  const double cb = std::cos(beta), sb = std::sin(beta);
  const double s2 = e.a * e.a * cb * cb + e.b * e.b * sb * sb;
  const double tp = t - (e.center.x() * std::cos(theta) + e.center.y() * std::sin(theta));
  if (tp * tp >= s2) return 0.0;  // line misses the ellipse
  return e.weight * 2.0 * e.a * e.b * std::sqrt(s2 - tp * tp) / s2;
}

double radon_poly(const RidgePolynomial& p, double theta, double t) {
  if (std::abs(t) > 1.0) throw std::domain_error("radon_poly: |t| > 1");
  if (std::abs(t) == 1.0) return 0.0;  // continuity limit of the chord factor
  const double w = std::sqrt(1.0 - t * t);
  const double ct = std::cos(theta), st = std::sin(theta);
  const Eigen::ArrayXd ut = cheb_u_all(p.degree(), t);
  double acc = 0.0;
  for (int k = 0; k <= p.degree(); ++k) {
    double dir = 0.0;
    for (int j = 0; j <= k; ++j) {
      const double c = p.coeff(k, j);
      if (c != 0.0)
        dir += c * cheb_u(k, ct * std::cos(RidgePolynomial::basis_angle(k, j)) +
                                 st * std::sin(RidgePolynomial::basis_angle(k, j)));
    }
    if (dir != 0.0) acc += dir * 2.0 / (k + 1) * w * ut[k];
  }
  return acc;
}

double radon_phantom(const Phantom& ph, double theta, double t) {
  double acc = 0.0;
  for (const auto& e : ph.ellipses) acc += radon_ellipse(e, theta, t);
  if (ph.poly) acc += radon_poly(*ph.poly, theta, t);
  return acc;
}

double radon_numeric(const std::function<double(double, double)>& f,
                     double theta, double t, int order) {
  if (order < 1) throw std::invalid_argument("radon_numeric: order must be >= 1");
  if (std::abs(t) > 1.0) throw std::domain_error("radon_numeric: |t| > 1");
  const double h = std::sqrt(std::max(0.0, 1.0 - t * t));
  if (h == 0.0) return 0.0;  // zero-length chord
  const LegendreRule& rule = gauss_legendre(order);
  const double ct = std::cos(theta), st = std::sin(theta);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) {
    const double s = h * rule.nodes[i];
    acc += rule.weights[i] * f(t * ct - s * st, t * st + s * ct);
  }
  return h * acc;
}

Sinogram2D sinogram2d(const Phantom& ph, int m) {
  const AngleGrid& g = angle_grid(m);
  Sinogram2D s;
  s.m = m;
  s.data.resize(2 * m + 1, 2 * m);
  for (int nu = 0; nu <= 2 * m; ++nu)
    for (int jj = 0; jj < 2 * m; ++jj)
      s.data(nu, jj) = radon_phantom(ph, g.phi[nu], g.t[jj]);
  return s;
}

Sinogram3D sinogram3d(const std::function<Phantom(double)>& slice_at, int m,
                      int n, double L) {
  if (n < 1) throw std::invalid_argument("sinogram3d: n must be >= 1");
  Sinogram3D s;
  s.m = m;
  s.n = n;
  s.L = L;
  s.zs = gauss_t_nodes(n, L);
  s.slices.reserve(n);
  for (int i = 0; i < n; ++i)
    s.slices.push_back(sinogram2d(slice_at(s.zs[i]), m).data);
  return s;
}

}  // namespace oped
