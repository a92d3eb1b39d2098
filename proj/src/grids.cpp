#include "oped/grids.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace oped {

const AngleGrid& angle_grid(int m) {
  if (m < 1) throw std::invalid_argument("angle_grid: m must be >= 1");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<const AngleGrid>> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(m);
  if (it == cache.end()) {
    auto g = std::make_unique<AngleGrid>();
    g->m = m;
    const int n1 = 2 * m + 1;
    g->phi.resize(n1);
    for (int nu = 0; nu < n1; ++nu) g->phi[nu] = 2.0 * std::numbers::pi * nu / n1;
    g->psi.resize(2 * m);
    g->t.resize(2 * m);
    for (int j = 1; j <= 2 * m; ++j) {
      g->psi[j - 1] = j * std::numbers::pi / n1;
      g->t[j - 1] = std::cos(g->psi[j - 1]);
    }
    it = cache.emplace(m, std::move(g)).first;
  }
  return *it->second;
}

QuadratureRule gauss_u_rule(int n) {
  if (n < 1) throw std::invalid_argument("gauss_u_rule: n must be >= 1");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int j = 1; j <= n; ++j) {
    const double a = j * std::numbers::pi / (n + 1);
    rule.nodes[j - 1] = std::cos(a);
    const double s = std::sin(a);
    rule.weights[j - 1] = 2.0 * s * s / (n + 1);
  }
  rule.exactness = 2 * n - 1;
  return rule;
}

Eigen::ArrayXd gauss_t_nodes(int n, double L) {
  if (n < 1) throw std::invalid_argument("gauss_t_nodes: n must be >= 1");
  if (!(L > 0)) throw std::invalid_argument("gauss_t_nodes: L must be positive");
  Eigen::ArrayXd z(n);
  for (int i = 0; i < n; ++i) {
    const double xi = (2.0 * i + 1.0) * std::numbers::pi / (2.0 * n);
    z[i] = L * (1.0 + std::cos(xi)) / 2.0;
  }
  return z;
}

}  // namespace oped
