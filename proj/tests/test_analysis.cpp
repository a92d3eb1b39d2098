#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oped/analysis.hpp"
#include "oped/phantom.hpp"
#include "oped/reconstruct.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace oped;
using std::numbers::pi;

namespace {

std::mt19937 rng(46692);

double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Eigen::Vector2d random_disk_point() {
  const double r = std::sqrt(uniform(0.0, 1.0));
  const double a = uniform(0.0, 2 * pi);
  return {r * std::cos(a), r * std::sin(a)};
}

Phantom constant_phantom() {
  Phantom ph;
  RidgePolynomial one(0);
  one.set_coeff(0, 0, 1.0);
  ph.poly = one;
  return ph;
}

Eigen::Vector2d witness(int m) {
  const double eps = pi / (4 * m + 2);
  return {std::cos(eps), std::sin(eps)};
}

}  // namespace

TEST_CASE("lebesgue frozen value at the origin") {
  CHECK(lebesgue(1, {0.0, 0.0}) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(lebesgue(1, {1.2, 0.0}), std::domain_error);
}

TEST_CASE("lebesgue lower bound 1/2 everywhere") {
  for (int m : {1, 2, 4, 8, 16})
    for (int trial = 0; trial < 200; ++trial)
      CHECK(lebesgue(m, random_disk_point()) >= 0.5 - 1e-11);
}

TEST_CASE("witness point grows superlinearly") {
  double prev = lebesgue(4, witness(4));
  for (int m : {8, 16, 32}) {
    const double cur = lebesgue(m, witness(m));
    CHECK(cur / prev > 2.0);
    prev = cur;
  }
}

TEST_CASE("norm_scan basics") {
  CHECK_THROWS_AS(norm_scan({4}, 32), std::invalid_argument);
  const NormScan single = norm_scan({4}, 64);
  REQUIRE(single.ratios.size() == 1);
  CHECK(single.maxima[0] > 0.0);

  const NormScan scan = norm_scan({4, 8}, 64);
  REQUIRE(scan.maxima.size() == 2);
  CHECK(scan.maxima[1] > scan.maxima[0]);
  for (Eigen::Index i = 0; i < 2; ++i)
    CHECK(scan.ratios[i] ==
          doctest::Approx(scan.maxima[i] / (scan.ms[i] * std::log(scan.ms[i] + 1.0)))
              .epsilon(1e-15));
}

TEST_CASE("s2m_oracle") {
  const Phantom ph = constant_phantom();
  CHECK(s2m_oracle(ph, 2, {0.2, -0.1}, 8) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(s2m_oracle(ph, 2, {0.0, 0.0}, 7), std::invalid_argument);
  CHECK_THROWS_AS(s2m_oracle(ph, 2, {1.5, 0.0}, 8), std::domain_error);

  // polynomial phantom of degree <= 2m-1: oracle equals the reconstruction
  RidgePolynomial p(3);
  p.set_coeff(1, 1, 0.8);
  p.set_coeff(3, 2, -0.4);
  Phantom php;
  php.poly = p;
  const Sinogram2D s = sinogram2d(php, 2);
  for (int trial = 0; trial < 25; ++trial) {
    const Eigen::Vector2d pt = random_disk_point();
    CHECK(std::abs(s2m_oracle(php, 2, pt, 16) - reconstruct_point(s, pt)) <= 1e-9);
  }

  // smooth non-polynomial density: dense-order self-convergence
  const auto bump = [](double x, double y) {
    return std::exp(-8.0 * ((x - 0.1) * (x - 0.1) + y * y));
  };
  const auto projection = [&bump](double theta, double t) {
    return radon_numeric(bump, theta, t, 64);
  };
  const int m = 4;
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::Vector2d pt = random_disk_point();
    const double coarse = s2m_oracle(projection, m, pt, 8 * m);
    const double fine = s2m_oracle(projection, m, pt, 16 * m);
    CHECK(std::abs(coarse - fine) <= 1e-8);
  }
}

TEST_CASE("error_metrics") {
  const ImageGrid grid(8, 8);
  Image img;
  img.grid = grid;
  img.values = Eigen::ArrayXXd::Zero(8, 8);
  const auto ref_zero = [](double, double) { return 0.0; };
  const ErrorMetrics exact = error_metrics(img, ref_zero);
  CHECK(exact.linf == 0.0);
  CHECK(exact.l2 == 0.0);

  img.values.setConstant(0.1);
  const ErrorMetrics shifted = error_metrics(img, ref_zero);
  CHECK(shifted.linf == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(shifted.l2 == doctest::Approx(0.1).epsilon(1e-15));

  // two perturbed masked pixels among N
  img.values.setZero();
  img.values(3, 3) = 0.3;
  img.values(4, 2) = -0.4;
  int masked = 0;
  for (int q = 0; q < 8; ++q)
    for (int p = 0; p < 8; ++p)
      if (grid.masked(p, q)) ++masked;
  const ErrorMetrics two = error_metrics(img, ref_zero);
  CHECK(two.linf == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(two.l2 ==
        doctest::Approx(std::sqrt((0.09 + 0.16) / masked)).epsilon(1e-14));

  Image wrong;
  wrong.grid = grid;
  wrong.values = Eigen::ArrayXXd::Zero(4, 4);
  CHECK_THROWS_AS(error_metrics(wrong, ref_zero), std::invalid_argument);
}

TEST_CASE("convergence_study on a degree-3 polynomial phantom") {
  RidgePolynomial p(3);
  p.set_coeff(0, 0, 0.4);
  p.set_coeff(2, 1, 0.5);
  p.set_coeff(3, 3, -0.7);
  Phantom ph;
  ph.poly = p;
  const auto rows = convergence_study(ph, {2, 3, 4}, 48);
  REQUIRE(rows.size() == 3);
  for (const auto& row : rows) {
    CHECK(row.linf <= 1e-9);
    CHECK(row.l2 <= row.linf + 1e-15);
  }
}

TEST_CASE("convergence_study on the smooth bump (numeric projections)") {
  const auto bump = [](double x, double y) {
    return std::exp(-8.0 * ((x - 0.1) * (x - 0.1) + y * y));
  };
  const auto source = [&bump](int m) {
    const AngleGrid& g = angle_grid(m);
    Sinogram2D s;
    s.m = m;
    s.data.resize(2 * m + 1, 2 * m);
    for (int nu = 0; nu <= 2 * m; ++nu)
      for (int jj = 0; jj < 2 * m; ++jj)
        s.data(nu, jj) = radon_numeric(bump, g.phi[nu], g.t[jj], 64);
    return s;
  };
  const auto rows = convergence_study(bump, source, {2, 4, 8}, 64);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1].linf < rows[0].linf);
  CHECK(rows[2].linf < rows[1].linf);
}
