#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oped/analysis.hpp"
#include "oped/grids.hpp"
#include "oped/kernel.hpp"
#include "oped/phantom.hpp"
#include "oped/reconstruct.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace oped;
using std::numbers::pi;

namespace {

std::mt19937 rng(90210);

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

RidgePolynomial random_ridge(int degree) {
  RidgePolynomial p(degree);
  for (int k = 0; k <= degree; ++k)
    for (int j = 0; j <= k; ++j) p.set_coeff(k, j, uniform(-1.0, 1.0));
  return p;
}

Sinogram2D poly_sinogram(const RidgePolynomial& p, int m) {
  Phantom ph;
  ph.poly = p;
  return sinogram2d(ph, m);
}

}  // namespace

TEST_CASE("image grid geometry") {
  const ImageGrid grid(5, 9);
  CHECK(grid.x(0) > -1.0);
  CHECK(grid.x(4) < 1.0);
  CHECK(grid.y(0) > -1.0);
  CHECK(grid.y(8) < 1.0);
  CHECK(grid.x(2) == 0.0);
  CHECK(grid.masked(2, 4));
  CHECK_FALSE(grid.masked(0, 0));
  for (int q = 0; q < 9; ++q)
    for (int p = 0; p < 5; ++p) {
      const double xx = grid.x(p), yy = grid.y(q);
      CHECK(grid.masked(p, q) == (xx * xx + yy * yy <= 1.0));
    }
  CHECK_THROWS_AS(ImageGrid(0, 4), std::invalid_argument);
}

TEST_CASE("constant phantom reproduces 1 on the raster") {
  const Phantom ph = constant_phantom();
  for (int m : {1, 4}) {
    const Sinogram2D s = sinogram2d(ph, m);
    const ImageGrid grid(32, 32);
    const Image img = reconstruct(s, grid);
    for (int q = 0; q < 32; ++q)
      for (int p = 0; p < 32; ++p) {
        if (!grid.masked(p, q)) {
          CHECK(img.values(q, p) == 0.0);
          continue;
        }
        CHECK(std::abs(img.values(q, p) - 1.0) <= 1e-12);
      }
  }
}

TEST_CASE("degree 3 <= 2m-1 polynomial is reproduced at m=2") {
  RidgePolynomial p(3);
  p.set_coeff(3, 1, 1.0);  // U_3(theta_{1,3}; .)
  const Sinogram2D s = poly_sinogram(p, 2);
  const ImageGrid grid(24, 24);
  const Image img = reconstruct(s, grid);
  for (int q = 0; q < 24; ++q)
    for (int px = 0; px < 24; ++px) {
      if (!grid.masked(px, q)) continue;
      CHECK(std::abs(img.values(q, px) - p(grid.x(px), grid.y(q))) <= 1e-10);
    }
}

TEST_CASE("zero sinogram gives a zero image") {
  Sinogram2D s;
  s.m = 2;
  s.data = Eigen::MatrixXd::Zero(5, 4);
  const Image img = reconstruct(s, ImageGrid(16, 16));
  CHECK(img.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("reconstruct_point") {
  const Phantom ph = constant_phantom();
  const Sinogram2D s = sinogram2d(ph, 1);

  CHECK(reconstruct_point(s, {0.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(reconstruct_point(s, {0.9, 0.9}), std::domain_error);

  // bitwise equality with the raster path at a pixel center
  const ImageGrid grid(8, 8);
  const Image img = reconstruct(s, grid);
  const int p = 5, q = 2;
  REQUIRE(grid.masked(p, q));
  CHECK(reconstruct_point(s, {grid.x(p), grid.y(q)}) == img.values(q, p));

  // degree-1 reproduction: f = 2x at m = 1
  RidgePolynomial two_x(1);
  two_x.set_coeff(1, 0, 1.0);
  const Sinogram2D s1 = poly_sinogram(two_x, 1);
  CHECK(reconstruct_point(s1, {0.25, 0.1}) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("reconstruction with a precomputed table matches on-the-fly kernels") {
  const Phantom ph = constant_phantom();
  const Sinogram2D s = sinogram2d(ph, 2);
  const ImageGrid grid(16, 16);
  const KernelTable table = build_table(2, grid);
  const Image with_table = reconstruct(s, grid, &table);
  const Image direct = reconstruct(s, grid);
  CHECK((with_table.values == direct.values).all());

  const KernelTable wrong_m = build_table(1, grid);
  CHECK_THROWS_AS(reconstruct(s, grid, &wrong_m), std::invalid_argument);
  const KernelTable wrong_grid = build_table(2, ImageGrid(8, 8));
  CHECK_THROWS_AS(reconstruct(s, grid, &wrong_grid), std::invalid_argument);
}

TEST_CASE("fill value policy") {
  Sinogram2D s;
  s.m = 1;
  s.data = Eigen::MatrixXd::Zero(3, 2);
  const ImageGrid grid(6, 6);
  const Image img = reconstruct(s, grid, nullptr,
                                std::numeric_limits<double>::quiet_NaN());
  bool corner_nan = std::isnan(img.values(0, 0));
  CHECK(corner_nan);
  CHECK(img.values(3, 3) == 0.0);
}

TEST_CASE("polynomial reproduction across m (random polynomials)") {
  for (int m : {2, 4, 8}) {
    for (int trial = 0; trial < 20; ++trial) {
      const RidgePolynomial p = random_ridge(2 * m - 1);
      const Sinogram2D s = poly_sinogram(p, m);
      double worst = 0.0;
      for (int i = 0; i < 200; ++i) {
        const Eigen::Vector2d pt = random_disk_point();
        worst = std::max(worst, std::abs(reconstruct_point(s, pt) - p(pt.x(), pt.y())));
      }
      CHECK(worst <= 1e-9 * p.coeff_l1());
    }
  }
}

TEST_CASE("eta variant reproduces degree <= m and damps degree 2m-1") {
  const Multiplier eta = eta_default();

  // degree-1 polynomial at m = 1
  RidgePolynomial two_x(1);
  two_x.set_coeff(1, 0, 1.0);
  const Sinogram2D s1 = poly_sinogram(two_x, 1);
  const ImageGrid grid(24, 24);
  const Image img1 = reconstruct_eta(s1, grid, eta);
  for (int q = 0; q < 24; ++q)
    for (int px = 0; px < 24; ++px) {
      if (!grid.masked(px, q)) continue;
      CHECK(std::abs(img1.values(q, px) - two_x(grid.x(px), grid.y(q))) <= 1e-12);
    }

  // degree-3 polynomial at m = 2 is NOT reproduced
  RidgePolynomial cubic(3);
  cubic.set_coeff(3, 0, 1.0);
  const Sinogram2D s3 = poly_sinogram(cubic, 2);
  const Image img3 = reconstruct_eta(s3, grid, eta);
  double dev = 0.0;
  for (int q = 0; q < 24; ++q)
    for (int px = 0; px < 24; ++px)
      if (grid.masked(px, q))
        dev = std::max(dev, std::abs(img3.values(q, px) - cubic(grid.x(px), grid.y(q))));
  CHECK(dev > 1e-3);

  // an all-ones multiplier gives the plain operator back
  Multiplier flat;
  flat.eval = [](double t) { return t <= 2.0 ? 1.0 : 0.0; };
  const Image via_eta = reconstruct_eta(s3, grid, flat);
  const Image plain = reconstruct(s3, grid);
  double diff = 0.0;
  for (int q = 0; q < 24; ++q)
    for (int px = 0; px < 24; ++px)
      diff = std::max(diff, std::abs(via_eta.values(q, px) - plain.values(q, px)));
  CHECK(diff <= 1e-12);
}

TEST_CASE("linearity of reconstruction") {
  const RidgePolynomial p1 = random_ridge(3);
  const RidgePolynomial p2 = random_ridge(3);
  const int m = 2;
  Sinogram2D s1 = poly_sinogram(p1, m);
  Sinogram2D s2 = poly_sinogram(p2, m);
  const double a = 0.6, b = -1.3;
  Sinogram2D mix;
  mix.m = m;
  mix.data = a * s1.data + b * s2.data;
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Vector2d pt = random_disk_point();
    const double want = a * reconstruct_point(s1, pt) + b * reconstruct_point(s2, pt);
    CHECK(std::abs(reconstruct_point(mix, pt) - want) <= 1e-13);
  }
}

TEST_CASE("reconstruct_general") {
  const int m = 2;
  const Phantom ph = constant_phantom();
  const ImageGrid grid(16, 16);

  // the 2m-node Gauss rule is the tabulated geometry: identical images
  {
    const QuadratureRule rule = gauss_u_rule(2 * m);
    const Sinogram2D s = sinogram2d(ph, m);
    const Image general = reconstruct_general(s.data, rule, m, grid);
    const Image plain = reconstruct(s, grid);
    CHECK((general.values == plain.values).all());
  }

  // the (2m+1)-node rule reproduces degree-2m polynomials
  {
    const QuadratureRule rule = gauss_u_rule(2 * m + 1);
    RidgePolynomial p(4);
    p.set_coeff(4, 1, 1.0);  // degree 2m = 4
    Phantom php;
    php.poly = p;
    const AngleGrid& g = angle_grid(m);
    Eigen::MatrixXd raw(2 * m + 1, 2 * m + 1);
    for (int nu = 0; nu <= 2 * m; ++nu)
      for (Eigen::Index j = 0; j < rule.nodes.size(); ++j)
        raw(nu, j) = radon_phantom(php, g.phi[nu], rule.nodes[j]);
    const Image img = reconstruct_general(raw, rule, m, grid);
    for (int q = 0; q < 16; ++q)
      for (int px = 0; px < 16; ++px) {
        if (!grid.masked(px, q)) continue;
        CHECK(std::abs(img.values(q, px) - p(grid.x(px), grid.y(q))) <= 1e-10);
      }

    // constant phantom through the general path
    Eigen::MatrixXd craw(2 * m + 1, 2 * m + 1);
    for (int nu = 0; nu <= 2 * m; ++nu)
      for (Eigen::Index j = 0; j < rule.nodes.size(); ++j)
        craw(nu, j) = radon_phantom(ph, g.phi[nu], rule.nodes[j]);
    const Image ones = reconstruct_general(craw, rule, m, grid);
    for (int q = 0; q < 16; ++q)
      for (int px = 0; px < 16; ++px)
        if (grid.masked(px, q)) CHECK(std::abs(ones.values(q, px) - 1.0) <= 1e-12);
  }

  // nodes at +-1 are rejected
  {
    QuadratureRule bad;
    bad.nodes = Eigen::ArrayXd::LinSpaced(3, -1.0, 1.0);
    bad.weights = Eigen::ArrayXd::Constant(3, 1.0 / 3.0);
    Eigen::MatrixXd raw = Eigen::MatrixXd::Zero(2 * m + 1, 3);
    CHECK_THROWS_AS(reconstruct_general(raw, bad, m, grid), std::invalid_argument);
  }
}

TEST_CASE("reconstruction agrees with the dense-quadrature expansion oracle") {
  for (int m : {2, 4}) {
    const RidgePolynomial p = random_ridge(2 * m - 1);
    Phantom ph;
    ph.poly = p;
    const Sinogram2D s = sinogram2d(ph, m);
    for (int trial = 0; trial < 20; ++trial) {
      const Eigen::Vector2d pt = random_disk_point();
      const double oracle = s2m_oracle(ph, m, pt, 8 * m);
      CHECK(std::abs(reconstruct_point(s, pt) - oracle) <= 1e-9);
    }
  }
}

TEST_CASE("sinogram shape validation") {
  Sinogram2D bad;
  bad.m = 2;
  bad.data = Eigen::MatrixXd::Zero(4, 4);
  CHECK_THROWS_AS(reconstruct(bad, ImageGrid(8, 8)), std::invalid_argument);
  CHECK_THROWS_AS(reconstruct_point(bad, {0.0, 0.0}), std::invalid_argument);
}
