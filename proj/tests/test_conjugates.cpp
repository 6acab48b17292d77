#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "cfmm/conjugates.hpp"
#include "cfmm/oracle.hpp"

using namespace cfmm;

namespace {

// Central-difference directional derivative of R along a tangent direction.
double directional_fd(const Conjugate& r, const Vec& x, const Vec& d, double h) {
  return (r.value(x + h * d) - r.value(x - h * d)) / (2.0 * h);
}

double second_fd(const Conjugate& r, const Vec& x, const Vec& d, double h) {
  return (r.value(x + h * d) - 2.0 * r.value(x) + r.value(x - h * d)) / (h * h);
}

}  // namespace

TEST_CASE("negative entropy: values, gradient, curvature") {
  auto simplex = std::make_shared<SimplexRegion>(2);
  NegEntropy r(1.0, simplex);
  CHECK(r.name() == "neg_entropy");
  CHECK(r.liquidity() == doctest::Approx(1.0));
  CHECK(r.dimension() == 2);

  const Vec uniform = Vec::Constant(2, 0.5);
  CHECK(r.value(uniform) == doctest::Approx(-std::log(2.0)).epsilon(1e-12));
  const Vec vertex = (Vec(2) << 1.0, 0.0).finished();
  CHECK(r.value(vertex) == doctest::Approx(0.0));  // 0 log 0 = 0 convention

  const Vec g = r.gradient(uniform);
  CHECK(g[0] == doctest::Approx(std::log(0.5) + 1.0).epsilon(1e-12));
  CHECK(g[1] == doctest::Approx(std::log(0.5) + 1.0).epsilon(1e-12));

  CHECK(r.gradient_defined(uniform));
  CHECK_FALSE(r.gradient_defined(vertex));
  CHECK_THROWS_AS(r.gradient(vertex), GradientUndefinedError);
  CHECK_THROWS_AS(r.value((Vec(2) << 0.4, 0.4).finished()), DomainViolationError);

  // Divergence from a vertex to the uniform point.
  CHECK(bregman_divergence(r, vertex, uniform) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  // Hessian is diag(b / x); the modulus is attained at the uniform point only
  // in the tangent space, so check the quadratic form directly.
  const Mat h = r.hessian(uniform);
  CHECK(h(0, 0) == doctest::Approx(2.0));
  CHECK(h(1, 1) == doctest::Approx(2.0));
  CHECK(h(0, 1) == doctest::Approx(0.0));
  CHECK(r.convexity_modulus() == doctest::Approx(1.0));

  // Liquidity scales everything linearly.
  NegEntropy r4(4.0, simplex);
  CHECK(r4.value(uniform) == doctest::Approx(-4.0 * std::log(2.0)));
  CHECK(r4.convexity_modulus() == doctest::Approx(4.0));

  CHECK_THROWS_AS(NegEntropy(0.0, simplex), ConfigError);
  CHECK_THROWS_AS(NegEntropy(-1.0, simplex), ConfigError);
}

TEST_CASE("negative entropy matches finite differences on the tangent space") {
  auto simplex = std::make_shared<SimplexRegion>(4);
  NegEntropy r(1.7, simplex);
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  const Mat basis = simplex->tangent_basis();
  for (int t = 0; t < 25; ++t) {
    Vec x(4);
    for (int i = 0; i < 4; ++i) x[i] = u(rng);
    x /= x.sum();
    Vec w(basis.cols());
    for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = u(rng) - 0.5;
    Vec d = basis * w;
    d /= d.norm();
    const double fd = directional_fd(r, x, d, 1e-6);
    CHECK(std::abs(fd - r.gradient(x).dot(d)) <= 1e-6);
    const double quad = d.dot(r.hessian(x) * d);
    CHECK(std::abs(second_fd(r, x, d, 1e-4) - quad) <= 1e-4 * std::max(1.0, quad));
    CHECK(quad >= r.convexity_modulus() - 1e-9);
  }
}

TEST_CASE("quadratic potential over the shifted ball") {
  auto ball = std::make_shared<BallRegion>(3);
  QuadraticR r(1.0, Vec::Ones(3), ball);
  CHECK(r.name() == "quadratic");
  CHECK(r.lambda() == doctest::Approx(1.0));

  CHECK(r.value(Vec::Ones(3)) == doctest::Approx(0.0));
  const Vec x = Vec::Ones(3) + 0.5 * Vec::Unit(3, 1);
  CHECK(r.value(x) == doctest::Approx(0.25));
  CHECK((r.gradient(x) - Vec::Unit(3, 1)).norm() <= 1e-12);  // 2 lambda (x - m)
  CHECK(r.gradient_defined(Vec::Ones(3) + Vec::Unit(3, 0)));

  const Mat h = r.hessian(x);
  CHECK((h - 2.0 * Mat::Identity(3, 3)).norm() <= 1e-12);
  CHECK(r.convexity_modulus() == doctest::Approx(2.0));

  // Bregman divergence of a quadratic is lambda |x - y|^2.
  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss(0.0, 0.4);
  for (int t = 0; t < 20; ++t) {
    Vec a(3), b(3);
    for (int i = 0; i < 3; ++i) {
      a[i] = 1.0 + gauss(rng);
      b[i] = 1.0 + gauss(rng);
    }
    if (!ball->contains(a) || !ball->contains(b)) continue;
    CHECK(bregman_divergence(r, a, b) ==
          doctest::Approx((a - b).squaredNorm()).epsilon(1e-10));
  }

  CHECK_THROWS_AS(QuadraticR(0.0, Vec::Ones(3), ball), ConfigError);
  CHECK_THROWS_AS(QuadraticR(1.0, Vec::Ones(2), ball), DimensionError);
}

TEST_CASE("entropy-plus-barrier potential on the band") {
  const double b = 1.0, gamma = 0.2, c = 1.0;
  auto band = std::make_shared<BandRegion>(2, c);
  BarrierEntropy r(b, gamma, c, band);
  CHECK(r.name() == "barrier_entropy");
  CHECK(r.liquidity() == doctest::Approx(b));
  CHECK(r.gamma() == doctest::Approx(gamma));
  CHECK(r.width() == doctest::Approx(c));

  // On the unit-sum face the barrier contributes the constant -gamma log c.
  const Vec uniform = Vec::Constant(2, 0.5);
  CHECK(r.value(uniform) == doctest::Approx(-std::log(2.0) - gamma * std::log(c)));
  const Vec g = r.gradient(uniform);
  CHECK(g[0] == doctest::Approx(std::log(0.5) + 1.0 + gamma / (1.0 + c - 1.0)).epsilon(1e-12));

  // The gradient (and value) blow up toward the spending cap, and the
  // potential is undefined once the sum reaches 1 + c.
  const Vec near_cap = Vec::Constant(2, 0.5 * (1.0 + c) - 1e-10);
  CHECK(r.gradient_defined(uniform));
  CHECK_FALSE(r.gradient_defined(Vec::Constant(2, 0.5 * (1.0 + c))));
  CHECK(r.value(near_cap) > 1.0);  // barrier dominates

  // Hessian: diag(b / x_i) plus the rank-one barrier block.
  const Vec mid = Vec::Constant(2, 0.7);
  const double slack = 1.0 + c - mid.sum();
  const double alpha = gamma / (slack * slack);
  const Mat h = r.hessian(mid);
  CHECK(h(0, 0) == doctest::Approx(b / 0.7 + alpha).epsilon(1e-12));
  CHECK(h(0, 1) == doctest::Approx(alpha).epsilon(1e-12));
  CHECK(h(1, 0) == doctest::Approx(alpha).epsilon(1e-12));

  // Finite-difference agreement in the band's interior.
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 25; ++t) {
    // Keep the coordinate sum well inside [1, 1 + c] so the FD probes stay
    // in the domain.
    const double sum = 1.45 + 0.35 * u(rng);
    const double frac = 0.5 + 0.2 * u(rng);
    Vec x(2);
    x << frac * sum, (1.0 - frac) * sum;
    Vec d(2);
    d << u(rng), u(rng);
    d /= d.norm();
    CHECK(std::abs(directional_fd(r, x, d, 1e-6) - r.gradient(x).dot(d)) <= 1e-5);
    const double quad = d.dot(r.hessian(x) * d);
    CHECK(std::abs(second_fd(r, x, d, 1e-4) - quad) <= 1e-3 * std::max(1.0, quad));
  }

  CHECK_THROWS_AS(BarrierEntropy(b, -0.1, c, band), ConfigError);
  CHECK_THROWS_AS(BarrierEntropy(0.0, gamma, c, band), ConfigError);
}

TEST_CASE("default barrier weight keeps the initial price sum at one") {
  // Below the analytic threshold the floor applies; above it the formula does.
  CHECK(BarrierEntropy::default_gamma(2, 1.0, 0.5) == doctest::Approx(0.01));
  CHECK(BarrierEntropy::default_gamma(5, 1.0, 0.5) ==
        doctest::Approx(0.5 * (std::log(5.0) - 1.0)).epsilon(1e-12));
  CHECK(BarrierEntropy::default_gamma(8, 2.0, 0.25) ==
        doctest::Approx(0.25 * 2.0 * (std::log(8.0) - 1.0)).epsilon(1e-12));
}

TEST_CASE("divergences are nonnegative and vanish only at equal arguments") {
  auto simplex = std::make_shared<SimplexRegion>(3);
  NegEntropy r(0.8, simplex);
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int t = 0; t < 40; ++t) {
    Vec x(3), y(3);
    for (int i = 0; i < 3; ++i) {
      x[i] = u(rng);
      y[i] = u(rng);
    }
    x /= x.sum();
    y /= y.sum();
    const double d = bregman_divergence(r, x, y);
    CHECK(d >= -1e-12);
    CHECK(bregman_divergence(r, x, x) == doctest::Approx(0.0));
    // Strong convexity: D(x, y) >= (modulus / 2) |x - y|^2.
    CHECK(d >= 0.5 * r.convexity_modulus() * (x - y).squaredNorm() - 1e-10);
  }
}
