#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "cfmm/oracle.hpp"

using namespace cfmm;

TEST_CASE("grid search certifies a lower bound on the exponential-family cost") {
  auto simplex = std::make_shared<SimplexRegion>(2);
  NegEntropy r(1.0, simplex);
  const Vec q = (Vec(2) << 1.0, 0.0).finished();
  const double exact = std::log(std::exp(1.0) + 1.0);

  const auto grid = oracle::grid_cost(*simplex, r, q, 2000);
  CHECK(grid.value <= exact + 1e-9);      // every sample is feasible
  CHECK(grid.value >= exact - 1e-5);      // and the grid is fine enough
  CHECK(simplex->contains(grid.argmax, 1e-9));
  CHECK(grid.samples >= 2000);

  CHECK_THROWS_AS(oracle::grid_cost(*simplex, r, q, 10), ConfigError);
}

TEST_CASE("grid search handles box-sampled regions with membership filters") {
  auto ball = std::make_shared<BallRegion>(3);
  QuadraticR r(1.0, Vec::Ones(3), ball);
  const Vec q = Vec::Zero(3);
  // sup of -R over the ball is 0, attained at the center.
  const auto grid = oracle::grid_cost(*ball, r, q, 60);
  CHECK(grid.value <= 1e-12);
  CHECK(grid.value >= -0.01);
  CHECK(ball->contains(grid.argmax, 1e-9));
}

TEST_CASE("min-norm point of small hulls") {
  const std::vector<Vec> segment = {(Vec(2) << 1, 0).finished(), (Vec(2) << 0, 1).finished()};
  const auto mnp = oracle::min_norm_point(segment);
  CHECK(mnp.converged);
  CHECK((mnp.point - Vec::Constant(2, 0.5)).norm() <= 1e-10);
  CHECK(mnp.norm == doctest::Approx(std::sqrt(0.5)).epsilon(1e-10));

  // Hull containing the origin.
  std::vector<Vec> square;
  for (double sx : {-1.0, 1.0}) {
    for (double sy : {-1.0, 1.0}) square.push_back((Vec(2) << sx, sy).finished());
  }
  CHECK(oracle::min_norm_point(square).norm <= 1e-7);

  // Single generator: the point itself.
  const std::vector<Vec> one = {(Vec(3) << 0.3, -0.2, 0.9).finished()};
  CHECK((oracle::min_norm_point(one).point - one[0]).norm() <= 1e-12);
}

TEST_CASE("min-norm point satisfies the variational optimality condition") {
  std::mt19937_64 rng(101);
  std::normal_distribution<double> gauss(0.4, 1.0);
  for (int t = 0; t < 20; ++t) {
    std::vector<Vec> gens;
    for (int k = 0; k < 7; ++k) {
      Vec g(3);
      for (int i = 0; i < 3; ++i) g[i] = gauss(rng);
      gens.push_back(g);
    }
    const auto mnp = oracle::min_norm_point(gens);
    CHECK(mnp.converged);
    // p is the min-norm point iff p . (g - p) >= 0 for every generator.
    for (const Vec& g : gens) {
      CHECK(mnp.point.dot(g - mnp.point) >= -1e-8);
    }
  }
}

TEST_CASE("hull distance and projection") {
  const std::vector<Vec> segment = {(Vec(2) << 1, 0).finished(), (Vec(2) << 0, 1).finished()};
  const auto far = oracle::hull_distance(segment, (Vec(2) << 1.0, 1.0).finished());
  CHECK(far.distance == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
  CHECK((far.projection - Vec::Constant(2, 0.5)).norm() <= 1e-9);

  const auto inside = oracle::hull_distance(segment, (Vec(2) << 0.25, 0.75).finished());
  CHECK(inside.distance <= 1e-9);

  // Random queries: the projection must be optimal against all generators.
  std::mt19937_64 rng(103);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Vec> gens;
  for (int k = 0; k < 6; ++k) {
    Vec g(4);
    for (int i = 0; i < 4; ++i) g[i] = gauss(rng);
    gens.push_back(g);
  }
  for (int t = 0; t < 15; ++t) {
    Vec x(4);
    for (int i = 0; i < 4; ++i) x[i] = 2.0 * gauss(rng);
    const auto h = oracle::hull_distance(gens, x);
    CHECK(std::abs((x - h.projection).norm() - h.distance) <= 1e-9);
    for (const Vec& g : gens) {
      CHECK((x - h.projection).dot(g - h.projection) <= 1e-7);
    }
  }
}

TEST_CASE("finite differences recover gradients and Hessians of smooth fields") {
  // Quadratic with a known Hessian.
  Mat a(3, 3);
  a << 4.0, 1.0, 0.5, 1.0, 3.0, -0.2, 0.5, -0.2, 2.0;
  const Vec b = (Vec(3) << -1.0, 0.3, 2.0).finished();
  const oracle::ScalarField f = [&](const Vec& q) { return 0.5 * q.dot(a * q) + b.dot(q); };

  const Vec q0 = (Vec(3) << 0.7, -0.4, 1.1).finished();
  CHECK((oracle::finite_diff_gradient(f, q0) - (a * q0 + b)).norm() <= 1e-7);
  CHECK((oracle::finite_diff_hessian(f, q0) - a).norm() <= 1e-5);

  // Log-sum-exp: the gradient is the softmax.
  const oracle::ScalarField lse = [](const Vec& q) {
    const double m = q.maxCoeff();
    return m + std::log((q.array() - m).exp().sum());
  };
  const Vec q1 = (Vec(3) << 0.2, -1.0, 0.8).finished();
  Vec soft = (q1.array() - q1.maxCoeff()).exp().matrix();
  soft /= soft.sum();
  CHECK((oracle::finite_diff_gradient(lse, q1) - soft).norm() <= 1e-8);

  CHECK_THROWS_AS(oracle::finite_diff_gradient(f, q0, 1e-8), ConfigError);
  CHECK_THROWS_AS(oracle::finite_diff_gradient(f, q0, 1e-2), ConfigError);
}

TEST_CASE("power iteration finds the top eigenvalue of symmetric matrices") {
  Mat d = Mat::Zero(3, 3);
  d.diagonal() << 3.0, 1.0, 0.5;
  CHECK(oracle::power_iteration(d) == doctest::Approx(3.0).epsilon(1e-7));

  // Price-covariance shape: diag(p) - p p^T at the uniform point.
  const Vec p = Vec::Constant(2, 0.5);
  Mat cov = p.asDiagonal();
  cov -= p * p.transpose();
  CHECK(oracle::power_iteration(cov) == doctest::Approx(0.5).epsilon(1e-7));

  // Degenerate spectrum still converges.
  CHECK(oracle::power_iteration(Mat::Identity(4, 4)) == doctest::Approx(1.0).epsilon(1e-7));

  CHECK_THROWS_AS(oracle::power_iteration(Mat::Zero(2, 3)), DimensionError);
}
