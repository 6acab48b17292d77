#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "cfmm/oracle.hpp"
#include "cfmm/regions.hpp"

using namespace cfmm;

namespace {

// Projection optimality: p = argmin |y - x| over a convex set iff
// (y - p) . (z - p) <= 0 for every member z.
void check_projection_optimal(const Region& region, const Vec& y, const Vec& p,
                              const std::vector<Vec>& members, double tol) {
  REQUIRE(region.contains(p, 1e-8));
  for (const Vec& z : members) {
    CHECK((y - p).dot(z - p) <= tol);
  }
}

std::vector<Vec> gom_vertices_n3() {
  // Reduced coordinates for pairs (1,2), (1,3), (2,3); entry = 1 when the
  // first competitor of the pair finishes behind the second.
  std::vector<Vec> verts;
  std::vector<int> pi = {1, 2, 3};
  std::sort(pi.begin(), pi.end());
  do {
    Vec v(3);
    v[0] = pi[0] > pi[1] ? 1.0 : 0.0;
    v[1] = pi[0] > pi[2] ? 1.0 : 0.0;
    v[2] = pi[1] > pi[2] ? 1.0 : 0.0;
    verts.push_back(v);
  } while (std::next_permutation(pi.begin(), pi.end()));
  return verts;
}

}  // namespace

TEST_CASE("simplex membership, projection, and oracle") {
  SimplexRegion s(3);
  CHECK(s.dimension() == 3);
  CHECK(s.contains(Vec::Constant(3, 1.0 / 3.0)));
  CHECK(s.contains((Vec(3) << 1, 0, 0).finished()));
  CHECK_FALSE(s.contains((Vec(3) << 0.5, 0.5, 0.1).finished()));
  CHECK_FALSE(s.contains((Vec(3) << -0.1, 0.6, 0.5).finished()));

  // Known projections.
  CHECK((s.project((Vec(3) << 2, 0, 0).finished()) - (Vec(3) << 1, 0, 0).finished()).norm() ==
        doctest::Approx(0.0).epsilon(1e-12));
  const Vec p = s.project((Vec(3) << 0.6, 0.6, 0.0).finished());
  CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p[2] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

  // Random projections are idempotent and optimal against the vertices.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<Vec> verts;
  for (int i = 0; i < 3; ++i) verts.push_back(Vec::Unit(3, i));
  for (int t = 0; t < 50; ++t) {
    Vec y(3);
    for (int i = 0; i < 3; ++i) y[i] = u(rng);
    const Vec pr = s.project(y);
    CHECK((s.project(pr) - pr).norm() <= 1e-12);
    check_projection_optimal(s, y, pr, verts, 1e-10);
  }

  // Linear oracle returns the best vertex.
  CHECK(s.has_linear_oracle());
  const Vec g = (Vec(3) << 0.3, -1.0, 0.7).finished();
  const Vec v = s.linear_maximize(g);
  CHECK((v - Vec::Unit(3, 2)).norm() <= 1e-12);

  CHECK(s.diameter() == doctest::Approx(std::sqrt(2.0)));
  CHECK(s.diameter_is_exact());
  CHECK(s.contains(s.interior_point()));
  CHECK(s.relatively_interior(s.interior_point()));
  CHECK_FALSE(s.relatively_interior(Vec::Unit(3, 0)));

  // Tangent basis: orthonormal columns spanning the sum-zero subspace.
  const Mat basis = s.tangent_basis();
  CHECK(basis.cols() == 2);
  CHECK((basis.transpose() * basis - Mat::Identity(2, 2)).norm() <= 1e-12);
  CHECK((basis.transpose() * Vec::Ones(3)).norm() <= 1e-12);
}

TEST_CASE("ball region centered at the all-ones point") {
  BallRegion ball(3);
  CHECK(ball.dimension() == 3);
  CHECK((ball.center() - Vec::Ones(3)).norm() <= 1e-15);
  CHECK(ball.radius() == doctest::Approx(1.0));
  CHECK(ball.contains(Vec::Ones(3)));
  CHECK(ball.contains(Vec::Ones(3) + Vec::Unit(3, 0)));
  CHECK_FALSE(ball.contains(Vec::Ones(3) + 1.1 * Vec::Unit(3, 0)));

  const Vec far = Vec::Ones(3) + 3.0 * Vec::Unit(3, 1);
  const Vec pr = ball.project(far);
  CHECK((pr - (Vec::Ones(3) + Vec::Unit(3, 1))).norm() <= 1e-12);
  CHECK((ball.project(pr) - pr).norm() <= 1e-14);

  const Vec g = (Vec(3) << 1.0, 2.0, -2.0).finished();
  const Vec m = ball.linear_maximize(g);
  CHECK((m - (Vec::Ones(3) + g / g.norm())).norm() <= 1e-12);

  CHECK(ball.diameter() == doctest::Approx(2.0));
  CHECK(ball.diameter_is_exact());
  CHECK(ball.relatively_interior(Vec::Ones(3), 1e-9));
}

TEST_CASE("halfspace and scaled-simplex projection helpers") {
  const Vec a = (Vec(2) << 1.0, 0.0).finished();
  const Vec inside = (Vec(2) << 0.5, 3.0).finished();
  CHECK((project_onto_halfspace(inside, a, 0.8) - inside).norm() <= 1e-15);
  const Vec outside = (Vec(2) << 1.4, -2.0).finished();
  const Vec proj = project_onto_halfspace(outside, a, 0.8);
  CHECK(proj[0] == doctest::Approx(0.8));
  CHECK(proj[1] == doctest::Approx(-2.0));

  const Vec y = (Vec(2) << 2.0, 1.0).finished();
  const Vec ps = project_onto_scaled_simplex(y, 2.0);
  CHECK(ps.sum() == doctest::Approx(2.0));
  CHECK(ps[0] == doctest::Approx(1.5));
  CHECK(ps[1] == doctest::Approx(0.5));
}

TEST_CASE("ranking polytope vertices and membership for three competitors") {
  GomRegion gom(3);
  CHECK(gom.dimension() == 3);
  CHECK(gom.competitors() == 3);
  CHECK(gom.pairs().size() == 3);
  CHECK(gom.triples().size() == 1);

  const std::vector<Vec> verts = gom_vertices_n3();
  CHECK(verts.size() == 6);
  for (const Vec& v : verts) CHECK(gom.contains(v, 1e-12));

  // All six vertices are distinct: a bijection rankings -> 0/1 vectors.
  for (std::size_t i = 0; i < verts.size(); ++i) {
    for (std::size_t j = i + 1; j < verts.size(); ++j) {
      CHECK((verts[i] - verts[j]).norm() > 0.5);
    }
  }

  // The cyclic point violates the triple constraint even though every
  // coordinate is inside [0, 1].
  const Vec cyclic = (Vec(3) << 0.9, 0.1, 0.9).finished();
  CHECK_FALSE(gom.contains(cyclic, 1e-9));
  CHECK(cyclic.minCoeff() >= 0.0);
  CHECK(cyclic.maxCoeff() <= 1.0);

  // Linear maximization lands on a ranking vertex and dominates all of them.
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    Vec c(3);
    for (int i = 0; i < 3; ++i) c[i] = gauss(rng);
    const Vec x = gom.linear_maximize(c);
    CHECK(gom.contains(x, 1e-9));
    double best_vertex = -1e300;
    double nearest = 1e300;
    for (const Vec& v : verts) {
      best_vertex = std::max(best_vertex, c.dot(v));
      nearest = std::min(nearest, (x - v).norm());
    }
    CHECK(c.dot(x) >= best_vertex - 1e-9);
    CHECK(nearest <= 1e-7);  // the optimum is an actual ranking vertex
  }
}

TEST_CASE("ranking polytope projection agrees with exact hull projection") {
  GomRegion gom(3);
  const std::vector<Vec> verts = gom_vertices_n3();
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-0.8, 1.8);
  for (int t = 0; t < 12; ++t) {
    Vec y(3);
    for (int i = 0; i < 3; ++i) y[i] = u(rng);
    const Vec p_region = gom.project(y);
    const auto hull = oracle::hull_distance(verts, y);
    // For three or four competitors the constraint set *is* the hull of the
    // ranking vertices, so the two projections must coincide.
    CHECK((p_region - hull.projection).norm() <= 5e-6);
    CHECK(std::abs((y - p_region).norm() - hull.distance) <= 5e-6);
  }
}

TEST_CASE("four-competitor polytope still matches its ranking hull") {
  GomRegion gom(4);
  CHECK(gom.dimension() == 6);
  std::vector<Vec> verts;
  std::vector<int> pi = {1, 2, 3, 4};
  do {
    Vec v(6);
    Eigen::Index t = 0;
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j, ++t) {
        v[t] = pi[static_cast<std::size_t>(i)] > pi[static_cast<std::size_t>(j)] ? 1.0 : 0.0;
      }
    }
    verts.push_back(v);
  } while (std::next_permutation(pi.begin(), pi.end()));
  CHECK(verts.size() == 24);
  for (const Vec& v : verts) CHECK(gom.contains(v, 1e-12));

  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-0.5, 1.5);
  for (int t = 0; t < 4; ++t) {
    Vec y(6);
    for (int i = 0; i < 6; ++i) y[i] = u(rng);
    const Vec p_region = gom.project(y);
    const auto hull = oracle::hull_distance(verts, y);
    CHECK((p_region - hull.projection).norm() <= 5e-6);
  }
}

TEST_CASE("band region between the simplex and its inflation") {
  BandRegion band(2, 1.0);
  CHECK(band.width() == doctest::Approx(1.0));
  CHECK(band.contains((Vec(2) << 0.5, 0.5).finished()));
  CHECK(band.contains((Vec(2) << 1.0, 1.0).finished()));
  CHECK(band.contains((Vec(2) << 0.0, 2.0).finished()));
  CHECK_FALSE(band.contains((Vec(2) << 1.2, 0.9).finished()));
  CHECK_FALSE(band.contains((Vec(2) << 0.4, 0.4).finished()));
  CHECK_FALSE(band.contains((Vec(2) << -0.1, 1.5).finished()));

  CHECK((band.project((Vec(2) << 2.0, 2.0).finished()) - (Vec(2) << 1.0, 1.0).finished()).norm() <=
        1e-12);
  CHECK((band.project((Vec(2) << 0.3, 0.3).finished()) - (Vec(2) << 0.5, 0.5).finished()).norm() <=
        1e-12);
  const Vec mid = (Vec(2) << 0.9, 0.4).finished();
  CHECK((band.project(mid) - mid).norm() <= 1e-15);

  // Projection optimality against a vertex sample.
  std::vector<Vec> members = {(Vec(2) << 1, 0).finished(), (Vec(2) << 0, 1).finished(),
                              (Vec(2) << 2, 0).finished(), (Vec(2) << 0, 2).finished(),
                              (Vec(2) << 1, 1).finished(), (Vec(2) << 0.5, 0.5).finished()};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.5, 3.0);
  for (int t = 0; t < 50; ++t) {
    Vec y(2);
    y << u(rng), u(rng);
    const Vec p = band.project(y);
    check_projection_optimal(band, y, p, members, 1e-10);
  }

  // Oracle: vertices are e_i and (1+c) e_i.
  const Vec up = band.linear_maximize((Vec(2) << 3.0, 1.0).finished());
  CHECK((up - (Vec(2) << 2.0, 0.0).finished()).norm() <= 1e-12);
  const Vec down = band.linear_maximize((Vec(2) << -3.0, -1.0).finished());
  CHECK((down - (Vec(2) << 0.0, 1.0).finished()).norm() <= 1e-12);

  CHECK(band.diameter() == doctest::Approx(2.0 * std::sqrt(2.0)));  // |2 e1 - 2 e2|
  CHECK(band.interior_point().sum() == doctest::Approx(1.5));
  CHECK(band.relatively_interior((Vec(2) << 0.7, 0.7).finished(), 1e-6));
  CHECK_FALSE(band.relatively_interior((Vec(2) << 0.5, 0.5).finished(), 1e-6));
}

TEST_CASE("halfspace-trimmed simplex") {
  std::vector<Halfspace> cuts;
  cuts.push_back({(Vec(2) << 1.0, 0.0).finished(), 0.8});
  HalfspaceTrimmedSimplex trimmed(2, cuts);
  CHECK(trimmed.cuts().size() == 1);
  CHECK(trimmed.contains((Vec(2) << 0.5, 0.5).finished()));
  CHECK(trimmed.contains((Vec(2) << 0.8, 0.2).finished()));
  CHECK_FALSE(trimmed.contains((Vec(2) << 0.9, 0.1).finished()));
  CHECK_FALSE(trimmed.contains((Vec(2) << 0.7, 0.2).finished()));

  // Projecting the trimmed-away vertex lands on the cut boundary.
  const Vec p = trimmed.project((Vec(2) << 1.0, 0.0).finished());
  CHECK(p[0] == doctest::Approx(0.8).epsilon(1e-6));
  CHECK(p[1] == doctest::Approx(0.2).epsilon(1e-6));
  CHECK(((Vec(2) << 1.0, 0.0).finished() - p).norm() ==
        doctest::Approx(0.2 * std::sqrt(2.0)).epsilon(1e-6));

  CHECK(trimmed.contains(trimmed.interior_point(), 1e-9));
  CHECK(trimmed.relatively_interior(trimmed.interior_point(), 1e-6));
  CHECK_FALSE(trimmed.has_linear_oracle());

  // An impossible cut leaves nothing of the simplex.
  std::vector<Halfspace> empty_cuts;
  empty_cuts.push_back({(Vec(2) << 1.0, 1.0).finished(), 0.2});
  CHECK_THROWS_AS(HalfspaceTrimmedSimplex(2, empty_cuts), ConfigError);
}

TEST_CASE("cyclic projections match the exact projector on an intersection") {
  // Simplex cut by x0 <= 0.6 in dimension 3: compare the iterated projection
  // with the one-shot hull projection onto the polytope's vertices.
  std::vector<Halfspace> cuts;
  cuts.push_back({(Vec(3) << 1.0, 0.0, 0.0).finished(), 0.6});
  HalfspaceTrimmedSimplex trimmed(3, cuts);
  const std::vector<Vec> verts = {
      (Vec(3) << 0, 1, 0).finished(),     (Vec(3) << 0, 0, 1).finished(),
      (Vec(3) << 0.6, 0.4, 0).finished(), (Vec(3) << 0.6, 0, 0.4).finished()};
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1.0, 2.0);
  for (int t = 0; t < 20; ++t) {
    Vec y(3);
    for (int i = 0; i < 3; ++i) y[i] = u(rng);
    const Vec p_dykstra = trimmed.project(y);
    const auto hull = oracle::hull_distance(verts, y);
    CHECK((p_dykstra - hull.projection).norm() <= 5e-6);
  }
}

TEST_CASE("region input validation") {
  SimplexRegion s(3);
  CHECK_THROWS_AS(s.project(Vec::Zero(2)), DimensionError);
  CHECK_THROWS_AS(SimplexRegion(1), ConfigError);
  CHECK_THROWS_AS(BandRegion(2, -0.5), ConfigError);
  CHECK_THROWS_AS(GomRegion(1), ConfigError);
  CHECK_FALSE(s.contains(Vec::Zero(2)));  // wrong dimension is just "not a member"
}
