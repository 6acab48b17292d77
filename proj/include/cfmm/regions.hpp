#ifndef CFMM_REGIONS_HPP
#define CFMM_REGIONS_HPP

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "cfmm/common.hpp"

namespace cfmm {

// A closed convex set of price vectors. Every market instrument keeps its
// quoted prices inside one of these sets; the engine only ever needs the three
// geometric primitives below (membership, Euclidean projection, and — where
// available — exact linear maximization) plus a relative-interior point to
// start iterative solvers from.
//
// All concrete regions here are compact. Unbounded regions would break the
// sup-based cost evaluation (the supremum may not be attained), so none are
// provided and implementations may rely on compactness.
class Region {
 public:
  virtual ~Region() = default;

  Eigen::Index dimension() const { return dim_; }
  virtual std::string name() const = 0;

  // Membership within tolerance `tol` on every defining constraint.
  virtual bool contains(const Vec& x, double tol = kMembershipTol) const = 0;

  // Euclidean projection: the unique nearest member.
  virtual Vec project(const Vec& y) const = 0;

  // Exact maximizer of c·x over the region (a vertex for polytopes).
  // Throws UnsupportedRegionError when no oracle exists for the region type.
  virtual Vec linear_maximize(const Vec& c) const;
  virtual bool has_linear_oracle() const { return false; }

  // Diameter sup ||x - x'||. `diameter_is_exact()` is false when only an
  // upper bound is returned.
  virtual double diameter() const = 0;
  virtual bool diameter_is_exact() const { return true; }

  // A point in the relative interior (used to initialize iterative solvers).
  virtual Vec interior_point() const = 0;

  // Strict membership: inside the region with slack > margin on every
  // non-affine constraint (affine-hull equalities are still required to hold
  // within kMembershipTol).
  virtual bool relatively_interior(const Vec& x, double margin = 1e-9) const = 0;

  // Orthonormal basis of the tangent space of the affine hull. Identity for
  // full-dimensional regions; the sum-zero subspace for simplex-like regions.
  virtual Mat tangent_basis() const;

  // Axis-aligned box enclosing the region (used by grid validators).
  virtual std::pair<Vec, Vec> bounding_box() const = 0;

 protected:
  explicit Region(Eigen::Index dim);

  Eigen::Index dim_;
};

// a·x <= b
struct Halfspace {
  Vec a;
  double b = 0.0;
};

// ── Concrete regions ────────────────────────────────────────────────────────

// Probability simplex { x >= 0, sum x = 1 }.
class SimplexRegion final : public Region {
 public:
  explicit SimplexRegion(int n);

  std::string name() const override { return "simplex"; }
  bool contains(const Vec& x, double tol = kMembershipTol) const override;
  Vec project(const Vec& y) const override;
  Vec linear_maximize(const Vec& c) const override;
  bool has_linear_oracle() const override { return true; }
  double diameter() const override;
  Vec interior_point() const override;
  bool relatively_interior(const Vec& x, double margin = 1e-9) const override;
  Mat tangent_basis() const override;
  std::pair<Vec, Vec> bounding_box() const override;
};

// Unit 2-norm ball centered at the all-ones vector.
class BallRegion final : public Region {
 public:
  explicit BallRegion(int dim);

  std::string name() const override { return "ball"; }
  bool contains(const Vec& x, double tol = kMembershipTol) const override;
  Vec project(const Vec& y) const override;
  Vec linear_maximize(const Vec& c) const override;
  bool has_linear_oracle() const override { return true; }
  double diameter() const override { return 2.0; }
  Vec interior_point() const override;
  bool relatively_interior(const Vec& x, double margin = 1e-9) const override;
  std::pair<Vec, Vec> bounding_box() const override;

  Vec center() const { return Vec::Ones(dim_); }
  double radius() const { return 1.0; }
};

// Pairwise-ordering relaxation for n competitors, in reduced coordinates: one
// variable x_t per unordered pair {i<j} holding the probability-like value for
// "i finishes behind j". Constraints: 0 <= x_t <= 1 for every pair and, for
// every triple i<j<k,  0 <= x_ij + x_jk - x_ik <= 1  (the fold of the ordered
// triangle inequalities onto reduced coordinates). Contains the convex hull of
// the ranking assignments; the containment is exact for n <= 4 and may be
// strict for larger n.
class GomRegion final : public Region {
 public:
  explicit GomRegion(int n);

  std::string name() const override { return "gom"; }
  bool contains(const Vec& x, double tol = kMembershipTol) const override;
  Vec project(const Vec& y) const override;
  Vec linear_maximize(const Vec& c) const override;  // exact vertex via simplex pivoting
  bool has_linear_oracle() const override { return true; }
  double diameter() const override;                  // box-diagonal upper bound
  bool diameter_is_exact() const override { return false; }
  Vec interior_point() const override;
  bool relatively_interior(const Vec& x, double margin = 1e-9) const override;
  std::pair<Vec, Vec> bounding_box() const override;

  int competitors() const { return n_; }

  // Reduced-coordinate indexing for pairs (i, j), 0-based, i < j.
  static Eigen::Index pair_count(int n) { return Eigen::Index(n) * (n - 1) / 2; }
  Eigen::Index pair_index(int i, int j) const;
  // All pairs in index order.
  const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }

  struct Triple {
    Eigen::Index ij, jk, ik;  // slab: 0 <= x_ij + x_jk - x_ik <= 1
  };
  const std::vector<Triple>& triples() const { return triples_; }

  // Dykstra controls (projection): movement tolerance per sweep and sweep cap.
  void set_projection_controls(double move_tol, int max_sweeps);

 private:
  int n_;
  std::vector<std::pair<int, int>> pairs_;
  std::vector<Triple> triples_;
  double move_tol_ = 1e-12;
  int max_sweeps_ = 50000;
};

// { x >= 0, 1 <= sum x <= 1 + c }: the nonnegative band between the unit
// simplex and its scaled copy.
class BandRegion final : public Region {
 public:
  BandRegion(int n, double c);

  std::string name() const override { return "band"; }
  bool contains(const Vec& x, double tol = kMembershipTol) const override;
  Vec project(const Vec& y) const override;
  Vec linear_maximize(const Vec& c) const override;
  bool has_linear_oracle() const override { return true; }
  double diameter() const override;
  Vec interior_point() const override;
  bool relatively_interior(const Vec& x, double margin = 1e-9) const override;
  std::pair<Vec, Vec> bounding_box() const override;

  double width() const { return c_; }

 private:
  double c_;
};

// Probability simplex intersected with extra halfspaces a·x <= b. Useful as a
// deliberately-too-small price region in stress fixtures.
class HalfspaceTrimmedSimplex final : public Region {
 public:
  HalfspaceTrimmedSimplex(int n, std::vector<Halfspace> cuts);

  std::string name() const override { return "trimmed_simplex"; }
  bool contains(const Vec& x, double tol = kMembershipTol) const override;
  Vec project(const Vec& y) const override;  // alternating projections (Dykstra)
  double diameter() const override;
  bool diameter_is_exact() const override { return false; }
  Vec interior_point() const override;
  bool relatively_interior(const Vec& x, double margin = 1e-9) const override;
  Mat tangent_basis() const override;
  std::pair<Vec, Vec> bounding_box() const override;

  const std::vector<Halfspace>& cuts() const { return cuts_; }

 private:
  std::vector<Halfspace> cuts_;
  Vec interior_;
};

// ── Projection building blocks (shared by regions, exposed for tests) ──────

// Projection onto { x >= 0, sum x = s }, s > 0.
Vec project_onto_scaled_simplex(const Vec& y, double s);

// Projection onto the halfspace a·x <= b.
Vec project_onto_halfspace(const Vec& y, const Vec& a, double b);

// Dykstra's alternating-projection scheme for an intersection of convex sets,
// each given by its exact projector. Converges to the Euclidean projection of
// `y` onto the intersection. Throws SolverError if the sweep cap is hit before
// successive sweeps move less than `move_tol` (infinity norm).
using Projector = std::function<Vec(const Vec&)>;
Vec dykstra_project(const Vec& y, const std::vector<Projector>& projectors,
                    int max_sweeps = 50000, double move_tol = 1e-12);

}  // namespace cfmm

#endif  // CFMM_REGIONS_HPP
