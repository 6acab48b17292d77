#ifndef CFMM_ORACLE_HPP
#define CFMM_ORACLE_HPP

#include <functional>
#include <vector>

#include "cfmm/conjugates.hpp"
#include "cfmm/regions.hpp"

namespace cfmm {
namespace oracle {

// Slow, independent evaluations used to validate the engine's fast paths.
// Everything here is deliberately implemented from first principles (grids,
// finite differences, the classic min-norm-point scheme) rather than by
// calling back into the engine.

// ── Grid lower bound on the cost value ──────────────────────────────────────
// Maximizes x.q - R(x) over grid samples of the region. Simplex-like regions
// are gridded in their (n-1)-dimensional affine parametrization, all others
// over the bounding box with a membership filter; every sample is a true
// member, so the result is a certified lower bound on the exact value.
// Requires effective dimension <= 4 and resolution >= 50 points per axis.
struct GridMax {
  double value = 0.0;
  Vec argmax;
  long samples = 0;
};
GridMax grid_cost(const Region& region, const Conjugate& r, const Vec& q, int resolution);

// ── Min-norm point of a finite point set's convex hull (Wolfe) ─────────────
struct MinNormPoint {
  Vec point;
  double norm = 0.0;
  int major_iterations = 0;
  bool converged = false;
};
MinNormPoint min_norm_point(const std::vector<Vec>& generators, double tol = 1e-14,
                            int max_major = 5000);

// Distance from x to the convex hull of `generators`, plus the projection.
struct HullDistance {
  double distance = 0.0;
  Vec projection;
  int iterations = 0;
};
HullDistance hull_distance(const std::vector<Vec>& generators, const Vec& x,
                           double tol = 1e-14);

// ── Finite differences ──────────────────────────────────────────────────────
// Central differences with step h in [1e-7, 1e-3].
using ScalarField = std::function<double(const Vec&)>;
Vec finite_diff_gradient(const ScalarField& f, const Vec& q, double h = 1e-5);
Mat finite_diff_hessian(const ScalarField& f, const Vec& q, double h = 1e-4);

// ── Power iteration for the largest eigenvalue of a symmetric PSD matrix ───
double power_iteration(const Mat& h, double tol = 1e-8, int max_iters = 20000);

}  // namespace oracle
}  // namespace cfmm

#endif  // CFMM_ORACLE_HPP
