#include "cfmm/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace cfmm {
namespace oracle {

namespace {

// Evaluates x.q - R(x), tolerating infinite R (barrier boundaries).
double objective(const Conjugate& r, const Vec& q, const Vec& x) {
  const double rv = r.value(x);
  if (!std::isfinite(rv)) return -std::numeric_limits<double>::infinity();
  return x.dot(q) - rv;
}

}  // namespace

// ── grid_cost ───────────────────────────────────────────────────────────────

GridMax grid_cost(const Region& region, const Conjugate& r, const Vec& q, int resolution) {
  require_dimension(q, region.dimension(), "grid_cost quantity");
  if (r.domain()->dimension() != region.dimension()) {
    throw DimensionError("grid_cost: region and potential domain disagree");
  }
  if (resolution < 50) throw ConfigError("grid_cost needs resolution >= 50 per axis");

  const Eigen::Index d = region.dimension();
  // Simplex-like sets are measure-zero in the box; walk their affine chart.
  const bool simplex_chart = dynamic_cast<const SimplexRegion*>(&region) != nullptr ||
                             dynamic_cast<const HalfspaceTrimmedSimplex*>(&region) != nullptr;
  const Eigen::Index free_dims = simplex_chart ? d - 1 : d;
  if (free_dims > 4) throw UnsupportedRegionError("grid_cost supports dimension <= 4");

  double cells = 1.0;
  for (Eigen::Index k = 0; k < free_dims; ++k) cells *= double(resolution) + 1.0;
  if (cells > 2.5e8) throw ConfigError("grid_cost: resolution^dimension too large");

  const auto [lo, hi] = region.bounding_box();
  GridMax best;
  best.value = -std::numeric_limits<double>::infinity();
  best.argmax = Vec::Zero(d);

  std::vector<int> idx(static_cast<std::size_t>(free_dims), 0);
  Vec x(d);
  bool done = false;
  while (!done) {
    for (Eigen::Index k = 0; k < free_dims; ++k) {
      const double t = double(idx[static_cast<std::size_t>(k)]) / double(resolution);
      x[k] = lo[k] + t * (hi[k] - lo[k]);
    }
    bool candidate = true;
    if (simplex_chart) {
      const double rest = 1.0 - x.head(d - 1).sum();
      if (rest < 0.0) candidate = false;
      else x[d - 1] = rest;
    }
    if (candidate && region.contains(x, 1e-12)) {
      ++best.samples;
      const double f = objective(r, q, x);
      if (f > best.value) {
        best.value = f;
        best.argmax = x;
      }
    }
    // Odometer increment over the free axes.
    Eigen::Index k = 0;
    for (; k < free_dims; ++k) {
      if (++idx[static_cast<std::size_t>(k)] <= resolution) break;
      idx[static_cast<std::size_t>(k)] = 0;
    }
    done = k == free_dims;
  }
  if (best.samples == 0) throw SolverError("grid_cost: no grid sample landed inside the region");
  return best;
}

// ── min_norm_point ──────────────────────────────────────────────────────────

namespace {

// Min-norm point of the affine hull of the columns listed in `corral`:
// solve [G 1; 1' 0] [alpha; nu] = [0; 1] with G the corral Gram matrix.
bool affine_minimizer(const std::vector<Vec>& gens, const std::vector<int>& corral,
                      Vec& alpha_out) {
  const int k = static_cast<int>(corral.size());
  Mat kkt = Mat::Zero(k + 1, k + 1);
  for (int a = 0; a < k; ++a) {
    for (int b = a; b < k; ++b) {
      const double g = gens[static_cast<std::size_t>(corral[static_cast<std::size_t>(a)])].dot(
          gens[static_cast<std::size_t>(corral[static_cast<std::size_t>(b)])]);
      kkt(a, b) = g;
      kkt(b, a) = g;
    }
    kkt(a, k) = 1.0;
    kkt(k, a) = 1.0;
  }
  Vec rhs = Vec::Zero(k + 1);
  rhs[k] = 1.0;
  Eigen::FullPivLU<Mat> lu(kkt);
  if (!lu.isInvertible()) return false;
  const Vec sol = lu.solve(rhs);
  if (!sol.allFinite()) return false;
  alpha_out = sol.head(k);
  return true;
}

Vec combine(const std::vector<Vec>& gens, const std::vector<int>& corral, const Vec& w) {
  Vec x = Vec::Zero(gens[0].size());
  for (std::size_t a = 0; a < corral.size(); ++a) {
    x += w[static_cast<Eigen::Index>(a)] * gens[static_cast<std::size_t>(corral[a])];
  }
  return x;
}

}  // namespace

MinNormPoint min_norm_point(const std::vector<Vec>& generators, double tol, int max_major) {
  if (generators.empty()) throw ConfigError("min_norm_point needs at least one generator");
  const Eigen::Index d = generators[0].size();
  double scale = 1.0;
  int start = 0;
  for (std::size_t i = 0; i < generators.size(); ++i) {
    require_dimension(generators[i], d, "min_norm_point generator");
    scale = std::max(scale, generators[i].squaredNorm());
    if (generators[i].norm() < generators[static_cast<std::size_t>(start)].norm()) {
      start = static_cast<int>(i);
    }
  }
  const double stop_tol = tol * scale;
  const double weight_floor = 1e-12;

  std::vector<int> corral{start};
  Vec weights = Vec::Ones(1);
  Vec x = generators[static_cast<std::size_t>(start)];

  MinNormPoint result;
  double prev_sq = x.squaredNorm();
  for (int major = 0; major < max_major; ++major) {
    result.major_iterations = major + 1;

    // Linear oracle: the generator most opposed to x.
    int best = 0;
    double best_dot = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < generators.size(); ++i) {
      const double dp = x.dot(generators[i]);
      if (dp < best_dot) {
        best_dot = dp;
        best = static_cast<int>(i);
      }
    }
    if (best_dot >= x.squaredNorm() - stop_tol) {
      result.converged = true;
      break;
    }
    if (std::find(corral.begin(), corral.end(), best) != corral.end()) {
      // The improving point is already in the corral: numerical stall at the
      // solution's accuracy floor.
      result.converged = true;
      break;
    }
    corral.push_back(best);
    {
      Vec w2(weights.size() + 1);
      w2 << weights, 0.0;
      weights = w2;
    }

    // Minor cycle: pull the affine minimizer back into the convex hull.
    const int minor_cap = static_cast<int>(corral.size()) * 3 + 10;
    for (int minor = 0; minor < minor_cap; ++minor) {
      Vec alpha;
      if (!affine_minimizer(generators, corral, alpha)) {
        // Degenerate Gram system: drop the least-loaded corral member.
        Eigen::Index drop;
        weights.minCoeff(&drop);
        corral.erase(corral.begin() + drop);
        Vec w2(weights.size() - 1);
        int c = 0;
        for (Eigen::Index a = 0; a < weights.size(); ++a) {
          if (a != drop) w2[c++] = weights[a];
        }
        weights = w2;
        if (weights.sum() > 0) weights /= weights.sum();
        continue;
      }
      if (alpha.minCoeff() > weight_floor) {
        weights = alpha;
        x = combine(generators, corral, weights);
        break;
      }
      // Walk toward the affine minimizer until a weight hits zero.
      double theta = 1.0;
      for (Eigen::Index a = 0; a < alpha.size(); ++a) {
        if (alpha[a] < weights[a]) {
          theta = std::min(theta, weights[a] / (weights[a] - alpha[a]));
        }
      }
      weights = (1.0 - theta) * weights + theta * alpha;
      // Prune zeroed members.
      std::vector<int> kept_idx;
      for (Eigen::Index a = 0; a < weights.size(); ++a) {
        if (weights[a] > weight_floor) kept_idx.push_back(static_cast<int>(a));
      }
      if (kept_idx.empty()) {
        Eigen::Index top;
        weights.maxCoeff(&top);
        kept_idx.push_back(static_cast<int>(top));
      }
      std::vector<int> new_corral;
      Vec new_w(static_cast<Eigen::Index>(kept_idx.size()));
      for (std::size_t a = 0; a < kept_idx.size(); ++a) {
        new_corral.push_back(corral[static_cast<std::size_t>(kept_idx[a])]);
        new_w[static_cast<Eigen::Index>(a)] = weights[kept_idx[a]];
      }
      corral = std::move(new_corral);
      weights = new_w / new_w.sum();
      x = combine(generators, corral, weights);
    }

    // The squared norm must fall strictly every major cycle; once the decrease
    // drops below double resolution the iterate already sits at the accuracy
    // floor (e.g. a query a few ulps off a hull facet, where the optimal
    // weight on the entering generator is too small to carry).
    const double now_sq = x.squaredNorm();
    if (now_sq >= prev_sq * (1.0 - 1e-10)) {
      result.converged = true;
      break;
    }
    prev_sq = now_sq;
  }
  if (!result.converged) {
    throw SolverError("min_norm_point: major-cycle cap reached before convergence");
  }
  result.point = x;
  result.norm = x.norm();
  return result;
}

HullDistance hull_distance(const std::vector<Vec>& generators, const Vec& x, double tol) {
  std::vector<Vec> shifted;
  shifted.reserve(generators.size());
  for (const Vec& g : generators) shifted.push_back(g - x);
  const MinNormPoint mnp = min_norm_point(shifted, tol);
  HullDistance out;
  out.distance = mnp.norm;
  out.projection = x + mnp.point;
  out.iterations = mnp.major_iterations;
  return out;
}

// ── Finite differences ──────────────────────────────────────────────────────

namespace {
void check_fd_step(double h) {
  if (!(h >= 1e-7 && h <= 1e-3)) {
    throw ConfigError("finite-difference step must lie in [1e-7, 1e-3]");
  }
}
}  // namespace

Vec finite_diff_gradient(const ScalarField& f, const Vec& q, double h) {
  check_fd_step(h);
  Vec g(q.size());
  Vec probe = q;
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    probe[i] = q[i] + h;
    const double fp = f(probe);
    probe[i] = q[i] - h;
    const double fm = f(probe);
    probe[i] = q[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

Mat finite_diff_hessian(const ScalarField& f, const Vec& q, double h) {
  check_fd_step(h);
  const Eigen::Index n = q.size();
  Mat hess(n, n);
  Vec probe = q;
  const double f0 = f(q);
  for (Eigen::Index i = 0; i < n; ++i) {
    probe[i] = q[i] + h;
    const double fp = f(probe);
    probe[i] = q[i] - h;
    const double fm = f(probe);
    probe[i] = q[i];
    hess(i, i) = (fp - 2.0 * f0 + fm) / (h * h);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      probe[i] = q[i] + h;
      probe[j] = q[j] + h;
      const double fpp = f(probe);
      probe[j] = q[j] - h;
      const double fpm = f(probe);
      probe[i] = q[i] - h;
      const double fmm = f(probe);
      probe[j] = q[j] + h;
      const double fmp = f(probe);
      probe[i] = q[i];
      probe[j] = q[j];
      const double v = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
      hess(i, j) = v;
      hess(j, i) = v;
    }
  }
  return hess;
}

// ── power_iteration ─────────────────────────────────────────────────────────

double power_iteration(const Mat& h, double tol, int max_iters) {
  if (h.rows() != h.cols()) throw DimensionError("power_iteration needs a square matrix");
  const Eigen::Index n = h.rows();
  // Deterministic start with incommensurate components so no eigendirection
  // is missed by symmetry.
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = 1.0 + 0.137 * std::sin(double(i) + 0.3);
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    Vec w = h * v;
    const double norm = w.norm();
    if (norm < 1e-300) return 0.0;  // the matrix annihilates the iterate
    w /= norm;
    const double next = w.dot(h * w);
    if (std::abs(next - lambda) <= tol * std::max(1.0, std::abs(next))) return next;
    lambda = next;
    v = std::move(w);
  }
  throw SolverError("power_iteration: no convergence within the iteration cap");
}

}  // namespace oracle
}  // namespace cfmm
