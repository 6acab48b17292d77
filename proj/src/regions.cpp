#include "cfmm/regions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cfmm {

namespace {

// ── Simplex pivoting for polytope vertex oracles ────────────────────────────
// Maximizes c·x over { A x <= b, x >= 0 } with b >= 0, so the slack basis is
// feasible from the start. Dense tableau, Dantzig pricing with a Bland
// fallback after a run of degenerate pivots. Returns a vertex (basic feasible
// solution). This is deliberately a fixed-shape helper for the bounded
// pair-ordering polytope, not a general-purpose LP interface.
Vec vertex_maximize(const Mat& A, const Vec& b, const Vec& c, int max_pivots = 50000) {
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  const Eigen::Index cols = n + m + 1;  // variables, slacks, rhs

  Mat t(m + 1, cols);
  t.setZero();
  t.block(0, 0, m, n) = A;
  t.block(0, n, m, m) = Mat::Identity(m, m);
  t.block(0, cols - 1, m, 1) = b;
  // Objective row stores reduced costs of the minimization of -c·x.
  t.block(m, 0, 1, n) = -c.transpose();

  std::vector<Eigen::Index> basis(m);
  for (Eigen::Index i = 0; i < m; ++i) basis[i] = n + i;

  const double price_tol = 1e-9;
  const double pivot_tol = 1e-11;
  int degenerate_run = 0;
  const int bland_after = static_cast<int>(2 * (m + n));

  for (int pivots = 0; pivots < max_pivots; ++pivots) {
    const bool bland = degenerate_run > bland_after;

    // Entering column.
    Eigen::Index enter = -1;
    if (bland) {
      for (Eigen::Index j = 0; j < cols - 1; ++j) {
        if (t(m, j) < -price_tol) { enter = j; break; }
      }
    } else {
      double best = -price_tol;
      for (Eigen::Index j = 0; j < cols - 1; ++j) {
        if (t(m, j) < best) { best = t(m, j); enter = j; }
      }
    }
    if (enter < 0) {
      Vec x = Vec::Zero(n);
      for (Eigen::Index i = 0; i < m; ++i) {
        if (basis[i] < n) x[basis[i]] = t(i, cols - 1);
      }
      return x;
    }

    // Ratio test.
    Eigen::Index leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
      const double aij = t(i, enter);
      if (aij > pivot_tol) {
        const double ratio = t(i, cols - 1) / aij;
        if (ratio < best_ratio - 1e-12 ||
            (ratio < best_ratio + 1e-12 && (leave < 0 || basis[i] < basis[leave]))) {
          best_ratio = ratio;
          leave = i;
        }
      }
    }
    if (leave < 0) throw SolverError("vertex_maximize: unbounded direction in a bounded polytope");

    degenerate_run = best_ratio < 1e-12 ? degenerate_run + 1 : 0;

    // Pivot.
    t.row(leave) /= t(leave, enter);
    for (Eigen::Index i = 0; i <= m; ++i) {
      if (i != leave && std::abs(t(i, enter)) > 0) t.row(i) -= t(i, enter) * t.row(leave);
    }
    basis[leave] = enter;
  }
  throw SolverError("vertex_maximize: pivot cap exceeded");
}

Mat sum_zero_basis(Eigen::Index n) {
  // Orthonormal basis of { u : sum u = 0 } from a Householder factorization of
  // the all-ones vector.
  Mat ones = Mat::Ones(n, 1);
  Eigen::HouseholderQR<Mat> qr(ones);
  Mat q = qr.householderQ();
  return q.rightCols(n - 1);
}

}  // namespace

// ── Region base ─────────────────────────────────────────────────────────────

Region::Region(Eigen::Index dim) : dim_(dim) {
  if (dim < 1) throw ConfigError("region dimension must be positive");
}

Vec Region::linear_maximize(const Vec&) const {
  throw UnsupportedRegionError("linear_maximize: no oracle for region '" + name() + "'");
}

Mat Region::tangent_basis() const { return Mat::Identity(dim_, dim_); }

// ── Shared projator helpers ─────────────────────────────────────────────────

Vec project_onto_scaled_simplex(const Vec& y, double s) {
  if (s <= 0) throw ConfigError("scaled-simplex projection needs s > 0");
  const Eigen::Index n = y.size();
  std::vector<double> u(y.data(), y.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cumsum = 0.0;
  double tau = (u[0] - s);  // placeholder, overwritten on first pass
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    cumsum += u[j];
    const double candidate = (cumsum - s) / double(j + 1);
    if (u[j] - candidate > 0) {
      tau = candidate;
      k = j + 1;
    }
  }
  (void)k;
  return (y.array() - tau).max(0.0).matrix();
}

Vec project_onto_halfspace(const Vec& y, const Vec& a, double b) {
  const double viol = a.dot(y) - b;
  if (viol <= 0) return y;
  return y - (viol / a.squaredNorm()) * a;
}

Vec dykstra_project(const Vec& y, const std::vector<Projector>& projectors,
                    int max_sweeps, double move_tol) {
  Vec x = y;
  std::vector<Vec> correction(projectors.size(), Vec::Zero(y.size()));
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    // The iterate alone can sit still for whole sweeps while the dual
    // corrections keep evolving, so convergence is judged on the corrections'
    // per-sweep change (which vanishes iff the scheme has converged), not on
    // the iterate's movement.
    double shift = 0.0;
    for (std::size_t k = 0; k < projectors.size(); ++k) {
      const Vec shifted = x + correction[k];
      Vec z = projectors[k](shifted);
      shift = std::max(shift, (shifted - z - correction[k]).lpNorm<Eigen::Infinity>());
      correction[k] = shifted - z;
      x = std::move(z);
    }
    if (sweep > 0 && shift < move_tol) return x;
  }
  throw SolverError("dykstra_project: sweep cap reached before convergence");
}

// ── SimplexRegion ───────────────────────────────────────────────────────────

SimplexRegion::SimplexRegion(int n) : Region(n) {
  if (n < 2) throw ConfigError("simplex region needs n >= 2");
}

bool SimplexRegion::contains(const Vec& x, double tol) const {
  if (x.size() != dim_) return false;
  return x.minCoeff() >= -tol && std::abs(x.sum() - 1.0) <= tol;
}

Vec SimplexRegion::project(const Vec& y) const {
  require_dimension(y, dim_, "simplex projection");
  return project_onto_scaled_simplex(y, 1.0);
}

Vec SimplexRegion::linear_maximize(const Vec& c) const {
  require_dimension(c, dim_, "simplex linear_maximize");
  Eigen::Index best;
  c.maxCoeff(&best);
  Vec x = Vec::Zero(dim_);
  x[best] = 1.0;
  return x;
}

double SimplexRegion::diameter() const { return std::sqrt(2.0); }

Vec SimplexRegion::interior_point() const { return Vec::Constant(dim_, 1.0 / double(dim_)); }

bool SimplexRegion::relatively_interior(const Vec& x, double margin) const {
  if (x.size() != dim_) return false;
  return x.minCoeff() > margin && std::abs(x.sum() - 1.0) <= kMembershipTol;
}

Mat SimplexRegion::tangent_basis() const { return sum_zero_basis(dim_); }

std::pair<Vec, Vec> SimplexRegion::bounding_box() const {
  return {Vec::Zero(dim_), Vec::Ones(dim_)};
}

// ── BallRegion ──────────────────────────────────────────────────────────────

BallRegion::BallRegion(int dim) : Region(dim) {}

bool BallRegion::contains(const Vec& x, double tol) const {
  if (x.size() != dim_) return false;
  return (x - center()).norm() <= 1.0 + tol;
}

Vec BallRegion::project(const Vec& y) const {
  require_dimension(y, dim_, "ball projection");
  const Vec d = y - center();
  const double nd = d.norm();
  if (nd <= 1.0) return y;
  return center() + d / nd;
}

Vec BallRegion::linear_maximize(const Vec& c) const {
  require_dimension(c, dim_, "ball linear_maximize");
  const double nc = c.norm();
  if (nc == 0.0) return center();
  return center() + c / nc;
}

Vec BallRegion::interior_point() const { return center(); }

bool BallRegion::relatively_interior(const Vec& x, double margin) const {
  if (x.size() != dim_) return false;
  return (x - center()).norm() < 1.0 - margin;
}

std::pair<Vec, Vec> BallRegion::bounding_box() const {
  return {Vec::Zero(dim_), Vec::Constant(dim_, 2.0)};
}

// ── GomRegion ───────────────────────────────────────────────────────────────

GomRegion::GomRegion(int n) : Region(pair_count(n)), n_(n) {
  if (n < 2) throw ConfigError("pair-ordering region needs n >= 2");
  pairs_.reserve(static_cast<std::size_t>(dim_));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) pairs_.emplace_back(i, j);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        triples_.push_back({pair_index(i, j), pair_index(j, k), pair_index(i, k)});
      }
    }
  }
}

Eigen::Index GomRegion::pair_index(int i, int j) const {
  if (i < 0 || j <= i || j >= n_) throw ConfigError("pair_index: need 0 <= i < j < n");
  // Row-major position of (i, j) in the strictly upper triangle.
  return Eigen::Index(i) * (2 * n_ - i - 1) / 2 + (j - i - 1);
}

void GomRegion::set_projection_controls(double move_tol, int max_sweeps) {
  move_tol_ = move_tol;
  max_sweeps_ = max_sweeps;
}

bool GomRegion::contains(const Vec& x, double tol) const {
  if (x.size() != dim_) return false;
  if (x.minCoeff() < -tol || x.maxCoeff() > 1.0 + tol) return false;
  for (const Triple& t : triples_) {
    const double s = x[t.ij] + x[t.jk] - x[t.ik];
    if (s < -tol || s > 1.0 + tol) return false;
  }
  return true;
}

Vec GomRegion::project(const Vec& y) const {
  require_dimension(y, dim_, "gom projection");
  if (contains(y, 0.0)) return y;
  std::vector<Projector> ops;
  ops.reserve(1 + triples_.size());
  ops.push_back([](const Vec& v) { return v.cwiseMax(0.0).cwiseMin(1.0).eval(); });
  for (const Triple& t : triples_) {
    ops.push_back([t](const Vec& v) {
      // Slab 0 <= v_ij + v_jk - v_ik <= 1 with normal of squared norm 3.
      const double s = v[t.ij] + v[t.jk] - v[t.ik];
      double shift = 0.0;
      if (s < 0.0) shift = s / 3.0;
      else if (s > 1.0) shift = (s - 1.0) / 3.0;
      else return v;
      Vec w = v;
      w[t.ij] -= shift;
      w[t.jk] -= shift;
      w[t.ik] += shift;
      return w;
    });
  }
  return dykstra_project(y, ops, max_sweeps_, move_tol_);
}

Vec GomRegion::linear_maximize(const Vec& c) const {
  require_dimension(c, dim_, "gom linear_maximize");
  const Eigen::Index rows = dim_ + 2 * Eigen::Index(triples_.size());
  Mat a = Mat::Zero(rows, dim_);
  Vec b(rows);
  Eigen::Index r = 0;
  for (Eigen::Index t = 0; t < dim_; ++t, ++r) {  // x_t <= 1
    a(r, t) = 1.0;
    b[r] = 1.0;
  }
  for (const Triple& t : triples_) {  // x_ij + x_jk - x_ik <= 1
    a(r, t.ij) = 1.0;
    a(r, t.jk) = 1.0;
    a(r, t.ik) = -1.0;
    b[r++] = 1.0;
  }
  for (const Triple& t : triples_) {  // -(x_ij + x_jk - x_ik) <= 0
    a(r, t.ij) = -1.0;
    a(r, t.jk) = -1.0;
    a(r, t.ik) = 1.0;
    b[r++] = 0.0;
  }
  return vertex_maximize(a, b, c);
}

double GomRegion::diameter() const { return std::sqrt(double(dim_)); }

Vec GomRegion::interior_point() const { return Vec::Constant(dim_, 0.5); }

bool GomRegion::relatively_interior(const Vec& x, double margin) const {
  if (x.size() != dim_) return false;
  if (x.minCoeff() <= margin || x.maxCoeff() >= 1.0 - margin) return false;
  for (const Triple& t : triples_) {
    const double s = x[t.ij] + x[t.jk] - x[t.ik];
    if (s <= margin || s >= 1.0 - margin) return false;
  }
  return true;
}

std::pair<Vec, Vec> GomRegion::bounding_box() const {
  return {Vec::Zero(dim_), Vec::Ones(dim_)};
}

// ── BandRegion ──────────────────────────────────────────────────────────────

BandRegion::BandRegion(int n, double c) : Region(n), c_(c) {
  if (n < 2) throw ConfigError("band region needs n >= 2");
  if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("band region needs width c > 0");
}

bool BandRegion::contains(const Vec& x, double tol) const {
  if (x.size() != dim_) return false;
  const double s = x.sum();
  return x.minCoeff() >= -tol && s >= 1.0 - tol && s <= 1.0 + c_ + tol;
}

Vec BandRegion::project(const Vec& y) const {
  require_dimension(y, dim_, "band projection");
  const Vec clipped = y.cwiseMax(0.0);
  const double s = clipped.sum();
  if (s < 1.0) return project_onto_scaled_simplex(y, 1.0);
  if (s > 1.0 + c_) return project_onto_scaled_simplex(y, 1.0 + c_);
  return clipped;
}

Vec BandRegion::linear_maximize(const Vec& c) const {
  require_dimension(c, dim_, "band linear_maximize");
  // Vertices are e_i and (1+width) e_i.
  Eigen::Index best = 0;
  double best_val = -std::numeric_limits<double>::infinity();
  double best_scale = 1.0;
  for (Eigen::Index i = 0; i < dim_; ++i) {
    for (double scale : {1.0, 1.0 + c_}) {
      const double v = scale * c[i];
      if (v > best_val + 1e-15) {
        best_val = v;
        best = i;
        best_scale = scale;
      }
    }
  }
  Vec x = Vec::Zero(dim_);
  x[best] = best_scale;
  return x;
}

double BandRegion::diameter() const {
  if (dim_ <= 6) {
    // Exact: scan all vertex pairs.
    double best = 0.0;
    std::vector<Vec> verts;
    for (Eigen::Index i = 0; i < dim_; ++i) {
      Vec v = Vec::Zero(dim_);
      v[i] = 1.0;
      verts.push_back(v);
      verts.push_back((1.0 + c_) * v);
    }
    for (std::size_t p = 0; p < verts.size(); ++p) {
      for (std::size_t q = p + 1; q < verts.size(); ++q) {
        best = std::max(best, (verts[p] - verts[q]).norm());
      }
    }
    return best;
  }
  return std::sqrt(2.0) * (1.0 + c_);
}

Vec BandRegion::interior_point() const {
  return Vec::Constant(dim_, (1.0 + c_ / 2.0) / double(dim_));
}

bool BandRegion::relatively_interior(const Vec& x, double margin) const {
  if (x.size() != dim_) return false;
  const double s = x.sum();
  return x.minCoeff() > margin && s > 1.0 + margin && s < 1.0 + c_ - margin;
}

std::pair<Vec, Vec> BandRegion::bounding_box() const {
  return {Vec::Zero(dim_), Vec::Constant(dim_, 1.0 + c_)};
}

// ── HalfspaceTrimmedSimplex ─────────────────────────────────────────────────

HalfspaceTrimmedSimplex::HalfspaceTrimmedSimplex(int n, std::vector<Halfspace> cuts)
    : Region(n), cuts_(std::move(cuts)) {
  if (n < 2) throw ConfigError("trimmed simplex needs n >= 2");
  for (const Halfspace& h : cuts_) {
    require_dimension(h.a, dim_, "trimmed-simplex halfspace normal");
    if (h.a.norm() == 0.0) throw ConfigError("trimmed-simplex halfspace needs a nonzero normal");
  }
  // Relative-interior start: the uniform point if strictly feasible, otherwise
  // its projection nudged toward feasibility.
  Vec uniform = Vec::Constant(dim_, 1.0 / double(dim_));
  bool strict = true;
  for (const Halfspace& h : cuts_) {
    if (h.a.dot(uniform) >= h.b - 1e-9) strict = false;
  }
  if (strict) {
    interior_ = uniform;
  } else {
    try {
      interior_ = project(uniform);
    } catch (const SolverError&) {
      // Cyclic projections stall only when the cuts leave nothing to project
      // onto; report that as a configuration problem.
      throw ConfigError("trimmed simplex appears empty: no feasible interior point found");
    }
  }
  if (!contains(interior_, 1e-7)) {
    throw ConfigError("trimmed simplex appears empty: no feasible interior point found");
  }
}

bool HalfspaceTrimmedSimplex::contains(const Vec& x, double tol) const {
  if (x.size() != dim_) return false;
  if (x.minCoeff() < -tol || std::abs(x.sum() - 1.0) > tol) return false;
  for (const Halfspace& h : cuts_) {
    if (h.a.dot(x) > h.b + tol * std::max(1.0, h.a.norm())) return false;
  }
  return true;
}

Vec HalfspaceTrimmedSimplex::project(const Vec& y) const {
  require_dimension(y, dim_, "trimmed-simplex projection");
  if (contains(y, 0.0)) return y;
  std::vector<Projector> ops;
  ops.push_back([](const Vec& v) { return project_onto_scaled_simplex(v, 1.0); });
  for (const Halfspace& h : cuts_) {
    ops.push_back([&h](const Vec& v) { return project_onto_halfspace(v, h.a, h.b); });
  }
  return dykstra_project(y, ops);
}

double HalfspaceTrimmedSimplex::diameter() const { return std::sqrt(2.0); }

Vec HalfspaceTrimmedSimplex::interior_point() const { return interior_; }

bool HalfspaceTrimmedSimplex::relatively_interior(const Vec& x, double margin) const {
  if (x.size() != dim_) return false;
  if (x.minCoeff() <= margin || std::abs(x.sum() - 1.0) > kMembershipTol) return false;
  for (const Halfspace& h : cuts_) {
    if (h.a.dot(x) >= h.b - margin * std::max(1.0, h.a.norm())) return false;
  }
  return true;
}

Mat HalfspaceTrimmedSimplex::tangent_basis() const { return sum_zero_basis(dim_); }

std::pair<Vec, Vec> HalfspaceTrimmedSimplex::bounding_box() const {
  return {Vec::Zero(dim_), Vec::Ones(dim_)};
}

}  // namespace cfmm
