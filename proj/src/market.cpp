#include "cfmm/market.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "cfmm/oracle.hpp"

namespace cfmm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_sum_exp(const Vec& z) {
  const double m = z.maxCoeff();
  return m + std::log((z.array() - m).exp().sum());
}

Vec softmax(const Vec& z) {
  const double m = z.maxCoeff();
  Vec e = (z.array() - m).exp().matrix();
  return e / e.sum();
}

Vec mean_of(const std::vector<Vec>& points) {
  Vec m = Vec::Zero(points.front().size());
  for (const Vec& p : points) m += p;
  return m / static_cast<double>(points.size());
}

}  // namespace

Market::Market(std::shared_ptr<const Region> region, std::shared_ptr<const Conjugate> conjugate,
               std::shared_ptr<const PayoffStructure> payoffs, HullMode hull_mode,
               SolverConfig solver, bool positive_bundles_only, std::string kind)
    : region_(std::move(region)),
      conjugate_(std::move(conjugate)),
      payoffs_(std::move(payoffs)),
      hull_mode_(hull_mode),
      solver_(solver),
      positive_bundles_only_(positive_bundles_only),
      kind_(std::move(kind)) {
  if (!region_ || !conjugate_ || !payoffs_) throw ConfigError("market: missing component");
  if (conjugate_->domain().get() != region_.get())
    throw ConfigError("market: the potential must be defined on the market's own price region");
  if (payoffs_->dimension() != region_->dimension())
    throw DimensionError("market: payoff dimension differs from price-region dimension");
  if (solver_.gap_tol <= 0.0 || solver_.pg_tol <= 0.0 || solver_.max_iters <= 0)
    throw ConfigError("market: solver tolerances and iteration cap must be positive");

  select_cost_path();
  if (payoffs_->enumerable() && payoffs_->outcome_count() <= PayoffStructure::kEnumerationCap) {
    outcomes_ = payoffs_->enumerate_outcomes();
    generators_.reserve(outcomes_.size());
    for (const Outcome& o : outcomes_) generators_.push_back(payoffs_->payoff(o));
  }
  check_payoff_coverage();
  cost0_ = cost(Vec::Zero(region_->dimension()));
  check_initial_price_in_hull();
}

void Market::select_cost_path() {
  entropy_ = dynamic_cast<const NegEntropy*>(conjugate_.get());
  quad_ = dynamic_cast<const QuadraticR*>(conjugate_.get());
  barrier_ = dynamic_cast<const BarrierEntropy*>(conjugate_.get());
  const auto* simplex = dynamic_cast<const SimplexRegion*>(region_.get());
  const auto* ball = dynamic_cast<const BallRegion*>(region_.get());
  const auto* band = dynamic_cast<const BandRegion*>(region_.get());

  if (entropy_ != nullptr && simplex != nullptr) {
    path_ = CostPath::LogSumExp;
  } else if (quad_ != nullptr && ball != nullptr &&
             (quad_->center() - ball->center()).lpNorm<Eigen::Infinity>() <= 1e-12) {
    path_ = CostPath::SphereBall;
  } else if (barrier_ != nullptr && band != nullptr &&
             std::abs(barrier_->width() - band->width()) <= 1e-12 && barrier_->gamma() > 0.0) {
    path_ = CostPath::BarrierBand;
  } else if (quad_ != nullptr) {
    path_ = CostPath::QuadraticProjection;
  } else {
    path_ = CostPath::Generic;
  }
}

void Market::check_payoff_coverage() {
  payoffs_covered_ = true;
  max_payoff_distance_ = 0.0;
  auto probe = [&](const Vec& rho) {
    if (!region_->contains(rho, 1e-7)) {
      payoffs_covered_ = false;
      const double d = (rho - region_->project(rho)).norm();
      max_payoff_distance_ = std::max(max_payoff_distance_, d);
    }
  };
  if (!generators_.empty()) {
    for (const Vec& g : generators_) probe(g);
  } else {
    std::mt19937_64 rng(0x5eedULL);
    for (int i = 0; i < 200; ++i) probe(payoffs_->payoff(payoffs_->sample_outcome(rng)));
  }
  if (!payoffs_covered_ && hull_mode_ != HullMode::Unchecked) {
    std::ostringstream msg;
    msg << "market: a payoff vector lies outside the price region (distance "
        << max_payoff_distance_
        << "); construct with HullMode::Unchecked if this is a deliberate stress fixture";
    throw ConfigError(msg.str());
  }
}

void Market::check_initial_price_in_hull() {
  if (hull_mode_ != HullMode::Relaxed) return;
  // Only verifiable when the payoff vectors are materialized; factories that
  // skip materialization are responsible for the containment by construction.
  if (generators_.empty()) return;
  const Vec p0 = price(Vec::Zero(region_->dimension()));
  const auto hd = oracle::hull_distance(generators_, p0);
  if (hd.distance > 1e-7) {
    std::ostringstream msg;
    msg << "market: initial price is " << hd.distance
        << " away from the payoff hull; relaxed mode requires it inside";
    throw ConfigError(msg.str());
  }
}

// ── Pricing ───────────────────────────────────────────────────────────────────

double Market::cost(const Vec& q) const {
  require_dimension(q, region_->dimension(), "quantity");
  switch (path_) {
    case CostPath::LogSumExp: {
      const double b = entropy_->liquidity();
      return b * log_sum_exp(q / b);
    }
    case CostPath::SphereBall: {
      const double lam = quad_->lambda();
      const double nq = q.norm();
      if (nq <= 2.0 * lam) return nq * nq / (4.0 * lam) + q.sum();
      return nq + q.sum() - lam;
    }
    case CostPath::BarrierBand: {
      const BandPoint bp = solve_band(q);
      const double b = barrier_->liquidity();
      return bp.s * b * (bp.lse - std::log(bp.s)) +
             barrier_->gamma() * std::log(1.0 + barrier_->width() - bp.s);
    }
    case CostPath::QuadraticProjection:
      return quadratic_cost(q, nullptr);
    case CostPath::Generic:
      return solve_generic(q).value;
  }
  throw SolverError("market: unknown cost path");
}

Vec Market::price(const Vec& q) const {
  require_dimension(q, region_->dimension(), "quantity");
  switch (path_) {
    case CostPath::LogSumExp:
      return softmax(q / entropy_->liquidity());
    case CostPath::SphereBall: {
      const double lam = quad_->lambda();
      const double nq = q.norm();
      if (nq <= 2.0 * lam) return q / (2.0 * lam) + Vec::Ones(q.size());
      return q / nq + Vec::Ones(q.size());
    }
    case CostPath::BarrierBand: {
      const BandPoint bp = solve_band(q);
      return bp.s * bp.softmax;
    }
    case CostPath::QuadraticProjection: {
      Vec p;
      quadratic_cost(q, &p);
      return p;
    }
    case CostPath::Generic:
      return solve_generic(q).x;
  }
  throw SolverError("market: unknown cost path");
}

double Market::quadratic_cost(const Vec& q, Vec* price_out) const {
  const double lam = quad_->lambda();
  const Vec x = region_->project(quad_->center() + q / (2.0 * lam));
  if (price_out != nullptr) *price_out = x;
  return q.dot(x) - conjugate_->value(x);
}

Market::BandPoint Market::solve_band(const Vec& q) const {
  const double b = barrier_->liquidity();
  const double g = barrier_->gamma();
  const double c = barrier_->width();
  BandPoint bp;
  bp.lse = log_sum_exp(q / b);
  bp.softmax = softmax(q / b);
  // Reduced objective over the price sum s in [1, 1 + c]:
  //   phi(s) = s b (lse - log s) + gamma log(1 + c - s),
  // whose derivative is strictly decreasing, so the maximizer is either the
  // unit-sum face or the unique interior root of phi'.
  auto dphi = [&](double s) { return b * (bp.lse - std::log(s) - 1.0) - g / (1.0 + c - s); };
  bp.face_derivative = dphi(1.0);
  if (bp.face_derivative <= 0.0) {
    bp.s = 1.0;
    return bp;
  }
  double lo = 1.0;
  double hi = 1.0 + c;  // dphi -> -inf here
  for (int it = 0; it < 200 && (hi - lo) > 1e-16 * (1.0 + c); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (dphi(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double s = 0.5 * (lo + hi);
  for (int it = 0; it < 3; ++it) {  // Newton polish; dphi' < 0 throughout
    const double slack = 1.0 + c - s;
    const double d2 = -b / s - g / (slack * slack);
    double ns = s - dphi(s) / d2;
    if (ns <= 1.0) ns = 0.5 * (s + 1.0);
    if (ns >= 1.0 + c) ns = 0.5 * (s + 1.0 + c);
    s = ns;
  }
  bp.s = s;
  return bp;
}

Vec Market::nudge_to_differentiable(Vec x) const {
  if (conjugate_->gradient_defined(x)) return x;
  const Vec anchor = region_->interior_point();
  for (double delta = 1e-12; delta <= 1e-3; delta *= 10.0) {
    Vec cand = (1.0 - delta) * x + delta * anchor;
    if (conjugate_->gradient_defined(cand)) return cand;
  }
  throw SolverError("market: no differentiable point found near the iterate");
}

SolveResult Market::solve_generic(const Vec& q) const {
  require_dimension(q, region_->dimension(), "quantity");
  const Region& reg = *region_;
  const Conjugate& pot = *conjugate_;
  auto objective = [&](const Vec& z) { return q.dot(z) - pot.value(z); };

  SolveResult res;
  Vec x = nudge_to_differentiable(reg.interior_point());
  double f = objective(x);
  double step = 1.0 / std::max(1e-12, pot.convexity_modulus());
  bool converged = false;

  for (int iter = 1; iter <= solver_.max_iters; ++iter) {
    res.iterations = iter;
    const Vec g = q - pot.gradient(x);
    if (reg.has_linear_oracle()) {
      res.gap = g.dot(reg.linear_maximize(g) - x);
      if (res.gap <= solver_.gap_tol) {
        res.pg_norm = (x - reg.project(x + g)).norm();
        converged = true;
        break;
      }
    }
    const Vec probe = reg.project(x + g);
    res.pg_norm = (x - probe).norm();
    if (res.pg_norm <= solver_.pg_tol) {
      converged = true;
      break;
    }

    bool accepted = false;
    double t = step;
    for (int ls = 0; ls < 60; ++ls) {
      Vec cand = nudge_to_differentiable(reg.project(x + t * g));
      const double fc = objective(cand);
      const double model = g.dot(cand - x);  // >= ||cand - x||^2 / t >= 0 for projected steps
      if (std::isfinite(fc) && fc >= f + 1e-4 * model) {
        const double movement = (cand - x).norm();
        x = std::move(cand);
        f = fc;
        step = std::min(t * 1.3, 1e6);
        accepted = true;
        if (movement <= 1e-15 * (1.0 + x.norm())) converged = true;  // numerically stationary
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      if (res.pg_norm <= 1e-6) {
        converged = true;  // line search exhausted at floating-point resolution
      } else {
        throw SolverError("market: projected-gradient line search stalled");
      }
    }
    if (converged) break;
  }
  if (!converged) throw SolverError("market: cost solve hit the iteration cap");
  res.x = x;
  res.value = f;
  return res;
}

double Market::duality_gap(const Vec& q, const Vec& x) const {
  require_dimension(q, region_->dimension(), "quantity");
  require_dimension(x, region_->dimension(), "price");
  const Vec g = q - conjugate_->gradient(x);
  return g.dot(region_->linear_maximize(g) - x);
}

double Market::trade_cost(const Vec& q, const Vec& r) const {
  require_dimension(r, region_->dimension(), "bundle");
  if (positive_bundles_only_ && r.minCoeff() < -1e-12)
    throw TradeError("market: only nonnegative bundles may trade here");
  return cost(q + r) - cost(q);
}

double Market::bid_ask_spread(const Vec& q, const Vec& r) const {
  require_dimension(r, region_->dimension(), "bundle");
  // Diagnostic round trip; evaluated on raw costs so it is available even on
  // markets that restrict tradable bundles.
  return cost(q + r) + cost(q - r) - 2.0 * cost(q);
}

Quote Market::quote(const Vec& q, const Vec& r, double cash) const {
  Quote out;
  out.bundle = r;
  out.cash = cash;
  out.pre_price = price(q);
  out.cost = trade_cost(q, r) + cash;
  out.post_price = price(q + r);
  out.spread = bid_ask_spread(q, r);
  return out;
}

Vec Market::quantity_for_price(const Vec& target) const {
  return conjugate_->gradient(target);
}

// ── Liquidity diagnostics ─────────────────────────────────────────────────────

double Market::depth_from_conjugate_hessian(const Vec& x) const {
  const Mat basis = region_->tangent_basis();
  Mat m = basis.transpose() * conjugate_->hessian(x) * basis;
  m = 0.5 * (m + m.transpose());
  const Eigen::SelfAdjointEigenSolver<Mat> es(m);
  const double lmin = es.eigenvalues().minCoeff();
  if (!(lmin > 0.0))
    throw DepthUndefinedError("market: curvature not strictly positive at the current price");
  return lmin;  // 1 / largest eigenvalue of the cost Hessian
}

double Market::depth(const Vec& q) const {
  require_dimension(q, region_->dimension(), "quantity");
  switch (path_) {
    case CostPath::LogSumExp: {
      const double b = entropy_->liquidity();
      const Vec p = price(q);
      Mat h = (Mat(p.asDiagonal()) - p * p.transpose()) / b;
      const double lmax = oracle::power_iteration(h);
      if (!(lmax > 0.0)) throw DepthUndefinedError("market: degenerate curvature");
      return 1.0 / lmax;
    }
    case CostPath::SphereBall: {
      const double lam = quad_->lambda();
      const double nq = q.norm();
      if (std::abs(nq - 2.0 * lam) <= 1e-6)
        throw DepthUndefinedError("market: state within 1e-6 of the ball-exit seam");
      return nq < 2.0 * lam ? 2.0 * lam : nq;
    }
    case CostPath::BarrierBand: {
      const BandPoint bp = solve_band(q);
      const double b = barrier_->liquidity();
      const double kink_tol = 1e-9 * std::max(1.0, std::abs(b * bp.lse));
      if (std::abs(bp.face_derivative) <= kink_tol)
        throw DepthUndefinedError("market: state at the unit-sum face transition");
      if (bp.face_derivative < 0.0) {
        // Pinned to the unit-sum face: locally a log-sum-exp market.
        Mat h = (Mat(bp.softmax.asDiagonal()) - bp.softmax * bp.softmax.transpose()) / b;
        const double lmax = oracle::power_iteration(h);
        if (!(lmax > 0.0)) throw DepthUndefinedError("market: degenerate curvature");
        return 1.0 / lmax;
      }
      return depth_from_conjugate_hessian(bp.s * bp.softmax);
    }
    case CostPath::QuadraticProjection: {
      const Vec x = price(q);
      if (!region_->relatively_interior(x, 1e-9))
        throw DepthUndefinedError("market: price on the region boundary; curvature is direction-dependent");
      return 2.0 * quad_->lambda();
    }
    case CostPath::Generic: {
      const Vec x = price(q);
      if (!conjugate_->gradient_defined(x))
        throw DepthUndefinedError("market: price at a nondifferentiable point");
      if (!region_->relatively_interior(x, 1e-9))
        throw DepthUndefinedError("market: price on the region boundary");
      return depth_from_conjugate_hessian(x);
    }
  }
  throw DepthUndefinedError("market: unknown cost path");
}

double Market::directional_depth(const Vec& q, const Vec& u) const {
  require_dimension(q, region_->dimension(), "quantity");
  require_dimension(u, region_->dimension(), "direction");
  const double nu = u.norm();
  if (!(nu > 0.0)) throw ConfigError("market: directional depth needs a nonzero direction");
  const Vec uhat = u / nu;
  const Vec x = price(q);
  if (!conjugate_->gradient_defined(x))
    throw DepthUndefinedError("market: price at a nondifferentiable point");
  if (!region_->relatively_interior(x, 1e-9))
    throw DepthUndefinedError("market: price on the region boundary");
  const Mat basis = region_->tangent_basis();
  const Vec t = basis.transpose() * uhat;
  if (t.norm() <= 1e-12) return kInf;  // the cost is affine along u
  Mat m = basis.transpose() * conjugate_->hessian(x) * basis;
  m = 0.5 * (m + m.transpose());
  const Vec z = m.ldlt().solve(t);
  const double quad_form = t.dot(z);  // uhat' D^2C(q) uhat
  if (!(quad_form > 0.0))
    throw DepthUndefinedError("market: curvature not strictly positive along the direction");
  return 1.0 / quad_form;
}

double Market::worst_case_depth() const {
  switch (path_) {
    case CostPath::LogSumExp:
      // The softmax covariance has eigenvalues at most 1/2.
      return 2.0 * entropy_->liquidity();
    case CostPath::SphereBall:
    case CostPath::QuadraticProjection:
      return 2.0 * quad_->lambda();
    case CostPath::BarrierBand:
    case CostPath::Generic:
      return conjugate_->convexity_modulus();
  }
  throw SolverError("market: unknown cost path");
}

// ── Loss accounting ───────────────────────────────────────────────────────────

double Market::min_potential_over_hull() const {
  if (min_hull_potential_) return *min_hull_potential_;
  double v = 0.0;
  if (hull_mode_ != HullMode::Unchecked) {
    // The initial price lies in the hull, so the conjugate relation at the
    // zero quantity gives the hull minimum directly.
    v = -cost0_;
  } else if (!generators_.empty() && quad_ != nullptr) {
    const auto hd = oracle::hull_distance(generators_, quad_->center());
    v = quad_->lambda() * hd.distance * hd.distance;
  } else {
    throw UnsupportedRegionError(
        "market: hull potential minimum for unchecked fixtures is only available with a "
        "quadratic potential over enumerable outcomes");
  }
  min_hull_potential_ = v;
  return v;
}

double Market::worst_loss_bound(const Vec& q, const Outcome& o) const {
  const Vec rho = payoffs_->payoff(o);
  if (!region_->contains(rho, 1e-7))
    throw DomainViolationError("market: loss bound needs the payoff vector inside the price region");
  const Vec x = price(q);
  const double div = bregman_divergence(*conjugate_, rho, x);
  return conjugate_->value(rho) - min_potential_over_hull() - div;
}

double Market::apriori_loss_bound() const {
  if (apriori_bound_) return *apriori_bound_;
  double sup = -kInf;
  if (path_ == CostPath::SphereBall) {
    sup = quad_->lambda();  // every unit outcome direction is at distance 1 from the center
  } else if (!generators_.empty()) {
    for (const Vec& g : generators_) sup = std::max(sup, conjugate_->value(g));
  } else {
    throw EnumerationError(
        "market: a-priori loss bound needs enumerated outcomes (or the spherical closed form)");
  }
  const double v = sup - min_potential_over_hull();
  apriori_bound_ = v;
  return v;
}

double Market::settle(const Vec& q, const Outcome& o) const {
  require_dimension(q, region_->dimension(), "quantity");
  return payoffs_->payoff(o).dot(q);
}

// ── Hull-exit arbitrage ───────────────────────────────────────────────────────

Vec Market::bregman_hull_projection(const Vec& x0, double* divergence) const {
  if (hull_mode_ == HullMode::Equality) {
    if (divergence != nullptr) *divergence = 0.0;
    return x0;
  }
  if (generators_.empty())
    throw EnumerationError("market: hull projection needs enumerated payoff vectors");
  if (quad_ != nullptr) {
    const auto hd = oracle::hull_distance(generators_, x0);
    if (divergence != nullptr) *divergence = quad_->lambda() * hd.distance * hd.distance;
    return hd.projection;
  }
  const bool complete = dynamic_cast<const CompletePayoff*>(payoffs_.get()) != nullptr;
  if ((entropy_ != nullptr || barrier_ != nullptr) && complete) {
    // Divergence projection onto the unit simplex for entropy-type potentials:
    // a softmax of the gradient. Any coordinate-constant barrier pressure in
    // the gradient cancels inside the softmax.
    const double b = entropy_ != nullptr ? entropy_->liquidity() : barrier_->liquidity();
    const Vec pi = softmax(conjugate_->gradient(x0) / b);
    if (divergence != nullptr) *divergence = bregman_divergence(*conjugate_, pi, x0);
    return pi;
  }
  throw UnsupportedRegionError(
      "market: no divergence-projection rule for this potential/payoff combination");
}

double Market::arbitrage_profit_bound(const Vec& q) const {
  if (hull_mode_ == HullMode::Equality) return 0.0;
  double div = 0.0;
  bregman_hull_projection(price(q), &div);
  return std::max(0.0, div);
}

ArbitrageOpportunity Market::arbitrage_bundle(const Vec& q) const {
  ArbitrageOpportunity op;
  if (hull_mode_ == HullMode::Equality) {
    op.bundle = Vec::Zero(region_->dimension());
    op.verified = true;
    return op;
  }
  const Vec x0 = price(q);
  double div = 0.0;
  const Vec pi = bregman_hull_projection(x0, &div);
  op.profit_bound = std::max(0.0, div);
  op.boundary_flag = !conjugate_->gradient_defined(pi);

  Vec target = pi;
  if (op.boundary_flag) {
    // Slide toward the hull's centroid until the potential turns differentiable;
    // convexity keeps the point inside the hull.
    const Vec centroid = mean_of(generators_);
    for (double delta = 1e-12; delta <= 1e-3 && !conjugate_->gradient_defined(target);
         delta *= 10.0) {
      target = (1.0 - delta) * pi + delta * centroid;
    }
    if (!conjugate_->gradient_defined(target))
      throw SolverError("market: no differentiable point near the hull projection");
  }
  op.bundle = conjugate_->gradient(target) - q;

  // Outcome-by-outcome check of the realized profit (raw costs: the check must
  // work even on markets that restrict tradable bundles).
  const double paid = cost(q + op.bundle) - cost(q);
  op.worst_profit = kInf;
  for (const Vec& g : generators_)
    op.worst_profit = std::min(op.worst_profit, g.dot(op.bundle) - paid);
  op.verified = op.worst_profit >= op.profit_bound - 1e-6;
  return op;
}

Vec Market::drain_step(const Vec& q, const Outcome& o, double eps) const {
  require_dimension(q, region_->dimension(), "quantity");
  if (!(eps > 0.0)) throw ConfigError("market: drain step size must be positive");
  return q + eps * (payoffs_->payoff(o) - price(q));
}

// ── Hull access ───────────────────────────────────────────────────────────────

const std::vector<Vec>& Market::hull_generators() const {
  if (generators_.empty())
    throw EnumerationError("market: outcome space not enumerable within the cap");
  return generators_;
}

const std::vector<Outcome>& Market::enumerated_outcomes() const {
  if (outcomes_.empty())
    throw EnumerationError("market: outcome space not enumerable within the cap");
  return outcomes_;
}

double Market::hull_diameter() const {
  const auto& gens = hull_generators();
  if (gens.size() <= 2000) {
    double best = 0.0;
    for (std::size_t i = 0; i < gens.size(); ++i)
      for (std::size_t j = i + 1; j < gens.size(); ++j)
        best = std::max(best, (gens[i] - gens[j]).norm());
    return best;
  }
  // Factor-2 bound via the centroid for very large vertex sets.
  const Vec centroid = mean_of(gens);
  double radius = 0.0;
  for (const Vec& g : gens) radius = std::max(radius, (g - centroid).norm());
  return 2.0 * radius;
}

// ── Factories ─────────────────────────────────────────────────────────────────

Market make_lmsr_market(int n, double b, SolverConfig solver) {
  if (n < 2) throw ConfigError("lmsr: need at least two outcomes");
  if (!(b > 0.0)) throw ConfigError("lmsr: liquidity must be positive");
  auto region = std::make_shared<SimplexRegion>(n);
  auto potential = std::make_shared<NegEntropy>(b, region);
  auto payoffs = std::make_shared<CompletePayoff>(n);
  return Market(std::move(region), std::move(potential), std::move(payoffs), HullMode::Equality,
                solver, false, "lmsr");
}

Market make_sphere_market(double lambda, SolverConfig solver) {
  if (!(lambda > 0.0)) throw ConfigError("sphere: curvature weight must be positive");
  auto region = std::make_shared<BallRegion>(3);
  auto potential = std::make_shared<QuadraticR>(lambda, Vec::Ones(3), region);
  auto payoffs = std::make_shared<SpherePayoff>();
  return Market(std::move(region), std::move(potential), std::move(payoffs), HullMode::Equality,
                solver, false, "sphere");
}

Market make_pair_betting_market(int n, double lambda, SolverConfig solver) {
  if (n < 3) throw ConfigError("pair betting: need at least three competitors");
  if (!(lambda > 0.0)) throw ConfigError("pair betting: curvature weight must be positive");
  auto region = std::make_shared<GomRegion>(n);
  const Vec center = Vec::Constant(GomRegion::pair_count(n), 0.5);
  auto potential = std::make_shared<QuadraticR>(lambda, center, region);
  auto payoffs = std::make_shared<PairBetPayoff>(n);
  return Market(std::move(region), std::move(potential), std::move(payoffs), HullMode::Relaxed,
                solver, false, "pairbet");
}

Market make_transaction_cost_market(int n, double b, double c, double gamma, SolverConfig solver) {
  if (n < 2) throw ConfigError("transaction-cost market: need at least two outcomes");
  if (!(b > 0.0)) throw ConfigError("transaction-cost market: liquidity must be positive");
  if (!(c > 0.0)) throw ConfigError("transaction-cost market: band width must be positive");
  if (gamma <= 0.0) gamma = BarrierEntropy::default_gamma(n, b, c);
  const double floor_needed = c * b * (std::log(static_cast<double>(n)) - 1.0);
  if (gamma < floor_needed - 1e-12)
    throw ConfigError(
        "transaction-cost market: barrier weight too small, the initial price would leave the "
        "unit-sum face");
  auto region = std::make_shared<BandRegion>(n, c);
  auto potential = std::make_shared<BarrierEntropy>(b, gamma, c, region);
  auto payoffs = std::make_shared<CompletePayoff>(n);
  Market m(std::move(region), std::move(potential), std::move(payoffs), HullMode::Relaxed, solver,
           true, "txncost");
  const Vec p0 = m.price(Vec::Zero(n));
  if (std::abs(p0.sum() - 1.0) > 1e-9)
    throw ConfigError("transaction-cost market: initial price sum is not 1");
  return m;
}

}  // namespace cfmm
