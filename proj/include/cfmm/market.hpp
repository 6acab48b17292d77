#ifndef CFMM_MARKET_HPP
#define CFMM_MARKET_HPP

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cfmm/conjugates.hpp"
#include "cfmm/payoffs.hpp"
#include "cfmm/regions.hpp"

namespace cfmm {

struct SolverConfig {
  double gap_tol = 1e-8;   // Fenchel duality-gap certificate for iterative solves
  double pg_tol = 1e-9;    // projected-gradient-norm stop
  int max_iters = 100000;  // iteration cap before SolverError
};

// Relationship between the price region and the convex hull of the payoff
// vectors.
//   Equality:  the region IS the hull (complete and spherical markets).
//   Relaxed:   the region strictly contains the hull but the initial price
//              lies in the hull, preserving the settlement loss guarantee.
//   Unchecked: no containment promise; construction skips the coverage
//              assertions. Meant for stress fixtures that deliberately leave
//              payoff vectors outside the region.
enum class HullMode { Equality, Relaxed, Unchecked };

struct Quote {
  Vec bundle;
  double cost = 0.0;    // C(q + r) - C(q), plus any sure cash leg
  double cash = 0.0;    // sure cash component folded out of ordered-pair legs
  double spread = 0.0;  // round-trip cost of r at this state
  Vec pre_price;
  Vec post_price;
};

struct ArbitrageOpportunity {
  Vec bundle;                 // trade moving the price back onto the hull
  double profit_bound = 0.0;  // guaranteed profit floor for the market maker
  bool boundary_flag = false; // hull projection hit a nondifferentiable face;
                              // the bundle uses a nudged interior projection
  bool verified = false;      // outcome-by-outcome check passed (enumerable)
  double worst_profit = 0.0;  // min over outcomes of realized profit
};

struct SolveResult {
  Vec x;
  double value = 0.0;
  double gap = std::numeric_limits<double>::infinity();      // Fenchel certificate
  double pg_norm = std::numeric_limits<double>::infinity();  // projected-gradient norm
  int iterations = 0;
};

// Market maker defined by a price region, a strictly convex potential on it,
// and a payoff structure. The cost of moving the outstanding quantity vector
// from q to q + r is C(q + r) - C(q) with
//
//   C(q) = sup_{x in region} x.q - R(x),
//
// whose gradient (the quoted price vector) always lies in the region. Closed
// forms are used where the potential/region pair admits one; everything else
// goes through a certified projected-gradient solve.
class Market {
 public:
  Market(std::shared_ptr<const Region> region, std::shared_ptr<const Conjugate> conjugate,
         std::shared_ptr<const PayoffStructure> payoffs, HullMode hull_mode,
         SolverConfig solver = {}, bool positive_bundles_only = false,
         std::string kind = "custom");

  // ── Pricing ───────────────────────────────────────────────────────────────
  double cost(const Vec& q) const;
  Vec price(const Vec& q) const;
  double trade_cost(const Vec& q, const Vec& r) const;
  double bid_ask_spread(const Vec& q, const Vec& r) const;
  Quote quote(const Vec& q, const Vec& r, double cash = 0.0) const;

  // Quantity vector whose price equals `target` (the potential's gradient
  // there); target must be a differentiability point.
  Vec quantity_for_price(const Vec& target) const;

  // ── Liquidity diagnostics ─────────────────────────────────────────────────
  // Depth: reciprocal of the largest eigenvalue of the cost Hessian. Throws
  // DepthUndefinedError at kinks (branch seams, boundary prices).
  double depth(const Vec& q) const;
  // Depth along a specific direction u: 1 / (u' D^2C(q) u) for unit u.
  double directional_depth(const Vec& q, const Vec& u) const;
  // Uniform lower bound on depth over all states.
  double worst_case_depth() const;

  // ── Loss accounting ───────────────────────────────────────────────────────
  // Bound on remaining worst-case loss at state q if outcome o occurs:
  // R(payoff(o)) - min_hull R - D_R(payoff(o), price(q)).
  double worst_loss_bound(const Vec& q, const Outcome& o) const;
  // State-independent bound: sup_outcomes R(payoff) - min_hull R.
  double apriori_loss_bound() const;
  double settle(const Vec& q, const Outcome& o) const;

  // ── Hull-exit arbitrage (relaxed regions) ─────────────────────────────────
  // Guaranteed profit floor min_{x in hull} D_R(x, price(q)) once the price
  // has left the hull; zero when the price is inside.
  double arbitrage_profit_bound(const Vec& q) const;
  // The trade that collects it: moves the quantity to grad R at the hull's
  // divergence projection of the current price.
  ArbitrageOpportunity arbitrage_bundle(const Vec& q) const;

  // One step of the adversarial money-pump available when some payoff vector
  // lies outside the region: q + eps * (payoff(o) - price(q)).
  Vec drain_step(const Vec& q, const Outcome& o, double eps) const;

  // ── Cross-check access (used by validators and tests) ────────────────────
  // Force the generic certified solve regardless of the active fast path.
  SolveResult solve_generic(const Vec& q) const;
  double cost_generic(const Vec& q) const { return solve_generic(q).value; }
  Vec price_generic(const Vec& q) const { return solve_generic(q).x; }
  // Fenchel/Frank-Wolfe gap of a candidate price x at quantity q.
  double duality_gap(const Vec& q, const Vec& x) const;

  double cost_at_zero() const { return cost0_; }
  double min_potential_over_hull() const;

  // Payoff vectors of all enumerated outcomes (enumerable markets).
  const std::vector<Vec>& hull_generators() const;
  const std::vector<Outcome>& enumerated_outcomes() const;
  double hull_diameter() const;

  // Payoff-coverage report from construction: every sampled payoff vector was
  // inside the region (always true for Equality/Relaxed; may be false for
  // Unchecked fixtures).
  bool payoffs_covered() const { return payoffs_covered_; }
  double max_payoff_region_distance() const { return max_payoff_distance_; }

  const Region& region() const { return *region_; }
  const Conjugate& conjugate() const { return *conjugate_; }
  const PayoffStructure& payoffs() const { return *payoffs_; }
  std::shared_ptr<const Region> region_ptr() const { return region_; }
  std::shared_ptr<const Conjugate> conjugate_ptr() const { return conjugate_; }
  std::shared_ptr<const PayoffStructure> payoffs_ptr() const { return payoffs_; }
  HullMode hull_mode() const { return hull_mode_; }
  bool positive_bundles_only() const { return positive_bundles_only_; }
  const SolverConfig& solver_config() const { return solver_; }
  const std::string& kind() const { return kind_; }
  // True when cost/price run through a closed-form (or semi-analytic) path
  // instead of the generic certified solve.
  bool has_closed_form() const { return path_ != CostPath::Generic; }

 private:
  enum class CostPath { LogSumExp, SphereBall, BarrierBand, QuadraticProjection, Generic };

  struct BandPoint {  // 1-D reduction state for the barrier/band fast path
    double s = 1.0;   // optimal price sum
    double lse = 0.0;
    Vec softmax;
    double face_derivative = 0.0;  // d/ds of the reduced objective at s = 1
  };

  void select_cost_path();
  void check_payoff_coverage();
  void check_initial_price_in_hull();
  Vec nudge_to_differentiable(Vec x) const;
  BandPoint solve_band(const Vec& q) const;
  double quadratic_cost(const Vec& q, Vec* price_out) const;
  Vec bregman_hull_projection(const Vec& x0, double* divergence) const;
  double depth_from_conjugate_hessian(const Vec& x) const;

  std::shared_ptr<const Region> region_;
  std::shared_ptr<const Conjugate> conjugate_;
  std::shared_ptr<const PayoffStructure> payoffs_;
  HullMode hull_mode_;
  SolverConfig solver_;
  bool positive_bundles_only_;
  std::string kind_;

  CostPath path_ = CostPath::Generic;
  // Non-owning views of conjugate_, set when the concrete type enables a fast path.
  const NegEntropy* entropy_ = nullptr;
  const QuadraticR* quad_ = nullptr;
  const BarrierEntropy* barrier_ = nullptr;
  double cost0_ = 0.0;
  bool payoffs_covered_ = true;
  double max_payoff_distance_ = 0.0;

  std::vector<Outcome> outcomes_;   // enumerable markets only
  std::vector<Vec> generators_;     // payoff vectors, same order
  mutable std::optional<double> min_hull_potential_;
  mutable std::optional<double> apriori_bound_;
};

// ── Factories for the built-in market families ──────────────────────────────

// Log-sum-exp market over n exhaustive outcomes with liquidity b.
Market make_lmsr_market(int n, double b, SolverConfig solver = {});

// Spherical scoring market: three securities paying u_i + 1 for a unit
// 3-vector outcome u, quadratic potential with weight lambda on the unit ball
// around the all-ones price.
Market make_sphere_market(double lambda, SolverConfig solver = {});

// Pair-betting market over n competitors on the reduced pairwise-ordering
// polytope, quadratic potential centered at the uniform point.
Market make_pair_betting_market(int n, double lambda = 1.0, SolverConfig solver = {});

// Complete market charging an implicit transaction fee: prices live in the
// band 1 <= sum <= 1 + c, entropy potential with a log barrier at the cap.
// gamma <= 0 selects the default barrier weight. Only nonnegative bundles may
// trade. The solver default is tightened because quoting runs through the
// semi-analytic band reduction, which is cheap.
Market make_transaction_cost_market(int n, double b, double c, double gamma = 0.0,
                                    SolverConfig solver = {});

}  // namespace cfmm

#endif  // CFMM_MARKET_HPP
