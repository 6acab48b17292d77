#ifndef CFMM_VERIFY_HPP
#define CFMM_VERIFY_HPP

#include <string>
#include <vector>

#include "cfmm/market.hpp"

namespace cfmm {

struct CheckResult {
  std::string name;
  long cases = 0;         // randomized cases exercised
  double worst = 0.0;     // worst residual / violation observed
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

struct VerifyOptions {
  int cases = 120;
  unsigned long long seed = 20260819ULL;
  bool thorough = false;  // 5x the cases, finer grids
};

// Outcome attaining the trader's worst payout for bundle r at state q.
// No-arbitrage holds iff the trade's cost is at least that worst payout
// (otherwise the bundle profits under every outcome).
struct WitnessReport {
  bool ok = true;
  bool available = false;  // false when the outcome space has no usable witness rule
  Outcome witness = Outcome::index(1);
  double trade_cost = 0.0;
  double worst_payout = 0.0;
  double slack = 0.0;  // trade_cost - worst_payout
};
WitnessReport no_arbitrage_witness(const Market& m, const Vec& q, const Vec& r,
                                   double tol = 1e-6);

// Randomized self-check battery: projection geometry, potential calculus,
// cost-surface axioms (telescoping, convexity, monotone marginal cost),
// price containment, no-arbitrage witnesses, closed-form-vs-certified-solve
// agreement, depth bounds, and grid lower bounds. Deterministic per seed.
std::vector<CheckResult> run_verification(const Market& m, const VerifyOptions& opt = {});

bool all_passed(const std::vector<CheckResult>& checks);
std::string format_report(const std::vector<CheckResult>& checks);

}  // namespace cfmm

#endif  // CFMM_VERIFY_HPP
