#ifndef CFMM_LEDGER_HPP
#define CFMM_LEDGER_HPP

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "cfmm/market.hpp"

namespace cfmm {

// Declarative market description, serializable to JSON. Built-in kinds carry
// scalar parameters; "custom" assembles a region, a potential, and a payoff
// structure from nested specs:
//
//   region:    {"type":"simplex","n":3} | {"type":"ball","dim":3}
//            | {"type":"gom","n":4} | {"type":"band","n":3,"c":0.5}
//            | {"type":"trimmed_simplex","n":2,"cuts":[{"a":[1,0],"b":0.8}]}
//   potential: {"type":"neg_entropy","b":1.0}
//            | {"type":"quadratic","lambda":1.0,"center":[...]}
//            | {"type":"barrier_entropy","b":1.0,"gamma":0.3,"c":0.5}
//   payoff:    {"type":"complete","n":3} | {"type":"sphere"} | {"type":"pair_bet","n":4}
//   hull_mode: "equality" | "relaxed" | "unchecked"
//   positive_bundles: bool
struct MarketConfig {
  std::string kind = "lmsr";  // lmsr | sphere | pairbet | txncost | custom
  int n = 2;                  // outcomes or competitors
  double b = 1.0;             // liquidity (entropy-type potentials)
  double lambda = 1.0;        // quadratic curvature weight
  double c = 0.0;             // band width (txncost)
  double gamma = 0.0;         // barrier weight; <= 0 selects the default rule
  SolverConfig solver;
  nlohmann::json custom;      // only used when kind == "custom"

  static MarketConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  Market build() const;
};

struct TradeRecord {
  int seq = 0;
  Vec bundle;
  double cash = 0.0;  // sure cash leg (folded ordered pairs)
  double cost = 0.0;  // total charged, cash included
  Vec post_price;
};

struct Settlement {
  nlohmann::json outcome;
  double payout = 0.0;
  double realized_loss = 0.0;           // payout - collected
  std::optional<double> apriori_bound;  // state-independent loss bound, when computable
  std::optional<double> state_bound;    // divergence-based bound at the settlement state
};

// Append-only trading session: quantity vector, collected cash, trade log, and
// an optional final settlement. Serialization is bit-faithful (doubles
// round-trip exactly through the JSON text) and the trade log replays
// deterministically.
class MarketSession {
 public:
  explicit MarketSession(MarketConfig config);

  const Market& market() const { return *market_; }
  const MarketConfig& config() const { return config_; }
  const Vec& quantity() const { return q_; }
  double collected() const { return collected_; }
  const std::vector<TradeRecord>& trades() const { return trades_; }
  bool settled() const { return settlement_.has_value(); }
  const std::optional<Settlement>& settlement() const { return settlement_; }

  Quote preview(const Vec& bundle, double cash = 0.0) const;
  const TradeRecord& apply_trade(const Vec& bundle, double cash = 0.0);

  // Ordered pair legs (i, j, shares) with 1-based competitor ids, each paying
  // when i finishes behind j. Legs quoted on the flip side of a reduced
  // coordinate fold into a short position plus a sure cash payment.
  // Pair-betting sessions only.
  Quote preview_pairs(const std::vector<std::tuple<int, int, double>>& legs) const;
  const TradeRecord& apply_pairs(const std::vector<std::tuple<int, int, double>>& legs);

  const Settlement& settle(const Outcome& o);

  nlohmann::json to_json() const;
  static MarketSession from_json(const nlohmann::json& j);

  // Rebuilds a fresh session from the config, re-applies the trade log, and
  // re-settles; true iff every recorded cost, post-trade price, the quantity,
  // the collected total, and the payout reproduce bit-for-bit.
  bool replay_matches() const;

 private:
  MarketConfig config_;
  std::optional<Market> market_;  // Market has no default constructor
  Vec q_;
  double collected_ = 0.0;
  std::vector<TradeRecord> trades_;
  std::optional<Settlement> settlement_;
};

// JSON <-> vector helpers shared by the session format and the CLI.
nlohmann::json vec_to_json(const Vec& v);
Vec vec_from_json(const nlohmann::json& a);

}  // namespace cfmm

#endif  // CFMM_LEDGER_HPP
