#include "cfmm/ledger.hpp"

#include <utility>

namespace cfmm {

using nlohmann::json;

json vec_to_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vec vec_from_json(const json& a) {
  if (!a.is_array()) throw ConfigError("ledger: expected a JSON array of numbers");
  Vec v(static_cast<Eigen::Index>(a.size()));
  Eigen::Index i = 0;
  for (const auto& e : a) {
    if (!e.is_number()) throw ConfigError("ledger: expected a JSON array of numbers");
    v[i++] = e.get<double>();
  }
  return v;
}

namespace {

SolverConfig solver_from_json(const json& j) {
  SolverConfig s;
  s.gap_tol = j.value("gap_tol", s.gap_tol);
  s.pg_tol = j.value("pg_tol", s.pg_tol);
  s.max_iters = j.value("max_iters", s.max_iters);
  return s;
}

json solver_to_json(const SolverConfig& s) {
  return json{{"gap_tol", s.gap_tol}, {"pg_tol", s.pg_tol}, {"max_iters", s.max_iters}};
}

std::shared_ptr<const Region> region_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "simplex") return std::make_shared<SimplexRegion>(j.at("n").get<int>());
  if (type == "ball") return std::make_shared<BallRegion>(j.at("dim").get<int>());
  if (type == "gom") return std::make_shared<GomRegion>(j.at("n").get<int>());
  if (type == "band")
    return std::make_shared<BandRegion>(j.at("n").get<int>(), j.at("c").get<double>());
  if (type == "trimmed_simplex") {
    std::vector<Halfspace> cuts;
    for (const auto& cj : j.at("cuts")) {
      Halfspace h;
      h.a = vec_from_json(cj.at("a"));
      h.b = cj.at("b").get<double>();
      cuts.push_back(std::move(h));
    }
    return std::make_shared<HalfspaceTrimmedSimplex>(j.at("n").get<int>(), std::move(cuts));
  }
  throw ConfigError("ledger: unknown region type: " + type);
}

std::shared_ptr<const Conjugate> potential_from_json(const json& j,
                                                     std::shared_ptr<const Region> region) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "neg_entropy")
    return std::make_shared<NegEntropy>(j.at("b").get<double>(), std::move(region));
  if (type == "quadratic") {
    Vec center = j.contains("center") ? vec_from_json(j.at("center"))
                                      : Vec(Vec::Zero(region->dimension()));
    return std::make_shared<QuadraticR>(j.at("lambda").get<double>(), std::move(center),
                                        std::move(region));
  }
  if (type == "barrier_entropy")
    return std::make_shared<BarrierEntropy>(j.at("b").get<double>(), j.at("gamma").get<double>(),
                                            j.at("c").get<double>(), std::move(region));
  throw ConfigError("ledger: unknown potential type: " + type);
}

std::shared_ptr<const PayoffStructure> payoff_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "complete") return std::make_shared<CompletePayoff>(j.at("n").get<int>());
  if (type == "sphere") return std::make_shared<SpherePayoff>();
  if (type == "pair_bet") return std::make_shared<PairBetPayoff>(j.at("n").get<int>());
  throw ConfigError("ledger: unknown payoff type: " + type);
}

HullMode hull_mode_from_string(const std::string& s) {
  if (s == "equality") return HullMode::Equality;
  if (s == "relaxed") return HullMode::Relaxed;
  if (s == "unchecked") return HullMode::Unchecked;
  throw ConfigError("ledger: unknown hull mode: " + s);
}

Market build_custom(const json& spec, const SolverConfig& solver) {
  if (!spec.is_object()) throw ConfigError("ledger: custom market needs a spec object");
  auto region = region_from_json(spec.at("region"));
  auto potential = potential_from_json(spec.at("potential"), region);
  auto payoffs = payoff_from_json(spec.at("payoff"));
  const HullMode mode = hull_mode_from_string(spec.value("hull_mode", std::string("relaxed")));
  const bool positive = spec.value("positive_bundles", false);
  return Market(std::move(region), std::move(potential), std::move(payoffs), mode, solver,
                positive, "custom");
}

}  // namespace

MarketConfig MarketConfig::from_json(const json& j) {
  MarketConfig cfg;
  cfg.kind = j.at("kind").get<std::string>();
  cfg.n = j.value("n", cfg.n);
  cfg.b = j.value("b", cfg.b);
  cfg.lambda = j.value("lambda", cfg.lambda);
  cfg.c = j.value("c", cfg.c);
  cfg.gamma = j.value("gamma", cfg.gamma);
  if (j.contains("solver")) cfg.solver = solver_from_json(j.at("solver"));
  if (j.contains("custom")) cfg.custom = j.at("custom");
  return cfg;
}

json MarketConfig::to_json() const {
  json j{{"kind", kind},     {"n", n},         {"b", b},
         {"lambda", lambda}, {"c", c},         {"gamma", gamma},
         {"solver", solver_to_json(solver)}};
  if (kind == "custom") j["custom"] = custom;
  return j;
}

Market MarketConfig::build() const {
  if (kind == "lmsr") return make_lmsr_market(n, b, solver);
  if (kind == "sphere") return make_sphere_market(lambda, solver);
  if (kind == "pairbet") return make_pair_betting_market(n, lambda, solver);
  if (kind == "txncost") return make_transaction_cost_market(n, b, c, gamma, solver);
  if (kind == "custom") return build_custom(custom, solver);
  throw ConfigError("ledger: unknown market kind: " + kind);
}

MarketSession::MarketSession(MarketConfig config) : config_(std::move(config)) {
  market_.emplace(config_.build());
  q_ = Vec::Zero(market_->region().dimension());
}

Quote MarketSession::preview(const Vec& bundle, double cash) const {
  return market_->quote(q_, bundle, cash);
}

const TradeRecord& MarketSession::apply_trade(const Vec& bundle, double cash) {
  if (settled()) throw TradeError("ledger: session already settled");
  TradeRecord tr;
  tr.seq = static_cast<int>(trades_.size()) + 1;
  tr.bundle = bundle;
  tr.cash = cash;
  tr.cost = market_->trade_cost(q_, bundle) + cash;
  q_ += bundle;
  tr.post_price = market_->price(q_);
  collected_ += tr.cost;
  trades_.push_back(std::move(tr));
  return trades_.back();
}

Quote MarketSession::preview_pairs(const std::vector<std::tuple<int, int, double>>& legs) const {
  const auto* pb = dynamic_cast<const PairBetPayoff*>(&market_->payoffs());
  if (pb == nullptr) throw ConfigError("ledger: pair legs apply only to pair-betting sessions");
  const auto folded = pb->fold_ordered_legs(legs);
  return preview(folded.reduced, folded.cash);
}

const TradeRecord& MarketSession::apply_pairs(
    const std::vector<std::tuple<int, int, double>>& legs) {
  const auto* pb = dynamic_cast<const PairBetPayoff*>(&market_->payoffs());
  if (pb == nullptr) throw ConfigError("ledger: pair legs apply only to pair-betting sessions");
  const auto folded = pb->fold_ordered_legs(legs);
  return apply_trade(folded.reduced, folded.cash);
}

const Settlement& MarketSession::settle(const Outcome& o) {
  if (settled()) throw TradeError("ledger: session already settled");
  Settlement s;
  s.outcome = PayoffStructure::outcome_json(o);
  s.payout = market_->settle(q_, o);
  s.realized_loss = s.payout - collected_;
  try {
    s.state_bound = market_->worst_loss_bound(q_, o);
  } catch (const std::exception&) {
    // unavailable for uncovered fixtures or boundary prices
  }
  try {
    s.apriori_bound = market_->apriori_loss_bound();
  } catch (const std::exception&) {
  }
  settlement_ = std::move(s);
  return *settlement_;
}

json MarketSession::to_json() const {
  json j;
  j["format"] = "cfmm-session/1";
  j["config"] = config_.to_json();
  j["quantity"] = vec_to_json(q_);
  j["collected"] = collected_;
  json ts = json::array();
  for (const auto& tr : trades_) {
    ts.push_back(json{{"seq", tr.seq},
                      {"bundle", vec_to_json(tr.bundle)},
                      {"cash", tr.cash},
                      {"cost", tr.cost},
                      {"post_price", vec_to_json(tr.post_price)}});
  }
  j["trades"] = std::move(ts);
  if (settlement_) {
    json s{{"outcome", settlement_->outcome},
           {"payout", settlement_->payout},
           {"realized_loss", settlement_->realized_loss}};
    if (settlement_->apriori_bound) s["apriori_bound"] = *settlement_->apriori_bound;
    if (settlement_->state_bound) s["state_bound"] = *settlement_->state_bound;
    j["settlement"] = std::move(s);
  } else {
    j["settlement"] = nullptr;
  }
  return j;
}

MarketSession MarketSession::from_json(const json& j) {
  if (j.value("format", std::string()) != "cfmm-session/1")
    throw ConfigError("ledger: unrecognized session format");
  MarketSession s{MarketConfig::from_json(j.at("config"))};
  Vec q = vec_from_json(j.at("quantity"));
  require_dimension(q, s.market_->region().dimension(), "session quantity");
  s.q_ = std::move(q);
  s.collected_ = j.at("collected").get<double>();
  for (const auto& tj : j.at("trades")) {
    TradeRecord tr;
    tr.seq = tj.at("seq").get<int>();
    tr.bundle = vec_from_json(tj.at("bundle"));
    tr.cash = tj.value("cash", 0.0);
    tr.cost = tj.at("cost").get<double>();
    tr.post_price = vec_from_json(tj.at("post_price"));
    s.trades_.push_back(std::move(tr));
  }
  if (j.contains("settlement") && !j.at("settlement").is_null()) {
    const json& sj = j.at("settlement");
    Settlement st;
    st.outcome = sj.at("outcome");
    st.payout = sj.at("payout").get<double>();
    st.realized_loss = sj.at("realized_loss").get<double>();
    if (sj.contains("apriori_bound")) st.apriori_bound = sj.at("apriori_bound").get<double>();
    if (sj.contains("state_bound")) st.state_bound = sj.at("state_bound").get<double>();
    s.settlement_ = std::move(st);
  }
  return s;
}

bool MarketSession::replay_matches() const {
  MarketSession fresh(config_);
  for (const auto& tr : trades_) {
    const TradeRecord& re = fresh.apply_trade(tr.bundle, tr.cash);
    if (re.cost != tr.cost) return false;
    if (re.post_price.size() != tr.post_price.size()) return false;
    if ((re.post_price.array() != tr.post_price.array()).any()) return false;
  }
  if (fresh.collected_ != collected_) return false;
  if (fresh.q_.size() != q_.size()) return false;
  if ((fresh.q_.array() != q_.array()).any()) return false;
  if (settlement_) {
    const Outcome o = market_->payoffs().parse_outcome(settlement_->outcome);
    const Settlement& st = fresh.settle(o);
    if (st.payout != settlement_->payout) return false;
  }
  return true;
}

}  // namespace cfmm
