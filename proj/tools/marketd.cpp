// marketd: command-line front end for duality-based market-maker sessions.
//
// Exit codes: 0 success, 1 configuration/user error, 2 numerical failure,
// 3 verification failure.

#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cfmm/ledger.hpp"
#include "cfmm/verify.hpp"

using nlohmann::json;

namespace {

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw cfmm::ConfigError("cannot open " + path);
  try {
    json j;
    in >> j;
    return j;
  } catch (const json::parse_error& e) {
    throw cfmm::ConfigError("invalid JSON in " + path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw cfmm::ConfigError("cannot write " + path);
  out << j.dump(2) << '\n';
}

json parse_json_arg(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw cfmm::ConfigError(std::string("invalid ") + what + ": " + e.what());
  }
}

std::vector<std::tuple<int, int, double>> parse_legs(const std::string& text) {
  const json j = parse_json_arg(text, "--pairs value");
  if (!j.is_array()) throw cfmm::ConfigError("--pairs wants [[i,j,shares],...]");
  std::vector<std::tuple<int, int, double>> legs;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 3)
      throw cfmm::ConfigError("--pairs wants [[i,j,shares],...]");
    legs.emplace_back(e[0].get<int>(), e[1].get<int>(), e[2].get<double>());
  }
  return legs;
}

json quote_json(const cfmm::Quote& q) {
  return json{{"cost", q.cost},
              {"cash", q.cash},
              {"spread", q.spread},
              {"pre_price", cfmm::vec_to_json(q.pre_price)},
              {"post_price", cfmm::vec_to_json(q.post_price)}};
}

json record_json(const cfmm::TradeRecord& tr) {
  return json{{"seq", tr.seq},
              {"bundle", cfmm::vec_to_json(tr.bundle)},
              {"cash", tr.cash},
              {"cost", tr.cost},
              {"post_price", cfmm::vec_to_json(tr.post_price)}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"duality-based market maker: quotes, trades, settlement, self-checks"};
  app.require_subcommand(1);

  std::string config_path, session_path, bundle_text, pairs_text, outcome_text, direction_text;
  double cash = 0.0, eps = 0.01;
  int steps = 100, cases = 120;
  unsigned long long seed = 20260819ULL;
  bool force = false, thorough = false;
  int rc = 0;

  auto bundle_or_pairs = [&](cfmm::MarketSession& s) -> cfmm::Quote {
    if (!bundle_text.empty() && !pairs_text.empty())
      throw cfmm::ConfigError("use either --bundle or --pairs, not both");
    if (!bundle_text.empty())
      return s.preview(cfmm::vec_from_json(parse_json_arg(bundle_text, "--bundle value")), cash);
    if (!pairs_text.empty()) return s.preview_pairs(parse_legs(pairs_text));
    throw cfmm::ConfigError("a bundle is required: pass --bundle or --pairs");
  };

  // ── init ──
  auto* init = app.add_subcommand("init", "create a session file from a market config");
  init->add_option("--config", config_path, "market config JSON file")->required();
  init->add_option("--session", session_path, "session file to create")->required();
  init->add_flag("--force", force, "overwrite an existing session file");
  init->callback([&] {
    if (!force && std::ifstream(session_path).good())
      throw cfmm::ConfigError("session file exists; pass --force to overwrite");
    cfmm::MarketSession s(cfmm::MarketConfig::from_json(read_json_file(config_path)));
    write_json_file(session_path, s.to_json());
    json out{{"kind", s.market().kind()},
             {"dimension", s.market().region().dimension()},
             {"price", cfmm::vec_to_json(s.market().price(s.quantity()))}};
    std::cout << out.dump(2) << "\n";
  });

  // ── quote ──
  auto* quote = app.add_subcommand("quote", "price a bundle without trading");
  quote->add_option("--session", session_path)->required();
  quote->add_option("--bundle", bundle_text, "bundle as a JSON array");
  quote->add_option("--pairs", pairs_text, "ordered pair legs [[i,j,shares],...]");
  quote->add_option("--cash", cash, "sure cash leg added to the cost");
  quote->callback([&] {
    cfmm::MarketSession s = cfmm::MarketSession::from_json(read_json_file(session_path));
    std::cout << quote_json(bundle_or_pairs(s)).dump(2) << "\n";
  });

  // ── trade ──
  auto* trade = app.add_subcommand("trade", "apply a trade and update the session file");
  trade->add_option("--session", session_path)->required();
  trade->add_option("--bundle", bundle_text, "bundle as a JSON array");
  trade->add_option("--pairs", pairs_text, "ordered pair legs [[i,j,shares],...]");
  trade->add_option("--cash", cash, "sure cash leg added to the cost");
  trade->callback([&] {
    cfmm::MarketSession s = cfmm::MarketSession::from_json(read_json_file(session_path));
    const cfmm::TradeRecord* tr = nullptr;
    if (!bundle_text.empty() && !pairs_text.empty())
      throw cfmm::ConfigError("use either --bundle or --pairs, not both");
    if (!bundle_text.empty()) {
      tr = &s.apply_trade(cfmm::vec_from_json(parse_json_arg(bundle_text, "--bundle value")),
                          cash);
    } else if (!pairs_text.empty()) {
      tr = &s.apply_pairs(parse_legs(pairs_text));
    } else {
      throw cfmm::ConfigError("a bundle is required: pass --bundle or --pairs");
    }
    write_json_file(session_path, s.to_json());
    std::cout << record_json(*tr).dump(2) << "\n";
  });

  // ── price ──
  auto* price = app.add_subcommand("price", "current price vector and session totals");
  price->add_option("--session", session_path)->required();
  price->callback([&] {
    cfmm::MarketSession s = cfmm::MarketSession::from_json(read_json_file(session_path));
    const cfmm::Vec p = s.market().price(s.quantity());
    json out{{"price", cfmm::vec_to_json(p)},
             {"price_sum", p.sum()},
             {"quantity", cfmm::vec_to_json(s.quantity())},
             {"collected", s.collected()},
             {"trades", s.trades().size()}};
    std::cout << out.dump(2) << "\n";
  });

  // ── spread ──
  auto* spread = app.add_subcommand("spread", "round-trip cost of a bundle");
  spread->add_option("--session", session_path)->required();
  spread->add_option("--bundle", bundle_text)->required();
  spread->callback([&] {
    cfmm::MarketSession s = cfmm::MarketSession::from_json(read_json_file(session_path));
    const cfmm::Vec r = cfmm::vec_from_json(parse_json_arg(bundle_text, "--bundle value"));
    json out{{"spread", s.market().bid_ask_spread(s.quantity(), r)}};
    std::cout << out.dump(2) << "\n";
  });

  // ── depth ──
  auto* depth = app.add_subcommand("depth", "local depth (optionally along a direction)");
  depth->add_option("--session", session_path)->required();
  depth->add_option("--direction", direction_text, "direction as a JSON array");
  depth->callback([&] {
    cfmm::MarketSession s = cfmm::MarketSession::from_json(read_json_file(session_path));
    json out{{"worst_case_depth", s.market().worst_case_depth()}};
    const char* key = direction_text.empty() ? "depth" : "directional_depth";
    try {
      if (direction_text.empty()) {
        out[key] = s.market().depth(s.quantity());
      } else {
        const cfmm::Vec u =
            cfmm::vec_from_json(parse_json_arg(direction_text, "--direction value"));
        out[key] = s.market().directional_depth(s.quantity(), u);
      }
    } catch (const cfmm::DepthUndefinedError& e) {
      // A kinked or boundary state has no local depth; the worst-case figure
      // is still the honest answer.
      out[key] = nullptr;
      out["note"] = e.what();
    }
    std::cout << out.dump(2) << "\n";
  });

  // ── settle ──
  auto* settle = app.add_subcommand("settle", "settle the session on an outcome");
  settle->add_option("--session", session_path)->required();
  settle->add_option("--outcome", outcome_text, "outcome as JSON (index, direction, or ranking)")
      ->required();
  settle->callback([&] {
    cfmm::MarketSession s = cfmm::MarketSession::from_json(read_json_file(session_path));
    const cfmm::Outcome o =
        s.market().payoffs().parse_outcome(parse_json_arg(outcome_text, "--outcome value"));
    const cfmm::Settlement& st = s.settle(o);
    write_json_file(session_path, s.to_json());
    json out{{"outcome", st.outcome},
             {"payout", st.payout},
             {"collected", s.collected()},
             {"realized_loss", st.realized_loss}};
    if (st.apriori_bound) out["apriori_bound"] = *st.apriori_bound;
    if (st.state_bound) out["state_bound"] = *st.state_bound;
    std::cout << out.dump(2) << "\n";
  });

  // ── report ──
  auto* report = app.add_subcommand("report", "session summary and integrity check");
  report->add_option("--session", session_path)->required();
  report->callback([&] {
    cfmm::MarketSession s = cfmm::MarketSession::from_json(read_json_file(session_path));
    const cfmm::Vec p = s.market().price(s.quantity());
    json out{{"kind", s.market().kind()},
             {"dimension", s.market().region().dimension()},
             {"quantity", cfmm::vec_to_json(s.quantity())},
             {"price", cfmm::vec_to_json(p)},
             {"price_sum", p.sum()},
             {"collected", s.collected()},
             {"trades", s.trades().size()},
             {"settled", s.settled()},
             {"replay_matches", s.replay_matches()}};
    try {
      out["apriori_loss_bound"] = s.market().apriori_loss_bound();
    } catch (const std::exception&) {
    }
    try {
      out["arbitrage_profit_bound"] = s.market().arbitrage_profit_bound(s.quantity());
    } catch (const std::exception&) {
    }
    std::cout << out.dump(2) << "\n";
  });

  // ── verify ──
  auto* verify = app.add_subcommand("verify", "randomized self-check battery");
  verify->add_option("--session", session_path)->required();
  verify->add_option("--cases", cases, "randomized cases per check");
  verify->add_option("--seed", seed, "RNG seed");
  verify->add_flag("--thorough", thorough, "5x the cases, finer grids");
  verify->callback([&] {
    cfmm::MarketSession s = cfmm::MarketSession::from_json(read_json_file(session_path));
    cfmm::VerifyOptions opt;
    opt.cases = cases;
    opt.seed = seed;
    opt.thorough = thorough;
    const auto checks = cfmm::run_verification(s.market(), opt);
    std::cout << cfmm::format_report(checks);
    if (!cfmm::all_passed(checks)) rc = 3;
  });

  // ── drain ──
  auto* drain = app.add_subcommand(
      "drain", "simulate the adversarial money pump toward an outcome (no session mutation)");
  drain->add_option("--session", session_path)->required();
  drain->add_option("--outcome", outcome_text)->required();
  drain->add_option("--eps", eps, "step size");
  drain->add_option("--steps", steps, "number of steps");
  drain->callback([&] {
    cfmm::MarketSession s = cfmm::MarketSession::from_json(read_json_file(session_path));
    const cfmm::Market& m = s.market();
    const cfmm::Outcome o =
        m.payoffs().parse_outcome(parse_json_arg(outcome_text, "--outcome value"));
    const cfmm::Vec rho = m.payoffs().payoff(o);
    cfmm::Vec q = s.quantity();
    const double base = m.cost(q);
    double prev = rho.dot(q) - 0.0;
    json trail = json::array();
    for (int t = 1; t <= steps; ++t) {
      q = m.drain_step(q, o, eps);
      const double loss = rho.dot(q) - (m.cost(q) - base);
      trail.push_back(json{{"step", t}, {"adversary_gain", loss - prev}, {"maker_loss", loss}});
      prev = loss;
    }
    json out{{"outcome", cfmm::PayoffStructure::outcome_json(o)},
             {"eps", eps},
             {"steps", steps},
             {"final_maker_loss", prev},
             {"payoffs_covered", m.payoffs_covered()},
             {"trail_tail", json(std::vector<json>(
                                trail.end() - std::min<std::ptrdiff_t>(5, trail.size()),
                                trail.end()))}};
    std::cout << out.dump(2) << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const cfmm::TradeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const cfmm::SolverError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const cfmm::EnumerationError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const cfmm::UnsupportedRegionError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const cfmm::DepthUndefinedError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const cfmm::GradientUndefinedError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
