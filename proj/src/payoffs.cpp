#include "cfmm/payoffs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cfmm {

// ── Outcome ─────────────────────────────────────────────────────────────────

Outcome Outcome::index(int i) {
  if (i < 1) throw OutcomeError("outcome index must be >= 1");
  Outcome o;
  o.kind_ = Kind::Index;
  o.index_ = i;
  return o;
}

Outcome Outcome::direction(Vec u) {
  const double norm = u.norm();
  if (std::abs(norm - 1.0) > 1e-6) {
    throw OutcomeError("direction outcome must be within 1e-6 of unit norm, got |u| = " +
                       std::to_string(norm));
  }
  Outcome o;
  o.kind_ = Kind::Direction;
  o.direction_ = u / norm;
  return o;
}

Outcome Outcome::ranking(std::vector<int> pi) {
  const int n = static_cast<int>(pi.size());
  std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
  for (int p : pi) {
    if (p < 1 || p > n || seen[static_cast<std::size_t>(p)]) {
      throw OutcomeError("ranking outcome must be a permutation of 1..n");
    }
    seen[static_cast<std::size_t>(p)] = true;
  }
  Outcome o;
  o.kind_ = Kind::Ranking;
  o.ranking_ = std::move(pi);
  return o;
}

int Outcome::as_index() const {
  if (kind_ != Kind::Index) throw OutcomeError("outcome is not an index");
  return index_;
}

const Vec& Outcome::as_direction() const {
  if (kind_ != Kind::Direction) throw OutcomeError("outcome is not a direction");
  return direction_;
}

const std::vector<int>& Outcome::as_ranking() const {
  if (kind_ != Kind::Ranking) throw OutcomeError("outcome is not a ranking");
  return ranking_;
}

std::string Outcome::describe() const {
  switch (kind_) {
    case Kind::Index:
      return "index " + std::to_string(index_);
    case Kind::Direction: {
      std::string s = "direction [";
      for (Eigen::Index i = 0; i < direction_.size(); ++i) {
        if (i) s += ", ";
        s += std::to_string(direction_[i]);
      }
      return s + "]";
    }
    case Kind::Ranking: {
      std::string s = "ranking [";
      for (std::size_t i = 0; i < ranking_.size(); ++i) {
        if (i) s += ", ";
        s += std::to_string(ranking_[i]);
      }
      return s + "]";
    }
  }
  return "?";
}

// ── PayoffStructure ─────────────────────────────────────────────────────────

PayoffStructure::PayoffStructure(Eigen::Index dim) : dim_(dim) {
  if (dim < 1) throw ConfigError("payoff structure needs at least one security");
}

std::vector<Outcome> PayoffStructure::enumerate_outcomes(std::size_t cap) const {
  if (!enumerable()) {
    throw EnumerationError("outcome space of '" + name() + "' is not enumerable");
  }
  const std::size_t count = outcome_count();
  if (count > cap) {
    throw EnumerationError("outcome space of '" + name() + "' has " + std::to_string(count) +
                           " outcomes, above the cap of " + std::to_string(cap));
  }
  std::vector<Outcome> out;
  out.reserve(count);
  enumerate_impl(out);
  return out;
}

Vec PayoffStructure::expected_payoff(const Vec& beliefs) const {
  const std::vector<Outcome> outcomes = enumerate_outcomes();
  if (static_cast<std::size_t>(beliefs.size()) != outcomes.size()) {
    throw DimensionError("expected_payoff: beliefs must match the outcome count");
  }
  if (beliefs.minCoeff() < -1e-12 || std::abs(beliefs.sum() - 1.0) > 1e-9) {
    throw OutcomeError("expected_payoff: beliefs must be a probability vector");
  }
  Vec acc = Vec::Zero(dim_);
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    acc += beliefs[static_cast<Eigen::Index>(i)] * payoff(outcomes[i]);
  }
  return acc;
}

nlohmann::json PayoffStructure::outcome_json(const Outcome& o) {
  switch (o.kind()) {
    case Outcome::Kind::Index:
      return o.as_index();
    case Outcome::Kind::Direction: {
      nlohmann::json arr = nlohmann::json::array();
      for (Eigen::Index i = 0; i < o.as_direction().size(); ++i) arr.push_back(o.as_direction()[i]);
      return arr;
    }
    case Outcome::Kind::Ranking:
      return nlohmann::json(o.as_ranking());
  }
  throw OutcomeError("unknown outcome kind");
}

// ── CompletePayoff ──────────────────────────────────────────────────────────

CompletePayoff::CompletePayoff(int n) : PayoffStructure(n) {
  if (n < 2) throw ConfigError("complete payoff needs n >= 2 outcomes");
}

Vec CompletePayoff::payoff(const Outcome& o) const {
  const int i = o.as_index();
  if (i < 1 || i > dim_) {
    throw OutcomeError("complete payoff: outcome index " + std::to_string(i) +
                       " outside 1.." + std::to_string(dim_));
  }
  Vec v = Vec::Zero(dim_);
  v[i - 1] = 1.0;
  return v;
}

void CompletePayoff::enumerate_impl(std::vector<Outcome>& out) const {
  for (int i = 1; i <= dim_; ++i) out.push_back(Outcome::index(i));
}

Outcome CompletePayoff::sample_outcome(std::mt19937_64& rng) const {
  std::uniform_int_distribution<int> dist(1, static_cast<int>(dim_));
  return Outcome::index(dist(rng));
}

Outcome CompletePayoff::parse_outcome(const nlohmann::json& j) const {
  if (!j.is_number_integer()) {
    throw OutcomeError("complete-market outcome must be an integer security index");
  }
  return Outcome::index(j.get<int>());
}

// ── SpherePayoff ────────────────────────────────────────────────────────────

SpherePayoff::SpherePayoff() : PayoffStructure(3) {}

Vec SpherePayoff::payoff(const Outcome& o) const {
  return o.as_direction() + Vec::Ones(3);
}

std::size_t SpherePayoff::outcome_count() const {
  throw EnumerationError("sphere outcomes form a continuum");
}

void SpherePayoff::enumerate_impl(std::vector<Outcome>&) const {
  throw EnumerationError("sphere outcomes form a continuum");
}

Outcome SpherePayoff::sample_outcome(std::mt19937_64& rng) const {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec u(3);
  do {
    for (int i = 0; i < 3; ++i) u[i] = gauss(rng);
  } while (u.norm() < 1e-9);
  u.normalize();
  return Outcome::direction(u);
}

Outcome SpherePayoff::parse_outcome(const nlohmann::json& j) const {
  if (!j.is_array() || j.size() != 3) {
    throw OutcomeError("sphere outcome must be a JSON array of 3 reals");
  }
  Vec u(3);
  for (int i = 0; i < 3; ++i) {
    if (!j[static_cast<std::size_t>(i)].is_number()) {
      throw OutcomeError("sphere outcome must be a JSON array of 3 reals");
    }
    u[i] = j[static_cast<std::size_t>(i)].get<double>();
  }
  return Outcome::direction(u);  // validates the unit-norm tolerance
}

// ── PairBetPayoff ───────────────────────────────────────────────────────────

PairBetPayoff::PairBetPayoff(int n)
    : PayoffStructure(Eigen::Index(n) * (n - 1) / 2), n_(n) {
  if (n < 2) throw ConfigError("pair betting needs n >= 2 competitors");
  pairs_.reserve(static_cast<std::size_t>(dim_));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) pairs_.emplace_back(i, j);
  }
}

Eigen::Index PairBetPayoff::pair_index(int i, int j) const {
  return Eigen::Index(i) * (2 * n_ - i - 1) / 2 + (j - i - 1);
}

Vec PairBetPayoff::payoff(const Outcome& o) const {
  const std::vector<int>& pi = o.as_ranking();
  if (static_cast<int>(pi.size()) != n_) {
    throw OutcomeError("pair-bet outcome must rank exactly " + std::to_string(n_) +
                       " competitors");
  }
  Vec v(dim_);
  for (std::size_t t = 0; t < pairs_.size(); ++t) {
    const auto [i, j] = pairs_[t];
    v[static_cast<Eigen::Index>(t)] =
        pi[static_cast<std::size_t>(i)] > pi[static_cast<std::size_t>(j)] ? 1.0 : 0.0;
  }
  return v;
}

std::size_t PairBetPayoff::outcome_count() const {
  std::size_t f = 1;
  for (int k = 2; k <= n_; ++k) f *= static_cast<std::size_t>(k);
  return f;
}

void PairBetPayoff::enumerate_impl(std::vector<Outcome>& out) const {
  std::vector<int> pi(static_cast<std::size_t>(n_));
  std::iota(pi.begin(), pi.end(), 1);
  do {
    out.push_back(Outcome::ranking(pi));
  } while (std::next_permutation(pi.begin(), pi.end()));
}

Outcome PairBetPayoff::sample_outcome(std::mt19937_64& rng) const {
  std::vector<int> pi(static_cast<std::size_t>(n_));
  std::iota(pi.begin(), pi.end(), 1);
  std::shuffle(pi.begin(), pi.end(), rng);
  return Outcome::ranking(pi);
}

Outcome PairBetPayoff::parse_outcome(const nlohmann::json& j) const {
  if (!j.is_array() || static_cast<int>(j.size()) != n_) {
    throw OutcomeError("pair-bet outcome must be a permutation array of length " +
                       std::to_string(n_));
  }
  std::vector<int> pi;
  pi.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_number_integer()) {
      throw OutcomeError("pair-bet outcome must contain integers 1..n");
    }
    pi.push_back(e.get<int>());
  }
  return Outcome::ranking(std::move(pi));
}

PairBetPayoff::FoldedBundle PairBetPayoff::fold_ordered_legs(
    const std::vector<std::tuple<int, int, double>>& legs) const {
  FoldedBundle folded;
  folded.reduced = Vec::Zero(dim_);
  for (const auto& [i1, j1, shares] : legs) {
    const int i = i1 - 1;
    const int j = j1 - 1;
    if (i < 0 || j < 0 || i >= n_ || j >= n_ || i == j) {
      throw OutcomeError("pair-bet leg must name two distinct competitors in 1.." +
                         std::to_string(n_));
    }
    if (!std::isfinite(shares)) throw OutcomeError("pair-bet leg has a non-finite share count");
    if (i < j) {
      folded.reduced[pair_index(i, j)] += shares;
    } else {
      // (j1, i1) pays 1 - x_{ij}: short the stored security, bank the cash leg.
      folded.reduced[pair_index(j, i)] -= shares;
      folded.cash += shares;
    }
  }
  return folded;
}

}  // namespace cfmm
