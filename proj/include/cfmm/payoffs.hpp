#ifndef CFMM_PAYOFFS_HPP
#define CFMM_PAYOFFS_HPP

#include <cstddef>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "cfmm/common.hpp"

namespace cfmm {

// A resolved state of the world. Exactly one alternative is populated:
//   - a security index (1-based) for complete markets,
//   - a unit direction for the spherical scoring market,
//   - a finish-position ranking (1-based positions) for pair betting.
class Outcome {
 public:
  enum class Kind { Index, Direction, Ranking };

  static Outcome index(int i);
  // Accepts vectors within 1e-6 of unit norm and stores the normalization.
  static Outcome direction(Vec u);
  // pi[k] is the finish position (1..n) of competitor k+1.
  static Outcome ranking(std::vector<int> pi);

  Kind kind() const { return kind_; }
  int as_index() const;
  const Vec& as_direction() const;
  const std::vector<int>& as_ranking() const;

  std::string describe() const;

 private:
  Outcome() = default;

  Kind kind_ = Kind::Index;
  int index_ = 0;
  Vec direction_;
  std::vector<int> ranking_;
};

// Maps outcomes to the payout vector of the traded securities. Coordinates
// align with the price region the market uses.
class PayoffStructure {
 public:
  // Enumeration refuses to materialize more outcomes than this.
  static constexpr std::size_t kEnumerationCap = 50000;

  virtual ~PayoffStructure() = default;

  virtual std::string name() const = 0;
  Eigen::Index dimension() const { return dim_; }

  // Payout per unit of each security under outcome `o`. Entries are
  // nonnegative and bounded.
  virtual Vec payoff(const Outcome& o) const = 0;

  virtual bool enumerable() const = 0;
  // Number of distinct outcomes; meaningful only when enumerable().
  virtual std::size_t outcome_count() const = 0;

  // All outcomes, in a stable documented order (index order / lexicographic
  // rankings). Throws EnumerationError when not enumerable or above `cap`.
  std::vector<Outcome> enumerate_outcomes(std::size_t cap = kEnumerationCap) const;

  virtual Outcome sample_outcome(std::mt19937_64& rng) const = 0;

  // Expected payout vector under a belief distribution given in enumeration
  // order. The beliefs must be a probability vector.
  Vec expected_payoff(const Vec& beliefs) const;

  // Parse / render the outcome wire encoding (integer index, 3-vector, or
  // permutation array).
  virtual Outcome parse_outcome(const nlohmann::json& j) const = 0;
  static nlohmann::json outcome_json(const Outcome& o);

 protected:
  explicit PayoffStructure(Eigen::Index dim);

  virtual void enumerate_impl(std::vector<Outcome>& out) const = 0;

  Eigen::Index dim_;
};

// ── Complete market: security i pays 1 iff outcome i occurs ────────────────

class CompletePayoff final : public PayoffStructure {
 public:
  explicit CompletePayoff(int n);

  std::string name() const override { return "complete"; }
  Vec payoff(const Outcome& o) const override;
  bool enumerable() const override { return true; }
  std::size_t outcome_count() const override { return static_cast<std::size_t>(dim_); }
  Outcome sample_outcome(std::mt19937_64& rng) const override;
  Outcome parse_outcome(const nlohmann::json& j) const override;

 protected:
  void enumerate_impl(std::vector<Outcome>& out) const override;
};

// ── Spherical scoring market: security i pays u_i + 1 for a unit vector u ──

class SpherePayoff final : public PayoffStructure {
 public:
  SpherePayoff();

  std::string name() const override { return "sphere"; }
  Vec payoff(const Outcome& o) const override;
  bool enumerable() const override { return false; }
  std::size_t outcome_count() const override;
  Outcome sample_outcome(std::mt19937_64& rng) const override;
  Outcome parse_outcome(const nlohmann::json& j) const override;

 protected:
  void enumerate_impl(std::vector<Outcome>& out) const override;
};

// ── Pair betting over rankings, reduced coordinates ─────────────────────────
//
// Traders buy securities on ordered pairs (i, j), i != j: one unit pays 1 when
// i finishes behind j (worse position), with ties impossible. Internally the
// market keeps only the i < j coordinates; the (j, i) security pays exactly
// 1 minus the (i, j) security, so a purchase of it folds into a short position
// on (i, j) plus a sure cash leg that is carried through the cost computation.
// Coordinate order matches GomRegion's pair order.
class PairBetPayoff final : public PayoffStructure {
 public:
  explicit PairBetPayoff(int n);

  std::string name() const override { return "pair_bet"; }
  Vec payoff(const Outcome& o) const override;
  bool enumerable() const override { return true; }
  std::size_t outcome_count() const override;  // n!
  Outcome sample_outcome(std::mt19937_64& rng) const override;
  Outcome parse_outcome(const nlohmann::json& j) const override;

  int competitors() const { return n_; }
  const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }
  Eigen::Index pair_index(int i, int j) const;  // 0-based, i < j

  struct FoldedBundle {
    Vec reduced;       // shares on the i < j securities
    double cash = 0.;  // sure payout owed to the trader regardless of outcome
  };
  // legs: (i, j, shares) on ordered pairs, 1-based competitor labels.
  FoldedBundle fold_ordered_legs(const std::vector<std::tuple<int, int, double>>& legs) const;

 protected:
  void enumerate_impl(std::vector<Outcome>& out) const override;

 private:
  int n_;
  std::vector<std::pair<int, int>> pairs_;
};

}  // namespace cfmm

#endif  // CFMM_PAYOFFS_HPP
