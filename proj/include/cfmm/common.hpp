#ifndef CFMM_COMMON_HPP
#define CFMM_COMMON_HPP

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace cfmm {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Default membership / feasibility tolerance used by region predicates.
inline constexpr double kMembershipTol = 1e-9;

// ── Errors ──────────────────────────────────────────────────────────────────
// One exception type per failure family so callers (and the CLI exit-code
// mapping) can tell configuration problems from numerical ones.

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DimensionError : ConfigError {
  using ConfigError::ConfigError;
};

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Gradient queried where the function is not differentiable (e.g. entropy at a
// face of the simplex, cost at a kink between smooth branches).
struct GradientUndefinedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Point handed to a function outside its domain region.
struct DomainViolationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct OutcomeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Outcome space too large (or infinite) to enumerate.
struct EnumerationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Operation not available for this region type (no closed form and no oracle).
struct UnsupportedRegionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Trade rejected by market rules (negative bundle where forbidden, trading
// after settlement, double settlement).
struct TradeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Depth is undefined at kinks of the cost surface / boundary prices.
struct DepthUndefinedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require_dimension(const Vec& v, Eigen::Index expect, const char* what) {
  if (v.size() != expect) {
    throw DimensionError(std::string(what) + ": expected dimension " +
                         std::to_string(expect) + ", got " + std::to_string(v.size()));
  }
}

}  // namespace cfmm

#endif  // CFMM_COMMON_HPP
