#ifndef CFMM_CONJUGATES_HPP
#define CFMM_CONJUGATES_HPP

#include <memory>
#include <string>

#include "cfmm/regions.hpp"

namespace cfmm {

// Strictly convex potential R defined on a price region. The market's cost
// surface is the convex conjugate of R restricted to that region, so the
// engine only needs values, gradients (where defined), analytic Hessians, and
// a uniform lower bound on curvature.
class Conjugate {
 public:
  virtual ~Conjugate() = default;

  virtual std::string name() const = 0;

  const std::shared_ptr<const Region>& domain() const { return domain_; }
  Eigen::Index dimension() const { return domain_->dimension(); }

  // Value of R at a domain member (membership checked within kMembershipTol).
  double value(const Vec& x) const;

  // Gradient of R. Throws GradientUndefinedError at points where R is not
  // differentiable (e.g. entropy at a face of the simplex); prices at such
  // points are still meaningful as limits of interior evaluations.
  Vec gradient(const Vec& x) const;
  virtual bool gradient_defined(const Vec& x) const = 0;

  // Analytic Hessian, valid wherever the gradient is defined.
  virtual Mat hessian(const Vec& x) const = 0;

  // Uniform lower bound on the Hessian's smallest tangent-space eigenvalue
  // over the domain (a strict-convexity modulus).
  virtual double convexity_modulus() const = 0;

 protected:
  explicit Conjugate(std::shared_ptr<const Region> domain);

  virtual double value_impl(const Vec& x) const = 0;
  virtual Vec gradient_impl(const Vec& x) const = 0;

  std::shared_ptr<const Region> domain_;
};

// D_R(x, y) = R(x) - R(y) - grad R(y) . (x - y); nonnegative, zero iff x == y.
double bregman_divergence(const Conjugate& r, const Vec& x, const Vec& y);

// ── Concrete potentials ─────────────────────────────────────────────────────

// b * sum_i x_i log x_i. Entries below kEntropyZero are treated as exact
// zeros in values (the 0 log 0 = 0 convention); the gradient is undefined as
// soon as any entry is that small.
class NegEntropy final : public Conjugate {
 public:
  NegEntropy(double b, std::shared_ptr<const Region> domain);

  std::string name() const override { return "neg_entropy"; }
  bool gradient_defined(const Vec& x) const override;
  Mat hessian(const Vec& x) const override;
  double convexity_modulus() const override { return b_; }

  double liquidity() const { return b_; }

  static constexpr double kEntropyZero = 1e-12;

 protected:
  double value_impl(const Vec& x) const override;
  Vec gradient_impl(const Vec& x) const override;

 private:
  double b_;
};

// lambda * || x - m ||^2.
class QuadraticR final : public Conjugate {
 public:
  QuadraticR(double lambda, Vec center, std::shared_ptr<const Region> domain);

  std::string name() const override { return "quadratic"; }
  bool gradient_defined(const Vec&) const override { return true; }
  Mat hessian(const Vec& x) const override;
  double convexity_modulus() const override { return 2.0 * lambda_; }

  double lambda() const { return lambda_; }
  const Vec& center() const { return center_; }

 protected:
  double value_impl(const Vec& x) const override;
  Vec gradient_impl(const Vec& x) const override;

 private:
  double lambda_;
  Vec center_;
};

// b * sum_i x_i log x_i - gamma * log(1 + c - sum_i x_i), on the band
// { x >= 0, 1 <= sum x <= 1 + c }. The barrier term is constant (-gamma log c)
// on the unit-sum face and diverges as the sum approaches 1 + c, so curvature
// along the all-ones direction, gamma * n / (1 + c - sum x)^2, grows without
// bound toward the spending cap.
class BarrierEntropy final : public Conjugate {
 public:
  BarrierEntropy(double b, double gamma, double c, std::shared_ptr<const Region> domain);

  std::string name() const override { return "barrier_entropy"; }
  bool gradient_defined(const Vec& x) const override;
  Mat hessian(const Vec& x) const override;
  double convexity_modulus() const override { return b_ / (1.0 + c_); }

  double liquidity() const { return b_; }
  double gamma() const { return gamma_; }
  double width() const { return c_; }

  // Default barrier weight: max(0.01, c * b * (log n - 1)), the smallest value
  // (up to the floor) for which the minimizer of R over the band stays on the
  // unit-sum face, i.e. the initial price vector sums to exactly 1.
  static double default_gamma(int n, double b, double c);

 protected:
  double value_impl(const Vec& x) const override;
  Vec gradient_impl(const Vec& x) const override;

 private:
  double b_;
  double gamma_;
  double c_;
};

}  // namespace cfmm

#endif  // CFMM_CONJUGATES_HPP
