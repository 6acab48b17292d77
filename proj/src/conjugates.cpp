#include "cfmm/conjugates.hpp"

#include <cmath>

namespace cfmm {

Conjugate::Conjugate(std::shared_ptr<const Region> domain) : domain_(std::move(domain)) {
  if (!domain_) throw ConfigError("conjugate potential needs a domain region");
}

double Conjugate::value(const Vec& x) const {
  require_dimension(x, dimension(), "conjugate value");
  if (!domain_->contains(x, kMembershipTol)) {
    throw DomainViolationError("conjugate value: point outside domain region '" +
                               domain_->name() + "'");
  }
  return value_impl(x);
}

Vec Conjugate::gradient(const Vec& x) const {
  require_dimension(x, dimension(), "conjugate gradient");
  if (!domain_->contains(x, kMembershipTol)) {
    throw DomainViolationError("conjugate gradient: point outside domain region '" +
                               domain_->name() + "'");
  }
  if (!gradient_defined(x)) {
    throw GradientUndefinedError("conjugate gradient undefined at a boundary point of '" +
                                 name() + "'");
  }
  return gradient_impl(x);
}

double bregman_divergence(const Conjugate& r, const Vec& x, const Vec& y) {
  return r.value(x) - r.value(y) - r.gradient(y).dot(x - y);
}

// ── NegEntropy ──────────────────────────────────────────────────────────────

NegEntropy::NegEntropy(double b, std::shared_ptr<const Region> domain)
    : Conjugate(std::move(domain)), b_(b) {
  if (!(b > 0.0) || !std::isfinite(b)) throw ConfigError("entropy potential needs b > 0");
}

double NegEntropy::value_impl(const Vec& x) const {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] > kEntropyZero) acc += x[i] * std::log(x[i]);
  }
  return b_ * acc;
}

bool NegEntropy::gradient_defined(const Vec& x) const {
  return x.minCoeff() > kEntropyZero;
}

Vec NegEntropy::gradient_impl(const Vec& x) const {
  return b_ * (x.array().log() + 1.0).matrix();
}

Mat NegEntropy::hessian(const Vec& x) const {
  if (!gradient_defined(x)) {
    throw GradientUndefinedError("entropy hessian undefined at a boundary point");
  }
  return (b_ / x.array()).matrix().asDiagonal();
}

// ── QuadraticR ──────────────────────────────────────────────────────────────

QuadraticR::QuadraticR(double lambda, Vec center, std::shared_ptr<const Region> domain)
    : Conjugate(std::move(domain)), lambda_(lambda), center_(std::move(center)) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ConfigError("quadratic potential needs lambda > 0");
  }
  require_dimension(center_, dimension(), "quadratic potential center");
}

double QuadraticR::value_impl(const Vec& x) const { return lambda_ * (x - center_).squaredNorm(); }

Vec QuadraticR::gradient_impl(const Vec& x) const { return 2.0 * lambda_ * (x - center_); }

Mat QuadraticR::hessian(const Vec& x) const {
  return 2.0 * lambda_ * Mat::Identity(x.size(), x.size());
}

// ── BarrierEntropy ──────────────────────────────────────────────────────────

BarrierEntropy::BarrierEntropy(double b, double gamma, double c,
                               std::shared_ptr<const Region> domain)
    : Conjugate(std::move(domain)), b_(b), gamma_(gamma), c_(c) {
  if (!(b > 0.0) || !(gamma > 0.0) || !(c > 0.0)) {
    throw ConfigError("barrier-entropy potential needs b, gamma, c > 0");
  }
}

double BarrierEntropy::default_gamma(int n, double b, double c) {
  return std::max(0.01, c * b * (std::log(double(n)) - 1.0));
}

double BarrierEntropy::value_impl(const Vec& x) const {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] > NegEntropy::kEntropyZero) acc += x[i] * std::log(x[i]);
  }
  const double slack = 1.0 + c_ - x.sum();
  if (slack <= 0.0) return std::numeric_limits<double>::infinity();
  return b_ * acc - gamma_ * std::log(slack);
}

bool BarrierEntropy::gradient_defined(const Vec& x) const {
  return x.minCoeff() > NegEntropy::kEntropyZero &&
         1.0 + c_ - x.sum() > NegEntropy::kEntropyZero;
}

Vec BarrierEntropy::gradient_impl(const Vec& x) const {
  const double pressure = gamma_ / (1.0 + c_ - x.sum());
  return (b_ * (x.array().log() + 1.0) + pressure).matrix();
}

Mat BarrierEntropy::hessian(const Vec& x) const {
  if (!gradient_defined(x)) {
    throw GradientUndefinedError("barrier-entropy hessian undefined at a boundary point");
  }
  const double slack = 1.0 + c_ - x.sum();
  Mat h = (b_ / x.array()).matrix().asDiagonal();
  h.array() += gamma_ / (slack * slack);
  return h;
}

}  // namespace cfmm
