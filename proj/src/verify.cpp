#include "cfmm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>
#include <tuple>

#include "cfmm/oracle.hpp"

namespace cfmm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Sampler {
  const Market& m;
  std::mt19937_64 rng;
  Vec lo, hi;
  double qscale;

  Sampler(const Market& market, unsigned long long seed) : m(market), rng(seed) {
    std::tie(lo, hi) = m.region().bounding_box();
    // Quantity scale that makes prices roam the region without driving
    // entropy-type potentials into saturated softmax territory.
    qscale = m.conjugate().convexity_modulus() * std::max(1.0, m.region().diameter()) * 1.5;
  }

  double uniform(double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(rng);
  }

  Vec box_point(double inflate = 1.0) {
    Vec y(lo.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double pad = inflate * (hi[i] - lo[i] + 1.0);
      y[i] = uniform(lo[i] - (inflate - 1.0) * pad, hi[i] + (inflate - 1.0) * pad);
    }
    return y;
  }

  Vec member() { return m.region().project(box_point(1.2)); }

  // Strictly interior point: a mix of a member with the solver anchor.
  Vec interior_member(double max_mix = 0.8) {
    const Vec anchor = m.region().interior_point();
    const double t = uniform(0.1, max_mix);
    return anchor + t * (member() - anchor);
  }

  Vec quantity() {
    Vec q(lo.size());
    const double a = m.positive_bundles_only() ? 0.0 : -qscale;
    for (Eigen::Index i = 0; i < q.size(); ++i) q[i] = uniform(a, qscale);
    return q;
  }

  Vec bundle(double scale) {
    Vec r(lo.size());
    for (Eigen::Index i = 0; i < r.size(); ++i) r[i] = uniform(-scale, scale);
    return r;
  }
};

CheckResult make_skip(const std::string& name, const std::string& why) {
  CheckResult c;
  c.name = name;
  c.pass = true;
  c.note = "skipped: " + why;
  return c;
}

void finish(CheckResult& c) {
  c.pass = c.worst <= c.tolerance;
}

}  // namespace

WitnessReport no_arbitrage_witness(const Market& m, const Vec& q, const Vec& r, double tol) {
  WitnessReport rep;
  rep.trade_cost = m.cost(q + r) - m.cost(q);
  const auto* sphere = dynamic_cast<const SpherePayoff*>(&m.payoffs());
  if (sphere != nullptr) {
    // min over unit directions u of (u + 1).r = sum(r) - ||r||.
    rep.available = true;
    rep.worst_payout = r.sum() - r.norm();
    const double nr = r.norm();
    Vec u = nr > 0.0 ? Vec(-r / nr) : Vec(Vec::Unit(r.size(), 0));
    rep.witness = Outcome::direction(std::move(u));
  } else if (m.payoffs().enumerable() &&
             m.payoffs().outcome_count() <= PayoffStructure::kEnumerationCap) {
    rep.available = true;
    const auto& outs = m.enumerated_outcomes();
    const auto& gens = m.hull_generators();
    rep.worst_payout = kInf;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      const double v = gens[i].dot(r);
      if (v < rep.worst_payout) {
        rep.worst_payout = v;
        rep.witness = outs[i];
      }
    }
  } else {
    rep.available = false;
    return rep;
  }
  rep.slack = rep.trade_cost - rep.worst_payout;
  rep.ok = rep.slack >= -tol;
  return rep;
}

std::vector<CheckResult> run_verification(const Market& m, const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  const int cases = std::max(1, opt.cases) * (opt.thorough ? 5 : 1);
  const Eigen::Index dim = m.region().dimension();
  Sampler smp(m, opt.seed);

  // 1. Projection geometry: idempotent, member, no member is closer.
  {
    CheckResult c;
    c.name = "projection-idempotent-and-optimal";
    c.tolerance = 1e-8;
    for (int i = 0; i < cases; ++i) {
      const Vec y = smp.box_point(1.4);
      const Vec x = m.region().project(y);
      if (!m.region().contains(x, 1e-7)) c.worst = std::max(c.worst, 1.0);
      c.worst = std::max(c.worst, (m.region().project(x) - x).norm());
      const Vec z = smp.member();
      c.worst = std::max(c.worst, (y - x).norm() - (y - z).norm());
      ++c.cases;
    }
    finish(c);
    out.push_back(c);
  }

  // 2. Payoff vectors inside the price region.
  {
    CheckResult c;
    c.name = "payoffs-inside-region";
    c.tolerance = 0.0;
    c.cases = 1;
    c.pass = m.payoffs_covered();
    c.worst = m.max_payoff_region_distance();
    if (!c.pass) c.note = "payoff vectors escape the region; adversarial drain applies";
    out.push_back(c);
  }

  // 3. Potential gradient vs directional finite differences (tangent directions).
  {
    CheckResult c;
    c.name = "potential-directional-derivative";
    c.tolerance = 1e-5;
    const Mat basis = m.region().tangent_basis();
    const double h = 1e-6;
    for (int i = 0; i < cases && c.cases < 64; ++i) {
      const Vec x = smp.interior_member(0.6);
      if (!m.region().relatively_interior(x, 1e-4) || !m.conjugate().gradient_defined(x)) continue;
      Vec w(basis.cols());
      for (Eigen::Index k = 0; k < w.size(); ++k) w[k] = smp.uniform(-1, 1);
      Vec d = basis * w;
      if (d.norm() < 1e-12) continue;
      d.normalize();
      const double fd =
          (m.conjugate().value(x + h * d) - m.conjugate().value(x - h * d)) / (2.0 * h);
      const double an = m.conjugate().gradient(x).dot(d);
      c.worst = std::max(c.worst, std::abs(fd - an) / std::max(1.0, std::abs(an)));
      ++c.cases;
    }
    finish(c);
    out.push_back(c);
  }

  // 4. Divergence nonnegativity.
  {
    CheckResult c;
    c.name = "bregman-nonnegative";
    c.tolerance = 1e-10;
    for (int i = 0; i < cases; ++i) {
      const Vec y = smp.interior_member(0.7);
      if (!m.conjugate().gradient_defined(y)) continue;
      const Vec x = smp.member();
      c.worst = std::max(c.worst, -bregman_divergence(m.conjugate(), x, y));
      ++c.cases;
    }
    finish(c);
    out.push_back(c);
  }

  // 5. Trade telescoping (solver consistency across split trades).
  {
    CheckResult c;
    c.name = "trade-telescoping";
    c.tolerance = 1e-6;
    for (int i = 0; i < cases; ++i) {
      const Vec q = smp.quantity();
      const Vec r1 = smp.bundle(0.4 * smp.qscale);
      const Vec r2 = smp.bundle(0.4 * smp.qscale);
      const double whole = m.cost(q + r1 + r2) - m.cost(q);
      const double split = (m.cost(q + r1) - m.cost(q)) + (m.cost(q + r1 + r2) - m.cost(q + r1));
      c.worst = std::max(c.worst, std::abs(whole - split) / std::max(1.0, std::abs(whole)));
      ++c.cases;
    }
    finish(c);
    out.push_back(c);
  }

  // 6. Marginal cost of repeating a bundle never decreases.
  {
    CheckResult c;
    c.name = "marginal-cost-monotone";
    c.tolerance = 1e-7;
    for (int i = 0; i < cases; ++i) {
      const Vec q = smp.quantity();
      const Vec r = smp.bundle(0.3 * smp.qscale);
      const double first = m.cost(q + r) - m.cost(q);
      const double second = m.cost(q + 2.0 * r) - m.cost(q + r);
      c.worst = std::max(c.worst, first - second);
      ++c.cases;
    }
    finish(c);
    out.push_back(c);
  }

  // 7. Midpoint convexity of the cost surface.
  {
    CheckResult c;
    c.name = "midpoint-convexity";
    c.tolerance = 1e-7;
    for (int i = 0; i < cases; ++i) {
      const Vec a = smp.quantity();
      const Vec b = smp.quantity();
      c.worst = std::max(c.worst, m.cost(0.5 * (a + b)) - 0.5 * (m.cost(a) + m.cost(b)));
      ++c.cases;
    }
    finish(c);
    out.push_back(c);
  }

  // 8. Quoted prices stay inside the region.
  {
    CheckResult c;
    c.name = "price-in-region";
    c.tolerance = 1e-7;
    for (int i = 0; i < cases; ++i) {
      const Vec p = m.price(smp.quantity());
      const Vec proj = m.region().project(p);
      c.worst = std::max(c.worst, (p - proj).norm());
      ++c.cases;
    }
    finish(c);
    out.push_back(c);
  }

  // 9. Price/hull relationship.
  {
    const bool enumerated = m.payoffs().enumerable() &&
                            m.payoffs().outcome_count() <= PayoffStructure::kEnumerationCap;
    if (m.hull_mode() == HullMode::Equality) {
      CheckResult c;
    c.name = "price-in-hull";
    c.tolerance = 1e-6;
      for (int i = 0; i < cases; ++i) {
        const Vec p = m.price(smp.quantity());
        if (enumerated) {
          c.worst = std::max(c.worst, oracle::hull_distance(m.hull_generators(), p).distance);
        } else {
          c.worst = std::max(c.worst, (p - m.region().project(p)).norm());  // hull == region
        }
        ++c.cases;
      }
      finish(c);
      out.push_back(c);
    } else if (enumerated) {
      CheckResult c;
    c.name = "price-hull-exit";
    c.tolerance = kInf;
      double maxdist = 0.0;
      for (int i = 0; i < std::min(cases, 40); ++i) {
        maxdist = std::max(maxdist,
                           oracle::hull_distance(m.hull_generators(), m.price(smp.quantity())).distance);
        ++c.cases;
      }
      c.worst = maxdist;
      c.pass = true;
      c.note = "informational: hull exits are legitimate for this market";
      out.push_back(c);
    } else {
      out.push_back(make_skip("price-hull-exit", "outcome space not enumerable"));
    }
  }

  // 10. No-arbitrage witnesses.
  {
    CheckResult c;
    c.name = "no-arbitrage-witness";
    c.tolerance = 1e-6;
    bool available = true;
    long violations = 0;
    for (int i = 0; i < cases; ++i) {
      const Vec q = smp.quantity();
      const Vec r = smp.bundle(0.5 * smp.qscale);
      const auto rep = no_arbitrage_witness(m, q, r);
      if (!rep.available) {
        available = false;
        break;
      }
      ++c.cases;
      if (m.hull_mode() == HullMode::Equality) {
        c.worst = std::max(c.worst, -rep.slack);
      } else if (!rep.ok) {
        ++violations;
      }
    }
    if (!available) {
      out.push_back(make_skip("no-arbitrage-witness", "no witness rule for this outcome space"));
    } else {
      if (m.hull_mode() != HullMode::Equality) {
        c.note = std::to_string(violations) +
                 " sure-profit bundles found (possible when the region exceeds the hull)";
        c.worst = 0.0;
      }
      finish(c);
      out.push_back(c);
    }
  }

  // 11. Conjugate consistency: C(q) == price.q - R(price).
  {
    CheckResult c;
    c.name = "conjugate-consistency";
    c.tolerance = 1e-6;
    for (int i = 0; i < cases; ++i) {
      const Vec q = smp.quantity();
      const Vec x = m.price(q);
      const double lhs = m.cost(q);
      const double rhs = q.dot(x) - m.conjugate().value(x);
      c.worst = std::max(c.worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
      ++c.cases;
    }
    finish(c);
    out.push_back(c);
  }

  // 12. Belief expressiveness: any interior hull point is a reachable price.
  {
    CheckResult c;
    c.name = "belief-expressiveness";
    c.tolerance = 1e-6;
    const bool enumerated = m.payoffs().enumerable() &&
                            m.payoffs().outcome_count() <= PayoffStructure::kEnumerationCap;
    for (int i = 0; i < cases && c.cases < 64; ++i) {
      Vec target;
      if (enumerated) {
        const auto& gens = m.hull_generators();
        Vec w(gens.size());
        for (Eigen::Index k = 0; k < w.size(); ++k) w[k] = smp.uniform(0.05, 1.0);
        w /= w.sum();
        target = Vec::Zero(dim);
        for (std::size_t k = 0; k < gens.size(); ++k) target += w[static_cast<Eigen::Index>(k)] * gens[k];
      } else {
        target = smp.interior_member(0.6);
      }
      if (!m.conjugate().gradient_defined(target)) continue;
      const Vec q = m.quantity_for_price(target);
      c.worst = std::max(c.worst, (m.price(q) - target).lpNorm<Eigen::Infinity>());
      ++c.cases;
    }
    finish(c);
    out.push_back(c);
  }

  // 13. Closed form against the certified generic solve.
  if (m.has_closed_form()) {
    CheckResult c;
    c.name = "closed-form-vs-certified-solve";
    c.tolerance = 2e-6;
    const int n13 = std::min(cases, opt.thorough ? 60 : 25);
    for (int i = 0; i < n13; ++i) {
      const Vec q = smp.quantity();
      const double fast = m.cost(q);
      const double slow = m.cost_generic(q);
      c.worst = std::max(c.worst, std::abs(fast - slow) / std::max(1.0, std::abs(fast)));
      ++c.cases;
    }
    finish(c);
    out.push_back(c);
  } else {
    out.push_back(make_skip("closed-form-vs-certified-solve", "market already uses the generic solve"));
  }

  // 14. Depth stays above the uniform lower bound.
  {
    CheckResult c;
    c.name = "depth-bounds";
    c.tolerance = 1e-9;
    const double floor = m.worst_case_depth();
    for (int i = 0; i < cases; ++i) {
      try {
        const double d = m.depth(smp.quantity());
        c.worst = std::max(c.worst, floor - d);
        ++c.cases;
      } catch (const DepthUndefinedError&) {
        // seams/boundaries are legitimately undefined
      }
    }
    finish(c);
    if (c.cases == 0) {
      c.pass = true;
      c.note = "no differentiable states sampled";
    }
    out.push_back(c);
  }

  // 15. Cost curvature vs finite differences (closed-form paths only: the
  // generic solve is too noisy for second differences).
  if (m.has_closed_form()) {
    CheckResult c;
    c.name = "cost-curvature-finite-difference";
    c.tolerance = 5e-3;
    for (int i = 0; i < cases && c.cases < 6; ++i) {
      const Vec q = smp.quantity();
      double analytic = 0.0;
      try {
        analytic = m.depth(q);
      } catch (const DepthUndefinedError&) {
        continue;
      }
      // Keep a margin from curvature kinks: second differences step across
      // them even when the analytic depth is still defined.
      if (m.kind() == "sphere" && std::abs(q.norm() - m.worst_case_depth()) < 1e-2) continue;
      if (const auto* be = dynamic_cast<const BarrierEntropy*>(&m.conjugate())) {
        const Vec z = q / be->liquidity();
        const double zmax = z.maxCoeff();
        const double lse = zmax + std::log((z.array() - zmax).exp().sum());
        const double face_slope =
            be->liquidity() * (lse - 1.0) - be->gamma() / be->width();
        if (std::abs(face_slope) < 1e-2) continue;
      }
      if (dynamic_cast<const QuadraticR*>(&m.conjugate()) != nullptr && m.kind() != "sphere" &&
          !m.region().relatively_interior(m.price(q), 1e-3))
        continue;
      const Mat h = oracle::finite_diff_hessian([&](const Vec& z) { return m.cost(z); }, q, 1e-4);
      const double lmax = oracle::power_iteration(h);
      if (lmax <= 0.0) continue;
      const double fd_depth = 1.0 / lmax;
      c.worst = std::max(c.worst, std::abs(fd_depth - analytic) / std::max(1.0, analytic));
      ++c.cases;
    }
    finish(c);
    out.push_back(c);
  } else {
    out.push_back(make_skip("cost-curvature-finite-difference", "generic solve is too noisy"));
  }

  // 16. Grid lower bound on the cost (small dimensions only).
  {
    const Mat basis = m.region().tangent_basis();
    if (basis.cols() <= 3) {
      CheckResult c;
    c.name = "grid-lower-bound";
    c.tolerance = 1e-9;
      const int res = opt.thorough ? 90 : 60;
      for (int i = 0; i < 3; ++i) {
        const Vec q = smp.quantity();
        const auto g = oracle::grid_cost(m.region(), m.conjugate(), q, res);
        c.worst = std::max(c.worst, g.value - m.cost(q));
        ++c.cases;
      }
      finish(c);
      out.push_back(c);
    } else {
      out.push_back(make_skip("grid-lower-bound", "region dimension too large for a grid"));
    }
  }

  // 17. Adversarial drain grows the maker's loss when payoffs escape the region.
  if (!m.payoffs_covered()) {
    CheckResult c;
    c.name = "uncovered-drain-growth";
    c.tolerance = 0.0;
    // outcome whose payoff is farthest from the region
    std::mt19937_64 rng(opt.seed + 1);
    Outcome worst_o = m.payoffs().sample_outcome(rng);
    double worst_d = -1.0;
    const bool enumerated = m.payoffs().enumerable() &&
                            m.payoffs().outcome_count() <= PayoffStructure::kEnumerationCap;
    if (enumerated) {
      const auto& outs = m.enumerated_outcomes();
      const auto& gens = m.hull_generators();
      for (std::size_t i = 0; i < outs.size(); ++i) {
        const double d = (gens[i] - m.region().project(gens[i])).norm();
        if (d > worst_d) {
          worst_d = d;
          worst_o = outs[i];
        }
      }
    }
    const Vec rho = m.payoffs().payoff(worst_o);
    Vec q = Vec::Zero(dim);
    double prev_loss = rho.dot(q) - (m.cost(q) - m.cost_at_zero());
    const double eps = 0.01;
    double min_gain = kInf;
    for (int t = 0; t < 200; ++t) {
      q = m.drain_step(q, worst_o, eps);
      const double loss = rho.dot(q) - (m.cost(q) - m.cost_at_zero());
      min_gain = std::min(min_gain, loss - prev_loss);
      prev_loss = loss;
      ++c.cases;
    }
    c.worst = -min_gain;  // pass iff every step strictly grew the loss
    c.tolerance = -1e-12;
    finish(c);
    c.note = "per-step adversarial gain at least " + std::to_string(min_gain);
    out.push_back(c);
  } else {
    out.push_back(make_skip("uncovered-drain-growth", "payoffs covered by the region"));
  }

  return out;
}

bool all_passed(const std::vector<CheckResult>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

std::string format_report(const std::vector<CheckResult>& checks) {
  std::ostringstream os;
  os << std::left << std::setw(38) << "check" << std::right << std::setw(7) << "cases"
     << std::setw(13) << "worst" << std::setw(11) << "tol" << "  result\n";
  for (const auto& c : checks) {
    os << std::left << std::setw(38) << c.name << std::right << std::setw(7) << c.cases
       << std::setw(13) << std::scientific << std::setprecision(2) << c.worst << std::setw(11)
       << c.tolerance << (c.pass ? "  pass" : "  FAIL");
    if (!c.note.empty()) os << "  (" << c.note << ")";
    os << "\n";
  }
  return os.str();
}

}  // namespace cfmm
