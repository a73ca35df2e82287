#include "cogcap/policy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "cogcap/numerics.hpp"

namespace cogcap {

namespace {

constexpr double kInf = fading::kInfinity;

// ln of the smallest water-filling threshold tried, 1e-300.
constexpr double kLogMinThreshold = -690.7755278982137;

// Past this estimate e^-v underflows and the integrand is zero.
constexpr double kEstimateCutoff = 700.0;

void require_positive_finite(double value, const char* field) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(std::string(field) + " must be finite and > 0");
  }
}

numerics::QuadratureSpec outer_quadrature() {
  numerics::QuadratureSpec q;
  q.rel_tol = 1e-10;
  q.abs_tol = 1e-14;
  return q;
}

// Integral over estimates in [start, inf). A positive start comes from a
// cap like q/v whose shape spans decades above it, so that range is done
// on a log scale.
numerics::QuadratureResult integrate_estimates(const numerics::RealFunction& f, double start) {
  if (start <= 0.0) return numerics::integrate_semi_infinite(f, 0.0, outer_quadrature());
  if (start >= kEstimateCutoff) return {};
  return numerics::integrate_log_scale(f, start, kEstimateCutoff, outer_quadrature());
}

}  // namespace

void ConstraintSpec::validate() const {
  std::visit(
      [](const auto& b) {
        if constexpr (std::is_same_v<std::decay_t<decltype(b)>, AverageBudget>) {
          require_positive_finite(b.p_avg, "p_avg");
        } else {
          require_positive_finite(b.p_peak, "p_peak");
        }
      },
      budget);
  std::visit(
      [](const auto& o) {
        if constexpr (std::is_same_v<std::decay_t<decltype(o)>, InterferenceOutage>) {
          require_positive_finite(o.q_peak, "q_peak");
        } else {
          require_positive_finite(o.p_pp, "p_pp");
          require_positive_finite(o.lambda_th, "lambda_th");
        }
      },
      outage);
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw DomainError("epsilon must lie in [0, 1]");
  }
}

double ConstraintSpec::p_avg() const {
  if (const auto* b = std::get_if<AverageBudget>(&budget)) return b->p_avg;
  throw std::logic_error("p_avg requested for a peak budget");
}

double ConstraintSpec::p_peak() const {
  if (const auto* b = std::get_if<PeakBudget>(&budget)) return b->p_peak;
  throw std::logic_error("p_peak requested for an average budget");
}

double ConstraintSpec::effective_q_peak() const {
  if (const auto* o = std::get_if<InterferenceOutage>(&outage)) return o->q_peak;
  const auto& si = std::get<SIOutage>(outage);
  return si.p_pp / si.lambda_th;
}

bool PeakCap::unbounded() const { return std::isinf(value); }

// ---------------------------------------------------------------------------
// PowerPolicy
// ---------------------------------------------------------------------------

PowerPolicy PowerPolicy::saturated(const ConstraintSpec& spec) {
  return PowerPolicy(PolicyKind::Saturated, spec, 0.0);
}

PowerPolicy PowerPolicy::three_regime(const ConstraintSpec& spec, double g_s1) {
  if (!(g_s1 > 0.0)) throw DomainError("g_s1 must be > 0");
  return PowerPolicy(PolicyKind::ThreeRegime, spec, g_s1);
}

PowerPolicy PowerPolicy::peak_rule(const ConstraintSpec& spec) {
  return PowerPolicy(PolicyKind::PeakRule, spec, 0.0);
}

double PowerPolicy::g_s1() const {
  if (kind_ != PolicyKind::ThreeRegime) {
    throw std::logic_error("g_s1 is only defined for the three-regime policy");
  }
  return g_s1_;
}

PeakCap PowerPolicy::cap(Estimate est) const {
  return {policy::peak_cap(spec_, est).value * cap_scale_};
}

PowerPolicy PowerPolicy::with_cap_scale(double factor) const {
  if (!(factor > 0.0)) throw DomainError("cap scale must be > 0");
  PowerPolicy copy = *this;
  copy.cap_scale_ = cap_scale_ * factor;
  return copy;
}

double PowerPolicy::power(double hs_sq, Estimate est) const {
  if (!(hs_sq >= 0.0)) throw DomainError("hs_sq must be >= 0");
  const auto capped = [&](double candidate) {
    if (policy::cap_at_least(spec_, est, candidate / cap_scale_)) return candidate;
    return cap(est).value;
  };
  switch (kind_) {
    case PolicyKind::Saturated:
      return cap(est).value;
    case PolicyKind::ThreeRegime: {
      if (hs_sq < g_s1_ || hs_sq == 0.0) return 0.0;
      const double water = 1.0 / g_s1_ - 1.0 / hs_sq;
      if (water <= 0.0) return 0.0;
      return capped(water);
    }
    case PolicyKind::PeakRule:
      return capped(spec_.p_peak());
  }
  throw std::logic_error("unknown policy kind");
}

namespace policy {

// ---------------------------------------------------------------------------
// Caps
// ---------------------------------------------------------------------------

PeakCap peak_cap(const ConstraintSpec& spec, Estimate est) {
  est.validate();
  const double eps = spec.epsilon;
  const double q = spec.effective_q_peak();
  if (eps == 1.0) return {kInf};

  if (spec.model.perfect_csi()) {
    const double v = est.hp_hat_sq;
    if (v == 0.0) return {kInf};
    if (!spec.is_si_outage()) return {q / v};
    // beta = |h_p|^2 / |h_pp|^2 with |h_p|^2 known exactly.
    return {q / v * -std::log1p(-eps)};
  }
  if (eps == 0.0) return {0.0};

  if (spec.model.no_csi()) {
    if (!spec.is_si_outage()) return {-q / std::log(eps)};
    return {q * eps / (1.0 - eps)};
  }
  const double quantile =
      spec.is_si_outage()
          ? fading::inv_cdf_beta_given_estimate(1.0 - eps, est, spec.model)
          : fading::inv_cdf_crosslink_given_estimate(1.0 - eps, est, spec.model);
  return {q / quantile};
}

bool cap_at_least(const ConstraintSpec& spec, Estimate est, double level) {
  if (level <= 0.0) return true;
  const double eps = spec.epsilon;
  if (eps == 1.0) return true;
  if (spec.model.perfect_csi() || spec.model.no_csi() || eps == 0.0) {
    return peak_cap(spec, est).value >= level;
  }
  // cap >= level  <=>  F^-1(1 - eps) <= q/level  <=>  P[X > q/level] <= eps.
  const double threshold = spec.effective_q_peak() / level;
  if (spec.is_si_outage()) {
    return 1.0 - fading::cdf_beta_given_estimate(threshold, est, spec.model) <= eps;
  }
  return fading::ccdf_crosslink_given_estimate(threshold, est, spec.model) <= eps;
}

double expected_peak_cap(const ConstraintSpec& spec) {
  const double eps = spec.epsilon;
  if (eps == 1.0) return kInf;
  if (spec.model.perfect_csi()) {
    // E[q / |h_p|^2] diverges at the origin unless the cap vanishes.
    if (spec.is_si_outage() && eps == 0.0) return 0.0;
    return kInf;
  }
  if (eps == 0.0) return 0.0;
  if (spec.model.no_csi()) return peak_cap(spec, {0.0}).value;
  const auto integrand = [&spec](double v) {
    if (v > kEstimateCutoff) return 0.0;
    return peak_cap(spec, {v}).value * std::exp(-v);
  };
  return numerics::integrate_semi_infinite(integrand, 0.0, outer_quadrature()).value;
}

std::optional<double> estimate_threshold(const ConstraintSpec& spec, double level) {
  if (!(level > 0.0)) throw DomainError("estimate_threshold: level must be > 0");
  const double eps = spec.epsilon;
  const double q = spec.effective_q_peak();
  if (eps == 1.0) return std::nullopt;

  if (spec.model.perfect_csi()) {
    // cap(v) = q * factor / v is below level for v > q * factor / level.
    const double factor = spec.is_si_outage() ? -std::log1p(-eps) : 1.0;
    return q * factor / level;
  }
  if (eps == 0.0) return 0.0;
  if (spec.model.no_csi()) {
    if (peak_cap(spec, {0.0}).value < level) return 0.0;
    return std::nullopt;
  }

  // cap(v) < level  <=>  F_{X|v}(q/level) < 1 - eps, and F_{X|v}(t) is
  // strictly decreasing in v.
  const double t = q / level;
  const auto excess = [&](double v) {
    const Estimate est{v};
    if (spec.is_si_outage()) {
      return eps - (1.0 - fading::cdf_beta_given_estimate(t, est, spec.model));
    }
    return eps - fading::ccdf_crosslink_given_estimate(t, est, spec.model);
  };
  if (excess(0.0) < 0.0) return 0.0;
  return numerics::find_root_expanding_up(excess, {0.0, 1.0}, 1e-13);
}

// ---------------------------------------------------------------------------
// G and K
// ---------------------------------------------------------------------------

double g_function(double x) {
  if (!(x > 0.0)) throw DomainError("g_function: x must be > 0");
  if (x > 700.0) return 0.0;  // e^-x underflows; G < e^-x / x^2
  return std::exp(-x) * (1.0 / x - numerics::exp_integral_e1_scaled(x));
}

double g_inverse(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("g_inverse: p must be > 0");
  // G(x) < 1/x puts the root below 1/p.
  const double hi = 1.0 / p;
  const auto residual = [p](double x) { return g_function(x) - p; };
  return numerics::find_root_expanding_down(residual, {0.5 * hi, hi}, 1e-15 * hi);
}

namespace {

// E[min(cap, (1/x - 1/|h_s|^2)^+)] for cap < 1/x. With y = (1/x - cap)^-1
// this is G(x) - G(y); the direct form avoids cancelling two large terms
// when the interval [x, y] is short.
double capped_power(double x, double cap) {
  const double y = 1.0 / (1.0 / x - cap);
  if (y - x > 0.5 * x) return g_function(x) - g_function(y);
  const auto wf = [x](double t) { return (t - x) / t / x * std::exp(-t); };
  numerics::QuadratureSpec q;
  q.rel_tol = 1e-12;
  const double head = numerics::integrate(wf, x, y, q).value;
  return head + cap * std::exp(-y);
}

}  // namespace

double k_function(double x, const ConstraintSpec& spec) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("k_function: x must be > 0");
  const double g = g_function(x);
  const auto start = estimate_threshold(spec, 1.0 / x);
  if (!start) return g;  // S_x is empty

  const auto capped = [&](double v) {
    if (v > kEstimateCutoff) return 0.0;
    const double cap = peak_cap(spec, {v}).value;
    if (cap >= 1.0 / x) return g * std::exp(-v);
    return capped_power(x, cap) * std::exp(-v);
  };
  if (spec.model.no_csi() || (spec.epsilon == 0.0 && !spec.model.perfect_csi())) {
    // Constant cap: the estimate average collapses.
    return capped(0.0);
  }
  // Estimates below the threshold see the uncapped profile.
  const double outside = g * -std::expm1(-*start);
  return outside + integrate_estimates(capped, *start).value;
}

AverageSolution solve_gs1(const ConstraintSpec& spec) {
  spec.validate();
  const double p_avg = spec.p_avg();
  if (p_avg >= expected_peak_cap(spec)) return {true, 0.0};

  // K <= G, so G^-1(p_avg) bounds the root from above. The root can sit
  // many decades lower, so the search runs on ln x.
  const double hi = g_inverse(p_avg);
  const auto residual = [&](double u) { return k_function(std::exp(u), spec) - p_avg; };
  try {
    const double u_hi = std::log(hi);
    // Cap never binding at G^-1: K and G agree there up to rounding.
    if (residual(u_hi) >= 0.0) return {false, hi};
    double u_lo = u_hi - 1.0;
    double step = 1.0;
    while (residual(u_lo) < 0.0) {
      if (u_lo == kLogMinThreshold) return {false, std::exp(kLogMinThreshold), true};
      step *= 2.0;
      u_lo = std::max(u_hi - step, kLogMinThreshold);
    }
    const double u = numerics::find_root_bracketed(residual, {u_lo, u_hi}, 1e-14);
    return {false, std::exp(u)};
  } catch (const std::exception& e) {
    throw ConvergenceError(std::string("solve_gs1: K^-1(p_avg) failed for p_avg = ") +
                               std::to_string(p_avg) + ": " + e.what(),
                           hi, hi);
  }
}

std::optional<double> gs2_of(double g_s1, PeakCap cap) {
  if (!(g_s1 > 0.0)) throw DomainError("gs2_of: g_s1 must be > 0");
  if (cap.unbounded()) return std::nullopt;
  const double gap = 1.0 / g_s1 - cap.value;
  if (gap <= 0.0) return std::nullopt;
  return 1.0 / gap;
}

std::optional<double> threshold_hp0(double g_s1, const ConstraintSpec& spec) {
  if (!(g_s1 > 0.0)) throw DomainError("threshold_hp0: g_s1 must be > 0");
  return estimate_threshold(spec, 1.0 / g_s1);
}

PowerPolicy peak_policy(const ConstraintSpec& spec) {
  spec.validate();
  (void)spec.p_peak();
  return PowerPolicy::peak_rule(spec);
}

PowerPolicy solve_policy(const ConstraintSpec& spec) {
  if (!spec.has_average_budget()) return peak_policy(spec);
  const AverageSolution sol = solve_gs1(spec);
  if (sol.saturated) return PowerPolicy::saturated(spec);
  return PowerPolicy::three_regime(spec, sol.g_s1);
}

double optimal_power(double hs_sq, Estimate est, const PowerPolicy& policy) {
  return policy.power(hs_sq, est);
}

}  // namespace policy
}  // namespace cogcap
