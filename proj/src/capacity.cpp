#include "cogcap/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cogcap/numerics.hpp"

namespace cogcap {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::ClosedForm:
      return "closed-form";
    case Method::Quadrature:
      return "quadrature";
    case Method::MonteCarlo:
      return "monte-carlo";
  }
  return "unknown";
}

namespace capacity {

namespace {

constexpr double kEstimateCutoff = 700.0;

numerics::QuadratureSpec inner_quadrature() {
  numerics::QuadratureSpec q;
  q.rel_tol = 1e-11;
  q.abs_tol = 1e-15;
  return q;
}

numerics::QuadratureSpec outer_quadrature() {
  numerics::QuadratureSpec q;
  q.rel_tol = 1e-10;
  q.abs_tol = 1e-14;
  return q;
}

struct Partial {
  double value = 0.0;
  double abs_error = 0.0;
};

// E_hs[ln(1 + p |h_s|^2)] for a constant power p.
Partial constant_power_rate(double p) {
  if (p == 0.0) return {};
  const auto f = [p](double t) { return std::log1p(p * t) * std::exp(-t); };
  const auto r = numerics::integrate_semi_infinite(f, 0.0, inner_quadrature());
  return {r.value, r.abs_error};
}

// E_hs[ln(1 + min(cap, (1/g1 - 1/t)^+) t)] for a fixed cap.
Partial water_filling_rate(double g1, PeakCap cap) {
  if (cap.value == 0.0) return {};
  const auto g2 = policy::gs2_of(g1, cap);
  const auto uncapped = [g1](double t) { return std::log(t / g1) * std::exp(-t); };
  if (!g2) {
    const auto r = numerics::integrate_semi_infinite(uncapped, g1, inner_quadrature());
    return {r.value, r.abs_error};
  }
  const double c = cap.value;
  const auto capped = [c](double t) { return std::log1p(c * t) * std::exp(-t); };
  const auto head = numerics::integrate(uncapped, g1, *g2, inner_quadrature());
  const auto tail = numerics::integrate_semi_infinite(capped, *g2, inner_quadrature());
  return {head.value + tail.value, head.abs_error + tail.abs_error};
}

Partial rate_given_estimate(const PowerPolicy& pol, Estimate est) {
  const PeakCap cap = pol.cap(est);
  switch (pol.kind()) {
    case PolicyKind::Saturated:
      return constant_power_rate(cap.value);
    case PolicyKind::PeakRule:
      return constant_power_rate(std::min(pol.spec().p_peak(), cap.value));
    case PolicyKind::ThreeRegime:
      return water_filling_rate(pol.g_s1(), cap);
  }
  throw std::logic_error("unknown policy kind");
}

bool cap_ignores_estimate(const ConstraintSpec& spec) {
  const double eps = spec.epsilon;
  return spec.model.no_csi() || eps == 1.0 || (eps == 0.0 && !spec.model.perfect_csi());
}

// Estimate at which the rate integrand has a kink, if any.
std::optional<double> outer_kink(const PowerPolicy& pol) {
  const ConstraintSpec& spec = pol.spec();
  const double scale = pol.cap_scale();
  switch (pol.kind()) {
    case PolicyKind::Saturated:
      return std::nullopt;
    case PolicyKind::PeakRule:
      return policy::estimate_threshold(spec, spec.p_peak() / scale);
    case PolicyKind::ThreeRegime:
      return policy::estimate_threshold(spec, 1.0 / (pol.g_s1() * scale));
  }
  return std::nullopt;
}

PeakCap no_csi_cap(const ConstraintSpec& spec) { return policy::peak_cap(spec, {0.0}); }

// e^{1/p} E1(1/p), the rate of constant power p; 0 at p = 0.
double constant_power_closed(double p) {
  if (p == 0.0) return 0.0;
  if (std::isinf(p)) throw DomainError("constant power must be finite");
  return numerics::exp_integral_e1_scaled(1.0 / p);
}

}  // namespace

CapacityResult ergodic_capacity(const PowerPolicy& pol) {
  const ConstraintSpec& spec = pol.spec();
  if (cap_ignores_estimate(spec)) {
    const Partial p = rate_given_estimate(pol, {0.0});
    return {p.value, Method::Quadrature, p.abs_error};
  }

  double worst_inner = 0.0;
  const auto integrand = [&](double v) {
    if (v > kEstimateCutoff) return 0.0;
    const Partial p = rate_given_estimate(pol, {v});
    worst_inner = std::max(worst_inner, p.abs_error);
    return p.value * std::exp(-v);
  };

  numerics::QuadratureResult total;
  const auto kink = outer_kink(pol);
  if (kink && *kink > 0.0) {
    const auto head = numerics::integrate(integrand, 0.0, *kink, outer_quadrature());
    // Caps like q/v change shape over decades above the kink.
    numerics::QuadratureResult tail;
    if (*kink < kEstimateCutoff) {
      tail = numerics::integrate_log_scale(integrand, *kink, kEstimateCutoff, outer_quadrature());
    }
    total.value = head.value + tail.value;
    total.abs_error = head.abs_error + tail.abs_error;
  } else {
    total = numerics::integrate_semi_infinite(integrand, 0.0, outer_quadrature());
  }
  return {std::max(total.value, 0.0), Method::Quadrature, total.abs_error + worst_inner};
}

CapacityResult ergodic_capacity(const ConstraintSpec& spec) {
  spec.validate();
  return ergodic_capacity(policy::solve_policy(spec));
}

CapacityResult closed_form_no_csi(const ConstraintSpec& spec) {
  spec.validate();
  if (!spec.model.no_csi()) {
    throw std::invalid_argument("closed_form_no_csi requires sigma_p_sq = 1");
  }
  const PeakCap cap = no_csi_cap(spec);

  if (!spec.has_average_budget()) {
    return {constant_power_closed(std::min(spec.p_peak(), cap.value)), Method::ClosedForm, 0.0};
  }
  if (cap.value == 0.0) return {0.0, Method::ClosedForm, 0.0};

  const double p_avg = spec.p_avg();
  if (!cap.unbounded() && p_avg >= cap.value) {
    return {constant_power_closed(cap.value), Method::ClosedForm, 0.0};
  }
  const auto sol = policy::solve_gs1(spec);
  const double g1 = sol.g_s1;
  const auto g2 = policy::gs2_of(g1, cap);
  if (!g2) {
    return {numerics::exp_integral_e1(g1), Method::ClosedForm, 0.0};
  }
  // e^{1/P} E1(g2^2/(g2 - g1)) with g2^2/(g2 - g1) = g2 + 1/P.
  const double last =
      std::exp(-*g2) * numerics::exp_integral_e1_scaled(*g2 + 1.0 / cap.value);
  const double value =
      numerics::exp_integral_e1(g1) - numerics::exp_integral_e1(*g2) + last;
  return {value, Method::ClosedForm, 0.0};
}

CapacityResult asymptotic_capacity(AsymptoticKind kind, double parameter) {
  if (!(parameter > 0.0) || !std::isfinite(parameter)) {
    throw DomainError("asymptotic_capacity: parameter must be finite and > 0");
  }
  switch (kind) {
    case AsymptoticKind::HighAverageNoCsi:
    case AsymptoticKind::HighPeakNoCsi:
    case AsymptoticKind::UnboundedCapPeak:
      return {constant_power_closed(parameter), Method::ClosedForm, 0.0};
    case AsymptoticKind::UnboundedCapAverage:
      return {unconstrained_capacity(parameter), Method::ClosedForm, 0.0};
    case AsymptoticKind::HighPowerPerfectCsi: {
      const double q = parameter;
      if (std::abs(q - 1.0) < 1e-8) {
        // Q ln Q / (Q - 1) = 1 + (Q - 1)/2 + O((Q - 1)^2)
        return {1.0 + 0.5 * (q - 1.0), Method::ClosedForm, 0.0};
      }
      return {q * std::log(q) / (q - 1.0), Method::ClosedForm, 0.0};
    }
  }
  throw std::logic_error("unknown asymptotic kind");
}

double q_equivalent(const ConstraintSpec& spec) {
  const double q = spec.effective_q_peak();
  if (!spec.is_si_outage()) return q;
  return q * -std::log1p(-spec.epsilon);
}

double unconstrained_capacity(double p_avg) {
  return numerics::exp_integral_e1(policy::g_inverse(p_avg));
}

double capacity_loss(double p_avg, double sigma_p_sq, const ConstraintSpec& tmpl) {
  ConstraintSpec spec = tmpl;
  spec.budget = AverageBudget{p_avg};
  spec.model = CrossLinkModel(0.0);
  const double reference = ergodic_capacity(spec).value;
  if (!(reference > 0.0)) {
    throw DomainError("capacity loss undefined: perfect-CSI capacity is zero");
  }
  if (sigma_p_sq == 0.0) return 0.0;
  spec.model = CrossLinkModel(sigma_p_sq);
  const double value = ergodic_capacity(spec).value;
  return 100.0 * (reference - value) / reference;
}

namespace {

void validate_query(const RegionQuery& q) {
  const auto prob = [](double e, const char* name) {
    if (!(e >= 0.0 && e <= 1.0)) throw DomainError(std::string(name) + " must lie in [0, 1]");
  };
  prob(q.eps1, "eps1");
  prob(q.eps2, "eps2");
  if (!(q.q_peak > 0.0) || !(q.q_peak_eq > 0.0)) {
    throw DomainError("q_peak and q_peak_eq must be > 0");
  }
  (void)CrossLinkModel(q.sigma_p_sq);
}

ConstraintSpec interference_spec(double eps, double sigma_p_sq, double q_peak) {
  return {AverageBudget{1.0}, InterferenceOutage{q_peak}, eps, CrossLinkModel(sigma_p_sq)};
}

ConstraintSpec si_spec(double eps, double sigma_p_sq, double q_peak_eq) {
  return {AverageBudget{1.0}, SIOutage{q_peak_eq, 1.0}, eps, CrossLinkModel(sigma_p_sq)};
}

bool caps_ordered(double interference, double si) {
  if (std::isinf(si)) return true;
  if (std::isinf(interference)) return false;
  return interference <= si * (1.0 + 1e-12);
}

}  // namespace

RegionFlags region_membership(const RegionQuery& q) {
  validate_query(q);
  RegionFlags flags{};

  if (q.eps1 == 0.0) {
    flags.in_r1 = true;
  } else if (q.eps2 == 0.0) {
    flags.in_r1 = false;
  } else {
    flags.in_r1 = std::log(1.0 / q.eps1) >= 1.0 / q.eps2 - 1.0;
  }

  flags.in_r2 = q.eps1 == 0.0 && q.eps2 >= 1.0 - std::exp(-q.q_peak / q.q_peak_eq);

  const ConstraintSpec interference = interference_spec(q.eps1, q.sigma_p_sq, q.q_peak);
  const ConstraintSpec si = si_spec(q.eps2, q.sigma_p_sq, q.q_peak_eq);
  flags.in_r3 = true;
  for (double v : kRegionProbeEstimates) {
    const double a = policy::peak_cap(interference, {v}).value;
    const double b = policy::peak_cap(si, {v}).value;
    if (!caps_ordered(a, b)) {
      flags.in_r3 = false;
      break;
    }
  }
  return flags;
}

double r2_boundary_eps2(double q_peak, double q_peak_eq) {
  if (!(q_peak > 0.0) || !(q_peak_eq > 0.0)) {
    throw DomainError("q_peak and q_peak_eq must be > 0");
  }
  const ConstraintSpec interference = interference_spec(0.0, 0.0, q_peak);
  const double target = policy::peak_cap(interference, {1.0}).value;
  const auto gap = [&](double eps2) {
    return policy::peak_cap(si_spec(eps2, 0.0, q_peak_eq), {1.0}).value - target;
  };
  return numerics::find_root_bracketed(gap, {1e-15, 1.0 - 1e-15}, 1e-14);
}

}  // namespace capacity
}  // namespace cogcap
