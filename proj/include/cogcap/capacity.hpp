#pragma once

// Ergodic capacity of the secondary link, E[ln(1 + P* |h_s|^2)] in nats per
// channel use, together with the closed forms available without cross-link
// knowledge, high-power and unconstrained limits, the capacity-loss metric
// and the eps1/eps2 comparison regions.

#include <string_view>

#include "cogcap/policy.hpp"

namespace cogcap {

enum class Method { ClosedForm, Quadrature, MonteCarlo };

std::string_view to_string(Method method);

struct CapacityResult {
  double value = 0.0;  // npcu
  Method method = Method::Quadrature;
  double err_estimate = 0.0;
};

/// A pair of interference (eps1) and SI (eps2) outage levels to compare.
struct RegionQuery {
  double eps1;
  double eps2;
  double sigma_p_sq;
  double q_peak;     // interference-outage threshold
  double q_peak_eq;  // p_pp / lambda_th of the SI outage
};

struct RegionFlags {
  bool in_r1;  // no-CSI: SI cap >= interference cap
  bool in_r2;  // perfect CSI with eps1 = 0
  bool in_r3;  // SI cap >= interference cap at every probed estimate
};

enum class AsymptoticKind {
  HighAverageNoCsi,     // p_avg -> inf: e^{1/cap} E1(1/cap), parameter = cap
  UnboundedCapAverage,  // cap -> inf: E1(G^-1(p_avg)), parameter = p_avg
  HighPeakNoCsi,        // p_peak -> inf: e^{1/cap} E1(1/cap), parameter = cap
  UnboundedCapPeak,     // cap -> inf: e^{1/p_peak} E1(1/p_peak), parameter = p_peak
  HighPowerPerfectCsi,  // Q ln Q / (Q - 1), parameter = Q_eq
};

namespace capacity {

/// Capacity of the optimal policy for `spec` by nested adaptive quadrature:
/// outer over |h_p_hat|^2 ~ Exp(1) (skipped when the cap does not depend on
/// the estimate), inner over |h_s|^2 ~ Exp(1) split at g_s1 and g_s2.
CapacityResult ergodic_capacity(const ConstraintSpec& spec);

/// Same, for an already solved policy.
CapacityResult ergodic_capacity(const PowerPolicy& policy);

/// Closed forms for sigma_p_sq = 1 (no cross-link knowledge). Throws
/// std::invalid_argument for any other model.
CapacityResult closed_form_no_csi(const ConstraintSpec& spec);

CapacityResult asymptotic_capacity(AsymptoticKind kind, double parameter);

/// Q_eq used by the perfect-CSI high-power limit: q_peak for the
/// interference outage, q_peak * ln(1/(1 - eps)) for the SI outage.
double q_equivalent(const ConstraintSpec& spec);

/// Capacity with an average budget and no outage constraint, E1(G^-1(p_avg)).
double unconstrained_capacity(double p_avg);

/// 100 * (C(perfect CSI) - C(sigma_p_sq)) / C(perfect CSI) for the average
/// budget p_avg; the other constraint fields come from `tmpl`. Throws
/// DomainError when the perfect-CSI capacity is zero.
double capacity_loss(double p_avg, double sigma_p_sq, const ConstraintSpec& tmpl);

/// Estimates probed by the R3 test; the smallest stands in for the
/// h_p_hat -> 0 limit.
inline constexpr double kRegionProbeEstimates[] = {1e-8, 0.01, 0.1, 0.25, 0.5, 1.0,
                                                   2.0,  3.0,  5.0, 8.0,  12.0, 20.0};

RegionFlags region_membership(const RegionQuery& query);

/// eps2 at which the perfect-CSI SI cap equals the perfect-CSI interference
/// cap, found numerically (1 - e^-1 when q_peak = q_peak_eq).
double r2_boundary_eps2(double q_peak, double q_peak_eq);

}  // namespace capacity
}  // namespace cogcap
