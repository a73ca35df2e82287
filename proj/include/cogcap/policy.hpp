#pragma once

// Optimal secondary transmit power under an average or peak budget and a
// per-estimate outage constraint. The outage constraint turns into a
// variable peak cap Q / F^-1_{X|h_p_hat}(1 - eps); under an average budget
// the policy is water-filling clipped at that cap:
//
//   P(h_s, h_p_hat) = min(cap(h_p_hat), [1/g_s1 - 1/|h_s|^2]^+)
//
// with the water level 1/g_s1 set so the budget is met with equality, or
// the cap itself when the budget is large enough (saturated regime).

#include <optional>
#include <variant>

#include "cogcap/fading.hpp"

namespace cogcap {

struct AverageBudget {
  double p_avg;
  bool operator==(const AverageBudget&) const = default;
};

struct PeakBudget {
  double p_peak;
  bool operator==(const PeakBudget&) const = default;
};

using Budget = std::variant<AverageBudget, PeakBudget>;

/// Prob{P |h_p|^2 >= q_peak | h_s, h_p_hat} <= eps.
struct InterferenceOutage {
  double q_peak;
  bool operator==(const InterferenceOutage&) const = default;
};

/// Prob{P_pp |h_pp|^2 / (P |h_p|^2) <= lambda_th | h_s, h_p_hat} <= eps.
/// Equivalent to an interference outage on beta = |h_p|^2/|h_pp|^2 with
/// q_peak = p_pp / lambda_th.
struct SIOutage {
  double p_pp;
  double lambda_th;
  bool operator==(const SIOutage&) const = default;
};

using Outage = std::variant<InterferenceOutage, SIOutage>;

/// Full problem statement for one operating point.
struct ConstraintSpec {
  Budget budget;
  Outage outage;
  double epsilon;
  CrossLinkModel model;

  /// Throws DomainError naming the offending field.
  void validate() const;

  bool has_average_budget() const { return std::holds_alternative<AverageBudget>(budget); }
  bool is_si_outage() const { return std::holds_alternative<SIOutage>(outage); }
  double p_avg() const;   // throws for a peak budget
  double p_peak() const;  // throws for an average budget

  /// q_peak, or p_pp / lambda_th for the SI outage.
  double effective_q_peak() const;

  bool operator==(const ConstraintSpec&) const = default;
};

/// Peak power allowed by the outage constraint for one estimate.
/// +inf encodes the unbounded cap (eps = 1, or a zero perfect-CSI gain).
struct PeakCap {
  double value;
  bool unbounded() const;
};

enum class PolicyKind { Saturated, ThreeRegime, PeakRule };

class PowerPolicy {
 public:
  static PowerPolicy saturated(const ConstraintSpec& spec);
  static PowerPolicy three_regime(const ConstraintSpec& spec, double g_s1);
  static PowerPolicy peak_rule(const ConstraintSpec& spec);

  PolicyKind kind() const noexcept { return kind_; }
  const ConstraintSpec& spec() const noexcept { return spec_; }

  /// Water-filling threshold; only meaningful for ThreeRegime.
  double g_s1() const;

  /// The cap this policy enforces (including any cap scaling).
  PeakCap cap(Estimate est) const;

  /// Transmit power for secondary gain hs_sq and estimate est.
  double power(double hs_sq, Estimate est) const;

  /// Copy of this policy whose cap is multiplied by `factor`. Only used to
  /// build deliberately infeasible policies for negative controls.
  PowerPolicy with_cap_scale(double factor) const;
  double cap_scale() const noexcept { return cap_scale_; }

 private:
  PowerPolicy(PolicyKind kind, ConstraintSpec spec, double g_s1)
      : kind_(kind), spec_(std::move(spec)), g_s1_(g_s1) {}

  PolicyKind kind_;
  ConstraintSpec spec_;
  double g_s1_;
  double cap_scale_ = 1.0;
};

namespace policy {

/// Q / F^-1_{X|h_p_hat}(1 - eps), with the perfect-CSI and no-CSI closed
/// forms. For sigma_p_sq = 0 the estimate is the true |h_p|^2.
PeakCap peak_cap(const ConstraintSpec& spec, Estimate est);

/// cap(est) >= level, decided from one CDF evaluation instead of a
/// quantile inversion.
bool cap_at_least(const ConstraintSpec& spec, Estimate est, double level);

/// E over |h_p_hat|^2 ~ Exp(1) of the cap; +inf when it diverges.
double expected_peak_cap(const ConstraintSpec& spec);

/// Smallest |h_p_hat|^2 whose cap lies below `level` (clipped at 0), or
/// nullopt when no estimate qualifies. Caps are nonincreasing in the
/// estimate, so the qualifying estimates form [threshold, inf).
std::optional<double> estimate_threshold(const ConstraintSpec& spec, double level);

/// G(x) = E[(1/x - 1/|h_s|^2)^+] = e^-x / x - E1(x) for Rayleigh h_s.
double g_function(double x);

/// Unique x > 0 with G(x) = p.
double g_inverse(double p);

/// Expected power of the capped water-filling profile with threshold x:
///   K(x) = G(x) - E_{h_p_hat in S_x}[G((1/x - cap)^-1)],
///   S_x = {h_p_hat : cap(h_p_hat) < 1/x}.
double k_function(double x, const ConstraintSpec& spec);

struct AverageSolution {
  bool saturated;
  double g_s1;  // valid when !saturated
  bool clipped = false;  // K(1e-300) < p_avg: g_s1 held at 1e-300
};

/// Saturated when p_avg >= E[cap]; otherwise g_s1 = K^-1(p_avg). When
/// E[cap] diverges slowly (perfect CSI) the root can lie below 1e-300; the
/// threshold is then clipped there, which changes the policy only on
/// estimates of probability below 1e-290.
AverageSolution solve_gs1(const ConstraintSpec& spec);

/// (1/g_s1 - cap)^-1 when positive, else nullopt.
std::optional<double> gs2_of(double g_s1, PeakCap cap);

/// Lower end of S_{g_s1}: the smallest estimate with g_s1 * cap < 1.
std::optional<double> threshold_hp0(double g_s1, const ConstraintSpec& spec);

/// Solves the policy for either budget kind.
PowerPolicy solve_policy(const ConstraintSpec& spec);

/// Constant-in-|h_s| rule min(P_peak, cap(est)) for a peak budget.
PowerPolicy peak_policy(const ConstraintSpec& spec);

double optimal_power(double hs_sq, Estimate est, const PowerPolicy& policy);

}  // namespace policy
}  // namespace cogcap
