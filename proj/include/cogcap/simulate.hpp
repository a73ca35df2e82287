#pragma once

// Monte Carlo oracle. Draws the four channel gains, applies a policy per
// draw and accumulates empirical power, outage and rate statistics.
//
// Draws come in fixed-size blocks; block b is generated by mt19937_64
// seeded from (seed, b), so any block can be reproduced on its own and
// results do not depend on how blocks are spread over threads.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cogcap/capacity.hpp"

namespace cogcap {

struct ChannelDraw {
  double hs_sq;
  double hp_hat_sq;
  double hp_sq;
  double hpp_sq;
};

/// A reproducible sample of the channel law.
struct ChannelSample {
  std::uint64_t seed = 0;
  double sigma_p_sq = 0.0;
  std::vector<ChannelDraw> draws;
};

/// Outage counts for one decile of |h_p_hat|^2 (population deciles of Exp(1)).
struct StratumOutage {
  double lo = 0.0;
  double hi = 0.0;
  std::uint64_t active = 0;  // draws with P > 0
  std::uint64_t events = 0;
};

struct SimulationReport {
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  double mean_power = 0.0;
  double power_std_err = 0.0;
  double max_power = 0.0;
  std::uint64_t active = 0;  // draws with P > 0
  std::uint64_t outage_events = 0;
  double outage_rate = 0.0;  // events / active
  double rate_mean = 0.0;    // npcu
  double rate_std_err = 0.0;
  double rate_ci_half_width = 0.0;  // 1.96 sd / sqrt(n)
  std::array<StratumOutage, 10> strata{};
};

namespace simulate {

inline constexpr std::uint64_t kDefaultSeed = 20240607;
inline constexpr std::uint64_t kDefaultDraws = 1'000'000;
inline constexpr std::size_t kBlockSize = 1 << 15;

/// Relative slack applied to the outage event so that perfect-CSI draws
/// sitting exactly on the cap are not counted through rounding.
inline constexpr double kOutageSlack = 1e-9;

/// Throws DomainError when n == 0.
ChannelSample sample_world(std::uint64_t n, std::uint64_t seed, double sigma_p_sq);

/// Empirical power, outage and rate of `policy` over the draws. The sample
/// must have been drawn with the policy's sigma_p_sq.
SimulationReport verify_constraints(const PowerPolicy& policy, const ChannelSample& sample);

/// rate_mean with err_estimate = 95% CI half width.
CapacityResult mc_capacity(const PowerPolicy& policy, const ChannelSample& sample);

/// True when the draw is an outage for a policy transmitting `power`.
bool is_outage(const ConstraintSpec& spec, const ChannelDraw& draw, double power);

struct Check {
  std::string metric;
  double observed;
  double bound;
  bool pass;
};

/// Compares a report with the analytic capacity and the constraints:
/// overall and per-decile outage <= eps + 3 sqrt(eps (1 - eps) / n_bin),
/// mean power within 3 standard errors of p_avg when the budget binds
/// (at most p_avg + 3 SE when saturated), power <= p_peak under a peak
/// budget, and MC rate within 3 standard errors of `analytic`.
std::vector<Check> check_report(const PowerPolicy& policy, const SimulationReport& report,
                                double analytic);

}  // namespace simulate
}  // namespace cogcap
