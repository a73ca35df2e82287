#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "cogcap/capacity.hpp"
#include "cogcap/numerics.hpp"
#include "cogcap/policy.hpp"
#include "cogcap/simulate.hpp"

namespace cogcap::simulate {
namespace {

ConstraintSpec avg_int(double p, double eps, double s2) {
  return {AverageBudget{p}, InterferenceOutage{10.0}, eps, CrossLinkModel(s2)};
}

struct Means {
  double hs = 0, hp_hat = 0, hp = 0, hpp = 0;
};

Means means_of(const ChannelSample& s) {
  Means m;
  for (const auto& d : s.draws) {
    m.hs += d.hs_sq;
    m.hp_hat += d.hp_hat_sq;
    m.hp += d.hp_sq;
    m.hpp += d.hpp_sq;
  }
  const double n = static_cast<double>(s.draws.size());
  return {m.hs / n, m.hp_hat / n, m.hp / n, m.hpp / n};
}

TEST(SampleWorld, UnitMeanMarginals) {
  const std::uint64_t n = 400'000;
  const auto s = sample_world(n, kDefaultSeed, 0.3);
  ASSERT_EQ(s.draws.size(), n);
  const double tol = 4.0 / std::sqrt(static_cast<double>(n));
  const Means m = means_of(s);
  EXPECT_NEAR(m.hs, 1.0, tol);
  EXPECT_NEAR(m.hp_hat, 1.0, tol);
  EXPECT_NEAR(m.hp, 1.0, tol);
  EXPECT_NEAR(m.hpp, 1.0, tol);
  EXPECT_THROW(sample_world(0, 1, 0.3), DomainError);
}

TEST(SampleWorld, PerfectCsiCopiesEstimate) {
  const auto s = sample_world(50'000, 7, 0.0);
  for (const auto& d : s.draws) ASSERT_EQ(d.hp_sq, d.hp_hat_sq);
}

// One-sample Kolmogorov-Smirnov against the conditional law at |h_p_hat|^2 = 1.
TEST(SampleWorld, ConditionalLawPassesKolmogorovSmirnov) {
  const double s2 = 0.5;
  const auto s = sample_world(1'000'000, kDefaultSeed, s2);
  std::vector<double> xs;
  for (const auto& d : s.draws) {
    if (d.hp_hat_sq >= 0.9 && d.hp_hat_sq <= 1.1) xs.push_back(d.hp_sq);
  }
  std::sort(xs.begin(), xs.end());
  const double m = static_cast<double>(xs.size());
  ASSERT_GT(m, 10'000.0);
  const CrossLinkModel model(s2);
  double d_stat = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = fading::cdf_crosslink_given_estimate(xs[i], {1.0}, model);
    d_stat = std::max({d_stat, (i + 1) / m - f, f - i / m});
  }
  EXPECT_LT(d_stat, 1.628 / std::sqrt(m));
}

TEST(SampleWorld, DeterministicAndSeedSensitive) {
  const auto a = sample_world(100'000, 99, 0.7);
  const auto b = sample_world(100'000, 99, 0.7);
  const auto c = sample_world(100'000, 100, 0.7);
  ASSERT_EQ(a.draws.size(), b.draws.size());
  bool same = true;
  bool differs = false;
  for (std::size_t i = 0; i < a.draws.size(); ++i) {
    same = same && a.draws[i].hs_sq == b.draws[i].hs_sq && a.draws[i].hp_sq == b.draws[i].hp_sq;
    differs = differs || a.draws[i].hs_sq != c.draws[i].hs_sq;
  }
  EXPECT_TRUE(same);
  EXPECT_TRUE(differs);
}

TEST(VerifyConstraints, ReportsAreBitIdentical) {
  const auto pol = policy::solve_policy(avg_int(1.0, 0.042, 0.5));
  const auto s = sample_world(200'000, 3, 0.5);
  const auto r1 = verify_constraints(pol, s);
  const auto r2 = verify_constraints(pol, sample_world(200'000, 3, 0.5));
  EXPECT_EQ(r1.mean_power, r2.mean_power);
  EXPECT_EQ(r1.rate_mean, r2.rate_mean);
  EXPECT_EQ(r1.outage_events, r2.outage_events);
  EXPECT_EQ(r1.rate_std_err, r2.rate_std_err);
}

TEST(VerifyConstraints, DisjointSeedsAgreeStatistically) {
  const auto pol = policy::solve_policy(avg_int(1.0, 0.042, 0.5));
  const auto a = verify_constraints(pol, sample_world(300'000, 11, 0.5));
  const auto b = verify_constraints(pol, sample_world(300'000, 12, 0.5));
  EXPECT_NE(a.rate_mean, b.rate_mean);
  const double se = std::hypot(a.rate_std_err, b.rate_std_err);
  EXPECT_LE(std::abs(a.rate_mean - b.rate_mean), 3.0 * se);
}

TEST(VerifyConstraints, OptimalPolicyPassesAllChecks) {
  const auto spec = avg_int(1.0, 0.042, 0.5);
  const auto pol = policy::solve_policy(spec);
  const auto r = verify_constraints(pol, sample_world(kDefaultDraws, kDefaultSeed, 0.5));
  EXPECT_NEAR(r.rate_ci_half_width, 1.96 * r.rate_std_err, 1e-15);
  EXPECT_GE(r.outage_rate, 0.0);
  EXPECT_LE(r.outage_rate, 1.0);
  for (const auto& c : check_report(pol, r, capacity::ergodic_capacity(pol).value)) {
    EXPECT_TRUE(c.pass) << c.metric << " observed " << c.observed << " bound " << c.bound;
  }
}

TEST(VerifyConstraints, InflatedCapFailsOutage) {
  const auto spec = avg_int(10.0, 0.042, 1.0);
  const auto pol = policy::solve_policy(spec).with_cap_scale(2.0);
  const auto r = verify_constraints(pol, sample_world(200'000, kDefaultSeed, 1.0));
  const auto checks = check_report(pol, r, capacity::ergodic_capacity(pol).value);
  EXPECT_FALSE(checks.front().pass);
  EXPECT_EQ(checks.front().metric, "outage");
}

TEST(VerifyConstraints, MismatchedSampleRejected) {
  const auto pol = policy::solve_policy(avg_int(1.0, 0.042, 0.5));
  EXPECT_THROW(verify_constraints(pol, sample_world(10, 1, 0.3)), DomainError);
}

TEST(McCapacity, ZeroAndConstantPower) {
  const auto zero = policy::solve_policy(avg_int(1.0, 0.0, 0.5));
  const auto s = sample_world(100'000, 5, 0.5);
  const auto z = mc_capacity(zero, s);
  EXPECT_EQ(z.value, 0.0);
  EXPECT_EQ(z.method, Method::MonteCarlo);

  // peak budget under eps = 1: constant power P, rate e^{1/P} E1(1/P)
  const ConstraintSpec flat{PeakBudget{2.0}, InterferenceOutage{10.0}, 1.0, CrossLinkModel(0.5)};
  const auto c = mc_capacity(policy::solve_policy(flat), s);
  const double want = std::exp(0.5) * numerics::exp_integral_e1(0.5);
  EXPECT_LE(std::abs(c.value - want), c.err_estimate * 1.5);
}

TEST(McCapacity, UnconstrainedWaterFilling) {
  const auto pol = policy::solve_policy(avg_int(1.0, 1.0, 0.5));
  const auto r = verify_constraints(pol, sample_world(500'000, 21, 0.5));
  for (const auto& c : check_report(pol, r, capacity::ergodic_capacity(pol).value)) {
    EXPECT_TRUE(c.pass) << c.metric;
  }
  EXPECT_LE(std::abs(r.rate_mean - capacity::unconstrained_capacity(1.0)), 3.0 * r.rate_std_err);
}

TEST(IsOutage, ZeroPowerNeverCounts) {
  const ChannelDraw d{1.0, 1.0, 5.0, 0.1};
  const ConstraintSpec si{AverageBudget{1.0}, SIOutage{10.0, 1.0}, 0.1, CrossLinkModel(0.5)};
  EXPECT_FALSE(is_outage(si, d, 0.0));
  EXPECT_TRUE(is_outage(si, d, 1.0));
  EXPECT_FALSE(is_outage(avg_int(1.0, 0.1, 0.5), d, 1.0));
  EXPECT_TRUE(is_outage(avg_int(1.0, 0.1, 0.5), d, 2.5));
}

}  // namespace
}  // namespace cogcap::simulate
