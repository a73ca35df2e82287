// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails. With an argument N only criterion N runs.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cogcap/capacity.hpp"
#include "cogcap/numerics.hpp"
#include "cogcap/policy.hpp"
#include "cogcap/simulate.hpp"

namespace {

using namespace cogcap;

// Tolerances.
constexpr double kSpecialRel = 1e-9;
constexpr double kMarcumAbs = 1e-10;
constexpr double kRoundTrip = 1e-8;
constexpr double kClosedFormGap = 1e-6;
constexpr double kSpotTol = 0.01;
constexpr double kLowPowerGap = 0.01;
constexpr double kFlatTol = 1e-8;
constexpr double kSaturationTol = 1e-6;
constexpr double kPerfectCsiRel = 0.01;
constexpr double kR2Tol = 1e-4;
constexpr double kMatchedCapRel = 0.002;
constexpr double kBudgetRel = 1e-6;
constexpr double kOrderSlack = 1e-9;  // quadrature noise when comparing capacities

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (!pass) detail << "; ";
      detail << what;
      pass = false;
    }
  }
};

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

ConstraintSpec avg(double p, bool si, double eps, double s2, double q = 10.0) {
  if (si) return {AverageBudget{p}, SIOutage{q, 1.0}, eps, CrossLinkModel(s2)};
  return {AverageBudget{p}, InterferenceOutage{q}, eps, CrossLinkModel(s2)};
}

ConstraintSpec peak(double p, bool si, double eps, double s2, double q = 10.0) {
  if (si) return {PeakBudget{p}, SIOutage{q, 1.0}, eps, CrossLinkModel(s2)};
  return {PeakBudget{p}, InterferenceOutage{q}, eps, CrossLinkModel(s2)};
}

double capacity_of(const ConstraintSpec& s) { return capacity::ergodic_capacity(s).value; }

double db(double x) { return std::pow(10.0, x / 10.0); }

// 1. Special functions against 40-digit references.
void special_functions(Outcome& out) {
  using namespace numerics;
  struct Ref {
    double x, v;
  };
  double worst = 0.0;
  const auto rel = [&](double got, double want) {
    worst = std::max(worst, std::abs(got - want) / std::abs(want));
  };
  for (const Ref& r : {Ref{1e-6, 13.238295893062491244}, Ref{0.01, 4.0379295765381138318},
                       Ref{0.5, 0.55977359477616081175}, Ref{1.0, 0.21938393439552027368},
                       Ref{5.0, 0.0011482955912753257973}, Ref{10.0, 4.1569689296853242774e-6},
                       Ref{50.0, 3.7832640295504590187e-24},
                       Ref{200.0, 6.8852261063076355977e-90}}) {
    rel(exp_integral_e1(r.x), r.v);
  }
  for (const Ref& r : {Ref{0.5, 1.0634833707413235193}, Ref{1.0, 1.2660658777520083356},
                       Ref{5.0, 27.239871823604446895}, Ref{10.0, 2815.7166284662544715},
                       Ref{30.0, 781672297823.97748972}}) {
    rel(bessel_i0(r.x), r.v);
  }
  for (const Ref& r : {Ref{50.0, 0.056561626647454193}, Ref{100.0, 0.039944379299096682648},
                       Ref{700.0, 0.015081295651531357587}}) {
    rel(bessel_i0_scaled(r.x), r.v);
  }
  for (const Ref& r : {Ref{-0.3, -0.48940222718021496904}, Ref{-0.1, -0.11183255915896296483},
                       Ref{0.5, 0.35173371124919582602}, Ref{1.0, 0.567143290409783873},
                       Ref{10.0, 1.7455280027406993831}, Ref{1000.0, 5.2496028524015962271},
                       Ref{1e10, 20.028685413304950781}}) {
    rel(lambert_w0(r.x), r.v);
  }
  for (const Ref& r : {Ref{-5.0, 0.0066930004977309932744}, Ref{5.0, 3.6934413589606498043},
                       Ref{50.0, 46.16771916549208967}, Ref{700.0, 693.45830887902549834},
                       Ref{1e4, 9990.7905809942519249}}) {
    rel(lambert_w0_of_exp(r.x), r.v);
  }
  struct MRef {
    double a, b, q;
  };
  double worst_q = 0.0;
  for (const MRef& r :
       {MRef{0.0, 1.0, 0.6065306597126334236}, MRef{1.0, 1.0, 0.73287980379682021825},
        MRef{1.0, 2.0, 0.26901206003590999668}, MRef{2.0, 1.0, 0.91810769636940600391},
        MRef{0.5, 3.0, 0.017843673386482211916}, MRef{3.0, 0.5, 0.99830023270553937367},
        MRef{5.0, 5.0, 0.54009838677371835421}, MRef{5.0, 7.0, 0.027714786295963427797},
        MRef{10.0, 12.0, 0.025329474297941417811}, MRef{10.0, 8.0, 0.98010420964205033449},
        MRef{20.0, 25.0, 3.2175727404389550468e-7}, MRef{0.1, 0.1, 0.9950372925748537495},
        MRef{30.0, 30.0, 0.5066499620620340759}}) {
    worst_q = std::max(worst_q, std::abs(marcum_q1(r.a, r.b) - r.q));
  }
  out.detail << "max rel err " << num(worst) << ", max Q1 abs err " << num(worst_q);
  out.pass = worst <= kSpecialRel && worst_q <= kMarcumAbs;
}

// 2. F(F^-1(u)) = u for both conditional laws.
void round_trips(Outcome& out) {
  double worst = 0.0;
  for (double v : {0.1, 1.0, 5.0}) {
    for (double s2 : {0.1, 0.5, 0.9}) {
      const CrossLinkModel m(s2);
      for (int k = 1; k <= 19; ++k) {
        const double u = 0.05 * k;
        const double a = fading::inv_cdf_crosslink_given_estimate(u, {v}, m);
        const double b = fading::inv_cdf_beta_given_estimate(u, {v}, m);
        worst = std::max(worst, std::abs(fading::cdf_crosslink_given_estimate(a, {v}, m) - u));
        worst = std::max(worst, std::abs(fading::cdf_beta_given_estimate(b, {v}, m) - u));
      }
    }
  }
  out.detail << "max |F(F^-1(u)) - u| = " << num(worst);
  out.pass = worst <= kRoundTrip;
}

// 3. No-CSI closed forms against quadrature.
void closed_forms(Outcome& out) {
  double worst = 0.0;
  int middle = 0;
  for (double p : {0.5, 1.0, 2.0, 3.1545, 10.0}) {
    for (double eps : {0.042, 0.24}) {
      for (bool si : {false, true}) {
        for (const auto& s : {avg(p, si, eps, 1.0), peak(p, si, eps, 1.0)}) {
          worst = std::max(worst, std::abs(capacity::closed_form_no_csi(s).value - capacity_of(s)));
          if (s.has_average_budget()) {
            const auto sol = policy::solve_gs1(s);
            if (!sol.saturated && policy::gs2_of(sol.g_s1, policy::peak_cap(s, {0.0}))) ++middle;
          }
        }
      }
    }
  }
  out.detail << "max |closed - quadrature| = " << num(worst) << " npcu over 40 points, "
             << middle << " in the capped water-filling branch";
  out.pass = worst <= kClosedFormGap && middle > 0;
}

// 4. Operating-point capacities.
void spot_values(Outcome& out) {
  const double c_peak = capacity_of(peak(1.0, false, 0.042, 1.0));
  const double c_avg = capacity_of(avg(1.0, false, 0.042, 1.0));
  out.detail << "peak 0 dB: " << num(c_peak) << " npcu, average 0 dB: " << num(c_avg) << " npcu";
  out.require(std::abs(c_peak - 0.596) <= kSpotTol, "peak value off");
  out.require(std::abs(c_avg - 0.71) <= kSpotTol, "average value off");
}

// 5. Constrained and unconstrained capacity coincide at low power.
void low_power(Outcome& out) {
  double worst = 0.0;
  for (double s2 : {0.0, 0.5, 1.0}) {
    for (double x = -20.0; x <= 2.0 + 1e-9; x += 1.0) {
      const double p = db(x);
      worst = std::max(worst, std::abs(capacity_of(avg(p, false, 0.042, s2)) -
                                       capacity::unconstrained_capacity(p)));
    }
  }
  out.detail << "max gap for P_avg <= 2 dB: " << num(worst) << " npcu";
  out.pass = worst <= kLowPowerGap;
}

// 6. Saturation plateau and the perfect-CSI high-power limit.
void saturation(Outcome& out) {
  const auto base = avg(1.0, false, 0.042, 1.0);
  const double cap = policy::peak_cap(base, {0.0}).value;
  const double limit = capacity::asymptotic_capacity(AsymptoticKind::HighAverageNoCsi, cap).value;
  double lo = 1e300;
  double hi = -1e300;
  for (double p : {cap * 1.001, 5.0, 10.0, 100.0, 1e4}) {
    const double c = capacity_of(avg(p, false, 0.042, 1.0));
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  const double perfect = capacity_of(avg(1e4, false, 0.042, 0.0));
  const double q_limit =
      capacity::asymptotic_capacity(AsymptoticKind::HighPowerPerfectCsi, 10.0).value;
  const double rel = std::abs(perfect - q_limit) / q_limit;
  out.detail << "plateau spread " << num(hi - lo) << ", plateau vs limit "
             << num(std::abs(lo - limit)) << " (limit " << num(limit) << "), perfect CSI at 40 dB "
             << num(perfect) << " vs " << num(q_limit) << " (rel " << num(rel) << ")";
  out.require(hi - lo <= kFlatTol, "plateau not flat");
  out.require(std::abs(lo - limit) <= kSaturationTol && std::abs(hi - limit) <= kSaturationTol,
              "plateau differs from limit");
  out.require(rel <= kPerfectCsiRel, "perfect-CSI limit missed");
}

// 7. Region map.
void regions(Outcome& out) {
  const double r2 = capacity::r2_boundary_eps2(10.0, 10.0);
  int members = 0;
  int bad = 0;
  for (int i = 1; i <= 99; ++i) {
    for (int j = 1; j <= 99; ++j) {
      const RegionQuery q{0.01 * i, 0.01 * j, 0.5, 10.0, 10.0};
      if (capacity::region_membership(q).in_r1) {
        ++members;
        if (q.eps1 > q.eps2) ++bad;
      }
    }
  }
  const double a = policy::peak_cap(avg(1.0, false, 0.042, 1.0), {0.0}).value;
  const double b = policy::peak_cap(avg(1.0, true, 0.24, 1.0), {0.0}).value;
  const double rel = std::abs(a - b) / a;
  out.detail << "R2 boundary eps2 = " << num(r2) << ", R1 members " << members << " with " << bad
             << " violating eps1 <= eps2, matched caps " << num(a) << " / " << num(b);
  out.require(std::abs(r2 - (1.0 - std::exp(-1.0))) <= kR2Tol, "R2 boundary");
  out.require(members > 0 && bad == 0, "R1 implication");
  out.require(rel <= kMatchedCapRel, "matched caps");
}

// 8. Monte Carlo over the acceptance grid:
// sigma_p^2 x {avg 0 dB, avg 10 dB, peak 0 dB} x {interference, SI} x eps.
void monte_carlo(Outcome& out) {
  const auto start = std::chrono::steady_clock::now();
  int specs = 0;
  int failed = 0;
  for (double s2 : {0.0, 0.3, 0.7, 1.0}) {
    const auto sample = simulate::sample_world(simulate::kDefaultDraws, simulate::kDefaultSeed, s2);
    for (bool si : {false, true}) {
      for (double eps : {0.042, 0.24, 1.0}) {
        for (const auto& s : {avg(1.0, si, eps, s2), avg(10.0, si, eps, s2), peak(1.0, si, eps, s2)}) {
          ++specs;
          const auto pol = policy::solve_policy(s);
          const double analytic = capacity::ergodic_capacity(pol).value;
          const auto report = simulate::verify_constraints(pol, sample);
          for (const auto& c : simulate::check_report(pol, report, analytic)) {
            if (c.pass) continue;
            ++failed;
            out.require(false, std::string(si ? "si" : "interference") + " s2=" + num(s2) +
                                   " eps=" + num(eps) + " " + c.metric + " " + num(c.observed) +
                                   " > " + num(c.bound));
          }
        }
      }
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream head;
  head << specs << " specs, n = " << simulate::kDefaultDraws << ", " << failed
       << " failed checks, " << num(secs) << " s";
  const std::string rest = out.detail.str();
  out.detail.str(head.str() + (rest.empty() ? "" : ": " + rest));
  out.require(secs < 300.0, "runtime over 5 min");
}

// 9. Properties.
void properties(Outcome& out) {
  const auto nondecreasing = [&](const std::vector<double>& ys, const std::string& what) {
    for (std::size_t i = 1; i < ys.size(); ++i) {
      if (ys[i] < ys[i - 1] - kOrderSlack) {
        out.require(false, what + " drops by " + num(ys[i - 1] - ys[i]));
        return;
      }
    }
  };

  for (bool si : {false, true}) {
    const std::string kind = si ? "si" : "interference";
    const double eps0 = si ? 0.24 : 0.042;
    for (double s2 : {0.0, 0.5, 1.0}) {
      std::vector<double> by_avg, by_peak, by_eps, by_q;
      for (double x = -10.0; x <= 30.0; x += 5.0) {
        by_avg.push_back(capacity_of(avg(db(x), si, eps0, s2)));
        by_peak.push_back(capacity_of(peak(db(x), si, eps0, s2)));
      }
      for (double eps : {0.0, 0.01, 0.042, 0.1, 0.24, 0.5, 0.9, 1.0}) {
        by_eps.push_back(capacity_of(avg(3.0, si, eps, s2)));
      }
      for (double q : {0.5, 1.0, 3.0, 10.0, 30.0}) by_q.push_back(capacity_of(avg(3.0, si, eps0, s2, q)));
      const std::string tag = kind + " s2=" + num(s2);
      nondecreasing(by_avg, tag + " C(P_avg)");
      nondecreasing(by_peak, tag + " C(P_peak)");
      nondecreasing(by_eps, tag + " C(eps)");
      nondecreasing(by_q, tag + " C(Q)");
    }
  }

  // Error variance: every power on the curve grid, both outage kinds.
  double worst_rise = 0.0;
  std::string worst_at;
  for (bool si : {false, true}) {
    const double eps0 = si ? 0.24 : 0.042;
    for (double x = -10.0; x <= 30.0; x += 2.5) {
      double prev = 1e300;
      double prev_s2 = 0.0;
      for (double s2 : {0.0, 0.1, 0.3, 0.5, 0.7, 1.0}) {
        const double c = capacity_of(avg(db(x), si, eps0, s2));
        if (c - prev > worst_rise) {
          worst_rise = c - prev;
          worst_at = std::string(si ? "si" : "interference") + " at " + num(x) + " dB, s2 " +
                     num(prev_s2) + " -> " + num(s2);
        }
        prev = c;
        prev_s2 = s2;
      }
    }
  }
  if (worst_rise > kOrderSlack) {
    out.require(false, "C rises with s2 by up to " + num(worst_rise) + " npcu (" + worst_at + ")");
  }

  // Min form against regime form.
  double worst_form = 0.0;
  for (const auto& s : {avg(1.0, false, 0.042, 0.5), avg(2.0, true, 0.24, 0.3)}) {
    const auto pol = policy::solve_policy(s);
    const double g1 = pol.g_s1();
    for (int j = 0; j < 100; ++j) {
      const double v = 0.06 * j + 0.005;
      const PeakCap cap = pol.cap({v});
      const auto g2 = policy::gs2_of(g1, cap);
      for (int i = 0; i < 100; ++i) {
        const double hs = 0.05 * i + 0.002;
        double regime = 0.0;
        if (hs >= g1) regime = (!g2 || hs < *g2) ? 1.0 / g1 - 1.0 / hs : cap.value;
        worst_form = std::max(worst_form, std::abs(pol.power(hs, {v}) - regime));
      }
    }
  }
  out.require(worst_form <= 1e-12, "min form differs from regime form by " + num(worst_form));

  // G and K strictly decreasing.
  const auto k_spec = avg(1.0, false, 0.042, 0.5);
  double prev_g = 1e300;
  double prev_k = 1e300;
  bool monotone = true;
  for (double x = 1e-3; x < 30.0; x *= 1.2) {
    const double g = policy::g_function(x);
    const double k = policy::k_function(x, k_spec);
    monotone = monotone && g < prev_g && k < prev_k;
    prev_g = g;
    prev_k = k;
  }
  out.require(monotone, "G or K not strictly decreasing");

  // Budget exactness through K.
  double worst_budget = 0.0;
  for (double s2 : {0.0, 0.3, 0.7, 1.0}) {
    for (bool si : {false, true}) {
      for (double p : {0.3, 1.0, 3.0}) {
        const auto s = avg(p, si, si ? 0.24 : 0.042, s2);
        const auto sol = policy::solve_gs1(s);
        if (sol.saturated) continue;
        worst_budget = std::max(worst_budget, std::abs(policy::k_function(sol.g_s1, s) - p) / p);
      }
    }
  }
  out.require(worst_budget <= kBudgetRel, "budget gap " + num(worst_budget));

  if (out.pass) {
    out.detail << "monotone in P_avg, P_peak, eps, Q and s2; forms agree to " << num(worst_form)
               << "; budget gap " << num(worst_budget);
  }
}

// 10. Capacity loss brackets.
void capacity_loss(Outcome& out) {
  const auto tmpl = avg(1.0, false, 0.042, 0.0);
  const double at10 = capacity::capacity_loss(10.0, 0.1, tmpl);
  double worst0 = 0.0;
  for (double s2 = 0.05; s2 <= 1.0 + 1e-9; s2 += 0.05) {
    worst0 = std::max(worst0, std::abs(capacity::capacity_loss(1.0, std::min(s2, 1.0), tmpl)));
  }
  out.detail << "loss at 10 dB, s2 = 0.1: " << num(at10) << "%, max |loss| at 0 dB: " << num(worst0)
             << "%";
  out.require(at10 > 10.0, "loss at 10 dB not above 10%");
  out.require(worst0 < 1.0, "loss at 0 dB not below 1%");
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"special functions", special_functions},
      {"inverse CDF round trips", round_trips},
      {"no-CSI closed forms", closed_forms},
      {"operating-point values", spot_values},
      {"low-power coincidence", low_power},
      {"saturation and asymptotics", saturation},
      {"region boundaries", regions},
      {"Monte Carlo verification", monte_carlo},
      {"monotonicity and policy properties", properties},
      {"capacity loss trend", capacity_loss}};

  int only = 0;
  if (argc > 1) {
    only = std::atoi(argv[1]);
    if (only < 1 || only > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "usage: %s [1-%zu]\n", argv[0], criteria.size());
      return 2;
    }
  }

  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<int>(i) + 1 != only) continue;
    Outcome out;
    try {
      criteria[i].second(out);
    } catch (const std::exception& e) {
      out.require(false, std::string("exception: ") + e.what());
    }
    all = all && out.pass;
    std::printf("criterion %zu %s: %s: %s\n", i + 1, out.pass ? "PASS" : "FAIL",
                criteria[i].first.c_str(), out.detail.str().c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
