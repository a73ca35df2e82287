#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "cogcap/numerics.hpp"

namespace cogcap::numerics {

namespace {

// 15-point Kronrod abscissae on [-1, 1] (non-negative half) with the
// Kronrod weights and the embedded 7-point Gauss weights.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

// One Gauss-Kronrod panel with the QUADPACK error heuristic.
Panel gk15(const RealFunction& f, double a, double b, std::size_t& evals) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double abs_half = std::abs(half);

  const double fc = f(center);
  double result_gauss = fc * kWg[3];
  double result_kronrod = fc * kWgk[7];
  double result_abs = std::abs(result_kronrod);
  std::array<double, 7> fv1{};
  std::array<double, 7> fv2{};

  for (int j = 0; j < 3; ++j) {
    const int jtw = 2 * j + 1;
    const double dx = half * kXgk[jtw];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    fv1[jtw] = f1;
    fv2[jtw] = f2;
    result_gauss += kWg[j] * (f1 + f2);
    result_kronrod += kWgk[jtw] * (f1 + f2);
    result_abs += kWgk[jtw] * (std::abs(f1) + std::abs(f2));
  }
  for (int j = 0; j < 4; ++j) {
    const int jtwm1 = 2 * j;
    const double dx = half * kXgk[jtwm1];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    fv1[jtwm1] = f1;
    fv2[jtwm1] = f2;
    result_kronrod += kWgk[jtwm1] * (f1 + f2);
    result_abs += kWgk[jtwm1] * (std::abs(f1) + std::abs(f2));
  }
  evals += 15;

  const double mean = 0.5 * result_kronrod;
  double result_asc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) {
    result_asc += kWgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));
  }
  result_asc *= abs_half;
  result_abs *= abs_half;

  double err = std::abs((result_kronrod - result_gauss) * half);
  if (result_asc != 0.0 && err != 0.0) {
    err = result_asc * std::min(1.0, std::pow(200.0 * err / result_asc, 1.5));
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (result_abs > std::numeric_limits<double>::min() / (50.0 * eps)) {
    err = std::max(50.0 * eps * result_abs, err);
  }
  return {a, b, result_kronrod * half, err};
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0)) throw DomainError("QuadratureSpec: rel_tol must be > 0");
  if (!(abs_tol >= 0.0)) throw DomainError("QuadratureSpec: abs_tol must be >= 0");
  if (max_subdivisions < 1) {
    throw DomainError("QuadratureSpec: max_subdivisions must be >= 1");
  }
}

QuadratureResult integrate(const RealFunction& f, double a, double b,
                           const QuadratureSpec& spec) {
  spec.validate();
  if (a == b) return {};
  std::size_t evals = 0;

  std::priority_queue<Panel> panels;
  const Panel first = gk15(f, a, b, evals);
  panels.push(first);
  double total = first.value;
  double total_err = first.error;

  auto converged = [&] {
    return total_err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
  };

  std::size_t subdivisions = 1;
  while (!converged()) {
    if (subdivisions >= spec.max_subdivisions) {
      throw ConvergenceError("integrate: tolerance not reached within max_subdivisions",
                             total, total_err);
    }
    const Panel worst = panels.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= std::min(worst.a, worst.b) || mid >= std::max(worst.a, worst.b)) {
      // Panel cannot be split further in double precision.
      throw ConvergenceError("integrate: panel width reached machine resolution",
                             total, total_err);
    }
    panels.pop();
    const Panel left = gk15(f, worst.a, mid, evals);
    const Panel right = gk15(f, mid, worst.b, evals);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++subdivisions;

    // Re-sum periodically so running-update roundoff does not accumulate.
    if (subdivisions % 64 == 0) {
      auto copy = panels;
      total = 0.0;
      total_err = 0.0;
      while (!copy.empty()) {
        total += copy.top().value;
        total_err += copy.top().error;
        copy.pop();
      }
    }
  }
  return {total, total_err, evals};
}

QuadratureResult integrate_semi_infinite(const RealFunction& f, double a,
                                         const QuadratureSpec& spec) {
  if (!std::isfinite(a)) throw DomainError("integrate_semi_infinite: lower limit must be finite");
  const auto mapped = [&f, a](double u) {
    const double u2 = u * u;
    if (u2 == 0.0) return 0.0;
    const double t = a + (1.0 - u) / u;
    if (!std::isfinite(t)) return 0.0;
    return f(t) / u2;
  };
  return integrate(mapped, 0.0, 1.0, spec);
}

QuadratureResult integrate_log_scale(const RealFunction& f, double a, double b,
                                     const QuadratureSpec& spec) {
  if (!(a > 0.0) || !(b > a) || !std::isfinite(b)) {
    throw DomainError("integrate_log_scale: requires 0 < a < b < inf");
  }
  const auto mapped = [&f](double s) {
    const double t = std::exp(s);
    return f(t) * t;
  };
  return integrate(mapped, std::log(a), std::log(b), spec);
}

}  // namespace cogcap::numerics
