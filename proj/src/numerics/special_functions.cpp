#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "cogcap/numerics.hpp"

namespace cogcap::numerics {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kEulerGamma = std::numbers::egamma;

// Below this point E1 uses its power series, above it the continued
// fraction. Both agree to ~1e-15 at x = 1.
constexpr double kE1Switch = 1.0;

// I0 switches from the power series to the large-argument expansion here.
constexpr double kI0Switch = 30.0;

// E1(x) + gamma + ln(x) = -sum_{k>=1} (-x)^k / (k k!), returned as E1.
double e1_series(double x) {
  double term = 1.0;
  double sum = 0.0;
  for (int k = 1; k < 200; ++k) {
    term *= -x / k;
    const double add = term / k;
    sum += add;
    if (std::abs(add) <= kEps * std::abs(sum)) break;
  }
  return -kEulerGamma - std::log(x) - sum;
}

// e^x E1(x) via the modified Lentz continued fraction, valid for x >= 1.
double e1_scaled_continued_fraction(double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) <= kEps) return h;
  }
  throw ConvergenceError("exp_integral_e1: continued fraction did not converge",
                         h, std::abs(h) * 1e-10);
}

void require_positive(double x, const char* name) {
  if (!(x > 0.0)) {
    throw DomainError(std::string(name) + ": argument must be > 0, got " +
                      std::to_string(x));
  }
}

double i0_series(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term <= kEps * 0.5 * sum) break;
  }
  return sum;
}

// e^-x I0(x) ~ (2 pi x)^-1/2 sum_k ((2k-1)!!)^2 / (k! (8x)^k).
double i0_scaled_asymptotic(double x) {
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * x);
    if (next > term) break;  // expansion started diverging
    term = next;
    sum += term;
    if (term <= kEps * 0.5 * sum) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

struct MarcumPair {
  double q;
  double p;
};

// Q1(a, b) is the tail of a noncentral chi-square with two degrees of
// freedom. With lambda = a^2/2 and y = b^2/2:
//   Q1 = sum_k Pois(k; lambda) * P[Pois(y) <= k]
//   1 - Q1 = sum_k Pois(k; lambda) * P[Pois(y) > k]
// Only Poisson weights within ~1e-18 of the mode are summed. The tail sum
// is used when y is beyond the mean (Q small) and the head sum otherwise,
// so the returned direct value is never the result of a cancellation.
// Both recurrences below only add positive terms.
MarcumPair marcum_pair(double a, double b) {
  if (!(a >= 0.0) || !(b >= 0.0)) {
    throw DomainError("marcum_q1: arguments must be >= 0");
  }
  if (b == 0.0) return {1.0, 0.0};
  const double lambda = 0.5 * a * a;
  const double y = 0.5 * b * b;
  if (lambda == 0.0) return {std::exp(-y), -std::expm1(-y)};
  if (!std::isfinite(y)) return {0.0, 1.0};

  const double mode = std::floor(lambda);
  constexpr double kWeightFloor = 1e-18;

  // Locate the window [k_lo, k_hi] of non-negligible Poisson weights.
  double k_lo = mode;
  for (double w = 1.0; k_lo > 0.0;) {
    w *= k_lo / lambda;
    if (w < kWeightFloor) break;
    k_lo -= 1.0;
  }
  double k_hi = mode;
  for (double w = 1.0;;) {
    w *= lambda / (k_hi + 1.0);
    k_hi += 1.0;
    if (w < kWeightFloor) break;
  }

  const bool tail_form = y >= lambda + 1.0;
  double sum = 0.0;
  if (tail_form) {
    // Walk up from k_lo: P[Pois(y) <= k+1] = P[Pois(y) <= k] + d_{k+1}.
    double w = std::exp(-lambda + k_lo * std::log(lambda) -
                        std::lgamma(k_lo + 1.0));
    double g = boost::math::gamma_q(k_lo + 1.0, y);
    double d = boost::math::gamma_p_derivative(k_lo + 1.0, y);
    for (double k = k_lo; k <= k_hi; k += 1.0) {
      sum += w * g;
      w *= lambda / (k + 1.0);
      d *= y / (k + 1.0);
      g = std::min(1.0, g + d);
    }
    const double q = std::clamp(sum, 0.0, 1.0);
    return {q, 1.0 - q};
  }
  // Walk down from k_hi: P[Pois(y) > k-1] = P[Pois(y) > k] + d_k.
  double w = std::exp(-lambda + k_hi * std::log(lambda) -
                      std::lgamma(k_hi + 1.0));
  double g = boost::math::gamma_p(k_hi + 1.0, y);
  double d = boost::math::gamma_p_derivative(k_hi + 1.0, y);
  for (double k = k_hi; k >= k_lo; k -= 1.0) {
    sum += w * g;
    if (k == 0.0) break;
    w *= k / lambda;
    g = std::min(1.0, g + d);
    d *= k / y;
  }
  const double p = std::clamp(sum, 0.0, 1.0);
  return {1.0 - p, p};
}

}  // namespace

double exp_integral_e1(double x) {
  require_positive(x, "exp_integral_e1");
  if (x <= kE1Switch) return e1_series(x);
  return e1_scaled_continued_fraction(x) * std::exp(-x);
}

double exp_integral_e1_scaled(double x) {
  require_positive(x, "exp_integral_e1_scaled");
  if (x <= kE1Switch) return std::exp(x) * e1_series(x);
  return e1_scaled_continued_fraction(x);
}

double bessel_i0(double x) {
  const double ax = std::abs(x);
  if (!std::isfinite(ax)) throw DomainError("bessel_i0: non-finite argument");
  if (ax <= kI0Switch) return i0_series(ax);
  const double scaled = i0_scaled_asymptotic(ax);
  const double log_value = ax + std::log(scaled);
  if (log_value >= std::log(std::numeric_limits<double>::max())) {
    throw std::overflow_error("bessel_i0: result overflows, use bessel_i0_scaled");
  }
  return std::exp(ax) * scaled;
}

double bessel_i0_scaled(double x) {
  const double ax = std::abs(x);
  if (!std::isfinite(ax)) throw DomainError("bessel_i0_scaled: non-finite argument");
  if (ax <= kI0Switch) return std::exp(-ax) * i0_series(ax);
  return i0_scaled_asymptotic(ax);
}

double marcum_q1(double a, double b) { return marcum_pair(a, b).q; }

double marcum_p1(double a, double b) { return marcum_pair(a, b).p; }

double lambert_w0(double x) {
  constexpr double branch = -1.0 / std::numbers::e;
  if (std::isnan(x) || x < branch - 4.0 * kEps) {
    throw DomainError("lambert_w0: argument must be >= -1/e");
  }
  if (x <= branch) return -1.0;
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return x;

  double w;
  if (x < -0.32) {
    // Series about the branch point in p = sqrt(2(e x + 1)).
    const double p = std::sqrt(2.0 * (std::numbers::e * x + 1.0));
    w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
  } else if (x <= std::numbers::e) {
    const double l = std::log1p(x);
    w = l * (1.0 - std::log1p(l) / (2.0 + l));
  } else {
    const double l1 = std::log(x);
    const double l2 = std::log(l1);
    w = l1 - l2 + l2 / l1;
  }

  // Halley iteration on w e^w - x.
  for (int i = 0; i < 64; ++i) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    if (wp1 <= 0.0) break;
    const double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    w -= step;
    if (std::abs(step) <= 4.0 * kEps * (1.0 + std::abs(w))) break;
  }
  return w;
}

double lambert_w0_of_exp(double y) {
  if (std::isnan(y)) throw DomainError("lambert_w0_of_exp: NaN argument");
  if (y <= 1.0) return lambert_w0(std::exp(y));
  if (std::isinf(y)) return y;

  // Halley iteration on w + ln w - y; w = y - ln y is already close.
  double w = y - std::log(y);
  for (int i = 0; i < 64; ++i) {
    const double f = w + std::log(w) - y;
    const double f1 = 1.0 + 1.0 / w;
    const double f2 = -1.0 / (w * w);
    const double step = f / (f1 - 0.5 * f * f2 / f1);
    w -= step;
    if (std::abs(step) <= 4.0 * kEps * w) break;
  }
  return w;
}

}  // namespace cogcap::numerics
