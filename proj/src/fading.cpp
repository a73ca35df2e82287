#include "cogcap/fading.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "cogcap/numerics.hpp"

namespace cogcap {

CrossLinkModel::CrossLinkModel(double sigma_p_sq) : sigma_p_sq_(sigma_p_sq) {
  if (!(sigma_p_sq >= 0.0 && sigma_p_sq <= 1.0)) {
    throw DomainError("sigma_p_sq must lie in [0, 1], got " + std::to_string(sigma_p_sq));
  }
}

void Estimate::validate() const {
  if (!(hp_hat_sq >= 0.0) || !std::isfinite(hp_hat_sq)) {
    throw DomainError("hp_hat_sq must be finite and >= 0");
  }
}

namespace fading {

namespace {

void require_nonnegative(double t, const char* fn) {
  if (!(t >= 0.0)) throw DomainError(std::string(fn) + ": argument must be >= 0");
}

void require_probability(double u, const char* fn) {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw DomainError(std::string(fn) + ": probability must lie in [0, 1]");
  }
}

struct Conditional {
  double s2;     // error variance
  double shift;  // (1 - s2) |h_p_hat|^2, the conditional noncentrality
};

Conditional conditional(Estimate est, const CrossLinkModel& model, const char* fn) {
  est.validate();
  if (model.perfect_csi()) {
    throw DomainError(std::string(fn) +
                      ": conditional law is a point mass when sigma_p_sq = 0");
  }
  const double s2 = model.sigma_p_sq();
  return {s2, (1.0 - s2) * est.hp_hat_sq};
}

// Marcum arguments for the conditional cross-link law at threshold t.
std::pair<double, double> marcum_args(double t, const Conditional& c) {
  return {std::sqrt(2.0 * c.shift / c.s2), std::sqrt(2.0 * t / c.s2)};
}

}  // namespace

double pdf_secondary_gain(double t) {
  require_nonnegative(t, "pdf_secondary_gain");
  return std::exp(-t);
}

double cdf_secondary_gain(double t) {
  require_nonnegative(t, "cdf_secondary_gain");
  return -std::expm1(-t);
}

double pdf_beta(double t) {
  require_nonnegative(t, "pdf_beta");
  return 1.0 / ((1.0 + t) * (1.0 + t));
}

double cdf_beta(double t) {
  require_nonnegative(t, "cdf_beta");
  if (std::isinf(t)) return 1.0;
  return t / (1.0 + t);
}

double inv_cdf_beta(double u) {
  require_probability(u, "inv_cdf_beta");
  if (u == 1.0) return kInfinity;
  return u / (1.0 - u);
}

double pdf_inv_hpp_sq(double t) {
  if (!(t > 0.0)) return 0.0;
  return std::exp(-1.0 / t) / (t * t);
}

double cdf_inv_hpp_sq(double t) {
  if (!(t > 0.0)) return 0.0;
  return std::exp(-1.0 / t);
}

double inv_cdf_inv_hpp_sq(double u) {
  require_probability(u, "inv_cdf_inv_hpp_sq");
  if (u == 0.0) return 0.0;
  if (u == 1.0) return kInfinity;
  return -1.0 / std::log(u);
}

double pdf_crosslink_given_estimate(double t, Estimate est, const CrossLinkModel& model) {
  require_nonnegative(t, "pdf_crosslink_given_estimate");
  const Conditional c = conditional(est, model, "pdf_crosslink_given_estimate");
  // exp(-(t + m)/s2) I0(2 sqrt(m t)/s2) = exp(-(sqrt t - sqrt m)^2 / s2) e^-z I0(z)
  const double root_gap = std::sqrt(t) - std::sqrt(c.shift);
  const double z = 2.0 * std::sqrt(c.shift * t) / c.s2;
  return std::exp(-root_gap * root_gap / c.s2) * numerics::bessel_i0_scaled(z) / c.s2;
}

double cdf_crosslink_given_estimate(double t, Estimate est, const CrossLinkModel& model) {
  require_nonnegative(t, "cdf_crosslink_given_estimate");
  const Conditional c = conditional(est, model, "cdf_crosslink_given_estimate");
  const auto [a, b] = marcum_args(t, c);
  return numerics::marcum_p1(a, b);
}

double ccdf_crosslink_given_estimate(double t, Estimate est, const CrossLinkModel& model) {
  require_nonnegative(t, "ccdf_crosslink_given_estimate");
  const Conditional c = conditional(est, model, "ccdf_crosslink_given_estimate");
  const auto [a, b] = marcum_args(t, c);
  return numerics::marcum_q1(a, b);
}

double inv_cdf_crosslink_given_estimate(double u, Estimate est, const CrossLinkModel& model) {
  require_probability(u, "inv_cdf_crosslink_given_estimate");
  const Conditional c = conditional(est, model, "inv_cdf_crosslink_given_estimate");
  if (u == 0.0) return 0.0;
  if (u == 1.0) return kInfinity;

  // Start from the exponential quantile shifted by the conditional
  // noncentrality; the expansion below only ever grows it.
  const double exp_quantile = -std::log1p(-u);
  const double hi = c.s2 * exp_quantile + c.shift;
  const double tol = 1e-15 * (1.0 + hi);

  // Solve on whichever tail carries the probability without cancellation.
  numerics::RealFunction residual;
  if (u <= 0.5) {
    residual = [&](double t) { return cdf_crosslink_given_estimate(t, est, model) - u; };
  } else {
    const double tail = 1.0 - u;
    residual = [&, tail](double t) {
      return tail - ccdf_crosslink_given_estimate(t, est, model);
    };
  }
  return numerics::find_root_expanding_up(residual, {0.0, hi}, tol);
}

double pdf_beta_given_estimate(double t, Estimate est, const CrossLinkModel& model) {
  require_nonnegative(t, "pdf_beta_given_estimate");
  const Conditional c = conditional(est, model, "pdf_beta_given_estimate");
  // Derivative of t/(s2+t) exp(-m/(s2+t)).
  const double s = c.s2 + t;
  return std::exp(-c.shift / s) * (c.s2 * s + t * c.shift) / (s * s * s);
}

double cdf_beta_given_estimate(double t, Estimate est, const CrossLinkModel& model) {
  require_nonnegative(t, "cdf_beta_given_estimate");
  const Conditional c = conditional(est, model, "cdf_beta_given_estimate");
  if (std::isinf(t)) return 1.0;
  const double s = c.s2 + t;
  return t / s * std::exp(-c.shift / s);
}

double inv_cdf_beta_given_estimate(double u, Estimate est, const CrossLinkModel& model) {
  require_probability(u, "inv_cdf_beta_given_estimate");
  const Conditional c = conditional(est, model, "inv_cdf_beta_given_estimate");
  if (u == 0.0) return 0.0;
  if (u == 1.0) return kInfinity;
  const double ratio = c.shift / c.s2;
  if (ratio == 0.0) return c.s2 * u / (1.0 - u);
  // w = W0(ratio * u * e^ratio), evaluated from its logarithm.
  const double w = numerics::lambert_w0_of_exp(std::log(ratio) + std::log(u) + ratio);
  return c.s2 * w / (ratio - w);
}

}  // namespace fading
}  // namespace cogcap
