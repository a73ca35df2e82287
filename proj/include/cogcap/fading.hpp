#pragma once

// Rayleigh channel statistics: marginal laws of the secondary gain |h_s|^2,
// of beta = |h_p|^2 / |h_pp|^2 and of 1/|h_pp|^2, plus the laws of |h_p|^2
// and beta conditioned on the cross-link estimate |h_p_hat|^2.
//
// All gains are unit-mean squared magnitudes of circular complex Gaussians.
// The cross link follows h_p = sqrt(1 - s2) h_p_hat + sqrt(s2) h_err with
// s2 the estimation error variance, so
//   |h_p|^2 | h_p_hat  ~  s2/2 * noncentral chi-square(2, 2 (1-s2)|h_p_hat|^2 / s2).

#include <limits>

namespace cogcap {

/// Estimation-error variance of the cross link, in [0, 1].
/// 0 means perfect knowledge of h_p, 1 means no instantaneous knowledge.
class CrossLinkModel {
 public:
  explicit CrossLinkModel(double sigma_p_sq);

  double sigma_p_sq() const noexcept { return sigma_p_sq_; }
  bool perfect_csi() const noexcept { return sigma_p_sq_ == 0.0; }
  bool no_csi() const noexcept { return sigma_p_sq_ == 1.0; }

  bool operator==(const CrossLinkModel&) const = default;

 private:
  double sigma_p_sq_;
};

/// Squared magnitude of the cross-link estimate |h_p_hat|^2. Under the
/// unit-variance model it is itself Exp(1) distributed.
struct Estimate {
  double hp_hat_sq = 0.0;

  /// Throws DomainError when hp_hat_sq < 0 or not finite.
  void validate() const;
};

namespace fading {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Secondary gain |h_s|^2 ~ Exp(1).
double pdf_secondary_gain(double t);
double cdf_secondary_gain(double t);

// beta = |h_p|^2 / |h_pp|^2 without cross-link knowledge.
double pdf_beta(double t);
double cdf_beta(double t);
/// Returns +inf at u = 1.
double inv_cdf_beta(double u);

// 1 / |h_pp|^2.
double pdf_inv_hpp_sq(double t);
/// e^{-1/t} for t > 0 and 0 otherwise.
double cdf_inv_hpp_sq(double t);
/// -1 / ln(u); 0 at u = 0 and +inf at u = 1.
double inv_cdf_inv_hpp_sq(double u);

// |h_p|^2 given the estimate. Every conditional law below throws
// DomainError for a perfect-CSI model (s2 = 0), whose law is a point mass.
double pdf_crosslink_given_estimate(double t, Estimate est, const CrossLinkModel& model);
double cdf_crosslink_given_estimate(double t, Estimate est, const CrossLinkModel& model);
/// Upper tail 1 - F, evaluated without cancellation.
double ccdf_crosslink_given_estimate(double t, Estimate est, const CrossLinkModel& model);
/// Numeric inverse by bracketed root finding. Returns +inf at u = 1.
double inv_cdf_crosslink_given_estimate(double u, Estimate est, const CrossLinkModel& model);

// beta given the estimate.
double pdf_beta_given_estimate(double t, Estimate est, const CrossLinkModel& model);
double cdf_beta_given_estimate(double t, Estimate est, const CrossLinkModel& model);
/// Closed-form inverse through the principal Lambert W branch:
///   t = s2 w / (c - w),  w = W0(c u e^c),  c = (1 - s2)|h_p_hat|^2 / s2.
/// Returns +inf at u = 1.
double inv_cdf_beta_given_estimate(double u, Estimate est, const CrossLinkModel& model);

}  // namespace fading
}  // namespace cogcap
