#pragma once

// Special functions and generic numerical kernels (quadrature, root finding)
// shared by the channel, policy and capacity code.

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace cogcap {

/// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative method stopped before reaching its tolerance.
/// Carries the best estimate available at that point.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_estimate,
                   double error_estimate)
      : std::runtime_error(what),
        best_estimate_(best_estimate),
        error_estimate_(error_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double best_estimate_;
  double error_estimate_;
};

/// The function values at both ends of a bracket have the same sign.
class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace numerics {

using RealFunction = std::function<double(double)>;

// ---------------------------------------------------------------------------
// Special functions
// ---------------------------------------------------------------------------

/// Exponential integral E1(x) = int_x^inf e^-t / t dt, x > 0.
double exp_integral_e1(double x);

/// e^x * E1(x). Stays finite where e^x alone would overflow.
double exp_integral_e1_scaled(double x);

/// Modified Bessel function I0(x). Throws std::overflow_error when the
/// result is not representable; use bessel_i0_scaled in that range.
double bessel_i0(double x);

/// e^-|x| * I0(x), finite for every finite x.
double bessel_i0_scaled(double x);

/// First-order Marcum Q function Q1(a, b) for a, b >= 0.
double marcum_q1(double a, double b);

/// 1 - Q1(a, b), computed directly so that small values keep their
/// relative accuracy.
double marcum_p1(double a, double b);

/// Principal branch of the Lambert W function, x >= -1/e.
double lambert_w0(double x);

/// W0(e^y), evaluated without forming e^y.
double lambert_w0_of_exp(double y);

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

struct QuadratureSpec {
  double rel_tol = 1e-9;
  double abs_tol = 0.0;
  std::size_t max_subdivisions = 2000;

  /// Throws DomainError when a field violates its invariant.
  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t evaluations = 0;
};

/// Adaptive Gauss-Kronrod (7/15) quadrature of f over the finite interval
/// [a, b]. Panels with the largest error estimate are bisected first.
QuadratureResult integrate(const RealFunction& f, double a, double b,
                           const QuadratureSpec& spec = {});

/// Integral of f over [a, inf) through the map t = a + (1 - u) / u,
/// u in (0, 1]. f must decay fast enough for the mapped integrand to be
/// bounded near u = 0.
QuadratureResult integrate_semi_infinite(const RealFunction& f, double a,
                                         const QuadratureSpec& spec = {});

/// Integral of f over [a, b], 0 < a < b, on the variable s = ln t. Suited
/// to integrands like 1/t whose features are spread over many decades.
QuadratureResult integrate_log_scale(const RealFunction& f, double a, double b,
                                     const QuadratureSpec& spec = {});

// ---------------------------------------------------------------------------
// Root finding
// ---------------------------------------------------------------------------

struct RootBracket {
  double lo;
  double hi;
};

/// Brent's method on a bracket whose endpoint values differ in sign.
/// Stops when the bracket is narrower than `tol` (plus a few ulps of the
/// iterate) or f hits zero exactly.
double find_root_bracketed(const RealFunction& f, RootBracket bracket,
                           double tol, std::size_t max_iterations = 200);

/// Grows `bracket.hi` geometrically (factor 2, at most `max_doublings`
/// times) until f changes sign across [lo, hi], then solves. Intended for
/// monotone f on [lo, inf).
double find_root_expanding_up(const RealFunction& f, RootBracket bracket,
                              double tol, int max_doublings = 60);

/// Same as find_root_expanding_up but halves `bracket.lo` towards zero.
/// Requires lo > 0.
double find_root_expanding_down(const RealFunction& f, RootBracket bracket,
                                double tol, int max_halvings = 60);

}  // namespace numerics
}  // namespace cogcap
