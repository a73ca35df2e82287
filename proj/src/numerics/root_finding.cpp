#include <cmath>
#include <limits>
#include <utility>

#include "cogcap/numerics.hpp"

namespace cogcap::numerics {

double find_root_bracketed(const RealFunction& f, RootBracket bracket,
                           double tol, std::size_t max_iterations) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (!(bracket.lo < bracket.hi)) {
    throw BracketError("find_root_bracketed: requires lo < hi");
  }
  double a = bracket.lo;
  double b = bracket.hi;
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (std::isnan(fa) || std::isnan(fb) || (fa > 0.0) == (fb > 0.0)) {
    throw BracketError("find_root_bracketed: no sign change across [" +
                       std::to_string(a) + ", " + std::to_string(b) + "]");
  }

  double c = b;
  double fc = fb;
  double d = 0.0;
  double e = 0.0;
  for (std::size_t iter = 0; iter < max_iterations; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * eps * std::abs(b) + 0.5 * tol;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return b;

    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      // Inverse quadratic interpolation, or secant when only two points.
      const double s = fb / fa;
      double p;
      double q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      const double min1 = 3.0 * xm * q - std::abs(tol1 * q);
      const double min2 = std::abs(e * q);
      if (2.0 * p < std::min(min1, min2)) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol1) ? d : std::copysign(tol1, xm);
    fb = f(b);
  }
  throw ConvergenceError("find_root_bracketed: iteration limit reached", b,
                         std::abs(c - b));
}

double find_root_expanding_up(const RealFunction& f, RootBracket bracket,
                              double tol, int max_doublings) {
  const double origin = bracket.lo;
  double lo = bracket.lo;
  double hi = bracket.hi;
  const double f_lo = f(lo);
  if (f_lo == 0.0) return lo;
  double f_hi = f(hi);
  for (int i = 0; (f_lo > 0.0) == (f_hi > 0.0) && f_hi != 0.0; ++i) {
    if (i >= max_doublings) {
      throw BracketError("find_root_expanding_up: no sign change after expansion");
    }
    lo = hi;
    hi = origin + 2.0 * (hi - origin);
    f_hi = f(hi);
  }
  if (f_hi == 0.0) return hi;
  return find_root_bracketed(f, {lo, hi}, tol);
}

double find_root_expanding_down(const RealFunction& f, RootBracket bracket,
                                double tol, int max_halvings) {
  if (!(bracket.lo > 0.0)) {
    throw DomainError("find_root_expanding_down: lower end must be > 0");
  }
  double lo = bracket.lo;
  double hi = bracket.hi;
  const double f_hi = f(hi);
  if (f_hi == 0.0) return hi;
  double f_lo = f(lo);
  for (int i = 0; (f_lo > 0.0) == (f_hi > 0.0) && f_lo != 0.0; ++i) {
    if (i >= max_halvings) {
      throw BracketError("find_root_expanding_down: no sign change after expansion");
    }
    hi = lo;
    lo *= 0.5;
    f_lo = f(lo);
  }
  if (f_lo == 0.0) return lo;
  return find_root_bracketed(f, {lo, hi}, tol);
}

}  // namespace cogcap::numerics
