#include "cpmm/solve.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "cpmm/error.hpp"

namespace cpmm {

RootResult find_root(const std::function<double(double)>& f, double lo, double hi, double rel_tol) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double a = lo;
  double b = hi;
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return {a, fa, a, a, 0};
  if (fb == 0.0) return {b, fb, b, b, 0};
  if ((fa > 0.0) == (fb > 0.0)) throw DomainError("find_root: bracket does not change sign");

  // zeroin: b is the best estimate, c the opposite end of the bracket
  double c = a;
  double fc = fa;
  double d = b - a;
  double e = d;
  int iter = 0;
  for (; iter < 500; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol = 2.0 * eps * std::abs(b) + 0.5 * rel_tol * std::abs(b);
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= tol || fb == 0.0) break;

    if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
      double p;
      double q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) {
        q = -q;
      } else {
        p = -p;
      }
      if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol ? d : (m > 0.0 ? tol : -tol);
    fb = f(b);
  }
  return {b, fb, std::min(b, c), std::max(b, c), iter};
}

double expand_up(const std::function<bool(double)>& pred, double start, int max_doublings) {
  double x = start;
  for (int i = 0; i < max_doublings; ++i) {
    if (pred(x)) return x;
    x *= 2.0;
  }
  throw DomainError("expand_up: no admissible point found");
}

double shrink_down(const std::function<bool(double)>& pred, double start, int max_halvings) {
  double x = start;
  for (int i = 0; i < max_halvings; ++i) {
    if (pred(x)) return x;
    x *= 0.5;
  }
  throw DomainError("shrink_down: no admissible point found");
}

}  // namespace cpmm
