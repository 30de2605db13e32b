#pragma once

#include <functional>

namespace cpmm {

struct RootResult {
  double root;
  double value;      // f(root)
  double lower;      // final bracket
  double upper;
  int iterations;
};

/// Brent's method on a sign-changing bracket [lo, hi]. Stops when the bracket
/// width falls to `rel_tol`·|root| (or two adjacent doubles), or when f hits
/// exactly zero. Throws DomainError when f(lo) and f(hi) share a sign.
RootResult find_root(const std::function<double(double)>& f, double lo, double hi,
                     double rel_tol = 1e-12);

/// Doubles `start` until `pred(x)` holds; throws DomainError after
/// `max_doublings` steps.
double expand_up(const std::function<bool(double)>& pred, double start, int max_doublings = 200);

/// Halves `start` until `pred(x)` holds; throws DomainError after
/// `max_halvings` steps.
double shrink_down(const std::function<bool(double)>& pred, double start, int max_halvings = 1000);

}  // namespace cpmm
