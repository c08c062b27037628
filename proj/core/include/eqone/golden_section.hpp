#pragma once

#include <cmath>
#include <stdexcept>

#include "eqone/errors.hpp"

namespace eqone {

struct ScalarOptimum {
  double x;
  double value;
  int iterations;
};

/// Golden-section search for the maximum of a unimodal f on [lo, hi].
/// Stops when the bracket is narrower than `tolerance` or after
/// `max_iterations` reductions.
template <class F>
ScalarOptimum golden_section_maximize(F&& f, double lo, double hi, double tolerance = 1e-10,
                                      int max_iterations = 500) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) throw InputError("invalid search bracket");
  if (!(tolerance > 0.0)) throw InputError("tolerance must be positive");

  constexpr double inv_phi = 0.6180339887498948482;  // 1/phi
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  int it = 0;
  for (; it < max_iterations && (b - a) > tolerance; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x), it};
}

}  // namespace eqone
