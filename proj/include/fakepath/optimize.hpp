// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>

namespace fakepath::optimize {

/// Golden-section search for the minimum of a unimodal function on [a, b].
/// Returns the abscissa of the minimum to within `tol`.
template <typename F>
double golden_minimize(F&& f, double a, double b, double tol) {
  constexpr double kInvPhi = 0.6180339887498949;  // (sqrt(5)-1)/2
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

template <typename F>
double golden_maximize(F&& f, double a, double b, double tol) {
  return golden_minimize([&](double x) { return -f(x); }, a, b, tol);
}

}  // namespace fakepath::optimize
