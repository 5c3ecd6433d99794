#pragma once

// Composite trapezoid rule with step halving for analytic, rapidly decaying
// integrands on a finite window.  The rule converges geometrically for such
// integrands, so once the step resolves the oscillation the difference
// between consecutive levels is a reliable error estimate.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

namespace gul {

using lcplx = std::complex<long double>;

struct QuadratureResult {
  lcplx value{0.0L, 0.0L};
  long double error_estimate = 0.0L;
  int levels = 0;
  bool converged = false;
};

/// `bandwidth` is the largest oscillation frequency (cycles per unit t) of the
/// integrand; no level coarser than 1 / (bandwidth + 6) is accepted.
template <class Integrand>
QuadratureResult trapezoid(Integrand&& f, long double lo, long double hi, long double tol, double bandwidth,
                           int max_levels = 14) {
  QuadratureResult res;
  const long double len = hi - lo;
  int panels = 32;
  long double h = len / panels;

  lcplx sum = 0.5L * (f(lo) + f(hi));
  long double abs_sum = std::abs(sum);
  for (int i = 1; i < panels; ++i) {
    const lcplx v = f(lo + i * h);
    sum += v;
    abs_sum += std::abs(v);
  }
  lcplx estimate = h * sum;

  const long double finest_needed = 1.0L / (static_cast<long double>(bandwidth) + 6.0L);
  for (int level = 1; level <= max_levels; ++level) {
    const long double h_new = 0.5L * h;
    for (int i = 0; i < panels; ++i) {
      const lcplx v = f(lo + (2 * i + 1) * h_new);
      sum += v;
      abs_sum += std::abs(v);
    }
    panels *= 2;
    h = h_new;
    const lcplx next = h * sum;
    const long double diff = std::abs(next - estimate);
    estimate = next;
    res.levels = level;
    res.error_estimate = diff;
    const long double floor = 1e3L * std::numeric_limits<long double>::epsilon() * abs_sum * h;
    if (h <= finest_needed && diff <= std::max(0.5L * tol, floor)) {
      res.converged = true;
      break;
    }
  }
  res.value = estimate;
  return res;
}

}  // namespace gul
