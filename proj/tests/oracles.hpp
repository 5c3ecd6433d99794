#pragma once

// Independent reference computations used only by the tests.  None of these
// call into the library's closed forms.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using lcplx = std::complex<long double>;

constexpr double kPi = 3.14159265358979323846;
constexpr long double kPiL = 3.14159265358979323846264338327950288L;

/// sum_n w^n / n!, summed in long double until the terms vanish
inline lcplx exp_series(lcplx w) {
  lcplx term = 1.0L;
  lcplx sum = 1.0L;
  for (int n = 1; n < 400; ++n) {
    term *= w / static_cast<long double>(n);
    sum += term;
    if (std::abs(term) < 1e-22L * std::abs(sum)) break;
  }
  return sum;
}

/// Trapezoid rule for \int f conj(g) e^{-pi |z|^2} dA on a box that covers the
/// mass of both integrands (centres within `shift` of the origin).
inline cplx fock_inner_2d(const std::function<cplx(cplx)>& f, const std::function<cplx(cplx)>& g, double shift = 0.0,
                          int per_unit = 16) {
  const double lo = -7.0 - shift;
  const double hi = 7.0 + shift;
  const int n = static_cast<int>((hi - lo) * per_unit);
  const double h = (hi - lo) / n;
  lcplx sum = 0.0L;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      const cplx z(lo + h * i, lo + h * j);
      sum += lcplx(f(z) * std::conj(g(z))) * static_cast<long double>(std::exp(-kPi * std::norm(z)));
    }
  }
  return cplx(sum * static_cast<long double>(h * h));
}

/// Hermite function normalised so that its Bargmann image is e_n, built from
/// the physicists' polynomials h_{n+1} = 2x h_n - 2n h_{n-1} at x = sqrt(2 pi) t.
/// Only accurate for moderate n and |t| (no rescaling).
inline long double hermite_function(int n, long double t) {
  const long double x = std::sqrt(2.0L * kPiL) * t;
  long double h0 = 1.0L;
  long double h1 = 2.0L * x;
  if (n == 0) {
    h1 = h0;
  } else {
    for (int k = 1; k < n; ++k) {
      const long double h2 = 2.0L * x * h1 - 2.0L * k * h0;
      h0 = h1;
      h1 = h2;
    }
  }
  long double norm = std::pow(2.0L, 0.25L) / std::sqrt(std::pow(2.0L, static_cast<long double>(n)) * std::tgamma(n + 1.0L));
  return norm * h1 * std::exp(-kPiL * t * t);
}

/// Trapezoid on [-L, L] with `n` panels.
inline lcplx trapezoid_1d(const std::function<lcplx(long double)>& f, long double L, int n) {
  const long double h = 2.0L * L / n;
  lcplx sum = 0.5L * (f(-L) + f(L));
  for (int i = 1; i < n; ++i) sum += f(-L + h * i);
  return sum * h;
}

}  // namespace oracle
