#pragma once

#include <cmath>
#include <span>

namespace gul {

/// Fills out[0..N] with the Hermite functions H_0(t) .. H_N(t) normalised so
/// that their Bargmann transforms are the monomials e_n, i.e.
///
///     H_n(t) = 2^{1/4} (2^n n!)^{-1/2} h_n(sqrt(2 pi) t) exp(-pi t^2)
///
/// with h_n the physicists' polynomials.  Uses the orthonormal three-term
/// recurrence with running rescaling so large orders do not under/overflow.
template <class Real>
void hermite_functions(Real t, std::span<Real> out) {
  if (out.empty()) return;
  const Real pi = Real(3.14159265358979323846264338327950288L);
  const Real x = std::sqrt(2 * pi) * t;
  const Real rescale = Real(1e100);

  Real log_scale = -pi * t * t;
  Real weight = std::exp(log_scale);
  Real prev = 0;
  Real cur = Real(1.18920711500272106671749997056047591L);

  auto emit = [&](std::size_t n) {
    if (weight != Real(0) || cur == Real(0)) {
      out[n] = cur * weight;
    } else {
      const Real lm = std::log(std::abs(cur)) + log_scale;
      out[n] = std::copysign(std::exp(lm), cur);
    }
  };

  emit(0);
  for (std::size_t n = 0; n + 1 < out.size(); ++n) {
    const Real next = std::sqrt(Real(2) / Real(n + 1)) * x * cur - std::sqrt(Real(n) / Real(n + 1)) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > rescale) {
      cur /= rescale;
      prev /= rescale;
      log_scale += std::log(rescale);
      weight = std::exp(log_scale);
    }
    emit(n + 1);
  }
}

}  // namespace gul
