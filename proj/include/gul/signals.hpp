#pragma once

// Time-domain signals.  The canonical representation is a finite expansion in
// the Hermite functions H_n, whose Bargmann transforms are the orthonormal
// monomials e_n; the Bargmann transform of a TimeSignal is therefore an exact
// coefficient relabelling.  ClosedFormSignal holds signals that can be
// evaluated pointwise without truncation and backs the quadrature oracles.

#include <span>
#include <vector>

#include "gul/common.hpp"
#include "gul/fock.hpp"
#include "gul/quadrature.hpp"

namespace gul {

inline constexpr int kDefaultHermiteMax = 64;

/// H_n(t).  Orders above `n_max` are rejected.
double hermite_eval(int n, double t, int n_max = kDefaultHermiteMax);

struct TimeSignal {
  std::vector<cplx> hermite_coeffs;
  /// l2 bound on the part of the signal not represented by hermite_coeffs.
  double tail_bound = 0.0;

  static TimeSignal hermite(int n);

  [[nodiscard]] cplx eval(double t) const;
  [[nodiscard]] lcplx eval(long double t) const;
  [[nodiscard]] double coeff_norm() const;
  [[nodiscard]] Interval norm() const;
};

/// e^{2 pi i freq t} sum_k coeffs[k] H_k(t - shift)
struct HermitePacket {
  double shift = 0.0;
  double freq = 0.0;
  std::vector<cplx> coeffs;
};

/// coeff * e^{2 pi i freq t} h_sign(t - shift) with
/// h_+-(t) = phi(t) (cosh(pi t / a) +- i sinh(pi t / a)).
struct BasePairTerm {
  cplx coeff{1.0, 0.0};
  double a = 1.0;
  Sign sign = Sign::plus;
  double shift = 0.0;
  double freq = 0.0;
};

class ClosedFormSignal {
 public:
  ClosedFormSignal() = default;

  static ClosedFormSignal gaussian();
  static ClosedFormSignal shifted_gaussian(double u);
  static ClosedFormSignal hermite(int n);
  static ClosedFormSignal base_member(double a, Sign sign);
  /// Time-frequency shifted Hermite function e^{2 pi i freq t} H_n(t - shift).
  static ClosedFormSignal shifted_hermite(int n, double shift, double freq, cplx coeff = 1.0);

  [[nodiscard]] lcplx eval(long double t) const;
  [[nodiscard]] cplx eval(double t) const { return cplx(eval(static_cast<long double>(t))); }

  /// Radius outside of which every component has Gaussian decay.
  [[nodiscard]] double extent() const;
  /// Largest modulation frequency of any component.
  [[nodiscard]] double max_freq() const;

  [[nodiscard]] std::span<const HermitePacket> packets() const { return packets_; }
  [[nodiscard]] std::span<const BasePairTerm> base_terms() const { return base_terms_; }

  ClosedFormSignal& operator+=(const ClosedFormSignal& other);
  ClosedFormSignal& operator*=(cplx s);
  friend ClosedFormSignal operator+(ClosedFormSignal lhs, const ClosedFormSignal& rhs) { return lhs += rhs; }
  friend ClosedFormSignal operator*(cplx s, ClosedFormSignal rhs) { return rhs *= s; }

  [[nodiscard]] ClosedFormSignal translated(double u) const;

 private:
  friend ClosedFormSignal closed_form_from_fock(const FockFunction& f);
  void add_packet(HermitePacket p);
  std::vector<HermitePacket> packets_;
  std::vector<BasePairTerm> base_terms_;
};

/// Closed-form time-domain preimage of a Fock function: each atom
/// c z^n e^{beta z} is a finite combination of Hermite functions shifted in
/// time by Re(beta)/pi and modulated by Im(beta)/pi.
ClosedFormSignal closed_form_from_fock(const FockFunction& f);

FockFunction bargmann_series(const TimeSignal& f);

/// Direct integration of 2^{1/4} \int f(t) exp(2 pi t z - pi t^2 - pi z^2 / 2) dt.
cplx bargmann_quadrature(const ClosedFormSignal& f, cplx z, double tol);

TimeSignal inverse_bargmann(const FockFunction& f, double tol);

/// Bargmann image of the translate: B(T_u f)(z) = B f(z - u) e^{pi u z - pi u^2 / 2}.
FockFunction translate_image(const FockFunction& image, double u);
TimeSignal translate(const TimeSignal& f, double u, double tol = 1e-13);
ClosedFormSignal translate(const ClosedFormSignal& f, double u);

/// Coefficient-space distance widened by both tail bounds.
Interval l2_distance(const TimeSignal& f, const TimeSignal& g);

struct PhaseDistance {
  /// Angle in [0, 2 pi) minimising ||g - e^{i alpha} f||.
  double alpha = 0.0;
  double dist = 0.0;
};

PhaseDistance phase_distance(const TimeSignal& f, const TimeSignal& g);
/// Same quantity for exact Fock images, using closed-form inner products.
PhaseDistance phase_distance(const FockFunction& f, const FockFunction& g);

/// Trapezoid L2 norm of f - g on [-half_width, half_width] (test oracle).
template <class F, class G>
double l2_quadrature(F&& f, G&& g, double half_width, double bandwidth, double tol = 1e-14) {
  auto integrand = [&](long double t) {
    const lcplx d = lcplx(f(t)) - lcplx(g(t));
    return lcplx(std::norm(d), 0.0L);
  };
  const auto res = trapezoid(integrand, -static_cast<long double>(half_width), static_cast<long double>(half_width),
                             tol, bandwidth);
  return std::sqrt(static_cast<double>(res.value.real()));
}

}  // namespace gul
