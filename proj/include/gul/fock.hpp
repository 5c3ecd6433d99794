#pragma once

// Exact algebra on the class of entire functions spanned by the atoms
//
//     z -> c * z^n * exp(beta * z)
//
// inside the Fock space F^2(C) with inner product
//
//     (F, G) = \int_C F(z) conj(G(z)) exp(-pi |z|^2) dz.
//
// Every atom has finite exponential type, so the class is closed under
// sums, products and argument translation and lies inside F^2(C).  Inner
// products are evaluated in closed form from the reproducing-kernel identity
// (e^{beta z}, e^{gamma z}) = exp(beta conj(gamma) / pi).

#include <span>
#include <vector>

#include "gul/common.hpp"

namespace gul {

struct FockAtom {
  cplx coeff{1.0, 0.0};
  int power = 0;
  cplx expo{0.0, 0.0};
};

class FockFunction {
 public:
  FockFunction() = default;
  explicit FockFunction(std::vector<FockAtom> atoms);

  static FockFunction constant(cplx c);
  static FockFunction atom(cplx coeff, int power, cplx expo);
  /// Normalised monomial e_n(z) = (pi^n / n!)^{1/2} z^n.
  static FockFunction basis(int n);
  static FockFunction exponential(cplx expo, cplx coeff = 1.0);
  /// sum_n coeffs[n] * e_n
  static FockFunction from_basis_coeffs(std::span<const cplx> coeffs);

  [[nodiscard]] std::span<const FockAtom> atoms() const { return atoms_; }
  [[nodiscard]] bool is_zero() const { return atoms_.empty(); }
  [[nodiscard]] bool is_polynomial() const;
  /// Largest power over all atoms, -1 for the zero function.
  [[nodiscard]] int max_power() const;
  /// Largest |beta| over all atoms (the exponential type of the function).
  [[nodiscard]] double exponential_type() const;

  cplx operator()(cplx z) const;

  /// z -> F(z - u)
  [[nodiscard]] FockFunction shifted(cplx u) const;
  /// z -> F(s z)
  [[nodiscard]] FockFunction rescaled(cplx s) const;

  FockFunction& operator+=(const FockFunction& other);
  FockFunction& operator-=(const FockFunction& other);
  FockFunction& operator*=(cplx s);

  friend FockFunction operator+(FockFunction lhs, const FockFunction& rhs) { return lhs += rhs; }
  friend FockFunction operator-(FockFunction lhs, const FockFunction& rhs) { return lhs -= rhs; }
  friend FockFunction operator*(FockFunction lhs, cplx s) { return lhs *= s; }
  friend FockFunction operator*(cplx s, FockFunction rhs) { return rhs *= s; }
  friend FockFunction operator*(const FockFunction& lhs, const FockFunction& rhs);

  /// Exact equality of canonical forms.
  friend bool operator==(const FockFunction&, const FockFunction&);

 private:
  void canonicalize();
  std::vector<FockAtom> atoms_;
};

/// Equality of canonical forms up to a relative tolerance on the coefficients
/// and exponents.
bool same_representation(const FockFunction& f, const FockFunction& g, double rel_tol = 1e-13);

/// (pi^n / n!)^{1/2}
double basis_scale(int n);

cplx eval(const FockFunction& f, cplx z);

/// sum over atoms of c z^n exp(beta z + log_weight), with the weight folded into
/// each exponent so large growth and Gaussian decay cancel before rounding.
cplx eval_weighted(const FockFunction& f, cplx z, cplx log_weight);

cplx inner(const FockFunction& f, const FockFunction& g);
double norm(const FockFunction& f);
FockFunction multiply(const FockFunction& f, const FockFunction& g);

enum class Sign { plus = 1, minus = -1 };

inline double sign_value(Sign s) { return s == Sign::plus ? 1.0 : -1.0; }

/// z -> 1 +/- i delta exp((pi e^{i theta} / a)(z - conj(lambda0))).
FockFunction multiplier(double delta, double a, Sign sign, double theta = 0.0, cplx lambda0 = 0.0);

/// Exponent rate pi e^{i theta} / a of the multiplier family.
cplx multiplier_rate(double a, double theta);

/// Expansion coefficients in the orthonormal basis e_n plus a rigorous bound on
/// the l2 norm of the discarded tail.
struct CoefficientSeries {
  std::vector<cplx> coeffs;
  double tail_bound = 0.0;

  [[nodiscard]] double norm() const;
};

CoefficientSeries monomial_coeffs(const FockFunction& f, double tol);

}  // namespace gul
