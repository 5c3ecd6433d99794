#include "gul/fock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace gul {
namespace {

constexpr double kLogPi = 1.1447298858494001741;
// exp() arguments beyond this are folded into log-magnitudes
constexpr double kSafeExp = 600.0;

cplx ipow(cplx z, int n) {
  cplx result{1.0, 0.0};
  cplx base = z;
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

bool near_equal(cplx x, cplx y) {
  const double scale = std::abs(x) + std::abs(y);
  return std::abs(x - y) <= 8.0 * std::numeric_limits<double>::epsilon() * scale;
}

double log_binom(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// c * z^n * exp(e), evaluated through logarithms when the pieces would
// overflow on their own.
cplx atom_term(cplx c, int n, cplx z, cplx e) {
  if (c == 0.0) return 0.0;
  if (n > 0 && z == 0.0) return 0.0;
  const double log_mag = std::log(std::abs(c)) + (n > 0 ? n * std::log(std::abs(z)) : 0.0) + e.real();
  if (log_mag < -745.0) return 0.0;
  const bool direct = std::abs(e.real()) < kSafeExp && (n == 0 || n * std::log(std::abs(z)) < kSafeExp) &&
                      std::abs(std::log(std::abs(c))) < kSafeExp;
  if (direct) return c * ipow(z, n) * std::exp(e);
  const double phase = std::arg(c) + (n > 0 ? n * std::arg(z) : 0.0) + e.imag();
  return std::polar(std::exp(log_mag), phase);
}

// (c z^n e^{beta z}, d z^m e^{gamma z}) via the m-th and n-th derivatives of
// the kernel exp(beta s / pi) with s = conj(gamma).
cplx atom_inner(const FockAtom& x, const FockAtom& y) {
  const int n = x.power;
  const int m = y.power;
  const cplx beta = x.expo;
  const cplx s = std::conj(y.expo);
  const cplx kernel_exponent = beta * s / kPi;
  const cplx cd = x.coeff * std::conj(y.coeff);

  const bool direct = n + m <= 60 && std::abs(beta) <= 100.0 && std::abs(s) <= 100.0;
  cplx sum{0.0, 0.0};
  const int kmax = std::min(n, m);
  if (direct) {
    double binom = 1.0;    // C(n, k)
    double falling = 1.0;  // m! / (m - k)!
    for (int k = 0; k <= kmax; ++k) {
      if (k > 0) {
        binom = binom * (n - k + 1) / k;
        falling *= (m - k + 1);
      }
      if ((m - k > 0 && beta == 0.0) || (n - k > 0 && s == 0.0)) continue;
      const cplx term = binom * falling * ipow(beta, m - k) * ipow(s, n - k) / std::pow(kPi, m + n - k);
      sum += term;
    }
    if (std::abs(kernel_exponent.real()) < kSafeExp) return cd * sum * std::exp(kernel_exponent);
    // fold the exponential into the magnitude
    const double lm = std::log(std::abs(cd * sum)) + kernel_exponent.real();
    return std::polar(std::exp(lm), std::arg(cd * sum) + kernel_exponent.imag());
  }

  for (int k = 0; k <= kmax; ++k) {
    if ((m - k > 0 && beta == 0.0) || (n - k > 0 && s == 0.0)) continue;
    double lm = log_binom(n, k) + std::lgamma(m + 1.0) - std::lgamma(m - k + 1.0) - (m + n - k) * kLogPi;
    double ph = 0.0;
    if (m - k > 0) {
      lm += (m - k) * std::log(std::abs(beta));
      ph += (m - k) * std::arg(beta);
    }
    if (n - k > 0) {
      lm += (n - k) * std::log(std::abs(s));
      ph += (n - k) * std::arg(s);
    }
    lm += std::log(std::abs(cd)) + kernel_exponent.real();
    ph += std::arg(cd) + kernel_exponent.imag();
    sum += std::polar(std::exp(lm), ph);
  }
  return sum;
}

}  // namespace

double basis_scale(int n) {
  if (n == 0) return 1.0;
  return std::exp(0.5 * (n * kLogPi - std::lgamma(n + 1.0)));
}

FockFunction::FockFunction(std::vector<FockAtom> atoms) : atoms_(std::move(atoms)) { canonicalize(); }

FockFunction FockFunction::constant(cplx c) { return FockFunction({FockAtom{c, 0, 0.0}}); }

FockFunction FockFunction::atom(cplx coeff, int power, cplx expo) {
  detail::require(power >= 0, "atom power must be nonnegative");
  return FockFunction({FockAtom{coeff, power, expo}});
}

FockFunction FockFunction::basis(int n) { return atom(basis_scale(n), n, 0.0); }

FockFunction FockFunction::exponential(cplx expo, cplx coeff) { return atom(coeff, 0, expo); }

FockFunction FockFunction::from_basis_coeffs(std::span<const cplx> coeffs) {
  std::vector<FockAtom> atoms;
  atoms.reserve(coeffs.size());
  for (std::size_t n = 0; n < coeffs.size(); ++n) {
    atoms.push_back({coeffs[n] * basis_scale(static_cast<int>(n)), static_cast<int>(n), 0.0});
  }
  return FockFunction(std::move(atoms));
}

void FockFunction::canonicalize() {
  std::vector<FockAtom> merged;
  merged.reserve(atoms_.size());
  for (const auto& a : atoms_) {
    auto it = std::find_if(merged.begin(), merged.end(), [&](const FockAtom& b) {
      return b.power == a.power && (b.expo == a.expo || near_equal(b.expo, a.expo));
    });
    if (it == merged.end()) {
      merged.push_back(a);
    } else {
      it->coeff += a.coeff;
    }
  }
  std::erase_if(merged, [](const FockAtom& a) { return a.coeff == 0.0; });
  std::sort(merged.begin(), merged.end(), [](const FockAtom& x, const FockAtom& y) {
    if (x.expo.real() != y.expo.real()) return x.expo.real() < y.expo.real();
    if (x.expo.imag() != y.expo.imag()) return x.expo.imag() < y.expo.imag();
    return x.power < y.power;
  });
  atoms_ = std::move(merged);
}

bool FockFunction::is_polynomial() const {
  return std::all_of(atoms_.begin(), atoms_.end(), [](const FockAtom& a) { return a.expo == 0.0; });
}

int FockFunction::max_power() const {
  int p = -1;
  for (const auto& a : atoms_) p = std::max(p, a.power);
  return p;
}

double FockFunction::exponential_type() const {
  double t = 0.0;
  for (const auto& a : atoms_) t = std::max(t, std::abs(a.expo));
  return t;
}

cplx FockFunction::operator()(cplx z) const { return eval(*this, z); }

FockFunction FockFunction::shifted(cplx u) const {
  // c (z-u)^n e^{beta(z-u)} = c e^{-beta u} sum_k C(n,k) (-u)^{n-k} z^k e^{beta z}
  std::vector<FockAtom> out;
  for (const auto& a : atoms_) {
    const cplx base = a.coeff * std::exp(-a.expo * u);
    double binom = 1.0;
    for (int k = a.power; k >= 0; --k) {
      // binom = C(n, n-k) for the z^k term, built from k = n downward
      out.push_back({base * binom * ipow(-u, a.power - k), k, a.expo});
      binom = binom * k / (a.power - k + 1);
    }
  }
  return FockFunction(std::move(out));
}

FockFunction FockFunction::rescaled(cplx s) const {
  std::vector<FockAtom> out;
  out.reserve(atoms_.size());
  for (const auto& a : atoms_) out.push_back({a.coeff * ipow(s, a.power), a.power, a.expo * s});
  return FockFunction(std::move(out));
}

FockFunction& FockFunction::operator+=(const FockFunction& other) {
  atoms_.insert(atoms_.end(), other.atoms_.begin(), other.atoms_.end());
  canonicalize();
  return *this;
}

FockFunction& FockFunction::operator-=(const FockFunction& other) {
  for (const auto& a : other.atoms_) atoms_.push_back({-a.coeff, a.power, a.expo});
  canonicalize();
  return *this;
}

FockFunction& FockFunction::operator*=(cplx s) {
  for (auto& a : atoms_) a.coeff *= s;
  canonicalize();
  return *this;
}

FockFunction operator*(const FockFunction& lhs, const FockFunction& rhs) {
  std::vector<FockAtom> out;
  out.reserve(lhs.atoms_.size() * rhs.atoms_.size());
  for (const auto& x : lhs.atoms_) {
    for (const auto& y : rhs.atoms_) out.push_back({x.coeff * y.coeff, x.power + y.power, x.expo + y.expo});
  }
  return FockFunction(std::move(out));
}

bool operator==(const FockFunction& f, const FockFunction& g) {
  if (f.atoms_.size() != g.atoms_.size()) return false;
  for (std::size_t i = 0; i < f.atoms_.size(); ++i) {
    const auto& x = f.atoms_[i];
    const auto& y = g.atoms_[i];
    if (x.power != y.power || x.expo != y.expo || x.coeff != y.coeff) return false;
  }
  return true;
}

bool same_representation(const FockFunction& f, const FockFunction& g, double rel_tol) {
  const auto fa = f.atoms();
  const auto ga = g.atoms();
  if (fa.size() != ga.size()) return false;
  for (std::size_t i = 0; i < fa.size(); ++i) {
    if (fa[i].power != ga[i].power) return false;
    const double es = std::max({1.0, std::abs(fa[i].expo), std::abs(ga[i].expo)});
    if (std::abs(fa[i].expo - ga[i].expo) > rel_tol * es) return false;
    const double cs = std::max(std::abs(fa[i].coeff), std::abs(ga[i].coeff));
    if (std::abs(fa[i].coeff - ga[i].coeff) > rel_tol * cs) return false;
  }
  return true;
}

cplx eval(const FockFunction& f, cplx z) { return eval_weighted(f, z, 0.0); }

cplx eval_weighted(const FockFunction& f, cplx z, cplx log_weight) {
  cplx sum{0.0, 0.0};
  for (const auto& a : f.atoms()) sum += atom_term(a.coeff, a.power, z, a.expo * z + log_weight);
  return sum;
}

cplx inner(const FockFunction& f, const FockFunction& g) {
  cplx sum{0.0, 0.0};
  for (const auto& x : f.atoms()) {
    for (const auto& y : g.atoms()) sum += atom_inner(x, y);
  }
  return sum;
}

double norm(const FockFunction& f) { return std::sqrt(std::max(0.0, inner(f, f).real())); }

FockFunction multiply(const FockFunction& f, const FockFunction& g) { return f * g; }

cplx multiplier_rate(double a, double theta) { return std::polar(kPi / a, theta); }

FockFunction multiplier(double delta, double a, Sign sign, double theta, cplx lambda0) {
  detail::require(delta > 0.0 && std::isfinite(delta), "multiplier: delta must be positive");
  detail::require(a > 0.0 && std::isfinite(a), "multiplier: line spacing a must be positive");
  const cplx rate = multiplier_rate(a, theta);
  const cplx c = cplx(0.0, sign_value(sign) * delta) * std::exp(-rate * std::conj(lambda0));
  return FockFunction({FockAtom{1.0, 0, 0.0}, FockAtom{c, 0, rate}});
}

double CoefficientSeries::norm() const {
  double s = 0.0;
  for (const auto& c : coeffs) s += std::norm(c);
  return std::sqrt(s);
}

namespace {

// Taylor coefficients of one atom in the e_n basis: the k-th entry multiplies
// e_{power + k}.  Consecutive ratios |t_{k+1}/t_k| = |beta| sqrt((n+k+1)/pi)/(k+1)
// decrease strictly in k, which gives a geometric majorant for the tail.
struct AtomExpansion {
  FockAtom atom;
  std::vector<cplx> terms;

  explicit AtomExpansion(const FockAtom& a) : atom(a) {
    const double lm = std::log(std::abs(a.coeff)) + 0.5 * (std::lgamma(a.power + 1.0) - a.power * kLogPi);
    terms.push_back(std::polar(std::exp(lm), std::arg(a.coeff)));
  }

  [[nodiscard]] double ratio(int k) const {
    return std::abs(atom.expo) * std::sqrt((atom.power + k + 1) / kPi) / (k + 1);
  }

  void extend_to(int k) {
    while (static_cast<int>(terms.size()) <= k) {
      const int j = static_cast<int>(terms.size()) - 1;
      terms.push_back(terms.back() * atom.expo * std::sqrt((atom.power + j + 1) / kPi) / double(j + 1));
    }
  }

  // bound on sum_{k > kmax} |t_k|^2
  double tail_sq(int kmax) {
    if (atom.expo == 0.0) return 0.0;
    extend_to(kmax + 1);
    const double rho = ratio(kmax + 1);
    if (rho >= 1.0) return std::numeric_limits<double>::infinity();
    const double first = std::norm(terms[kmax + 1]);
    return first / (1.0 - rho * rho);
  }
};

}  // namespace

CoefficientSeries monomial_coeffs(const FockFunction& f, double tol) {
  detail::require(tol > 0.0, "monomial_coeffs: tol must be positive");
  CoefficientSeries out;
  if (f.is_zero()) return out;

  std::vector<AtomExpansion> expansions;
  for (const auto& a : f.atoms()) expansions.emplace_back(a);

  constexpr int kMaxIndex = 20000;
  int top = f.max_power();
  double bound = 0.0;
  for (;; ++top) {
    bound = 0.0;
    for (auto& e : expansions) bound += std::sqrt(e.tail_sq(top - e.atom.power));
    if (bound <= tol) break;
    if (top > kMaxIndex) throw NumericalError("monomial_coeffs: truncation index exceeds limit");
  }

  out.coeffs.assign(static_cast<std::size_t>(top) + 1, 0.0);
  for (auto& e : expansions) {
    const int kmax = top - e.atom.power;
    const int kend = e.atom.expo == 0.0 ? 0 : kmax;
    e.extend_to(kend);
    for (int k = 0; k <= kend; ++k) out.coeffs[e.atom.power + k] += e.terms[k];
  }
  out.tail_bound = bound;
  return out;
}

}  // namespace gul
