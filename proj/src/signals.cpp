#include "gul/signals.hpp"

#include <algorithm>
#include <cmath>

#include "gul/hermite.hpp"

namespace gul {
namespace {

constexpr long double kPiL = 3.14159265358979323846264338327950288L;
constexpr long double kFourthRootTwoL = 1.18920711500272106671749997056047591L;

std::span<long double> scratch(std::size_t n) {
  thread_local std::vector<long double> buf;
  if (buf.size() < n) buf.resize(n);
  return {buf.data(), n};
}

lcplx modulation(double freq, long double t) {
  if (freq == 0.0) return {1.0L, 0.0L};
  const long double ph = 2.0L * kPiL * freq * t;
  return {std::cos(ph), std::sin(ph)};
}

lcplx base_pair_value(const BasePairTerm& term, long double t) {
  const long double s = t - term.shift;
  const long double arg = kPiL * s / term.a;
  const long double phi = kFourthRootTwoL * std::exp(-kPiL * s * s);
  const long double sg = term.sign == Sign::plus ? 1.0L : -1.0L;
  const lcplx h(phi * std::cosh(arg), sg * phi * std::sinh(arg));
  return lcplx(term.coeff) * h * modulation(term.freq, t);
}

double binom(int n, int k) {
  double b = 1.0;
  for (int j = 1; j <= k; ++j) b = b * (n - k + j) / j;
  return b;
}

}  // namespace

double hermite_eval(int n, double t, int n_max) {
  detail::require(n >= 0, "hermite_eval: order must be nonnegative");
  detail::require(n <= n_max, "hermite_eval: order exceeds certified maximum");
  std::vector<double> out(static_cast<std::size_t>(n) + 1);
  hermite_functions<double>(t, out);
  return out.back();
}

TimeSignal TimeSignal::hermite(int n) {
  TimeSignal s;
  s.hermite_coeffs.assign(static_cast<std::size_t>(n) + 1, 0.0);
  s.hermite_coeffs.back() = 1.0;
  return s;
}

lcplx TimeSignal::eval(long double t) const {
  if (hermite_coeffs.empty()) return 0.0L;
  auto psi = scratch(hermite_coeffs.size());
  hermite_functions<long double>(t, psi);
  lcplx sum = 0.0L;
  for (std::size_t n = 0; n < hermite_coeffs.size(); ++n) sum += lcplx(hermite_coeffs[n]) * psi[n];
  return sum;
}

cplx TimeSignal::eval(double t) const { return cplx(eval(static_cast<long double>(t))); }

double TimeSignal::coeff_norm() const {
  double s = 0.0;
  for (const auto& c : hermite_coeffs) s += std::norm(c);
  return std::sqrt(s);
}

Interval TimeSignal::norm() const {
  const double n = coeff_norm();
  return {n, n + tail_bound};
}

ClosedFormSignal ClosedFormSignal::gaussian() { return shifted_hermite(0, 0.0, 0.0); }

ClosedFormSignal ClosedFormSignal::shifted_gaussian(double u) { return shifted_hermite(0, u, 0.0); }

ClosedFormSignal ClosedFormSignal::hermite(int n) { return shifted_hermite(n, 0.0, 0.0); }

ClosedFormSignal ClosedFormSignal::shifted_hermite(int n, double shift, double freq, cplx coeff) {
  detail::require(n >= 0, "shifted_hermite: order must be nonnegative");
  ClosedFormSignal s;
  HermitePacket p{shift, freq, std::vector<cplx>(static_cast<std::size_t>(n) + 1, 0.0)};
  p.coeffs.back() = coeff;
  s.packets_.push_back(std::move(p));
  return s;
}

ClosedFormSignal ClosedFormSignal::base_member(double a, Sign sign) {
  detail::require(a > 0.0, "base_member: a must be positive");
  ClosedFormSignal s;
  s.base_terms_.push_back({1.0, a, sign, 0.0, 0.0});
  return s;
}

lcplx ClosedFormSignal::eval(long double t) const {
  lcplx sum = 0.0L;
  for (const auto& p : packets_) {
    auto psi = scratch(p.coeffs.size());
    hermite_functions<long double>(t - p.shift, psi);
    lcplx s = 0.0L;
    for (std::size_t k = 0; k < p.coeffs.size(); ++k) s += lcplx(p.coeffs[k]) * psi[k];
    sum += s * modulation(p.freq, t);
  }
  for (const auto& b : base_terms_) sum += base_pair_value(b, t);
  return sum;
}

double ClosedFormSignal::extent() const {
  double r = 0.0;
  for (const auto& p : packets_) {
    const double order = static_cast<double>(p.coeffs.size()) - 1.0;
    r = std::max(r, std::abs(p.shift) + std::sqrt((2.0 * order + 1.0) / (2.0 * kPi)));
  }
  for (const auto& b : base_terms_) r = std::max(r, std::abs(b.shift) + 0.5 / b.a);
  return r;
}

double ClosedFormSignal::max_freq() const {
  double f = 0.0;
  for (const auto& p : packets_) {
    const double order = static_cast<double>(p.coeffs.size()) - 1.0;
    f = std::max(f, std::abs(p.freq) + std::sqrt((2.0 * order + 1.0) / (2.0 * kPi)));
  }
  for (const auto& b : base_terms_) f = std::max(f, std::abs(b.freq) + 1.0);
  return f;
}

void ClosedFormSignal::add_packet(HermitePacket p) {
  auto it = std::find_if(packets_.begin(), packets_.end(),
                         [&](const HermitePacket& q) { return q.shift == p.shift && q.freq == p.freq; });
  if (it == packets_.end()) {
    packets_.push_back(std::move(p));
    return;
  }
  if (it->coeffs.size() < p.coeffs.size()) it->coeffs.resize(p.coeffs.size(), 0.0);
  for (std::size_t k = 0; k < p.coeffs.size(); ++k) it->coeffs[k] += p.coeffs[k];
}

ClosedFormSignal& ClosedFormSignal::operator+=(const ClosedFormSignal& other) {
  for (const auto& p : other.packets_) add_packet(p);
  base_terms_.insert(base_terms_.end(), other.base_terms_.begin(), other.base_terms_.end());
  return *this;
}

ClosedFormSignal& ClosedFormSignal::operator*=(cplx s) {
  for (auto& p : packets_) {
    for (auto& c : p.coeffs) c *= s;
  }
  for (auto& b : base_terms_) b.coeff *= s;
  return *this;
}

ClosedFormSignal ClosedFormSignal::translated(double u) const {
  // T_u (e^{2 pi i xi t} g(t)) = e^{-2 pi i xi u} e^{2 pi i xi t} g(t - u)
  ClosedFormSignal out = *this;
  for (auto& p : out.packets_) {
    const cplx ph = std::polar(1.0, -2.0 * kPi * p.freq * u);
    p.shift += u;
    for (auto& c : p.coeffs) c *= ph;
  }
  for (auto& b : out.base_terms_) {
    b.coeff *= std::polar(1.0, -2.0 * kPi * b.freq * u);
    b.shift += u;
  }
  return out;
}

ClosedFormSignal closed_form_from_fock(const FockFunction& f) {
  // With lambda = beta / pi = x0 + i xi0,
  //   B(M_xi0 T_x0 g)(z) = e^{i pi x0 xi0} e^{pi lambda z - pi |lambda|^2 / 2} Bg(z - conj(lambda)),
  // so z^n e^{beta z} = e^{pi |lambda|^2/2 - i pi x0 xi0}
  //                     sum_k C(n,k) conj(lambda)^{n-k} (k!/pi^k)^{1/2} B(M_xi0 T_x0 H_k)(z).
  ClosedFormSignal out;
  for (const auto& a : f.atoms()) {
    const cplx lambda = a.expo / kPi;
    const double x0 = lambda.real();
    const double xi0 = lambda.imag();
    const cplx pref = std::exp(cplx(kPi * std::norm(lambda) / 2.0, -kPi * x0 * xi0));
    ClosedFormSignal term;
    HermitePacket p{x0, xi0, std::vector<cplx>(static_cast<std::size_t>(a.power) + 1, 0.0)};
    for (int k = 0; k <= a.power; ++k) {
      const cplx lam_pow = std::pow(std::conj(lambda), a.power - k);
      p.coeffs[k] = a.coeff * pref * binom(a.power, k) * (a.power - k == 0 ? cplx(1.0) : lam_pow) / basis_scale(k);
    }
    term.packets_.push_back(std::move(p));
    out += term;
  }
  return out;
}

FockFunction bargmann_series(const TimeSignal& f) { return FockFunction::from_basis_coeffs(f.hermite_coeffs); }

cplx bargmann_quadrature(const ClosedFormSignal& f, cplx z, double tol) {
  detail::require(tol >= 1e-12, "bargmann_quadrature: tol must be at least 1e-12");
  if (kPi * std::norm(z) / 2.0 > 700.0) throw NumericalError("bargmann_quadrature: integrand overflows at this z");
  const lcplx zl(z);
  auto integrand = [&](long double t) {
    const lcplx e = 2.0L * kPiL * t * zl - kPiL * t * t - kPiL * zl * zl / 2.0L;
    return kFourthRootTwoL * f.eval(t) * std::exp(e);
  };
  const long double half = std::max(4.0, std::abs(z) + 4.0) + f.extent();
  const auto res = trapezoid(integrand, -half, half, tol, std::abs(z.imag()) + f.max_freq());
  if (!res.converged) throw NumericalError("bargmann_quadrature: step halving did not converge");
  return cplx(res.value);
}

TimeSignal inverse_bargmann(const FockFunction& f, double tol) {
  auto series = monomial_coeffs(f, tol);
  return TimeSignal{std::move(series.coeffs), series.tail_bound};
}

FockFunction translate_image(const FockFunction& image, double u) {
  if (u == 0.0) return image;
  return image.shifted(u) * FockFunction::exponential(kPi * u, std::exp(-kPi * u * u / 2.0));
}

TimeSignal translate(const TimeSignal& f, double u, double tol) {
  if (u == 0.0) return f;
  auto out = inverse_bargmann(translate_image(bargmann_series(f), u), tol);
  out.tail_bound += f.tail_bound;
  return out;
}

ClosedFormSignal translate(const ClosedFormSignal& f, double u) { return f.translated(u); }

Interval l2_distance(const TimeSignal& f, const TimeSignal& g) {
  const std::size_t n = std::max(f.hermite_coeffs.size(), g.hermite_coeffs.size());
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const cplx a = k < f.hermite_coeffs.size() ? f.hermite_coeffs[k] : 0.0;
    const cplx b = k < g.hermite_coeffs.size() ? g.hermite_coeffs[k] : 0.0;
    s += std::norm(a - b);
  }
  const double d = std::sqrt(s);
  const double slack = f.tail_bound + g.tail_bound;
  return {std::max(0.0, d - slack), d + slack};
}

namespace {

double wrap_angle(double a) {
  double r = std::fmod(a, 2.0 * kPi);
  if (r < 0.0) r += 2.0 * kPi;
  return r;
}

}  // namespace

PhaseDistance phase_distance(const TimeSignal& f, const TimeSignal& g) {
  const std::size_t n = std::max(f.hermite_coeffs.size(), g.hermite_coeffs.size());
  auto at = [](const TimeSignal& s, std::size_t k) { return k < s.hermite_coeffs.size() ? s.hermite_coeffs[k] : 0.0; };
  cplx ip = 0.0;
  for (std::size_t k = 0; k < n; ++k) ip += at(g, k) * std::conj(at(f, k));
  const double alpha = ip == 0.0 ? 0.0 : wrap_angle(std::arg(ip));
  const cplx rot = std::polar(1.0, alpha);
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += std::norm(at(g, k) - rot * at(f, k));
  return {alpha, std::sqrt(s)};
}

PhaseDistance phase_distance(const FockFunction& f, const FockFunction& g) {
  const cplx ip = inner(g, f);
  const double alpha = ip == 0.0 ? 0.0 : wrap_angle(std::arg(ip));
  return {alpha, norm(g - std::polar(1.0, alpha) * f)};
}

}  // namespace gul
