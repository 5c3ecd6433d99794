#include "gul/counterexamples.hpp"

#include <algorithm>
#include <cmath>

namespace gul {
namespace {

double series_tol(const FockFunction& f, double cap) {
  return std::min(cap, 1e-13 * std::max(1.0, norm(f)));
}

// exponential part of the multiplier: z -> exp(rate (z - conj(lambda0)))
FockFunction multiplier_exponential(double a, double theta, cplx lambda0) {
  const cplx rate = multiplier_rate(a, theta);
  return FockFunction::exponential(rate, std::exp(-rate * std::conj(lambda0)));
}

bool images_factor(const CounterexamplePair& p) {
  const auto plus = p.unit_plus * (p.base * p.multiplier_plus());
  const auto minus = p.unit_minus * (p.base * p.multiplier_minus());
  return same_representation(p.image_plus, plus, 1e-12) && same_representation(p.image_minus, minus, 1e-12);
}

LineFamily default_family(double a) {
  LineFamily fam;
  fam.a = a;
  return fam;
}

}  // namespace

FockFunction CounterexamplePair::multiplier_plus() const {
  return multiplier(meta.delta, meta.a, Sign::plus, meta.theta, meta.lambda0);
}

FockFunction CounterexamplePair::multiplier_minus() const {
  return multiplier(meta.delta, meta.a, Sign::minus, meta.theta, meta.lambda0);
}

FockFunction base_pair_image(double a, Sign sign) {
  detail::require(a > 0.0 && std::isfinite(a), "base_pair: a must be positive");
  const double c = std::exp(kPi / (8.0 * a * a)) / 2.0;
  const double s = sign_value(sign);
  return FockFunction({FockAtom{c * cplx(1.0, -s), 0, -kPi / (2.0 * a)}, FockAtom{c * cplx(1.0, s), 0, kPi / (2.0 * a)}});
}

CounterexamplePair base_pair(double a) {
  detail::require(a > 0.0 && std::isfinite(a), "base_pair: a must be positive");
  CounterexamplePair p;
  p.image_plus = base_pair_image(a, Sign::plus);
  p.image_minus = base_pair_image(a, Sign::minus);
  p.closed_plus = ClosedFormSignal::base_member(a, Sign::plus);
  p.closed_minus = ClosedFormSignal::base_member(a, Sign::minus);
  p.g_plus = inverse_bargmann(p.image_plus, series_tol(p.image_plus, 1e-10));
  p.g_minus = inverse_bargmann(p.image_minus, series_tol(p.image_minus, 1e-10));

  p.base = FockFunction::exponential(-kPi / (2.0 * a), std::exp(kPi / (8.0 * a * a)) / 2.0);
  p.unit_plus = cplx(1.0, -1.0);
  p.unit_minus = cplx(1.0, 1.0);
  p.family = default_family(a);
  p.meta.mode = "base";
  p.meta.a = a;
  p.meta.delta = 1.0;
  p.symbolic_agreement = images_factor(p);
  p.certificates.phase_distance = phase_distance(p.image_plus, p.image_minus).dist;
  return p;
}

CounterexamplePair shifted_pair(double a, double delta) {
  detail::require(a > 0.0 && std::isfinite(a), "shifted_pair: a must be positive");
  detail::require(delta > 0.0 && std::isfinite(delta), "shifted_pair: delta must be positive");
  auto p = base_pair(a);
  const double u = -(a / kPi) * std::log(delta);
  if (u == 0.0) {
    p.meta.mode = "shifted";
    return p;
  }
  p.image_plus = translate_image(p.image_plus, u);
  p.image_minus = translate_image(p.image_minus, u);
  p.closed_plus = translate(p.closed_plus, u);
  p.closed_minus = translate(p.closed_minus, u);
  p.g_plus = inverse_bargmann(p.image_plus, series_tol(p.image_plus, 1e-10));
  p.g_minus = inverse_bargmann(p.image_minus, series_tol(p.image_minus, 1e-10));
  p.base = translate_image(p.base, u);
  p.meta.mode = "shifted";
  p.meta.delta = delta;
  p.meta.shift = u;
  p.symbolic_agreement = images_factor(p);
  p.certificates.phase_distance = phase_distance(p.image_plus, p.image_minus).dist;
  return p;
}

bool shifted_pair_normalizes(const CounterexamplePair& pair) {
  const auto atoms = pair.base.atoms();
  if (atoms.size() != 1 || atoms[0].power != 0) return false;
  // 1 / base = (1/kappa) e^{-beta z}; for the shifted pair this is the constant
  // times delta^{az} e^{pi z / (2a)}.
  const auto inv_base = FockFunction::exponential(-atoms[0].expo, 1.0 / atoms[0].coeff);
  const auto plus = (pair.image_plus * inv_base) * (cplx(1.0, 1.0) / 2.0);
  const auto minus = (pair.image_minus * inv_base) * (cplx(1.0, -1.0) / 2.0);
  return same_representation(plus, pair.multiplier_plus(), 1e-10) &&
         same_representation(minus, pair.multiplier_minus(), 1e-10);
}

CounterexamplePair perturb_pair_with_delta(const FockFunction& f, double delta, const LineFamily& family) {
  detail::require(!f.is_zero(), "perturb_pair: F must be nonzero");
  detail::require(delta > 0.0 && std::isfinite(delta), "perturb_pair: delta must be positive");
  detail::require(family.a > 0.0, "perturb_pair: line spacing must be positive");
  CounterexamplePair p;
  p.family = family;
  p.meta.mode = "perturb";
  p.meta.a = family.a;
  p.meta.delta = delta;
  p.meta.theta = family.theta;
  p.meta.lambda0 = family.lambda0;
  p.base = f;
  p.image_plus = f * p.multiplier_plus();
  p.image_minus = f * p.multiplier_minus();
  p.closed_plus = closed_form_from_fock(p.image_plus);
  p.closed_minus = closed_form_from_fock(p.image_minus);
  p.symbolic_agreement = images_factor(p);

  // ||F - F H+-|| = delta ||F E|| exactly
  const double exact = delta * norm(f * multiplier_exponential(family.a, family.theta, family.lambda0));
  const double tol = std::min(1e-12 * std::max(1.0, norm(p.image_plus)), 1e-6 * exact);
  const auto pullback = inverse_bargmann(f, tol);
  p.g_plus = inverse_bargmann(p.image_plus, tol);
  p.g_minus = inverse_bargmann(p.image_minus, tol);
  p.certificates.distance_plus = l2_distance(pullback, p.g_plus);
  p.certificates.distance_minus = l2_distance(pullback, p.g_minus);
  p.meta.triangle_bound = exact;
  p.certificates.phase_distance = phase_distance(p.image_plus, p.image_minus).dist;
  return p;
}

CounterexamplePair perturb_pair(const FockFunction& f, double epsilon, const LineFamily& family) {
  detail::require(epsilon > 0.0 && std::isfinite(epsilon), "perturb_pair: epsilon must be positive");
  detail::require(!f.is_zero(), "perturb_pair: F must be nonzero");
  const double scale = norm(f * multiplier_exponential(family.a, family.theta, family.lambda0));
  auto p = perturb_pair_with_delta(f, 0.5 * epsilon / scale, family);
  p.meta.epsilon = epsilon;
  if (p.certificates.distance_plus->high >= epsilon || p.certificates.distance_minus->high >= epsilon) {
    throw NumericalError("perturb_pair: distance certificate exceeds epsilon");
  }
  return p;
}

CounterexamplePair density_construct(const TimeSignal& f, double epsilon, const LineFamily& family) {
  detail::require(epsilon > 0.0 && std::isfinite(epsilon), "density_construct: epsilon must be positive");
  detail::require(f.tail_bound < epsilon / 4.0, "density_construct: input tail bound too large for epsilon");
  detail::require(family.a > 0.0, "density_construct: line spacing must be positive");

  // (i) polynomial P with ||Bf - P|| <= trunc + tail(f) < epsilon / 4
  const auto& c = f.hermite_coeffs;
  std::vector<double> suffix(c.size() + 1, 0.0);
  for (std::size_t n = c.size(); n-- > 0;) suffix[n] = suffix[n + 1] + std::norm(c[n]);
  std::size_t keep = c.size();
  for (std::size_t m = 0; m <= c.size(); ++m) {
    if (std::sqrt(suffix[m]) + f.tail_bound < epsilon / 4.0) {
      keep = m;
      break;
    }
  }
  auto poly = FockFunction::from_basis_coeffs(std::span<const cplx>(c.data(), keep));
  double trunc = std::sqrt(suffix[keep]);
  if (poly.is_zero()) {
    // f is within epsilon/4 of zero; any nonzero P of size epsilon/8 works
    poly = FockFunction::constant(epsilon / 8.0);
    trunc = std::sqrt(suffix[0]) + epsilon / 8.0;
  }

  // (ii) ||P - P H+-|| = delta ||P E|| = epsilon / 4
  const double scale = norm(poly * multiplier_exponential(family.a, family.theta, family.lambda0));
  const double delta = 0.5 * (epsilon / 2.0) / scale;

  // (iii) pull back P H+-
  CounterexamplePair p;
  p.family = family;
  p.meta.mode = "density";
  p.meta.a = family.a;
  p.meta.delta = delta;
  p.meta.theta = family.theta;
  p.meta.lambda0 = family.lambda0;
  p.meta.polynomial = poly;
  p.meta.epsilon = epsilon;
  p.base = poly;
  p.image_plus = poly * p.multiplier_plus();
  p.image_minus = poly * p.multiplier_minus();
  p.closed_plus = closed_form_from_fock(p.image_plus);
  p.closed_minus = closed_form_from_fock(p.image_minus);
  p.symbolic_agreement = images_factor(p);

  const double tol = std::min(1e-6 * epsilon, 1e-12 * std::max(1.0, norm(p.image_plus)));
  p.g_plus = inverse_bargmann(p.image_plus, tol);
  p.g_minus = inverse_bargmann(p.image_minus, tol);
  p.certificates.distance_plus = l2_distance(f, p.g_plus);
  p.certificates.distance_minus = l2_distance(f, p.g_minus);
  const double tails = std::max(p.g_plus.tail_bound, p.g_minus.tail_bound);
  p.meta.triangle_bound = trunc + f.tail_bound + delta * scale + tails;
  p.certificates.phase_distance = phase_distance(p.image_plus, p.image_minus).dist;

  if (p.certificates.distance_plus->high >= epsilon || p.certificates.distance_minus->high >= epsilon ||
      *p.meta.triangle_bound >= epsilon) {
    throw NumericalError("density_construct: distance certificate exceeds epsilon");
  }
  return p;
}

AgreementReport verify_agreement(const CounterexamplePair& pair, const VerifyWindow& window, double tol,
                                 VerifyMode mode) {
  LineFamily fam = pair.family;
  fam.n_min = window.n_min;
  fam.n_max = window.n_max;
  const auto pts = sample_line_family(fam, window.s_min, window.s_max, window.s_step);
  return verify_agreement_at(pair, pts, tol, mode);
}

AgreementReport verify_agreement_at(const CounterexamplePair& pair, std::span<const SamplePoint> points, double tol,
                                    VerifyMode mode) {
  detail::require(!points.empty(), "verify_agreement: empty window");
  AgreementReport r;
  r.oracle = mode == VerifyMode::oracle;
  r.points_checked = points.size();
  std::vector<double> plus;
  std::vector<double> minus;
  if (r.oracle) {
    plus = sample_magnitudes_quadrature(pair.closed_plus, points, 1e-12);
    minus = sample_magnitudes_quadrature(pair.closed_minus, points, 1e-12);
  } else {
    plus = sample_magnitudes(pair.image_plus, points);
    minus = sample_magnitudes(pair.image_minus, points);
  }
  for (std::size_t i = 0; i < points.size(); ++i) r.max_magnitude = std::max({r.max_magnitude, plus[i], minus[i]});
  const double significant = 1e-12 * r.max_magnitude;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double d = std::abs(plus[i] - minus[i]);
    if (d > r.max_abs_diff || i == 0) {
      r.max_abs_diff = d;
      r.argmax = points[i];
    }
    const double m = std::max(plus[i], minus[i]);
    if (m > significant) r.max_rel_diff = std::max(r.max_rel_diff, d / m);
  }
  r.pass = r.max_abs_diff <= tol * (1.0 + r.max_magnitude);
  return r;
}

cplx multiplier_root(double a, double delta, Sign sign, double theta, cplx lambda0, int k) {
  const cplx w(std::log(1.0 / delta), sign_value(sign) * kPi / 2.0 + 2.0 * kPi * k);
  return std::conj(lambda0) + (a / kPi) * std::polar(1.0, -theta) * w;
}

DistinctReport verify_distinct(const CounterexamplePair& pair, double tol_dist) {
  DistinctReport r;
  r.phase_distance = phase_distance(pair.image_plus, pair.image_minus).dist;
  r.pass = r.phase_distance > tol_dist;

  // roots of H+ ordered by distance of the rotated imaginary part from zero:
  // k = 0, -1, 1, -2, 2, ...
  for (int j = 0; j < 9; ++j) {
    const int k = (j % 2 == 1) ? -(j + 1) / 2 : j / 2;
    const cplx z = multiplier_root(pair.meta.a, pair.meta.delta, Sign::plus, pair.meta.theta, pair.meta.lambda0, k);
    const double self = std::abs(eval(pair.image_plus, z));
    const double other = std::abs(eval(pair.image_minus, z));
    if (std::isfinite(other) && other > 0.0 && self <= 1e-8 * other) {
      r.root_witness = z;
      r.witness_self = self;
      r.witness_other = other;
      break;
    }
  }
  return r;
}

}  // namespace gul
