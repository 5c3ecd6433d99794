#pragma once

// Counterexample pairs for sampled Gabor phase retrieval.
//
// Every pair produced here has Bargmann images of the form
//
//     G+- = k+- * F * H+-_delta,   H+-_delta(z) = 1 +- i delta exp((pi e^{i theta}/a)(z - conj(lambda0))),
//
// with |k+| = |k-|.  Since |H+| = |H-| on e^{-i theta}(R + i a Z) + conj(lambda0),
// the Gabor magnitudes of g+ and g- agree on R_theta(R x aZ) + lambda0, while
// the roots of H+ are never roots of H-, so g+ and g- are not equal up to a
// global phase.  Verification is window-restricted; the representation-level
// identity is recorded separately as `symbolic_agreement`.

#include <optional>
#include <string>
#include <vector>

#include "gul/common.hpp"
#include "gul/fock.hpp"
#include "gul/gabor.hpp"
#include "gul/signals.hpp"

namespace gul {

struct AgreementReport {
  double max_abs_diff = 0.0;
  double max_rel_diff = 0.0;
  double max_magnitude = 0.0;
  std::size_t points_checked = 0;
  /// Sample point where max_abs_diff is attained.
  SamplePoint argmax;
  bool oracle = false;
  bool pass = false;
};

struct DistinctReport {
  double phase_distance = 0.0;
  std::optional<cplx> root_witness;
  /// |G-(z*)| and |G+(z*)| at the witness.
  double witness_other = 0.0;
  double witness_self = 0.0;
  bool pass = false;
};

struct PairMeta {
  std::string mode;
  double a = 1.0;
  double delta = 1.0;
  double theta = 0.0;
  cplx lambda0{0.0, 0.0};
  std::optional<FockFunction> polynomial;
  std::optional<double> epsilon;
  /// Time shift of the base pair (shifted mode).
  double shift = 0.0;
  /// Triangle-inequality bound on ||f - g+-|| (density mode).
  std::optional<double> triangle_bound;
};

struct PairCertificates {
  std::optional<AgreementReport> agreement;
  std::optional<Interval> distance_plus;
  std::optional<Interval> distance_minus;
  std::optional<double> phase_distance;
};

struct CounterexamplePair {
  TimeSignal g_plus;
  TimeSignal g_minus;
  FockFunction image_plus;
  FockFunction image_minus;
  ClosedFormSignal closed_plus;
  ClosedFormSignal closed_minus;

  /// Common factor F and unimodular-up-to-scale prefactors k+- of the images.
  FockFunction base;
  cplx unit_plus{1.0, 0.0};
  cplx unit_minus{1.0, 0.0};

  LineFamily family;
  PairMeta meta;
  PairCertificates certificates;
  /// Images equal k+- F H+-_delta at the representation level.
  bool symbolic_agreement = false;

  [[nodiscard]] FockFunction multiplier_plus() const;
  [[nodiscard]] FockFunction multiplier_minus() const;
};

/// Fock image of h+-(t) = phi(t)(cosh(pi t / a) +- i sinh(pi t / a)):
/// (e^{pi/(8a^2)}/2) ((1 -+ i) + (1 +- i) e^{pi z / a}) e^{-pi z / (2a)}.
FockFunction base_pair_image(double a, Sign sign);

CounterexamplePair base_pair(double a);

/// Base pair translated by u = -(a/pi) log(delta).  `meta.shift` holds u.
CounterexamplePair shifted_pair(double a, double delta);

/// True when the shifted images, multiplied by delta^{az} e^{pi z/(2a)}, the
/// reciprocal of their constant and (1 +- i)/2, reduce to H+-_delta.
bool shifted_pair_normalizes(const CounterexamplePair& pair);

/// Pair F H+-_delta with delta = epsilon / (2 ||F E||), E the exponential
/// factor of the multiplier for `family`.
CounterexamplePair perturb_pair(const FockFunction& f, double epsilon, const LineFamily& family);
/// Same with an explicit delta; the distance certificates are still computed.
CounterexamplePair perturb_pair_with_delta(const FockFunction& f, double delta, const LineFamily& family);

/// Constructive density step: truncate B f to a polynomial P, choose delta
/// and pull P H+-_delta back, certifying ||f - g+-|| < epsilon.
CounterexamplePair density_construct(const TimeSignal& f, double epsilon, const LineFamily& family);

struct VerifyWindow {
  double s_min = -5.0;
  double s_max = 5.0;
  double s_step = 0.1;
  int n_min = -20;
  int n_max = 20;
};

enum class VerifyMode { fast, oracle };

AgreementReport verify_agreement(const CounterexamplePair& pair, const VerifyWindow& window, double tol,
                                 VerifyMode mode = VerifyMode::fast);
/// Agreement at explicit time-frequency points (off-family or lattice checks).
AgreementReport verify_agreement_at(const CounterexamplePair& pair, std::span<const SamplePoint> points, double tol,
                                    VerifyMode mode = VerifyMode::fast);

/// Roots of H+-_delta closest to the real axis of the rotated frame:
/// conj(lambda0) + (a/pi) e^{-i theta} (log(1/delta) + i (+-pi/2 + 2 pi k)).
cplx multiplier_root(double a, double delta, Sign sign, double theta, cplx lambda0, int k);

DistinctReport verify_distinct(const CounterexamplePair& pair, double tol_dist = 1e-8);

}  // namespace gul
