#pragma once

// Desk-scale probes around Gaussian uniqueness on the square lattice aZ^2.
//
// growth_hypothesis_check and pointwise_bound_check test the two hypotheses
// that make a Fock function with unimodular lattice samples constant: growth
// strictly below order 2 / type pi/2 after rescaling, and boundedness on the
// integer lattice.  constant_fit_search looks for truncated Fock functions
// F = sum_{n<=N} c_n e_n with |F| = 1 on the lattice points inside a disc and
// reports whether every feasible fit is (close to) a unimodular constant.
// None of this is a proof; verdicts are empirical corroboration.

#include <cstdint>
#include <string>
#include <vector>

#include "gul/common.hpp"
#include "gul/fock.hpp"

namespace gul {

struct GrowthSample {
  double r = 0.0;
  /// log M(r) / r^2 with M(r) the sampled maximum modulus on |z| = r.
  double ratio = 0.0;
};

struct GrowthReport {
  /// Order of the entire function: 0 for polynomials, 1 otherwise (-1 for zero).
  int order = 0;
  /// Exponential type max |beta| (0 for polynomials).
  double type = 0.0;
  /// limsup log M(r)/r^2, exact for the atom class (always 0).
  double analytic_limsup = 0.0;
  bool growth_hypothesis = true;
  std::vector<GrowthSample> samples;

  bool lattice_bound_holds = true;
  double lattice_max = 0.0;
  cplx lattice_argmax{0.0, 0.0};
  std::vector<cplx> lattice_violations;

  [[nodiscard]] bool hypotheses_hold() const { return growth_hypothesis && lattice_bound_holds; }
};

GrowthReport growth_hypothesis_check(const FockFunction& f, double kappa, double r_max);

struct PointwiseBound {
  double value = 0.0;  // |F(z)|
  double bound = 0.0;  // ||F|| e^{pi |z|^2 / 2}
  double slack = 0.0;  // bound - value
  bool holds = true;
};

PointwiseBound pointwise_bound_check(const FockFunction& f, cplx z);

struct ProbeConfig {
  double a = 0.5;
  double radius = 3.0;
  int order = 8;
  int starts = 20;
  double tol_feas = 1e-8;
  double near_constant = 1e-4;
  std::uint64_t seed = 0;
  int max_iterations = 500;
  double gradient_tol = 1e-10;
  /// Permit fewer constraints than real unknowns (exploratory runs only).
  bool allow_underdetermined = false;

  void validate() const;
};

struct ProbeMinimizer {
  std::vector<cplx> coeffs;
  double residual = 0.0;
  double distance_to_constants = 0.0;
  int iterations = 0;
  bool feasible = false;
};

enum class ProbeVerdict { all_near_constant, nonconstant_feasible_found, inconclusive };

std::string to_string(ProbeVerdict v);

struct ProbeResult {
  std::vector<ProbeMinimizer> minimizers;  // one per start, ordered by start index
  std::size_t constraint_points = 0;
  ProbeVerdict verdict = ProbeVerdict::inconclusive;
  /// a >= 1 has no expected verdict.
  bool exploratory = false;
};

/// Lattice points a(m + i n) with |a(m + i n)| <= radius.
std::vector<cplx> probe_lattice(double a, double radius);

/// sqrt(sum_{n>=1} |c_n|^2 + (|c_0| - 1)^2): distance to the unimodular constants.
double distance_to_constants(const std::vector<cplx>& coeffs);

/// sum over lattice points of (|F(lambda)|^2 - 1)^2
double probe_residual(const std::vector<cplx>& coeffs, const std::vector<cplx>& points);

ProbeResult constant_fit_search(const ProbeConfig& cfg);

}  // namespace gul
