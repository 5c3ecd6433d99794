#pragma once

// Gabor transform with the normalised Gaussian window,
//
//     G f(x, w) = 2^{1/4} \int f(t) exp(-pi (t - x)^2) exp(-2 pi i t w) dt,
//
// evaluated either through the Bargmann image,
//
//     G f(x, w) = exp(-pi i x w) B f(x - i w) exp(-pi (x^2 + w^2) / 2),
//
// or by direct quadrature of the integral (the independent oracle).  The
// reflected form G f(x, -w) = exp(pi i x w) B f(x + i w) exp(...) is the same
// identity under w -> -w.
//
// A time-frequency point (x, w) corresponds to the Fock-side point
// z = x - i w.  Parallel kernels have a serial twin used by the tests.

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "gul/common.hpp"
#include "gul/fock.hpp"
#include "gul/signals.hpp"

namespace gul {

cplx gabor_eval(const FockFunction& image, double x, double w);
cplx gabor_quadrature(const ClosedFormSignal& f, double x, double w, double tol);

/// The set R_theta(R x aZ) + lambda0 in the time-frequency plane, i.e. the
/// points e^{i theta}(s + i a n) + lambda0, restricted to lines n in
/// [n_min, n_max].
struct LineFamily {
  double a = 1.0;
  double theta = 0.0;
  cplx lambda0{0.0, 0.0};
  int n_min = -20;
  int n_max = 20;

  /// Time-frequency point (x + i w) at arclength s on line n.
  [[nodiscard]] cplx point(double s, int n) const;
  /// Signed line coordinate Im(e^{-i theta}(p - lambda0)) / a; integral on the family.
  [[nodiscard]] double line_coordinate(cplx tf_point) const;
  /// Distance from a time-frequency point to the nearest line (all n).
  [[nodiscard]] double distance_to_lines(cplx tf_point) const;
};

struct SamplePoint {
  double x = 0.0;
  double omega = 0.0;
  int line = 0;

  [[nodiscard]] cplx tf() const { return {x, omega}; }
  /// Point where the Bargmann image is evaluated.
  [[nodiscard]] cplx fock() const { return {x, -omega}; }
};

std::vector<SamplePoint> sample_line_family(const LineFamily& family, double s_min, double s_max, double s_step);

/// Lattice L Z^k with L a 2 x k matrix, stored column-wise.
struct LatticeSpec {
  std::array<double, 2> v1{1.0, 0.0};
  std::array<double, 2> v2{0.0, 1.0};
  int rank = 2;

  static LatticeSpec quadratic(double a) { return {{a, 0.0}, {0.0, a}, 2}; }
  [[nodiscard]] cplx point(long m, long n) const;
};

/// Line family containing every point of the lattice.  By default the first
/// column sets the line direction; `reduce` first swaps in the shorter basis
/// vector.
LineFamily lattice_embed(const LatticeSpec& lattice, bool reduce = false);

struct GridSpec {
  double x_min = -3.0, x_max = 3.0, x_step = 0.05;
  double w_min = -3.0, w_max = 3.0, w_step = 0.05;
  std::size_t cell_cap = 10'000'000;

  [[nodiscard]] std::size_t nx() const;
  [[nodiscard]] std::size_t nw() const;
  [[nodiscard]] double x_at(std::size_t i) const { return x_min + static_cast<double>(i) * x_step; }
  [[nodiscard]] double w_at(std::size_t j) const { return w_min + static_cast<double>(j) * w_step; }
  void validate() const;
};

struct SpectrogramGrid {
  GridSpec spec;
  std::size_t nx = 0;
  std::size_t nw = 0;
  /// |G f(x_i, w_j)| at values[i * nw + j] (x outer).
  std::vector<double> values;

  [[nodiscard]] double at(std::size_t i, std::size_t j) const { return values[i * nw + j]; }
  [[nodiscard]] double max() const;
};

SpectrogramGrid spectrogram_grid(const FockFunction& image, const GridSpec& spec);
SpectrogramGrid spectrogram_grid_serial(const FockFunction& image, const GridSpec& spec);

/// |G f| at each sample point.
std::vector<double> sample_magnitudes(const FockFunction& image, std::span<const SamplePoint> points);
std::vector<double> sample_magnitudes_serial(const FockFunction& image, std::span<const SamplePoint> points);
std::vector<double> sample_magnitudes_quadrature(const ClosedFormSignal& f, std::span<const SamplePoint> points,
                                                 double tol);

}  // namespace gul
