#include "gul/gabor.hpp"

#include <algorithm>
#include <cmath>

namespace gul {
namespace {

constexpr long double kPiL = 3.14159265358979323846264338327950288L;
constexpr long double kFourthRootTwoL = 1.18920711500272106671749997056047591L;

std::size_t axis_count(double lo, double hi, double step) {
  return static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
}

}  // namespace

cplx gabor_eval(const FockFunction& image, double x, double w) {
  const cplx log_weight(-kPi * (x * x + w * w) / 2.0, -kPi * x * w);
  return eval_weighted(image, cplx(x, -w), log_weight);
}

cplx gabor_quadrature(const ClosedFormSignal& f, double x, double w, double tol) {
  detail::require(tol >= 1e-12, "gabor_quadrature: tol must be at least 1e-12");
  const long double xl = x;
  const long double wl = w;
  auto integrand = [&](long double t) {
    const long double d = t - xl;
    const long double ph = -2.0L * kPiL * t * wl;
    return kFourthRootTwoL * f.eval(t) * std::exp(-kPiL * d * d) * lcplx(std::cos(ph), std::sin(ph));
  };
  const long double half = std::max(4.0, std::hypot(x, w) + 4.0) + f.extent();
  const auto res = trapezoid(integrand, -half, half, tol, std::abs(w) + f.max_freq());
  const cplx value(res.value);
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
    throw NumericalError("gabor_quadrature: integrand overflows");
  }
  if (!res.converged) throw NumericalError("gabor_quadrature: step halving did not converge");
  return value;
}

cplx LineFamily::point(double s, int n) const { return std::polar(1.0, theta) * cplx(s, a * n) + lambda0; }

double LineFamily::line_coordinate(cplx tf_point) const {
  return (std::polar(1.0, -theta) * (tf_point - lambda0)).imag() / a;
}

double LineFamily::distance_to_lines(cplx tf_point) const {
  const double c = line_coordinate(tf_point);
  return a * std::abs(c - std::round(c));
}

std::vector<SamplePoint> sample_line_family(const LineFamily& family, double s_min, double s_max, double s_step) {
  detail::require(family.a > 0.0, "sample_line_family: spacing must be positive");
  detail::require(s_step > 0.0 && std::isfinite(s_step), "sample_line_family: step must be positive");
  detail::require(s_max >= s_min, "sample_line_family: empty arclength range");
  detail::require(family.n_max >= family.n_min, "sample_line_family: empty line range");
  const std::size_t ns = axis_count(s_min, s_max, s_step);
  std::vector<SamplePoint> pts;
  pts.reserve(ns * static_cast<std::size_t>(family.n_max - family.n_min + 1));
  for (int n = family.n_min; n <= family.n_max; ++n) {
    for (std::size_t i = 0; i < ns; ++i) {
      const cplx p = family.point(s_min + static_cast<double>(i) * s_step, n);
      pts.push_back({p.real(), p.imag(), n});
    }
  }
  return pts;
}

cplx LatticeSpec::point(long m, long n) const {
  const double mm = static_cast<double>(m);
  const double nn = static_cast<double>(n);
  if (rank == 1) return {mm * v1[0], mm * v1[1]};
  return {mm * v1[0] + nn * v2[0], mm * v1[1] + nn * v2[1]};
}

LineFamily lattice_embed(const LatticeSpec& lattice, bool reduce) {
  detail::require(lattice.rank == 1 || lattice.rank == 2, "lattice_embed: rank must be 1 or 2");
  auto len = [](const std::array<double, 2>& v) { return std::hypot(v[0], v[1]); };
  LineFamily fam;
  if (lattice.rank == 1) {
    const double l1 = len(lattice.v1);
    detail::require(l1 > 0.0, "lattice_embed: zero basis vector");
    fam.theta = std::atan2(lattice.v1[1], lattice.v1[0]);
    fam.a = l1;
    fam.n_min = fam.n_max = 0;
    return fam;
  }
  auto v1 = lattice.v1;
  auto v2 = lattice.v2;
  const double det = v1[0] * v2[1] - v1[1] * v2[0];
  detail::require(std::abs(det) > 1e-14 * len(v1) * len(v2) && len(v1) > 0.0 && len(v2) > 0.0,
                  "lattice_embed: basis is rank deficient");
  if (reduce && len(v2) < len(v1)) std::swap(v1, v2);
  fam.theta = std::atan2(v1[1], v1[0]);
  fam.a = std::abs(det) / len(v1);
  return fam;
}

std::size_t GridSpec::nx() const { return axis_count(x_min, x_max, x_step); }
std::size_t GridSpec::nw() const { return axis_count(w_min, w_max, w_step); }

void GridSpec::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  detail::require(finite(x_min) && finite(x_max) && finite(w_min) && finite(w_max), "grid: bounds must be finite");
  detail::require(x_step > 0.0 && w_step > 0.0, "grid: steps must be positive");
  detail::require(x_max >= x_min && w_max >= w_min, "grid: empty range");
  const double cells = (std::floor((x_max - x_min) / x_step) + 1.0) * (std::floor((w_max - w_min) / w_step) + 1.0);
  detail::require(cells <= static_cast<double>(cell_cap), "grid: cell count exceeds cap");
}

double SpectrogramGrid::max() const {
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

SpectrogramGrid spectrogram_grid(const FockFunction& image, const GridSpec& spec) {
  spec.validate();
  SpectrogramGrid g{spec, spec.nx(), spec.nw(), {}};
  g.values.resize(g.nx * g.nw);
  const auto nx = static_cast<long>(g.nx);
  const auto nw = static_cast<long>(g.nw);
#pragma omp parallel for collapse(2) schedule(static)
  for (long i = 0; i < nx; ++i) {
    for (long j = 0; j < nw; ++j) {
      g.values[i * nw + j] = std::abs(gabor_eval(image, spec.x_at(i), spec.w_at(j)));
    }
  }
  return g;
}

SpectrogramGrid spectrogram_grid_serial(const FockFunction& image, const GridSpec& spec) {
  spec.validate();
  SpectrogramGrid g{spec, spec.nx(), spec.nw(), {}};
  g.values.resize(g.nx * g.nw);
  for (std::size_t i = 0; i < g.nx; ++i) {
    for (std::size_t j = 0; j < g.nw; ++j) {
      g.values[i * g.nw + j] = std::abs(gabor_eval(image, spec.x_at(i), spec.w_at(j)));
    }
  }
  return g;
}

std::vector<double> sample_magnitudes(const FockFunction& image, std::span<const SamplePoint> points) {
  std::vector<double> out(points.size());
  const auto n = static_cast<long>(points.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) out[i] = std::abs(gabor_eval(image, points[i].x, points[i].omega));
  return out;
}

std::vector<double> sample_magnitudes_serial(const FockFunction& image, std::span<const SamplePoint> points) {
  std::vector<double> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) out[i] = std::abs(gabor_eval(image, points[i].x, points[i].omega));
  return out;
}

std::vector<double> sample_magnitudes_quadrature(const ClosedFormSignal& f, std::span<const SamplePoint> points,
                                                 double tol) {
  std::vector<double> out(points.size());
  const auto n = static_cast<long>(points.size());
  bool failed = false;
#pragma omp parallel for schedule(dynamic, 16)
  for (long i = 0; i < n; ++i) {
    try {
      out[i] = std::abs(gabor_quadrature(f, points[i].x, points[i].omega, tol));
    } catch (const NumericalError&) {
#pragma omp atomic write
      failed = true;
    }
  }
  if (failed) throw NumericalError("gabor_quadrature failed at one or more sample points");
  return out;
}

}  // namespace gul
