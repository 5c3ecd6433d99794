#include "gul/probe.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

namespace gul {

GrowthReport growth_hypothesis_check(const FockFunction& f, double kappa, double r_max) {
  detail::require(r_max > 2.0, "growth_hypothesis_check: r_max must exceed 2");
  detail::require(kappa > 0.0, "growth_hypothesis_check: kappa must be positive");
  GrowthReport rep;
  rep.order = f.is_zero() ? -1 : (f.is_polynomial() ? 0 : 1);
  rep.type = f.exponential_type();
  // order <= 1 means log M(r) = O(r), so log M(r) / r^2 -> 0
  rep.analytic_limsup = 0.0;
  rep.growth_hypothesis = rep.analytic_limsup < kPi / 2.0;

  constexpr int kAngles = 256;
  const int steps = 40;
  for (int s = 0; s <= steps; ++s) {
    const double r = 1.0 + (r_max - 1.0) * s / steps;
    double mmax = 0.0;
    for (int k = 0; k < kAngles; ++k) mmax = std::max(mmax, std::abs(eval(f, std::polar(r, 2.0 * kPi * k / kAngles))));
    const double ratio = mmax > 0.0 ? std::log(mmax) / (r * r) : -std::numeric_limits<double>::infinity();
    rep.samples.push_back({r, ratio});
  }

  const long m_max = static_cast<long>(std::floor(r_max));
  for (long m = -m_max; m <= m_max; ++m) {
    for (long n = -m_max; n <= m_max; ++n) {
      const cplx z(static_cast<double>(m), static_cast<double>(n));
      const double v = std::abs(eval(f, z));
      if (v > rep.lattice_max) {
        rep.lattice_max = v;
        rep.lattice_argmax = z;
      }
      if (v > kappa * (1.0 + 1e-12)) rep.lattice_violations.push_back(z);
    }
  }
  rep.lattice_bound_holds = rep.lattice_violations.empty();
  return rep;
}

PointwiseBound pointwise_bound_check(const FockFunction& f, cplx z) {
  PointwiseBound b;
  b.value = std::abs(eval(f, z));
  b.bound = norm(f) * std::exp(kPi * std::norm(z) / 2.0);
  b.slack = b.bound - b.value;
  b.holds = b.value <= b.bound * (1.0 + 1e-10);
  return b;
}

void ProbeConfig::validate() const {
  detail::require(a > 0.0 && std::isfinite(a), "probe: a must be positive");
  detail::require(radius > 0.0 && std::isfinite(radius), "probe: radius must be positive");
  detail::require(order >= 0, "probe: coefficient cutoff must be nonnegative");
  detail::require(starts >= 1, "probe: starts must be positive");
  detail::require(tol_feas > 0.0 && near_constant > 0.0, "probe: thresholds must be positive");
  detail::require(max_iterations >= 1, "probe: max_iterations must be positive");
}

std::string to_string(ProbeVerdict v) {
  switch (v) {
    case ProbeVerdict::all_near_constant:
      return "all-near-constant";
    case ProbeVerdict::nonconstant_feasible_found:
      return "nonconstant-feasible-found";
    case ProbeVerdict::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

std::vector<cplx> probe_lattice(double a, double radius) {
  std::vector<cplx> pts;
  const long k = static_cast<long>(std::floor(radius / a));
  for (long m = -k; m <= k; ++m) {
    for (long n = -k; n <= k; ++n) {
      const cplx z(a * static_cast<double>(m), a * static_cast<double>(n));
      if (std::abs(z) <= radius * (1.0 + 1e-12)) pts.push_back(z);
    }
  }
  return pts;
}

double distance_to_constants(const std::vector<cplx>& coeffs) {
  if (coeffs.empty()) return 1.0;
  double s = 0.0;
  for (std::size_t n = 1; n < coeffs.size(); ++n) s += std::norm(coeffs[n]);
  const double d0 = std::abs(coeffs[0]) - 1.0;
  return std::sqrt(s + d0 * d0);
}

namespace {

// basis[j * cols + n] = e_n(points[j])
std::vector<cplx> basis_table(const std::vector<cplx>& points, int order) {
  const std::size_t cols = static_cast<std::size_t>(order) + 1;
  std::vector<cplx> t(points.size() * cols);
  for (std::size_t j = 0; j < points.size(); ++j) {
    cplx zp = 1.0;
    for (int n = 0; n <= order; ++n) {
      t[j * cols + n] = basis_scale(n) * zp;
      zp *= points[j];
    }
  }
  return t;
}

struct FitState {
  Eigen::VectorXd residual;
  Eigen::MatrixXd jacobian;
  double cost = 0.0;
};

void evaluate(const Eigen::VectorXd& p, const std::vector<cplx>& table, std::size_t npts, std::size_t cols,
              FitState& st, bool with_jacobian) {
  st.residual.resize(static_cast<Eigen::Index>(npts));
  if (with_jacobian) st.jacobian.resize(static_cast<Eigen::Index>(npts), static_cast<Eigen::Index>(2 * cols));
  for (std::size_t j = 0; j < npts; ++j) {
    cplx f = 0.0;
    for (std::size_t n = 0; n < cols; ++n) f += cplx(p[2 * n], p[2 * n + 1]) * table[j * cols + n];
    st.residual[j] = std::norm(f) - 1.0;
    if (with_jacobian) {
      for (std::size_t n = 0; n < cols; ++n) {
        const cplx g = std::conj(f) * table[j * cols + n];
        st.jacobian(j, 2 * n) = 2.0 * g.real();
        st.jacobian(j, 2 * n + 1) = -2.0 * g.imag();
      }
    }
  }
  st.cost = st.residual.squaredNorm();
}

ProbeMinimizer run_start(const ProbeConfig& cfg, const std::vector<cplx>& table, std::size_t npts, int start) {
  const std::size_t cols = static_cast<std::size_t>(cfg.order) + 1;
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                    static_cast<std::uint32_t>(start)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Eigen::VectorXd p(static_cast<Eigen::Index>(2 * cols));
  for (Eigen::Index i = 0; i < p.size(); ++i) p[i] = normal(rng);

  // Levenberg-Marquardt with Marquardt scaling; only cost-decreasing steps
  // are accepted, so the residual is monotone nonincreasing.
  FitState st;
  evaluate(p, table, npts, cols, st, true);
  double mu = 1e-3;
  int it = 0;
  for (; it < cfg.max_iterations; ++it) {
    const Eigen::VectorXd grad = st.jacobian.transpose() * st.residual;
    if (grad.norm() < cfg.gradient_tol || st.cost == 0.0) break;
    const Eigen::MatrixXd jtj = st.jacobian.transpose() * st.jacobian;
    const Eigen::VectorXd diag = jtj.diagonal().cwiseMax(1e-12 * std::max(1.0, jtj.diagonal().maxCoeff()));
    bool accepted = false;
    Eigen::VectorXd step;
    while (mu < 1e20) {
      Eigen::MatrixXd lhs = jtj;
      lhs.diagonal() += mu * diag;
      step = lhs.ldlt().solve(-grad);
      FitState trial;
      const Eigen::VectorXd q = p + step;
      evaluate(q, table, npts, cols, trial, false);
      if (std::isfinite(trial.cost) && trial.cost < st.cost) {
        p = q;
        evaluate(p, table, npts, cols, st, true);
        mu = std::max(mu / 3.0, 1e-12);
        accepted = true;
        break;
      }
      mu *= 4.0;
    }
    if (!accepted) break;
    if (step.norm() <= 1e-15 * (1.0 + p.norm())) break;
  }

  ProbeMinimizer out;
  out.coeffs.resize(cols);
  for (std::size_t n = 0; n < cols; ++n) out.coeffs[n] = cplx(p[2 * n], p[2 * n + 1]);
  out.residual = st.cost;
  out.iterations = it;
  out.distance_to_constants = distance_to_constants(out.coeffs);
  out.feasible = out.residual < cfg.tol_feas;
  return out;
}

}  // namespace

double probe_residual(const std::vector<cplx>& coeffs, const std::vector<cplx>& points) {
  const int order = static_cast<int>(coeffs.size()) - 1;
  const auto table = basis_table(points, order);
  Eigen::VectorXd p(static_cast<Eigen::Index>(2 * coeffs.size()));
  for (std::size_t n = 0; n < coeffs.size(); ++n) {
    p[2 * n] = coeffs[n].real();
    p[2 * n + 1] = coeffs[n].imag();
  }
  FitState st;
  evaluate(p, table, points.size(), coeffs.size(), st, false);
  return st.cost;
}

ProbeResult constant_fit_search(const ProbeConfig& cfg) {
  cfg.validate();
  const auto points = probe_lattice(cfg.a, cfg.radius);
  const std::size_t unknowns = 2 * (static_cast<std::size_t>(cfg.order) + 1);
  if (points.size() < unknowns && !cfg.allow_underdetermined) {
    throw NumericalError("probe: underdetermined configuration (" + std::to_string(points.size()) +
                         " constraint points < " + std::to_string(unknowns) + " real unknowns)");
  }
  const auto table = basis_table(points, cfg.order);

  ProbeResult res;
  res.constraint_points = points.size();
  res.exploratory = cfg.a >= 1.0;
  res.minimizers.resize(static_cast<std::size_t>(cfg.starts));
#pragma omp parallel for schedule(dynamic, 1)
  for (int s = 0; s < cfg.starts; ++s) res.minimizers[s] = run_start(cfg, table, points.size(), s);

  bool any_feasible = false;
  bool any_nonconstant = false;
  for (const auto& m : res.minimizers) {
    if (!m.feasible) continue;
    any_feasible = true;
    if (m.distance_to_constants > cfg.near_constant) any_nonconstant = true;
  }
  res.verdict = any_nonconstant ? ProbeVerdict::nonconstant_feasible_found
                                : (any_feasible ? ProbeVerdict::all_near_constant : ProbeVerdict::inconclusive);
  return res;
}

}  // namespace gul
