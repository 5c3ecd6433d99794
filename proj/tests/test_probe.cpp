#include <doctest.h>

#include <random>

#include "gul/counterexamples.hpp"
#include "gul/probe.hpp"

using gul::cplx;
using gul::FockFunction;
using gul::kPi;
using gul::ProbeConfig;
using gul::ProbeVerdict;

TEST_CASE("growth check on constants and monomials") {
  const auto one = gul::growth_hypothesis_check(FockFunction::constant(1.0), 1.0, 4.0);
  CHECK(one.order == 0);
  CHECK(one.hypotheses_hold());
  CHECK(one.lattice_max == doctest::Approx(1.0));

  const auto e1 = gul::growth_hypothesis_check(FockFunction::basis(1), 2.0, 4.0);
  CHECK(e1.growth_hypothesis);
  CHECK_FALSE(e1.lattice_bound_holds);
  // |e_1(m + in)| = sqrt(pi) |m + in| exceeds 2 once |m + in| >= 2
  CHECK(e1.lattice_max == doctest::Approx(std::sqrt(kPi) * std::abs(cplx(4.0, 4.0))).epsilon(1e-12));
  for (cplx z : e1.lattice_violations) CHECK(std::abs(z) * std::sqrt(kPi) > 2.0);

  const auto zero = gul::growth_hypothesis_check(FockFunction{}, 1.0, 3.0);
  CHECK(zero.order == -1);

  CHECK_THROWS_AS(gul::growth_hypothesis_check(FockFunction::constant(1.0), 1.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(gul::growth_hypothesis_check(FockFunction::constant(1.0), 0.0, 3.0), std::invalid_argument);
}

TEST_CASE("growth check on the multiplier") {
  const auto h = gul::multiplier(0.1, 1.0, gul::Sign::plus);
  const auto rep = gul::growth_hypothesis_check(h, 1e4, 3.0);
  CHECK(rep.order == 1);
  CHECK(rep.type == doctest::Approx(kPi));
  CHECK(rep.analytic_limsup == 0.0);
  CHECK(rep.growth_hypothesis);
  CHECK(rep.lattice_bound_holds);
  // on the lattice the exponential is real, so |1 + i 0.1 e^{pi m} (-1)^n| = hypot(1, 0.1 e^{pi m})
  CHECK(rep.lattice_max == doctest::Approx(std::hypot(1.0, 0.1 * std::exp(3.0 * kPi))).epsilon(1e-12));
  // exponential type means log M(r) / r^2 decays like pi / r
  CHECK(rep.samples.back().ratio < rep.samples[rep.samples.size() / 2].ratio);
  CHECK(rep.samples.back().ratio <= kPi / rep.samples.back().r + std::log(1.2) / 9.0);

  CHECK_FALSE(gul::growth_hypothesis_check(h, 10.0, 3.0).lattice_bound_holds);
}

TEST_CASE("pointwise bound") {
  const auto e0 = gul::pointwise_bound_check(FockFunction::constant(1.0), cplx(0.0, 0.0));
  CHECK(e0.holds);
  CHECK(e0.value == doctest::Approx(1.0));
  CHECK(e0.bound == doctest::Approx(1.0));

  // the reproducing kernel at w attains the bound at w
  const cplx w(0.4, -0.3);
  const auto k = std::exp(-kPi * std::norm(w) / 2.0) * FockFunction::exponential(kPi * std::conj(w));
  const auto at = gul::pointwise_bound_check(k, w);
  CHECK(at.holds);
  CHECK(at.value == doctest::Approx(at.bound).epsilon(1e-12));

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    FockFunction f;
    for (int j = 0; j < 6; ++j) {
      f = f + FockFunction::atom(cplx(u(rng), u(rng)), trial % 4, cplx(2.0 * u(rng), 2.0 * u(rng)));
    }
    const auto b = gul::pointwise_bound_check(f, cplx(1.5 * u(rng), 1.5 * u(rng)));
    CHECK(b.holds);
  }
}

TEST_CASE("probe lattice and distance") {
  const auto pts = gul::probe_lattice(0.5, 1.0);
  CHECK(pts.size() == 13);
  for (cplx z : pts) CHECK(std::abs(z) <= 1.0 + 1e-12);
  CHECK(gul::probe_lattice(1.0, 0.5).size() == 1);

  CHECK(gul::distance_to_constants({cplx(0.0, 1.0)}) == doctest::Approx(0.0));
  CHECK(gul::distance_to_constants({cplx(2.0, 0.0), cplx(0.0, 0.0), cplx(3.0, 4.0)}) == doctest::Approx(std::sqrt(26.0)));
  CHECK(gul::probe_residual({cplx(1.0, 0.0)}, pts) == 0.0);
}

TEST_CASE("constant fit search on the default configuration") {
  ProbeConfig cfg;
  cfg.a = 0.5;
  cfg.radius = 3.0;
  cfg.order = 8;
  const auto res = gul::constant_fit_search(cfg);
  CHECK(res.minimizers.size() == 20);
  CHECK(res.constraint_points == gul::probe_lattice(0.5, 3.0).size());
  CHECK_FALSE(res.exploratory);
  CHECK(res.verdict == ProbeVerdict::all_near_constant);
  for (const auto& m : res.minimizers) {
    CHECK(m.coeffs.size() == 9);
    if (m.feasible) CHECK(m.distance_to_constants <= cfg.near_constant);
  }
}

TEST_CASE("constant fit search matrix") {
  for (double a : {0.25, 0.5, 0.75}) {
    for (double radius : {2.0, 3.0}) {
      for (int order : {4, 8}) {
        ProbeConfig cfg;
        cfg.a = a;
        cfg.radius = radius;
        cfg.order = order;
        CAPTURE(a);
        CAPTURE(radius);
        CAPTURE(order);
        CHECK(gul::constant_fit_search(cfg).verdict == ProbeVerdict::all_near_constant);
      }
    }
  }
}

TEST_CASE("underdetermined probes") {
  ProbeConfig cfg;
  cfg.a = 1.0;
  cfg.radius = 0.5;
  cfg.order = 1;
  CHECK_THROWS_AS(gul::constant_fit_search(cfg), gul::NumericalError);

  cfg.allow_underdetermined = true;
  const auto res = gul::constant_fit_search(cfg);
  CHECK(res.constraint_points == 1);
  CHECK(res.exploratory);
  // one constraint leaves c_1 free, so feasible fits are not constant
  CHECK(res.verdict == ProbeVerdict::nonconstant_feasible_found);
}

TEST_CASE("order zero fits are constants") {
  ProbeConfig cfg;
  cfg.order = 0;
  cfg.starts = 5;
  const auto res = gul::constant_fit_search(cfg);
  CHECK(res.verdict == ProbeVerdict::all_near_constant);
  for (const auto& m : res.minimizers) {
    REQUIRE(m.feasible);
    CHECK(m.distance_to_constants < 1e-6);
  }
}

TEST_CASE("probe results are deterministic in the seed") {
  ProbeConfig cfg;
  cfg.order = 4;
  cfg.radius = 2.0;
  cfg.starts = 6;
  cfg.seed = 42;
  const auto r1 = gul::constant_fit_search(cfg);
  const auto r2 = gul::constant_fit_search(cfg);
  REQUIRE(r1.minimizers.size() == r2.minimizers.size());
  for (std::size_t i = 0; i < r1.minimizers.size(); ++i) {
    CHECK(r1.minimizers[i].coeffs == r2.minimizers[i].coeffs);
    CHECK(r1.minimizers[i].iterations == r2.minimizers[i].iterations);
  }
  cfg.seed = 43;
  const auto r3 = gul::constant_fit_search(cfg);
  CHECK(r3.minimizers[0].coeffs != r1.minimizers[0].coeffs);
}

TEST_CASE("probe configuration validation") {
  auto bad = [](auto mutate) {
    ProbeConfig cfg;
    mutate(cfg);
    CHECK_THROWS_AS(gul::constant_fit_search(cfg), std::invalid_argument);
  };
  bad([](ProbeConfig& c) { c.a = 0.0; });
  bad([](ProbeConfig& c) { c.radius = -1.0; });
  bad([](ProbeConfig& c) { c.order = -1; });
  bad([](ProbeConfig& c) { c.starts = 0; });
  bad([](ProbeConfig& c) { c.tol_feas = 0.0; });
  bad([](ProbeConfig& c) { c.max_iterations = 0; });
  CHECK(gul::to_string(ProbeVerdict::inconclusive) == "inconclusive");
}
