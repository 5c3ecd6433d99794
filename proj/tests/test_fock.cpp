#include <doctest.h>

#include <random>

#include "gul/fock.hpp"
#include "oracles.hpp"

using gul::cplx;
using gul::FockAtom;
using gul::FockFunction;
using gul::kPi;
using gul::Sign;

namespace {

FockFunction random_function(std::mt19937_64& rng, int atoms, double max_type, int max_power) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> power(0, max_power);
  std::vector<FockAtom> out;
  for (int k = 0; k < atoms; ++k) {
    const cplx beta = std::polar(max_type * std::sqrt(unit(rng)), 2.0 * kPi * unit(rng));
    out.push_back({cplx(normal(rng), normal(rng)), power(rng), beta});
  }
  return FockFunction(out);
}

}  // namespace

TEST_CASE("eval of constants and basis functions") {
  CHECK(gul::eval(FockFunction::constant(1.0), cplx(3.0, -2.0)) == cplx(1.0));
  const cplx v = gul::eval(FockFunction::basis(5), 1.0);
  CHECK(v.real() == doctest::Approx(std::sqrt(std::pow(kPi, 5) / 120.0)).epsilon(1e-14));
  CHECK(v.real() == doctest::Approx(1.5969233043).epsilon(1e-10));
  CHECK(v.imag() == 0.0);
}

TEST_CASE("multiplier vanishes at its closed-form root") {
  const auto h = gul::multiplier(std::exp(-kPi), 0.25, Sign::plus);
  CHECK(std::abs(gul::eval(h, cplx(0.25, 0.125))) < 1e-12);
}

TEST_CASE("basis functions are orthonormal") {
  for (int n = 0; n <= 8; ++n) {
    for (int m = 0; m <= 8; ++m) {
      const cplx ip = gul::inner(FockFunction::basis(n), FockFunction::basis(m));
      CHECK(std::abs(ip - (n == m ? 1.0 : 0.0)) < 1e-12);
    }
    CHECK(gul::norm(FockFunction::basis(n)) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("basis norms agree with 2-D quadrature") {
  for (int n : {0, 3, 8}) {
    const auto e = FockFunction::basis(n);
    const auto f = [&](cplx z) { return gul::eval(e, z); };
    CHECK(std::abs(oracle::fock_inner_2d(f, f) - 1.0) < 1e-10);
  }
}

TEST_CASE("exponential kernel inner product") {
  const auto e = FockFunction::exponential(1.0);
  const cplx ip = gul::inner(e, e);
  CHECK(ip.real() == doctest::Approx(std::exp(1.0 / kPi)).epsilon(1e-15));
  CHECK(ip.real() == doctest::Approx(1.3748).epsilon(1e-4));
  CHECK(std::abs(ip - cplx(oracle::exp_series(1.0L / oracle::kPiL))) < 1e-14);
  const auto f = [](cplx z) { return std::exp(z); };
  CHECK(std::abs(ip - oracle::fock_inner_2d(f, f, 1.0)) < 1e-10);
  CHECK(gul::inner(FockFunction::constant(1.0), FockFunction::constant(1.0)) == cplx(1.0));
}

TEST_CASE("kernel identity for |beta|, |gamma| <= 2 pi") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_series = 0.0;
  double worst_quad = 0.0;
  for (int k = 0; k < 200; ++k) {
    const cplx b = std::polar(2.0 * kPi * std::sqrt(unit(rng)), 2.0 * kPi * unit(rng));
    const cplx g = std::polar(2.0 * kPi * std::sqrt(unit(rng)), 2.0 * kPi * unit(rng));
    const cplx ip = gul::inner(FockFunction::exponential(b), FockFunction::exponential(g));
    const auto expected = oracle::exp_series(oracle::lcplx(b) * std::conj(oracle::lcplx(g)) / oracle::kPiL);
    worst_series = std::max(worst_series, static_cast<double>(std::abs(oracle::lcplx(ip) - expected)));
    if (k < 10) {
      const auto fb = [&](cplx z) { return std::exp(b * z); };
      const auto fg = [&](cplx z) { return std::exp(g * z); };
      const cplx q = oracle::fock_inner_2d(fb, fg, 2.0);
      worst_quad = std::max(worst_quad, std::abs(q - ip) / std::max(1.0, std::abs(ip)));
    }
  }
  CHECK(worst_series <= 1e-10);
  CHECK(worst_quad <= 1e-10);
}

TEST_CASE("norm of zero and of e5 times e^{4 pi z}") {
  CHECK(gul::norm(FockFunction()) == 0.0);
  const auto f = FockFunction::basis(5) * FockFunction::exponential(4.0 * kPi);
  const double nf = gul::norm(f);
  // frozen from the closed form; the 2-D quadrature below is the oracle
  CHECK(nf == doctest::Approx(1.690857e14).epsilon(1e-6));
  const auto fz = [&](cplx z) { return gul::eval(f, z); };
  const double q = std::sqrt(oracle::fock_inner_2d(fz, fz, 5.0).real());
  CHECK(std::abs(q - nf) / nf < 1e-6);
}

TEST_CASE("multiply") {
  const auto f = FockFunction::basis(3) + FockFunction::exponential(cplx(0.5, -1.0), 2.0);
  CHECK(f * FockFunction::constant(1.0) == f);
  const auto sq = gul::multiply(FockFunction::basis(1), FockFunction::basis(1));
  CHECK(gul::same_representation(sq, std::sqrt(2.0) * FockFunction::basis(2)));

  const double delta = 1e-3;
  const auto g = FockFunction::basis(5) * gul::multiplier(delta, 0.25, Sign::plus);
  const double c = gul::basis_scale(5);
  REQUIRE(g.atoms().size() == 2);
  CHECK(g.atoms()[0].power == 5);
  CHECK(g.atoms()[0].expo == cplx(0.0));
  CHECK(std::abs(g.atoms()[0].coeff - c) < 1e-15);
  CHECK(g.atoms()[1].power == 5);
  CHECK(std::abs(g.atoms()[1].expo - cplx(4.0 * kPi)) < 1e-14);
  CHECK(std::abs(g.atoms()[1].coeff - cplx(0.0, delta * c)) < 1e-17);
}

TEST_CASE("multiply is pointwise, associative and commutative") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = random_function(rng, 3, 2.0, 3);
    const auto g = random_function(rng, 2, 2.0, 2);
    const auto h = random_function(rng, 2, 1.0, 4);
    CHECK(gul::same_representation(f * g, g * f));
    CHECK(gul::same_representation((f * g) * h, f * (g * h), 1e-12));
    const cplx z(0.3 * trial - 2.0, 0.7);
    const cplx lhs = gul::eval(f * g, z);
    const cplx rhs = gul::eval(f, z) * gul::eval(g, z);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("canonical form merges equal atoms and drops zeros") {
  const FockFunction f({{1.0, 2, cplx(1.0, 0.0)}, {2.0, 2, cplx(1.0, 0.0)}, {0.0, 1, 0.0}, {1.0, 0, -1.0}});
  REQUIRE(f.atoms().size() == 2);
  CHECK(f.atoms()[0].expo == cplx(-1.0));
  CHECK(f.atoms()[1].coeff == cplx(3.0));
  CHECK((f - f).is_zero());
}

TEST_CASE("shifted and rescaled agree with evaluation") {
  std::mt19937_64 rng(3);
  const auto f = random_function(rng, 4, 3.0, 4);
  const cplx u(0.4, -1.1);
  const cplx s(0.0, 1.0);
  for (cplx z : {cplx(0.0), cplx(1.0, 2.0), cplx(-0.5, 0.25)}) {
    const cplx a = gul::eval(f.shifted(u), z);
    const cplx b = gul::eval(f, z - u);
    CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)));
    const cplx c = gul::eval(f.rescaled(s), z);
    const cplx d = gul::eval(f, s * z);
    CHECK(std::abs(c - d) <= 1e-12 * std::max(1.0, std::abs(d)));
  }
}

TEST_CASE("multiplier value at the origin and argument checks") {
  const double delta = 0.3;
  CHECK(std::abs(gul::eval(gul::multiplier(delta, 0.5, Sign::plus), 0.0) - cplx(1.0, delta)) < 1e-16);
  CHECK(std::abs(gul::eval(gul::multiplier(delta, 0.5, Sign::minus), 0.0) - cplx(1.0, -delta)) < 1e-16);
  CHECK_THROWS_AS(gul::multiplier(0.0, 1.0, Sign::plus), std::invalid_argument);
  CHECK_THROWS_AS(gul::multiplier(-1.0, 1.0, Sign::plus), std::invalid_argument);
  CHECK_THROWS_AS(gul::multiplier(0.1, 0.0, Sign::minus), std::invalid_argument);
}

TEST_CASE("multiplier magnitudes agree on R + iaZ") {
  for (double a : {0.25, 0.5, 1.0}) {
    for (double delta : {1e-1, 1e-6}) {
      const auto hp = gul::multiplier(delta, a, Sign::plus);
      const auto hm = gul::multiplier(delta, a, Sign::minus);
      double worst = 0.0;
      for (int k = 0; k < 1000; ++k) {
        const cplx z(-5.0 + 10.0 * (k % 100) / 99.0, a * (k / 100 - 5));
        const double p = std::abs(gul::eval(hp, z));
        const double m = std::abs(gul::eval(hm, z));
        worst = std::max(worst, std::abs(p - m) / (1.0 + p));
      }
      CHECK(worst < 1e-12);
    }
  }
  for (double x : {-1.0, 0.0, 2.5}) {
    for (int n = -2; n <= 2; ++n) {
      const cplx z(x, 0.5 * n);
      CHECK(std::abs(gul::eval(gul::multiplier(0.2, 0.5, Sign::plus), z)) ==
            doctest::Approx(std::abs(gul::eval(gul::multiplier(0.2, 0.5, Sign::minus), z))).epsilon(1e-13));
    }
  }
}

TEST_CASE("rotated and offset multipliers agree on their line family") {
  const double a = 0.5;
  const double theta = kPi / 2.0;
  const cplx lambda0(0.0, 1.0);
  const auto hp = gul::multiplier(0.1, a, Sign::plus, theta, lambda0);
  const auto hm = gul::multiplier(0.1, a, Sign::minus, theta, lambda0);
  double worst = 0.0;
  for (int n = -2; n <= 2; ++n) {
    for (int k = 0; k < 100; ++k) {
      // Fock point e^{-i theta}(s + i a n) + conj(lambda0)
      const cplx z = std::polar(1.0, -theta) * cplx(-2.0 + 0.04 * k, a * n) + std::conj(lambda0);
      worst = std::max(worst, std::abs(std::abs(gul::eval(hp, z)) - std::abs(gul::eval(hm, z))));
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("the two multipliers share no roots") {
  for (double a : {0.25, 1.0}) {
    for (double delta : {1e-1, 1e-6}) {
      const auto hp = gul::multiplier(delta, a, Sign::plus);
      const auto hm = gul::multiplier(delta, a, Sign::minus);
      for (int k = -3; k <= 3; ++k) {
        const cplx root = (a / kPi) * cplx(std::log(1.0 / delta), kPi / 2.0 + 2.0 * kPi * k);
        CHECK(std::abs(gul::eval(hp, root)) < 1e-12);
        const double floor = 2.0 * delta * std::exp(kPi * root.real() / a);
        CHECK(std::abs(gul::eval(hm, root)) >= floor * (1.0 - 1e-12));
      }
    }
  }
}

TEST_CASE("monomial expansion") {
  const auto e3 = gul::monomial_coeffs(FockFunction::basis(3), 1e-12);
  REQUIRE(e3.coeffs.size() == 4);
  CHECK(e3.coeffs[3] == cplx(1.0));
  CHECK(e3.coeffs[0] == cplx(0.0));
  CHECK(e3.tail_bound == 0.0);

  const auto ez = gul::monomial_coeffs(FockFunction::exponential(1.0), 1e-13);
  const double s = ez.norm() * ez.norm();
  CHECK(std::abs(s - std::exp(1.0 / kPi)) <= ez.tail_bound * ez.tail_bound + 1e-12);
  CHECK(ez.tail_bound <= 1e-13);

  const auto h = gul::multiplier(1e-3, 0.25, Sign::plus);
  const double nh = gul::norm(h);  // about 3e8, where one ulp is 6e-8
  const auto hs = gul::monomial_coeffs(h, 1e-13 * nh);
  CHECK(std::abs(hs.norm() - nh) <= hs.tail_bound + 1e-12 * nh);
}

TEST_CASE("monomial expansion is an isometry up to its tail") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const auto f = random_function(rng, 3, 4.0, 5);
    const double nf = gul::norm(f);
    const auto series = gul::monomial_coeffs(f, 1e-13 * nf);
    const double sum = series.norm() * series.norm();
    // the tail is certified relative to the norm, so compare relative to nf^2
    CHECK(std::abs(nf * nf - sum) <= series.tail_bound * series.tail_bound + 1e-12 * nf * nf);
    CHECK(series.tail_bound <= 1e-13 * nf);
  }
}
