#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <random>
#include <sstream>

#include "gul/cli.hpp"
#include "gul/counterexamples.hpp"
#include "gul/io.hpp"

namespace fs = std::filesystem;
using gul::cplx;
using gul::FockFunction;
using gul::kPi;
using gul::TimeSignal;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("gul_test_" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  [[nodiscard]] std::string str(const std::string& leaf) const { return (path / leaf).string(); }
};

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  Run r;
  r.code = gul::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

gul::io::Manifest read_manifest(const fs::path& p) { return gul::io::Manifest::parse(gul::io::read_file(p)); }

}  // namespace

TEST_CASE("number formatting round trips") {
  for (double v : {0.0, 1.0, -2.5, 1.0 / 3.0, 6.0925e-15, 1e-300, 1.7976931348623157e308}) {
    CHECK(std::stod(gul::io::format_double(v)) == v);
  }
}

TEST_CASE("coefficient files") {
  TimeSignal f;
  f.hermite_coeffs = {cplx(1.0, 0.0), cplx(0.0, -0.5), cplx(1.0 / 3.0, 2e-17)};
  f.tail_bound = 1e-9;
  const auto g = gul::io::parse_coefficients(gul::io::format_coefficients(f));
  CHECK(g.hermite_coeffs == f.hermite_coeffs);
  CHECK(g.tail_bound == f.tail_bound);

  const auto sparse = gul::io::parse_coefficient_list("# comment\n3 1 0\n0 0.5 -0.5\n");
  REQUIRE(sparse.size() == 4);
  CHECK(sparse[0] == cplx(0.5, -0.5));
  CHECK(sparse[1] == cplx(0.0, 0.0));
  CHECK(sparse[3] == cplx(1.0, 0.0));

  CHECK_THROWS_AS(gul::io::parse_coefficient_list("0 1 abc\n"), std::invalid_argument);
  CHECK_THROWS_AS(gul::io::parse_coefficient_list("-1 1 0\n"), std::invalid_argument);
  CHECK_THROWS_AS(gul::io::parse_coefficient_list("0 1e999 0\n"), std::invalid_argument);
}

TEST_CASE("atom files round trip exactly") {
  const auto f = FockFunction::basis(5) * gul::multiplier(std::exp(-10.0 * kPi) / 50.0, 0.25, gul::Sign::minus, 0.3,
                                                          cplx(0.1, -0.2));
  const auto g = gul::io::parse_atoms(gul::io::format_atoms(f));
  CHECK(g == f);
  CHECK(gul::eval(g, cplx(0.7, 0.2)) == gul::eval(f, cplx(0.7, 0.2)));
}

TEST_CASE("manifest round trip") {
  gul::io::Manifest m;
  m.set("mode", "perturb");
  m.set("delta", 6.0925e-15);
  m.add_file("a.txt");
  m.add_file("b.txt");
  const auto p = gul::io::Manifest::parse(m.str());
  CHECK(p.get("mode") == "perturb");
  CHECK(p.get_double("delta") == 6.0925e-15);
  CHECK(p.files() == std::vector<std::string>{"a.txt", "b.txt"});
  CHECK_FALSE(p.has("missing"));
  CHECK(m.str().back() == '\n');
}

TEST_CASE("grid csv round trip and pgm header") {
  gul::GridSpec spec;
  spec.x_min = -1.0;
  spec.x_max = 1.0;
  spec.x_step = 0.5;
  spec.w_min = 0.0;
  spec.w_max = 0.75;
  spec.w_step = 0.25;
  const auto grid = gul::spectrogram_grid(FockFunction::basis(2), spec);
  const auto text = gul::io::format_grid_csv(grid);
  CHECK(text.rfind("x,omega,magnitude\n", 0) == 0);
  const auto back = gul::io::parse_grid_csv(text);
  CHECK(back.nx == 5);
  CHECK(back.nw == 4);
  CHECK(back.values == grid.values);
  CHECK_THROWS(gul::io::parse_grid_csv("x,omega,magnitude\n0,0,1\n0,1,1\n1,0,1\n"));

  const auto pgm = gul::io::format_grid_pgm(grid);
  CHECK(pgm.rfind("P2\n5 4\n65535\n", 0) == 0);
}

TEST_CASE("pair directories round trip") {
  TempDir tmp;
  const auto pair = gul::perturb_pair(FockFunction::basis(3), 0.05, gul::LineFamily{0.5, 0.2, cplx(0.1, 0.3)});
  gul::io::Manifest m;
  gul::io::save_pair(tmp.path, pair, m);
  gul::io::write_atomic(tmp.path / "manifest.txt", m.str());
  const auto back = gul::io::load_pair(tmp.path);
  CHECK(back.image_plus == pair.image_plus);
  CHECK(back.image_minus == pair.image_minus);
  CHECK(back.family.a == pair.family.a);
  CHECK(back.family.theta == pair.family.theta);
  CHECK(back.family.lambda0 == pair.family.lambda0);
  CHECK(back.meta.delta == pair.meta.delta);
  CHECK(gul::verify_agreement(back, gul::VerifyWindow{}, 1e-10).pass);
  for (const auto& f : m.files()) CHECK(fs::exists(tmp.path / f));
}

TEST_CASE("cli construct and verify with a literal delta") {
  TempDir tmp;
  const auto dir = tmp.str("fig1");
  const auto c = run({"construct", "--mode", "perturb", "--hermite", "5", "--a", "0.25", "--delta", "6.0925e-15", "--out", dir});
  REQUIRE(c.code == 0);
  CHECK(c.out.find("construct_ok = true") != std::string::npos);
  for (const char* f : {"g_plus.txt", "g_minus.txt", "fock_plus.txt", "fock_minus.txt", "fock_base.txt", "manifest.txt"}) {
    CHECK(fs::exists(fs::path(dir) / f));
  }
  const auto m = read_manifest(fs::path(dir) / "manifest.txt");
  CHECK(m.get("mode") == "perturb");
  CHECK(m.get_double("delta") == 6.0925e-15);
  CHECK(m.has("version"));
  CHECK(m.has("wall_time_s"));

  const auto v = run({"verify", "--pair", dir});
  CHECK(v.code == 0);
  CHECK(v.out.find("agreement_pass = true") != std::string::npos);
  CHECK(v.out.find("distinct_pass = true") != std::string::npos);
  const auto m2 = read_manifest(fs::path(dir) / "manifest.txt");
  for (const auto& f : m2.files()) CHECK(fs::exists(fs::path(dir) / f));
  CHECK(std::find(m2.files().begin(), m2.files().end(), "verify_report.txt") != m2.files().end());

  CHECK(run({"verify", "--pair", dir, "--oracle", "--smin", "-2", "--smax", "2", "--sstep", "0.5", "--nmin", "-2",
             "--nmax", "2", "--tol", "1e-8"})
            .code == 0);
}

TEST_CASE("cli construct modes") {
  TempDir tmp;
  CHECK(run({"construct", "--mode", "base", "--a", "0.5", "--out", tmp.str("base")}).code == 0);
  CHECK(run({"construct", "--mode", "shifted", "--a", "0.25", "--delta", "0.04", "--out", tmp.str("shift")}).code == 0);
  CHECK(run({"construct", "--mode", "density", "--hermite", "2", "--epsilon", "0.01", "--out", tmp.str("dens")}).code == 0);
  gul::io::write_atomic(tmp.path / "coeffs.txt", "0 1 0\n2 0 0.5\n");
  CHECK(run({"construct", "--coeffs", tmp.str("coeffs.txt"), "--epsilon", "0.1", "--theta", "0.3", "--out",
             tmp.str("coef")})
            .code == 0);
  for (const char* d : {"base", "shift", "dens", "coef"}) {
    CAPTURE(d);
    CHECK(run({"verify", "--pair", tmp.str(d)}).code == 0);
  }
}

TEST_CASE("cli verify fails on a tampered pair") {
  TempDir tmp;
  const auto dir = tmp.str("p");
  REQUIRE(run({"construct", "--hermite", "1", "--epsilon", "0.1", "--out", dir}).code == 0);
  gul::io::write_atomic(fs::path(dir) / "fock_minus.txt", gul::io::format_atoms(FockFunction::basis(2)));
  const auto v = run({"verify", "--pair", dir});
  CHECK(v.code == 1);
  CHECK(v.out.find("agreement_pass = false") != std::string::npos);
}

TEST_CASE("cli spectrogram") {
  TempDir tmp;
  const auto csv = tmp.str("h5.csv");
  const auto r = run({"spectrogram", "--hermite", "5", "--xmin", "-1", "--xmax", "1", "--xstep", "0.25", "--wmin", "-1",
                      "--wmax", "1", "--wstep", "0.5", "--out", csv});
  REQUIRE(r.code == 0);
  const auto grid = gul::io::parse_grid_csv(gul::io::read_file(csv));
  CHECK(grid.nx == 9);
  CHECK(grid.nw == 5);
  for (std::size_t i = 0; i < grid.nx; ++i) {
    for (std::size_t j = 0; j < grid.nw; ++j) {
      const double direct = std::abs(gul::gabor_eval(FockFunction::basis(5), grid.spec.x_at(i), grid.spec.w_at(j)));
      CHECK(grid.at(i, j) == doctest::Approx(direct).epsilon(1e-15));
    }
  }
  CHECK(fs::exists(csv + ".manifest.txt"));

  const auto dir = tmp.str("pair");
  REQUIRE(run({"construct", "--mode", "base", "--out", dir}).code == 0);
  const auto pgm = tmp.str("minus.pgm");
  CHECK(run({"spectrogram", "--pair", dir, "--member", "minus", "--format", "pgm", "--out", pgm}).code == 0);
  CHECK(gul::io::read_file(pgm).rfind("P2\n121 121\n", 0) == 0);
}

TEST_CASE("cli probe") {
  TempDir tmp;
  const auto dir = tmp.str("probe");
  const auto r = run({"probe", "--a", "0.5", "--R", "2", "--N", "4", "--starts", "4", "--seed", "7", "--out", dir});
  CHECK(r.code == 0);
  CHECK(r.out.find("verdict = all-near-constant") != std::string::npos);
  CHECK(fs::exists(fs::path(dir) / "probe_minimizers.txt"));
  CHECK(read_manifest(fs::path(dir) / "manifest.txt").get("seed") == "7");

  const auto under = run({"probe", "--a", "1", "--R", "0.5", "--N", "1"});
  CHECK(under.code == 3);
  CHECK(under.err.rfind("error kind=numerical-failure", 0) == 0);

  const auto allowed = run({"probe", "--a", "1", "--R", "0.5", "--N", "1", "--allow-underdetermined"});
  CHECK(allowed.code == 0);
  CHECK(allowed.out.find("verdict = nonconstant-feasible-found") != std::string::npos);
}

TEST_CASE("cli argument errors exit 2") {
  TempDir tmp;
  const std::vector<std::vector<std::string>> bad = {
      {},
      {"bogus"},
      {"construct", "--a", "abc", "--hermite", "1", "--epsilon", "0.1", "--out", tmp.str("x")},
      {"construct", "--a", "-1", "--hermite", "1", "--epsilon", "0.1", "--out", tmp.str("x")},
      {"construct", "--hermite", "1", "--out", tmp.str("x")},
      {"construct", "--hermite", "1", "--delta", "0.1", "--epsilon", "0.1", "--out", tmp.str("x")},
      {"construct", "--mode", "other", "--out", tmp.str("x")},
      {"construct", "--mode", "shifted", "--out", tmp.str("x")},
      {"verify"},
      {"verify", "--pair", tmp.str("x"), "--tol", "0"},
      {"spectrogram", "--hermite", "1", "--xmin", "1", "--xmax", "0", "--out", tmp.str("s.csv")},
      {"spectrogram", "--hermite", "1", "--xstep", "0", "--out", tmp.str("s.csv")},
      {"spectrogram", "--out", tmp.str("s.csv")},
      {"probe", "--starts", "0"},
      {"probe", "--a", "0"},
  };
  for (const auto& args : bad) {
    std::string joined;
    for (const auto& a : args) joined += a + " ";
    CAPTURE(joined);
    const auto r = run(args);
    CHECK(r.code == 2);
    CHECK(r.err.rfind("error kind=invalid-arguments reason=\"", 0) == 0);
  }
}

TEST_CASE("cli help, version and thread cap") {
  CHECK(run({"--help"}).code == 0);
  const auto v = run({"--version"});
  CHECK(v.code == 0);
  CHECK_FALSE(v.out.empty());

  setenv("GUL_THREADS", "zero", 1);
  CHECK(run({"probe", "--N", "1", "--starts", "1"}).code == 2);
  setenv("GUL_THREADS", "2", 1);
  CHECK(run({"probe", "--R", "2", "--N", "2", "--starts", "2"}).code == 0);
  unsetenv("GUL_THREADS");
}
