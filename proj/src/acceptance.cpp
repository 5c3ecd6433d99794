#include "gul/acceptance.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

#include "gul/cli.hpp"
#include "gul/counterexamples.hpp"
#include "gul/io.hpp"
#include "gul/probe.hpp"

namespace gul::acceptance {
namespace {

namespace fs = std::filesystem;

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// delta = exp(-10 pi) / 50 and the demo pair built on e5, a = 1/4
double demo_delta() { return std::exp(-10.0 * kPi) / 50.0; }

CounterexamplePair demo_pair() {
  LineFamily fam;
  fam.a = 0.25;
  return perturb_pair_with_delta(FockFunction::basis(5), demo_delta(), fam);
}

struct OracleCase {
  std::string name;
  FockFunction image;
  ClosedFormSignal closed;
};

CriterionResult oracle_equivalence() {
  CriterionResult r{1, "oracle equivalence on [-3,3]^2", false, "", 0.0};
  std::vector<OracleCase> cases;
  cases.push_back({"phi", FockFunction::constant(1.0), ClosedFormSignal::gaussian()});
  for (int n = 1; n <= 8; ++n) cases.push_back({"H" + std::to_string(n), FockFunction::basis(n), ClosedFormSignal::hermite(n)});
  cases.push_back({"h+", base_pair_image(0.25, Sign::plus), ClosedFormSignal::base_member(0.25, Sign::plus)});
  cases.push_back({"h-", base_pair_image(0.25, Sign::minus), ClosedFormSignal::base_member(0.25, Sign::minus)});

  GridSpec grid{-3.0, 3.0, 0.25, -3.0, 3.0, 0.25};
  std::vector<SamplePoint> pts;
  for (std::size_t i = 0; i < grid.nx(); ++i) {
    for (std::size_t j = 0; j < grid.nw(); ++j) pts.push_back({grid.x_at(i), grid.w_at(j), 0});
  }
  double worst = 0.0;
  std::string worst_case;
  for (const auto& c : cases) {
    const auto fast = sample_magnitudes(c.image, pts);
    const auto slow = sample_magnitudes_quadrature(c.closed, pts, 1e-12);
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const double d = std::abs(fast[k] - slow[k]);
      if (d > worst) {
        worst = d;
        worst_case = c.name;
      }
    }
  }
  r.pass = worst <= 1e-8;
  r.detail = "max |diff| = " + sci(worst) + " (" + worst_case + "), tol 1e-8, " + std::to_string(cases.size()) +
             " signals x " + std::to_string(pts.size()) + " points";
  return r;
}

CriterionResult demo_pair_certification() {
  CriterionResult r{2, "demo pair certification (e5, a=1/4)", false, "", 0.0};
  const auto pair = demo_pair();
  const VerifyWindow window;
  const auto fast = verify_agreement(pair, window, 1e-10, VerifyMode::fast);
  const auto oracle = verify_agreement(pair, window, 1e-8, VerifyMode::oracle);
  const auto distinct = verify_distinct(pair);
  r.pass = fast.pass && oracle.pass && distinct.pass && distinct.root_witness.has_value();
  std::ostringstream d;
  d << "fast " << sci(fast.max_abs_diff) << " / oracle " << sci(oracle.max_abs_diff) << " over "
    << fast.points_checked << " points, phase distance " << sci(distinct.phase_distance);
  if (distinct.root_witness) {
    d << ", witness " << sci(distinct.root_witness->real()) << (distinct.root_witness->imag() < 0 ? "" : "+")
      << sci(distinct.root_witness->imag()) << "i"
      << " |G+| " << sci(distinct.witness_self) << " |G-| " << sci(distinct.witness_other);
  } else {
    d << ", no root witness";
  }
  r.detail = d.str();
  return r;
}

CriterionResult off_lattice_distinctness() {
  CriterionResult r{3, "off-lattice distinctness on omega = 1/8", false, "", 0.0};
  const auto pair = demo_pair();
  const double x0 = std::log(50.0 * std::exp(10.0 * kPi)) / (4.0 * kPi);
  std::vector<SamplePoint> pts;
  for (int i = -50; i <= 50; ++i) pts.push_back({x0 + 0.01 * i, 0.125, 0});
  const auto fast = verify_agreement_at(pair, pts, 1e-10, VerifyMode::fast);
  const auto oracle = verify_agreement_at(pair, pts, 1e-8, VerifyMode::oracle);
  r.pass = fast.max_rel_diff >= 1e-3 && oracle.max_rel_diff >= 1e-3;
  r.detail = "max rel diff " + sci(fast.max_rel_diff) + " (oracle " + sci(oracle.max_rel_diff) + ") near x = " +
             sci(x0) + ", need >= 1e-3";
  return r;
}

CriterionResult density_procedure() {
  CriterionResult r{4, "density procedure for H5", true, "", 0.0};
  LineFamily fam;
  fam.a = 0.25;
  const auto f = TimeSignal::hermite(5);
  const auto f_closed = ClosedFormSignal::hermite(5);
  std::ostringstream d;
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    const auto pair = density_construct(f, eps, fam);
    const Interval dp = *pair.certificates.distance_plus;
    const Interval dm = *pair.certificates.distance_minus;
    auto quad = [&](const ClosedFormSignal& g) {
      const double half = 8.0 + g.extent();
      return l2_quadrature([&](long double t) { return f_closed.eval(t); }, [&](long double t) { return g.eval(t); },
                           half, g.max_freq(), 1e-16);
    };
    const double qp = quad(pair.closed_plus);
    const double qm = quad(pair.closed_minus);
    const bool ok = dp.high < eps && dm.high < eps && std::abs(qp - dp.high) <= 1e-6 && std::abs(qm - dm.high) <= 1e-6;
    r.pass = r.pass && ok;
    d << "eps " << sci(eps) << ": bound " << sci(std::max(dp.high, dm.high)) << " |quad - bound| "
      << sci(std::max(std::abs(qp - dp.high), std::abs(qm - dm.high))) << (ok ? "" : " FAIL") << "; ";
  }
  r.detail = d.str();
  return r;
}

CriterionResult base_pair_check() {
  CriterionResult r{5, "base pair agreement on R x aZ", true, "", 0.0};
  std::ostringstream d;
  for (double a : {0.25, 0.5}) {
    const auto pair = base_pair(a);
    LineFamily fam = pair.family;
    fam.n_min = -2;
    fam.n_max = 2;
    const auto pts = sample_line_family(fam, -2.0, 2.0, 0.04);
    const auto plus = sample_magnitudes_quadrature(pair.closed_plus, pts, 1e-12);
    const auto minus = sample_magnitudes_quadrature(pair.closed_minus, pts, 1e-12);
    double gab = 0.0;
    for (std::size_t k = 0; k < pts.size(); ++k) gab = std::max(gab, std::abs(plus[k] - minus[k]));

    double time = 0.0;
    for (int k = 0; k < 50; ++k) {
      const double t = -2.45 + 0.1 * k;
      time = std::max(time, std::abs(pair.g_plus.eval(t) - pair.closed_plus.eval(t)));
      time = std::max(time, std::abs(pair.g_minus.eval(t) - pair.closed_minus.eval(t)));
    }
    const bool ok = pts.size() == 505 && gab <= 1e-9 && time <= 1e-8;
    r.pass = r.pass && ok;
    d << "a=" << a << ": gabor " << sci(gab) << ", time " << sci(time) << (ok ? "" : " FAIL") << "; ";
  }
  r.detail = d.str();
  return r;
}

// trapezoid over [-L, L]^2 of e^{beta z} conj(e^{gamma z}) e^{-pi |z|^2}
cplx fock_inner_2d(cplx beta, cplx gamma) {
  const double L = 8.0;
  const int n = 256;
  const double h = 2.0 * L / n;
  cplx sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      const cplx z(-L + h * i, -L + h * j);
      sum += std::exp(beta * z + std::conj(gamma * z) - kPi * std::norm(z));
    }
  }
  return sum * h * h;
}

CriterionResult fock_identities() {
  CriterionResult r{6, "Fock identities", false, "", 0.0};
  double norm_err = 0.0;
  for (int n = 0; n <= 8; ++n) norm_err = std::max(norm_err, std::abs(norm(FockFunction::basis(n)) - 1.0));

  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto disc = [&](double radius) { return std::polar(radius * std::sqrt(unit(rng)), 2.0 * kPi * unit(rng)); };
  double kernel_err = 0.0;
  for (int k = 0; k < 20; ++k) {
    const cplx b = disc(2.0);
    const cplx g = disc(2.0);
    const cplx expected = std::exp(b * std::conj(g) / kPi);
    const cplx lib = inner(FockFunction::exponential(b), FockFunction::exponential(g));
    kernel_err = std::max({kernel_err, std::abs(fock_inner_2d(b, g) - expected), std::abs(lib - expected)});
  }

  int bound_fail = 0;
  std::uniform_int_distribution<int> power(0, 4);
  std::uniform_int_distribution<int> terms(1, 3);
  for (int k = 0; k < 100; ++k) {
    std::vector<FockAtom> atoms;
    for (int t = terms(rng); t > 0; --t) atoms.push_back({disc(1.0), power(rng), disc(2.0)});
    const auto b = pointwise_bound_check(FockFunction(atoms), disc(3.0));
    if (!b.holds) ++bound_fail;
  }
  r.pass = norm_err <= 1e-12 && kernel_err <= 1e-6 && bound_fail == 0;
  r.detail = "norm err " + sci(norm_err) + ", kernel err " + sci(kernel_err) + ", bound failures " +
             std::to_string(bound_fail) + "/100";
  return r;
}

CriterionResult gaussian_probe() {
  CriterionResult r{7, "lattice probe matrix (12 cells)", true, "", 0.0};
  int good = 0;
  double max_dist = 0.0;
  std::size_t feasible = 0;
  std::string failures;
  for (double a : {0.25, 0.5, 0.75}) {
    for (double radius : {2.0, 3.0}) {
      for (int order : {4, 8}) {
        ProbeConfig cfg;
        cfg.a = a;
        cfg.radius = radius;
        cfg.order = order;
        cfg.starts = 20;
        const auto res = constant_fit_search(cfg);
        for (const auto& m : res.minimizers) {
          if (!m.feasible) continue;
          ++feasible;
          max_dist = std::max(max_dist, m.distance_to_constants);
        }
        if (res.verdict == ProbeVerdict::all_near_constant) {
          ++good;
        } else {
          failures += " a=" + sci(a) + ",R=" + sci(radius) + ",N=" + std::to_string(order) + ":" + to_string(res.verdict);
        }
      }
    }
  }
  r.pass = good == 12;
  r.detail = std::to_string(good) + "/12 all-near-constant, " + std::to_string(feasible) +
             " feasible minimizers, max distance " + sci(max_dist) + failures;
  return r;
}

int cli(const std::vector<std::string>& args, std::string* captured = nullptr) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  if (captured) *captured = out.str();
  return code;
}

bool manifest_valid(const fs::path& manifest, const fs::path& dir, std::string& why) {
  const auto text = io::read_file(manifest);
  if (text.find('\r') != std::string::npos) {
    why = "CR in manifest";
    return false;
  }
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (line.find(" = ") == std::string::npos) {
      why = "bad manifest line: " + line;
      return false;
    }
  }
  const auto m = io::Manifest::parse(text);
  if (m.files().empty()) {
    why = "manifest lists no files";
    return false;
  }
  for (const auto& f : m.files()) {
    if (!fs::exists(dir / f)) {
      why = "listed file missing: " + f;
      return false;
    }
  }
  return true;
}

bool pgm_valid(const fs::path& path, std::size_t nx, std::size_t nw, std::string& why) {
  std::istringstream in(io::read_file(path));
  std::string magic;
  std::size_t w = 0, h = 0;
  long maxval = 0;
  in >> magic >> w >> h >> maxval;
  if (magic != "P2" || w != nx || h != nw || maxval != 65535) {
    why = "bad PGM header";
    return false;
  }
  std::size_t count = 0;
  long top = 0;
  for (long v; in >> v; ++count) {
    if (v < 0 || v > 65535) {
      why = "PGM value out of range";
      return false;
    }
    top = std::max(top, v);
  }
  if (count != nx * nw || top != 65535) {
    why = "PGM body has " + std::to_string(count) + " values, max " + std::to_string(top);
    return false;
  }
  return true;
}

CriterionResult cli_contract(const Options& opts) {
  CriterionResult r{8, "CLI contract", false, "", 0.0};
  fs::path root = opts.scratch;
  const bool own = root.empty();
  if (own) root = fs::temp_directory_path() / ("gul-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(root);
  const fs::path pair = root / "fig1";
  std::string why;
  std::string out;
  auto fail = [&](const std::string& msg) {
    r.detail = msg;
    return r;
  };

  if (cli({"construct", "--mode", "perturb", "--hermite", "5", "--a", "0.25", "--delta",
           io::format_double(demo_delta()), "--out", pair.string()}) != 0) {
    return fail("construct failed");
  }
  if (cli({"verify", "--pair", pair.string()}, &out) != 0 || out.find("agreement_pass = true") == std::string::npos) {
    return fail("verify did not report agreement_pass = true");
  }
  if (!manifest_valid(pair / "manifest.txt", pair, why)) return fail(why);

  const fs::path csv = root / "plus.csv";
  const fs::path pgm = root / "plus.pgm";
  if (cli({"spectrogram", "--pair", pair.string(), "--format", "csv", "--out", csv.string()}) != 0) {
    return fail("spectrogram csv failed");
  }
  if (cli({"spectrogram", "--pair", pair.string(), "--format", "pgm", "--out", pgm.string()}) != 0) {
    return fail("spectrogram pgm failed");
  }
  const auto grid = io::parse_grid_csv(io::read_file(csv));
  const auto direct = spectrogram_grid(io::parse_atoms(io::read_file(pair / "fock_plus.txt")), GridSpec{});
  if (grid.values != direct.values) return fail("CSV does not round-trip");
  if (!pgm_valid(pgm, grid.nx, grid.nw, why)) return fail(why);
  fs::path csv_manifest = csv;
  csv_manifest += ".manifest.txt";
  if (!manifest_valid(csv_manifest, root, why)) return fail(why);

  const int empty_range = cli({"spectrogram", "--hermite", "5", "--format", "pgm", "--xmin", "1", "--xmax", "0",
                               "--out", (root / "empty.pgm").string()});
  const int bad_number = cli({"construct", "--a", "abc", "--out", (root / "bad").string()});
  const int unknown = cli({"frobnicate"});
  if (empty_range != 2 || bad_number != 2 || unknown != 2) {
    return fail("malformed arguments exit " + std::to_string(empty_range) + "/" + std::to_string(bad_number) + "/" +
                std::to_string(unknown));
  }

  std::string spawned;
  if (!opts.cli_binary.empty()) {
    const std::string cmd = "'" + opts.cli_binary + "' spectrogram --hermite 5 --format pgm --xmin 1 --xmax 0 --out '" +
                            (root / "spawn.pgm").string() + "' >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 2) return fail("spawned CLI did not exit 2 on an empty range");
    spawned = ", spawned binary exit 2";
  }
  if (own) fs::remove_all(root);
  r.pass = true;
  r.detail = "construct/verify/spectrogram round trip ok, " + std::to_string(grid.nx * grid.nw) +
             " CSV rows, malformed args exit 2" + spawned;
  return r;
}

}  // namespace

CriterionResult run_criterion(int id, const Options& opts) {
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    switch (id) {
      case 1: r = oracle_equivalence(); break;
      case 2: r = demo_pair_certification(); break;
      case 3: r = off_lattice_distinctness(); break;
      case 4: r = density_procedure(); break;
      case 5: r = base_pair_check(); break;
      case 6: r = fock_identities(); break;
      case 7: r = gaussian_probe(); break;
      case 8: r = cli_contract(opts); break;
      default:
        throw std::invalid_argument("unknown criterion " + std::to_string(id));
    }
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception& e) {
    r.id = id;
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<CriterionResult> run_all(const Options& opts) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriteria; ++id) out.push_back(run_criterion(id, opts));
  return out;
}

std::string format_row(const CriterionResult& r) {
  char secs[32];
  std::snprintf(secs, sizeof secs, "%.2fs", r.seconds);
  return std::string(r.pass ? "[PASS] " : "[FAIL] ") + std::to_string(r.id) + " " + r.title + ": " + r.detail + " " +
         secs;
}

bool run_and_print(const Options& opts, std::ostream& out) {
  bool all = true;
  for (int id = 1; id <= kCriteria; ++id) {
    const auto r = run_criterion(id, opts);
    all = all && r.pass;
    out << format_row(r) << std::endl;
  }
  out << (all ? "selftest: all criteria passed" : "selftest: FAILED") << std::endl;
  return all;
}

}  // namespace gul::acceptance
