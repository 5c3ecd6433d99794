#include "gul/cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

#include "gul/acceptance.hpp"
#include "gul/counterexamples.hpp"
#include "gul/io.hpp"
#include "gul/probe.hpp"

#ifndef GUL_VERSION
#define GUL_VERSION "0.0.0"
#endif

namespace gul::cli {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

std::string quote(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '"', '\'');
  return "\"" + s + "\"";
}

std::string join(const std::vector<std::string>& args) {
  std::string s = "gul";
  for (const auto& a : args) s += " " + a;
  return s;
}

void apply_thread_cap() {
  const char* env = std::getenv("GUL_THREADS");
  if (env == nullptr || *env == '\0') return;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1 || n > 4096) throw std::invalid_argument("GUL_THREADS must be a positive integer");
  omp_set_num_threads(static_cast<int>(n));
}

void stamp(io::Manifest& m, const std::string& command, Clock::time_point start) {
  m.set("command", command);
  m.set("version", GUL_VERSION);
  m.set("wall_time_s", std::chrono::duration<double>(Clock::now() - start).count());
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

struct ConstructArgs {
  std::string mode = "perturb";
  double a = 0.25;
  std::optional<double> delta;
  std::optional<double> epsilon;
  double theta = 0.0;
  double lambda0_re = 0.0;
  double lambda0_im = 0.0;
  std::optional<int> hermite;
  std::string coeffs;
  std::string out;
};

int do_construct(const ConstructArgs& c, const std::string& command, std::ostream& out) {
  const auto start = Clock::now();
  detail::require(c.a > 0.0, "--a must be positive");
  if (c.delta) detail::require(*c.delta > 0.0, "--delta must be positive");
  if (c.epsilon) detail::require(*c.epsilon > 0.0, "--epsilon must be positive");
  LineFamily fam;
  fam.a = c.a;
  fam.theta = c.theta;
  fam.lambda0 = cplx(c.lambda0_re, c.lambda0_im);

  const bool needs_signal = c.mode == "perturb" || c.mode == "density";
  if (needs_signal) {
    detail::require(c.hermite.has_value() != !c.coeffs.empty(), "give exactly one of --hermite and --coeffs");
    if (c.hermite) detail::require(*c.hermite >= 0 && *c.hermite <= kDefaultHermiteMax, "--hermite out of range");
  }
  std::vector<cplx> coeffs;
  if (!c.coeffs.empty()) coeffs = io::parse_coefficient_list(io::read_file(c.coeffs));

  CounterexamplePair pair;
  if (c.mode == "base") {
    pair = base_pair(c.a);
  } else if (c.mode == "shifted") {
    detail::require(c.delta.has_value(), "shifted mode needs --delta");
    pair = shifted_pair(c.a, *c.delta);
  } else if (c.mode == "perturb") {
    detail::require(c.delta.has_value() != c.epsilon.has_value(), "perturb mode needs exactly one of --delta and --epsilon");
    const auto f = c.hermite ? FockFunction::basis(*c.hermite) : FockFunction::from_basis_coeffs(coeffs);
    detail::require(!f.is_zero(), "perturb mode needs a nonzero signal");
    pair = c.delta ? perturb_pair_with_delta(f, *c.delta, fam) : perturb_pair(f, *c.epsilon, fam);
  } else {
    detail::require(c.epsilon.has_value(), "density mode needs --epsilon");
    TimeSignal f;
    if (c.hermite) {
      f = TimeSignal::hermite(*c.hermite);
    } else {
      f.hermite_coeffs = coeffs;
    }
    pair = density_construct(f, *c.epsilon, fam);
  }

  io::Manifest m;
  io::save_pair(c.out, pair, m);
  stamp(m, command, start);
  io::write_atomic(fs::path(c.out) / "manifest.txt", m.str());
  out << "construct_ok = true\n"
      << "mode = " << pair.meta.mode << "\n"
      << "delta = " << io::format_double(pair.meta.delta) << "\n"
      << "symbolic_agreement = " << bool_str(pair.symbolic_agreement) << "\n"
      << "out = " << c.out << "\n";
  return kOk;
}

struct VerifyArgs {
  std::string pair;
  VerifyWindow window;
  double tol = 1e-10;
  double tol_dist = 1e-8;
  bool oracle = false;
};

int do_verify(const VerifyArgs& v, std::ostream& out) {
  detail::require(v.tol > 0.0 && v.tol_dist > 0.0, "tolerances must be positive");
  const auto pair = io::load_pair(v.pair);
  const auto ag = verify_agreement(pair, v.window, v.tol, v.oracle ? VerifyMode::oracle : VerifyMode::fast);
  const auto ds = verify_distinct(pair, v.tol_dist);

  io::Manifest r;
  r.set("agreement_pass", bool_str(ag.pass));
  r.set("agreement_mode", v.oracle ? "oracle" : "fast");
  r.set("tol", v.tol);
  r.set("points_checked", std::to_string(ag.points_checked));
  r.set("max_abs_diff", ag.max_abs_diff);
  r.set("max_rel_diff", ag.max_rel_diff);
  r.set("max_magnitude", ag.max_magnitude);
  r.set("argmax_x", ag.argmax.x);
  r.set("argmax_omega", ag.argmax.omega);
  r.set("distinct_pass", bool_str(ds.pass));
  r.set("phase_distance", ds.phase_distance);
  if (ds.root_witness) {
    r.set("root_witness_re", ds.root_witness->real());
    r.set("root_witness_im", ds.root_witness->imag());
    r.set("witness_self", ds.witness_self);
    r.set("witness_other", ds.witness_other);
  } else {
    r.set("root_witness", "none");
  }
  r.set("symbolic_agreement", bool_str(pair.symbolic_agreement));
  const std::string report = r.str();
  const fs::path dir(v.pair);
  io::write_atomic(dir / "verify_report.txt", report);

  auto m = io::Manifest::parse(io::read_file(dir / "manifest.txt"));
  const auto& files = m.files();
  if (std::find(files.begin(), files.end(), "verify_report.txt") == files.end()) m.add_file("verify_report.txt");
  m.set("agreement_pass", bool_str(ag.pass));
  m.set("distinct_pass", bool_str(ds.pass));
  io::write_atomic(dir / "manifest.txt", m.str());

  out << report;
  return ag.pass && ds.pass ? kOk : kVerificationFailed;
}

struct SpectrogramArgs {
  std::string pair;
  std::string member = "plus";
  std::optional<int> hermite;
  GridSpec grid;
  std::string format = "csv";
  std::string out;
};

int do_spectrogram(const SpectrogramArgs& s, const std::string& command, std::ostream& out) {
  const auto start = Clock::now();
  detail::require(s.hermite.has_value() != !s.pair.empty(), "give exactly one of --pair and --hermite");
  s.grid.validate();
  FockFunction image;
  if (s.hermite) {
    detail::require(*s.hermite >= 0 && *s.hermite <= kDefaultHermiteMax, "--hermite out of range");
    image = FockFunction::basis(*s.hermite);
  } else {
    const fs::path dir(s.pair);
    image = io::parse_atoms(io::read_file(dir / (s.member == "plus" ? "fock_plus.txt" : "fock_minus.txt")));
  }
  const auto grid = spectrogram_grid(image, s.grid);
  const fs::path path(s.out);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  io::write_atomic(path, s.format == "csv" ? io::format_grid_csv(grid) : io::format_grid_pgm(grid));

  io::Manifest m;
  m.add_file(path.filename().string());
  m.set("source", s.hermite ? "hermite " + std::to_string(*s.hermite) : s.pair + " " + s.member);
  m.set("format", s.format);
  m.set("nx", std::to_string(grid.nx));
  m.set("nw", std::to_string(grid.nw));
  m.set("grid_max", grid.max());
  stamp(m, command, start);
  fs::path mpath = path;
  mpath += ".manifest.txt";
  io::write_atomic(mpath, m.str());
  out << "spectrogram_ok = true\nnx = " << grid.nx << "\nnw = " << grid.nw << "\nout = " << s.out << "\n";
  return kOk;
}

int do_probe(const ProbeConfig& cfg, const std::string& dir, const std::string& command, std::ostream& out) {
  const auto start = Clock::now();
  const auto res = constant_fit_search(cfg);
  std::size_t feasible = 0;
  double max_dist = 0.0;
  for (const auto& m : res.minimizers) {
    if (!m.feasible) continue;
    ++feasible;
    max_dist = std::max(max_dist, m.distance_to_constants);
  }
  io::Manifest summary;
  summary.set("verdict", to_string(res.verdict));
  summary.set("exploratory", bool_str(res.exploratory));
  summary.set("constraint_points", std::to_string(res.constraint_points));
  summary.set("feasible", std::to_string(feasible));
  summary.set("max_feasible_distance", max_dist);
  if (!dir.empty()) {
    std::ostringstream table;
    table << "# start residual distance_to_constants iterations feasible\n";
    for (std::size_t i = 0; i < res.minimizers.size(); ++i) {
      const auto& m = res.minimizers[i];
      table << i << " " << io::format_double(m.residual) << " " << io::format_double(m.distance_to_constants) << " "
            << m.iterations << " " << (m.feasible ? 1 : 0) << "\n";
    }
    fs::create_directories(dir);
    io::write_atomic(fs::path(dir) / "probe_minimizers.txt", table.str());
    io::Manifest m = summary;
    m.add_file("probe_minimizers.txt");
    m.set("a", cfg.a);
    m.set("R", cfg.radius);
    m.set("N", std::to_string(cfg.order));
    m.set("starts", std::to_string(cfg.starts));
    m.set("seed", std::to_string(cfg.seed));
    stamp(m, command, start);
    io::write_atomic(fs::path(dir) / "manifest.txt", m.str());
  }
  out << summary.str();
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const std::string command = join(args);
  CLI::App app{"Counterexamples to sampled Gabor phase retrieval", "gul"};
  app.require_subcommand(1);
  app.set_version_flag("--version", GUL_VERSION);

  ConstructArgs ca;
  auto* construct = app.add_subcommand("construct", "Build a pair and write it to a directory");
  construct->add_option("--mode", ca.mode)->check(CLI::IsMember({"base", "shifted", "perturb", "density"}));
  construct->add_option("--a", ca.a, "Line spacing");
  construct->add_option("--delta", ca.delta);
  construct->add_option("--epsilon", ca.epsilon);
  construct->add_option("--theta", ca.theta);
  construct->add_option("--lambda0-re", ca.lambda0_re);
  construct->add_option("--lambda0-im", ca.lambda0_im);
  auto* herm = construct->add_option("--hermite", ca.hermite, "Use H_n as the signal");
  construct->add_option("--coeffs", ca.coeffs, "Hermite coefficient file (n re im)")->excludes(herm);
  construct->add_option("--out", ca.out)->required();

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Check magnitude agreement and distinctness of a stored pair");
  verify->add_option("--pair", va.pair)->required();
  verify->add_option("--smin", va.window.s_min);
  verify->add_option("--smax", va.window.s_max);
  verify->add_option("--sstep", va.window.s_step);
  verify->add_option("--nmin", va.window.n_min);
  verify->add_option("--nmax", va.window.n_max);
  verify->add_option("--tol", va.tol);
  verify->add_option("--tol-dist", va.tol_dist);
  verify->add_flag("--oracle", va.oracle, "Use direct quadrature instead of the closed form");

  SpectrogramArgs sa;
  auto* spec = app.add_subcommand("spectrogram", "Write |Gf| on a rectangular grid");
  auto* pair_opt = spec->add_option("--pair", sa.pair);
  spec->add_option("--member", sa.member)->check(CLI::IsMember({"plus", "minus"}));
  spec->add_option("--hermite", sa.hermite)->excludes(pair_opt);
  spec->add_option("--xmin", sa.grid.x_min);
  spec->add_option("--xmax", sa.grid.x_max);
  spec->add_option("--xstep", sa.grid.x_step);
  spec->add_option("--wmin", sa.grid.w_min);
  spec->add_option("--wmax", sa.grid.w_max);
  spec->add_option("--wstep", sa.grid.w_step);
  spec->add_option("--format", sa.format)->check(CLI::IsMember({"csv", "pgm"}));
  spec->add_option("--out", sa.out)->required();

  ProbeConfig pc;
  std::string probe_out;
  auto* probe = app.add_subcommand("probe", "Search for non-constant fits with unimodular lattice samples");
  probe->add_option("--a", pc.a);
  probe->add_option("--R", pc.radius);
  probe->add_option("--N", pc.order);
  probe->add_option("--starts", pc.starts);
  probe->add_option("--seed", pc.seed);
  probe->add_option("--tol-feas", pc.tol_feas);
  probe->add_option("--near-constant", pc.near_constant);
  probe->add_option("--max-iterations", pc.max_iterations);
  probe->add_flag("--allow-underdetermined", pc.allow_underdetermined);
  probe->add_option("--out", probe_out);

  std::string scratch;
  auto* selftest = app.add_subcommand("selftest", "Run the acceptance suite");
  selftest->add_option("--scratch", scratch, "Working directory for the CLI round trip");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::Success& e) {
    out << (e.get_name() == "CallForVersion" ? std::string(e.what()) + "\n" : app.help());
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error kind=invalid-arguments reason=" << quote(e.what()) << "\n";
    return kInvalidArguments;
  }

  try {
    apply_thread_cap();
    if (*construct) return do_construct(ca, command, out);
    if (*verify) return do_verify(va, out);
    if (*spec) return do_spectrogram(sa, command, out);
    if (*probe) return do_probe(pc, probe_out, command, out);
    if (*selftest) {
      acceptance::Options opts;
      opts.scratch = scratch;
      return acceptance::run_and_print(opts, out) ? kOk : kVerificationFailed;
    }
  } catch (const std::invalid_argument& e) {
    err << "error kind=invalid-arguments reason=" << quote(e.what()) << "\n";
    return kInvalidArguments;
  } catch (const NumericalError& e) {
    err << "error kind=numerical-failure reason=" << quote(e.what()) << "\n";
    return kNumericalFailure;
  } catch (const std::exception& e) {
    err << "error kind=runtime-failure reason=" << quote(e.what()) << "\n";
    return kNumericalFailure;
  }
  return kInvalidArguments;
}

}  // namespace gul::cli
