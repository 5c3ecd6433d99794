#include "gul/io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace gul::io {
namespace {

double parse_number(const std::string& tok, const std::string& what) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (tok.empty() || end != tok.c_str() + tok.size() || (errno == ERANGE && std::abs(v) > 1.0)) {
    throw std::invalid_argument(what + ": bad number '" + tok + "'");
  }
  return v;
}

int parse_int(const std::string& tok, const std::string& what) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(tok, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(what + ": bad integer '" + tok + "'");
  }
  if (used != tok.size()) throw std::invalid_argument(what + ": bad integer '" + tok + "'");
  return v;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    out.push_back(line);
  }
  return out;
}

// n re im lines into a dense vector; duplicate indices are rejected
std::vector<cplx> parse_indexed(const std::string& text, const std::string& what) {
  std::map<int, cplx> entries;
  for (const auto& line : data_lines(text)) {
    const auto tok = split_ws(line);
    if (tok.size() != 3) throw std::invalid_argument(what + ": expected 'n re im', got '" + line + "'");
    const int n = parse_int(tok[0], what);
    if (n < 0) throw std::invalid_argument(what + ": negative index");
    if (!entries.emplace(n, cplx(parse_number(tok[1], what), parse_number(tok[2], what))).second) {
      throw std::invalid_argument(what + ": duplicate index " + tok[0]);
    }
  }
  std::vector<cplx> out(entries.empty() ? 0 : static_cast<std::size_t>(entries.rbegin()->first) + 1);
  for (const auto& [n, c] : entries) out[static_cast<std::size_t>(n)] = c;
  return out;
}

std::string optional_double(const std::optional<double>& v) { return v ? format_double(*v) : "none"; }

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_atomic(const fs::path& path, const std::string& contents) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_coefficients(const TimeSignal& f) {
  std::string out = "# tail_bound = " + format_double(f.tail_bound) + "\n";
  for (std::size_t n = 0; n < f.hermite_coeffs.size(); ++n) {
    const cplx c = f.hermite_coeffs[n];
    out += std::to_string(n) + " " + format_double(c.real()) + " " + format_double(c.imag()) + "\n";
  }
  return out;
}

TimeSignal parse_coefficients(const std::string& text) {
  TimeSignal f;
  f.hermite_coeffs = parse_indexed(text, "coefficients");
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    line = trim(line);
    const std::string key = "# tail_bound =";
    if (line.rfind(key, 0) == 0) f.tail_bound = parse_number(trim(line.substr(key.size())), "tail_bound");
  }
  return f;
}

std::vector<cplx> parse_coefficient_list(const std::string& text) {
  auto c = parse_indexed(text, "coefficients");
  if (c.empty()) throw std::invalid_argument("coefficients: file has no entries");
  return c;
}

std::string format_atoms(const FockFunction& f) {
  std::string out = "# power re im beta_re beta_im\n";
  for (const auto& a : f.atoms()) {
    out += std::to_string(a.power) + " " + format_double(a.coeff.real()) + " " + format_double(a.coeff.imag()) + " " +
           format_double(a.expo.real()) + " " + format_double(a.expo.imag()) + "\n";
  }
  return out;
}

FockFunction parse_atoms(const std::string& text) {
  std::vector<FockAtom> atoms;
  for (const auto& line : data_lines(text)) {
    const auto tok = split_ws(line);
    if (tok.size() != 5) throw std::invalid_argument("atoms: expected 5 fields, got '" + line + "'");
    const int n = parse_int(tok[0], "atoms");
    if (n < 0) throw std::invalid_argument("atoms: negative power");
    atoms.push_back({cplx(parse_number(tok[1], "atoms"), parse_number(tok[2], "atoms")), n,
                     cplx(parse_number(tok[3], "atoms"), parse_number(tok[4], "atoms"))});
  }
  return FockFunction(std::move(atoms));
}

void Manifest::set(const std::string& key, const std::string& value) {
  detail::require(!key.empty() && key.find_first_of("=\n") == std::string::npos, "manifest: bad key");
  detail::require(value.find('\n') == std::string::npos, "manifest: value spans lines");
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries_.emplace_back(key, value);
}

bool Manifest::has(const std::string& key) const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const auto& e) { return e.first == key; });
}

const std::string& Manifest::get(const std::string& key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return v;
  }
  throw std::invalid_argument("manifest: missing key '" + key + "'");
}

double Manifest::get_double(const std::string& key) const { return parse_number(get(key), "manifest " + key); }

std::string Manifest::str() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
  if (!files_.empty()) {
    std::string list;
    for (const auto& f : files_) list += (list.empty() ? "" : ",") + f;
    out += "files = " + list + "\n";
  }
  return out;
}

Manifest Manifest::parse(const std::string& text) {
  Manifest m;
  for (const auto& line : data_lines(text)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("manifest: line without '=': " + line);
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key == "files") {
      std::istringstream in(value);
      for (std::string f; std::getline(in, f, ',');) {
        if (!trim(f).empty()) m.files_.push_back(trim(f));
      }
    } else {
      m.set(key, value);
    }
  }
  return m;
}

std::string format_grid_csv(const SpectrogramGrid& grid) {
  std::string out = "x,omega,magnitude\n";
  out.reserve(out.size() + grid.values.size() * 64);
  for (std::size_t i = 0; i < grid.nx; ++i) {
    const std::string x = format_double(grid.spec.x_at(i));
    for (std::size_t j = 0; j < grid.nw; ++j) {
      out += x + "," + format_double(grid.spec.w_at(j)) + "," + format_double(grid.at(i, j)) + "\n";
    }
  }
  return out;
}

SpectrogramGrid parse_grid_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || trim(line) != "x,omega,magnitude") {
    throw std::invalid_argument("csv: missing header 'x,omega,magnitude'");
  }
  std::vector<double> xs, ws, vals;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string a, b, c, extra;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, c, ',') ||
        std::getline(row, extra, ',')) {
      throw std::invalid_argument("csv: expected three fields, got '" + line + "'");
    }
    xs.push_back(parse_number(a, "csv"));
    ws.push_back(parse_number(b, "csv"));
    vals.push_back(parse_number(c, "csv"));
  }
  if (vals.empty()) throw std::invalid_argument("csv: no rows");
  std::size_t nw = 1;
  while (nw < xs.size() && xs[nw] == xs[0]) ++nw;
  if (vals.size() % nw != 0) throw std::invalid_argument("csv: grid is not rectangular");
  const std::size_t nx = vals.size() / nw;
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < nw; ++j) {
      const std::size_t k = i * nw + j;
      if (xs[k] != xs[i * nw] || ws[k] != ws[j]) throw std::invalid_argument("csv: grid is not rectangular");
    }
  }
  SpectrogramGrid g;
  g.nx = nx;
  g.nw = nw;
  g.values = std::move(vals);
  g.spec.x_min = xs.front();
  g.spec.x_max = xs.back();
  g.spec.x_step = nx > 1 ? (xs.back() - xs.front()) / static_cast<double>(nx - 1) : 1.0;
  g.spec.w_min = ws.front();
  g.spec.w_max = ws[nw - 1];
  g.spec.w_step = nw > 1 ? (ws[nw - 1] - ws.front()) / static_cast<double>(nw - 1) : 1.0;
  return g;
}

std::string format_grid_pgm(const SpectrogramGrid& grid) {
  // image rows run over omega from high to low, columns over x
  const double mx = grid.max();
  std::string out = "P2\n" + std::to_string(grid.nx) + " " + std::to_string(grid.nw) + "\n65535\n";
  for (std::size_t r = 0; r < grid.nw; ++r) {
    const std::size_t j = grid.nw - 1 - r;
    for (std::size_t i = 0; i < grid.nx; ++i) {
      const double v = mx > 0.0 ? grid.at(i, j) / mx : 0.0;
      const long level = std::lround(std::clamp(v, 0.0, 1.0) * 65535.0);
      out += std::to_string(level);
      out += (i + 1 == grid.nx) ? '\n' : ' ';
    }
  }
  return out;
}

void save_pair(const fs::path& dir, const CounterexamplePair& pair, Manifest& m) {
  fs::create_directories(dir);
  const std::pair<const char*, std::string> files[] = {
      {"g_plus.txt", format_coefficients(pair.g_plus)},   {"g_minus.txt", format_coefficients(pair.g_minus)},
      {"fock_plus.txt", format_atoms(pair.image_plus)},   {"fock_minus.txt", format_atoms(pair.image_minus)},
      {"fock_base.txt", format_atoms(pair.base)},
  };
  for (const auto& [name, text] : files) {
    write_atomic(dir / name, text);
    m.add_file(name);
  }
  m.set("mode", pair.meta.mode);
  m.set("a", pair.meta.a);
  m.set("delta", pair.meta.delta);
  m.set("theta", pair.meta.theta);
  m.set("lambda0_re", pair.meta.lambda0.real());
  m.set("lambda0_im", pair.meta.lambda0.imag());
  m.set("shift", pair.meta.shift);
  m.set("epsilon", optional_double(pair.meta.epsilon));
  m.set("unit_plus_re", pair.unit_plus.real());
  m.set("unit_plus_im", pair.unit_plus.imag());
  m.set("unit_minus_re", pair.unit_minus.real());
  m.set("unit_minus_im", pair.unit_minus.imag());
  m.set("symbolic_agreement", pair.symbolic_agreement ? "true" : "false");
  const auto& c = pair.certificates;
  if (c.distance_plus) {
    m.set("distance_plus_low", c.distance_plus->low);
    m.set("distance_plus_high", c.distance_plus->high);
  }
  if (c.distance_minus) {
    m.set("distance_minus_low", c.distance_minus->low);
    m.set("distance_minus_high", c.distance_minus->high);
  }
  m.set("triangle_bound", optional_double(pair.meta.triangle_bound));
  m.set("phase_distance", optional_double(c.phase_distance));
  m.set("g_plus_coefficients", std::to_string(pair.g_plus.hermite_coeffs.size()));
  m.set("g_minus_coefficients", std::to_string(pair.g_minus.hermite_coeffs.size()));
}

CounterexamplePair load_pair(const fs::path& dir) {
  const auto m = Manifest::parse(read_file(dir / "manifest.txt"));
  CounterexamplePair p;
  p.g_plus = parse_coefficients(read_file(dir / "g_plus.txt"));
  p.g_minus = parse_coefficients(read_file(dir / "g_minus.txt"));
  p.image_plus = parse_atoms(read_file(dir / "fock_plus.txt"));
  p.image_minus = parse_atoms(read_file(dir / "fock_minus.txt"));
  p.base = parse_atoms(read_file(dir / "fock_base.txt"));
  p.closed_plus = closed_form_from_fock(p.image_plus);
  p.closed_minus = closed_form_from_fock(p.image_minus);

  p.meta.mode = m.get("mode");
  p.meta.a = m.get_double("a");
  p.meta.delta = m.get_double("delta");
  p.meta.theta = m.get_double("theta");
  p.meta.lambda0 = cplx(m.get_double("lambda0_re"), m.get_double("lambda0_im"));
  p.meta.shift = m.get_double("shift");
  if (m.get("epsilon") != "none") p.meta.epsilon = m.get_double("epsilon");
  if (m.get("triangle_bound") != "none") p.meta.triangle_bound = m.get_double("triangle_bound");
  p.unit_plus = cplx(m.get_double("unit_plus_re"), m.get_double("unit_plus_im"));
  p.unit_minus = cplx(m.get_double("unit_minus_re"), m.get_double("unit_minus_im"));
  p.symbolic_agreement = m.get("symbolic_agreement") == "true";
  detail::require(p.meta.a > 0.0 && p.meta.delta > 0.0, "pair manifest: a and delta must be positive");
  p.family.a = p.meta.a;
  p.family.theta = p.meta.theta;
  p.family.lambda0 = p.meta.lambda0;
  return p;
}

}  // namespace gul::io
