#pragma once

// Text formats for pairs, manifests and spectrogram grids.  Every writer goes
// through write_atomic (temp file in the target directory, then rename).

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "gul/counterexamples.hpp"
#include "gul/fock.hpp"
#include "gul/gabor.hpp"
#include "gul/signals.hpp"

namespace gul::io {

namespace fs = std::filesystem;

/// %.17g, enough to round-trip a double.
std::string format_double(double v);

void write_atomic(const fs::path& path, const std::string& contents);
std::string read_file(const fs::path& path);

/// `n re im` per line; the tail bound travels in a `# tail_bound = ...` comment.
std::string format_coefficients(const TimeSignal& f);
TimeSignal parse_coefficients(const std::string& text);
/// Plain coefficient list for --coeffs: `n re im` lines, gaps filled with zero.
std::vector<cplx> parse_coefficient_list(const std::string& text);

/// `power re im beta_re beta_im` per atom.
std::string format_atoms(const FockFunction& f);
FockFunction parse_atoms(const std::string& text);

class Manifest {
 public:
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value) { set(key, format_double(value)); }
  void add_file(const std::string& name) { files_.push_back(name); }

  [[nodiscard]] bool has(const std::string& key) const;
  [[nodiscard]] const std::string& get(const std::string& key) const;
  [[nodiscard]] double get_double(const std::string& key) const;
  [[nodiscard]] const std::vector<std::string>& files() const { return files_; }
  [[nodiscard]] const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  [[nodiscard]] std::string str() const;
  static Manifest parse(const std::string& text);

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
  std::vector<std::string> files_;
};

std::string format_grid_csv(const SpectrogramGrid& grid);
/// Rows must be x-outer and rectangular; the spec is recovered from the axes.
SpectrogramGrid parse_grid_csv(const std::string& text);
std::string format_grid_pgm(const SpectrogramGrid& grid);

/// Writes g_plus.txt, g_minus.txt, fock_plus.txt, fock_minus.txt, fock_base.txt
/// into `dir` and records them, with the pair parameters, in `manifest`.
void save_pair(const fs::path& dir, const CounterexamplePair& pair, Manifest& manifest);
CounterexamplePair load_pair(const fs::path& dir);

}  // namespace gul::io
