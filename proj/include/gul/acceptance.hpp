#pragma once

// Acceptance suite shared by `gul selftest` and the acceptance test binary.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace gul::acceptance {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct Options {
  /// Working directory for the CLI round trip; a fresh temp dir when empty.
  std::filesystem::path scratch;
  /// When set, the CLI criterion also spawns this executable.
  std::string cli_binary;
};

constexpr int kCriteria = 8;

CriterionResult run_criterion(int id, const Options& opts);
std::vector<CriterionResult> run_all(const Options& opts);

/// `[PASS] 1 title (detail) 0.42s`
std::string format_row(const CriterionResult& r);
/// Prints one row per criterion as it completes; true iff all pass.
bool run_and_print(const Options& opts, std::ostream& out);

}  // namespace gul::acceptance
