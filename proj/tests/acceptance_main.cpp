// Runs every acceptance criterion and prints one PASS/FAIL line for each.
// Usage: acceptance [path-to-gul-cli]

#include <iostream>

#include "gul/acceptance.hpp"

int main(int argc, char** argv) {
  gul::acceptance::Options opts;
  if (argc > 1) opts.cli_binary = argv[1];
  return gul::acceptance::run_and_print(opts, std::cout) ? 0 : 1;
}
