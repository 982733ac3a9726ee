#pragma once

// Command-line surface: bound, worstcase, oracle, moments, selfcheck.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sharpsum/shape.hpp"

namespace sharpsum {

struct RunConfig {
  std::string command;
  std::vector<Json> dists;
  double p = 0.5;
  std::vector<int> ns{10, 100, 1000};
  std::vector<double> qs;
  std::vector<double> thresholds;
  int reps = 10000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  double margin = 1e-3;
  std::string out;  // empty: standard output
  std::string format = "csv";
};

RunConfig config_from_json(const Json& j, RunConfig base = {});

// Writes the artifact to cfg.out (or `out`) and returns the exit status.
// Errors are reported as a JSON object on `err` with a nonzero status.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Parses flags (and an optional --config JSON file) and calls run().
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sharpsum
