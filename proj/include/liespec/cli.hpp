#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace liespec {

/// Everything a run needs. A report embeds its config; re-running from that
/// embedded config reproduces the report byte for byte (timestamp aside).
struct RunConfig {
  std::string command;
  std::string group = "su2";       // preset name or definition file path
  std::string group_definition;    // raw definition text for file groups
  std::string metric_source = "bi-invariant";
  std::vector<std::vector<double>> metric_gram;  // resolved Gram for file/inline sources
  std::vector<double> scales;                    // bi-invariant scales, empty = unit
  std::vector<std::vector<double>> torus_gram;   // empty = identity
  double cutoff = 3.0;
  int level = 3;
  double match_tol = 1e-6;
  double cluster_tol = 1e-8;
  std::uint64_t seed = 0;
  double radius = 0.2;
  int samples = 1000;
  double exclude = 0.05;
  long long budget = 20000;
  int starts = 8;
  double start_spread = 0.3;
  bool assert_constant = false;
  int irrep_count = 5;
  int top = 8;
  std::string output = "json";  // json | csv
  std::string out;              // report destination recorded at run time
  std::string lane;             // resolved kernel lane, pinned for replay
};

/// Parses arguments (subcommand first, no program name), runs the command,
/// prints human-readable output to `out` and diagnostics to `err`.
/// Exit codes: 0 success, 2 input error, 3 resource or certificate error,
/// 4 hypothesis violation.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// The command's report document (what --out writes), exposed for testing.
struct RunOutput {
  int exit_code = 0;
  std::string report;  // JSON or CSV per config.output
};
RunOutput run_for_report(const std::vector<std::string>& args, std::ostream& out,
                         std::ostream& err);

}  // namespace liespec
