#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "specshift_cli/config.hpp"
#include "specshift_cli/table.hpp"

namespace specshift::cli {

/// A file written next to the main report.
struct Artifact {
  std::string name;
  std::string content;
};

struct RunResult {
  Table report;
  std::vector<Artifact> artifacts;
  bool passed = true;  // false when a verification property failed
};

/// Runners are pure: they return the report and its side files. `report_stem` names the
/// side files (e.g. "out" gives "out.dim2.schatten1.json"); `threads` caps the search pool.
RunResult run_ratio_search(const ExperimentConfig& cfg, const std::string& report_stem, int threads);
RunResult run_divergence(const ExperimentConfig& cfg, const std::string& report_stem, int threads);
RunResult run_commuting(const ExperimentConfig& cfg, const std::string& report_stem, int threads);
RunResult run_verify(const ExperimentConfig& cfg, const std::string& report_stem, int threads);
RunResult run(const ExperimentConfig& cfg, const std::string& report_stem, int threads);

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

/// The whole command line tool. Reports go to `out` unless --output is given; side files
/// are only written next to an output file. Returns 0, 2 or 3.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace specshift::cli
