#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "specshift/funlib.hpp"
#include "specshift/loewner.hpp"

namespace specshift::cli {

/// Anything wrong with the command line, the config file or the output location.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class Command { ratio_search, divergence, commuting, verify };
enum class Format { csv, json };

Command parse_command(const std::string& name);
std::string to_string(Command c);
Format parse_format(const std::string& name);

struct GridSpec {
  Interval interval{-1.0, 1.0};
  int count = 9;
};

struct ExperimentConfig {
  Command command = Command::verify;
  std::optional<ScalarFunction> function;
  std::vector<int> dims;
  std::vector<NormKind> norm_kinds{NormKind::operator_norm, NormKind::schatten1};
  GridSpec grid;
  long budget = 1000;
  std::uint64_t seed = 0;
  int count = 10;  // K
  double delta0 = 1.0;
  int search_grid = 257;  // commuting level grid
  int block_dim = 2;
  int initial_grid_points = 65;
  int max_grid_points = 4097;
  int cases = 20;  // verify: random cases per property
  std::vector<std::filesystem::path> matrix_files;  // verify: fixtures, resolved against the config
  std::optional<std::filesystem::path> output;
  Format format = Format::csv;
};

/// Parses and validates a config for `command`. Relative fixture paths resolve against
/// `base_dir`. Throws ConfigError.
ExperimentConfig parse_config(Command command, const std::string& text,
                              const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(Command command, const std::filesystem::path& path);

/// SPECSHIFT_THREADS, or the hardware concurrency when unset. Throws ConfigError on
/// anything but a positive integer.
int thread_cap(const char* env_value);

}  // namespace specshift::cli
