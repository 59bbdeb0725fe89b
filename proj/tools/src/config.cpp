#include "specshift_cli/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

#include "specshift/error.hpp"
#include "specshift/json_io.hpp"

namespace specshift::cli {

namespace {

const std::set<std::string> kKnownKeys = {
    "experiment", "function", "dims",  "norm_kinds", "grid",   "budget", "seed",
    "K",          "delta0",   "search_grid", "block_dim", "initial_grid_points",
    "max_grid_points", "cases", "matrices", "output", "format"};

[[noreturn]] void fail(const std::string& what) { throw ConfigError(what); }

long long read_integer(const Json& j, const char* key, long long lo, long long hi) {
  const Json& v = j.at(key);
  if (!v.is_number_integer()) fail(std::string("\"") + key + "\" must be an integer");
  long long x = 0;
  if (v.is_number_unsigned()) {
    const auto u = v.get<unsigned long long>();
    if (u > static_cast<unsigned long long>(std::numeric_limits<long long>::max())) {
      fail(std::string("\"") + key + "\" is out of range");
    }
    x = static_cast<long long>(u);
  } else {
    x = v.get<long long>();
  }
  if (x < lo || x > hi) {
    fail(std::string("\"") + key + "\" must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return x;
}

double read_real(const Json& j, const char* key) {
  const Json& v = j.at(key);
  if (!v.is_number()) fail(std::string("\"") + key + "\" must be a number");
  return v.get<double>();
}

int optional_int(const Json& j, const char* key, int fallback, int lo, int hi) {
  return j.contains(key) ? static_cast<int>(read_integer(j, key, lo, hi)) : fallback;
}

GridSpec read_grid(const Json& j) {
  if (!j.is_object()) fail("\"grid\" must be an object {lo, hi, count}");
  for (const auto& [k, v] : j.items()) {
    if (k != "lo" && k != "hi" && k != "count") fail("unknown grid key \"" + k + "\"");
  }
  if (!j.contains("lo") || !j.contains("hi") || !j.contains("count")) fail("\"grid\" needs lo, hi and count");
  GridSpec g;
  g.interval = {read_real(j, "lo"), read_real(j, "hi")};
  g.count = static_cast<int>(read_integer(j, "count", 2, 1000000));
  if (!(g.interval.lo < g.interval.hi)) fail("grid needs lo < hi");
  return g;
}

void require(const Json& j, std::initializer_list<const char*> keys, Command c) {
  for (const char* k : keys) {
    if (!j.contains(k)) fail(to_string(c) + " needs \"" + k + "\"");
  }
}

}  // namespace

Command parse_command(const std::string& name) {
  if (name == "ratio-search") return Command::ratio_search;
  if (name == "divergence") return Command::divergence;
  if (name == "commuting") return Command::commuting;
  if (name == "verify") return Command::verify;
  fail("unknown command \"" + name + "\" (expected ratio-search, divergence, commuting or verify)");
}

std::string to_string(Command c) {
  switch (c) {
    case Command::ratio_search: return "ratio-search";
    case Command::divergence: return "divergence";
    case Command::commuting: return "commuting";
    case Command::verify: return "verify";
  }
  return "?";
}

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  fail("unknown format \"" + name + "\" (expected csv or json)");
}

ExperimentConfig parse_config(Command command, const std::string& text, const std::filesystem::path& base_dir) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    fail(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) fail("config must be a JSON object");
  for (const auto& [k, v] : j.items()) {
    if (!kKnownKeys.contains(k)) fail("unknown config key \"" + k + "\"");
  }

  ExperimentConfig cfg;
  cfg.command = command;
  try {
    if (j.contains("experiment")) {
      if (!j["experiment"].is_string()) fail("\"experiment\" must be a string");
      if (parse_command(j["experiment"].get<std::string>()) != command) {
        fail("config is for \"" + j["experiment"].get<std::string>() + "\", not " + to_string(command));
      }
    }
    switch (command) {
      case Command::ratio_search: require(j, {"function", "dims", "grid", "budget", "seed"}, command); break;
      case Command::divergence: require(j, {"function", "K", "budget", "seed"}, command); break;
      case Command::commuting: require(j, {"function", "K", "seed"}, command); break;
      case Command::verify: break;
    }

    if (j.contains("function")) {
      try {
        cfg.function = function_from_json(j["function"]);
      } catch (const Error& e) {
        fail(std::string("bad \"function\": ") + e.what());
      }
    }
    if (j.contains("dims")) {
      if (!j["dims"].is_array() || j["dims"].empty()) fail("\"dims\" must be a non-empty array");
      for (const Json& d : j["dims"]) {
        if (!d.is_number_integer() || d.get<long long>() < 1 || d.get<long long>() > 64) {
          fail("\"dims\" entries must be integers in [1, 64]");
        }
        cfg.dims.push_back(d.get<int>());
      }
    }
    if (j.contains("norm_kinds")) {
      if (!j["norm_kinds"].is_array() || j["norm_kinds"].empty()) fail("\"norm_kinds\" must be a non-empty array");
      cfg.norm_kinds.clear();
      for (const Json& k : j["norm_kinds"]) {
        if (!k.is_string()) fail("\"norm_kinds\" entries must be strings");
        try {
          cfg.norm_kinds.push_back(parse_norm_kind(k.get<std::string>()));
        } catch (const Error& e) {
          fail(e.what());
        }
      }
    }
    if (j.contains("grid")) cfg.grid = read_grid(j["grid"]);
    if (j.contains("budget")) cfg.budget = static_cast<long>(read_integer(j, "budget", 1, 1000000000));
    if (j.contains("seed")) {
      cfg.seed = static_cast<std::uint64_t>(read_integer(j, "seed", 0, std::numeric_limits<long long>::max()));
    }
    cfg.count = optional_int(j, "K", cfg.count, 1, 1000);
    if (j.contains("delta0")) {
      cfg.delta0 = read_real(j, "delta0");
      if (!(cfg.delta0 > 0) || !std::isfinite(cfg.delta0)) fail("\"delta0\" must be positive");
    }
    cfg.search_grid = optional_int(j, "search_grid", cfg.search_grid, 2, 1000000);
    cfg.block_dim = optional_int(j, "block_dim", cfg.block_dim, 1, 64);
    cfg.initial_grid_points = optional_int(j, "initial_grid_points", cfg.initial_grid_points, 2, 1000000);
    cfg.max_grid_points = optional_int(j, "max_grid_points", cfg.max_grid_points, 2, 1000000);
    if (cfg.max_grid_points < cfg.initial_grid_points) fail("\"max_grid_points\" is below \"initial_grid_points\"");
    cfg.cases = optional_int(j, "cases", cfg.cases, 1, 100000);
    if (j.contains("matrices")) {
      if (!j["matrices"].is_array()) fail("\"matrices\" must be an array of paths");
      for (const Json& p : j["matrices"]) {
        if (!p.is_string()) fail("\"matrices\" entries must be strings");
        std::filesystem::path path = p.get<std::string>();
        cfg.matrix_files.push_back(path.is_absolute() ? path : base_dir / path);
      }
    }
    if (j.contains("output")) {
      if (!j["output"].is_string() || j["output"].get<std::string>().empty()) fail("\"output\" must be a path");
      cfg.output = j["output"].get<std::string>();
    }
    if (j.contains("format")) {
      if (!j["format"].is_string()) fail("\"format\" must be a string");
      cfg.format = parse_format(j["format"].get<std::string>());
    }
  } catch (const Json::exception& e) {
    fail(std::string("malformed config: ") + e.what());
  }
  if (command == Command::ratio_search && cfg.dims.empty()) fail("ratio-search needs \"dims\"");
  return cfg;
}

ExperimentConfig load_config(Command command, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot read config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(command, text.str(), path.parent_path());
}

int thread_cap(const char* env_value) {
  if (env_value == nullptr) {
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::clamp(hw, 1u, 64u));
  }
  const std::string text = env_value;
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(text.c_str(), &end, 10);
  if (text.empty() || *end != '\0' || errno != 0 || v < 1 || v > 4096) {
    fail("SPECSHIFT_THREADS must be a positive integer, got \"" + text + "\"");
  }
  return static_cast<int>(v);
}

}  // namespace specshift::cli
