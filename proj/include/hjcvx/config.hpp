#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "hjcvx/solver.hpp"

namespace hjcvx {

/// A schema or value violation in a run configuration. `key()` is the dotted
/// path of the offending entry, e.g. "grid.n".
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& what);
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// Parses a run configuration with sections grid, cutoff, carleman,
/// functional, optimizer and problem. Missing entries take the published
/// experiment defaults; unknown keys are rejected.
SolveConfig parse_config(const nlohmann::json& doc);
SolveConfig load_config(const std::filesystem::path& path);

/// Full configuration with every field explicit; parse_config of the result
/// reproduces `cfg`.
nlohmann::json config_to_json(const SolveConfig& cfg);

}  // namespace hjcvx
