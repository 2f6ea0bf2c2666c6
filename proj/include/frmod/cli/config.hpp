#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "frmod/model.hpp"
#include "frmod/simulate.hpp"

namespace frmod::cli {

/// Malformed or inconsistent configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SimulationConfig {
  std::size_t n = 1024;
  std::uint64_t seed = 1;
  Method method = Method::exact_embedding;
  std::size_t replicates = 1;
  std::size_t truncation = 4096;  // K for the linear-representation methods
};

struct GridConfig {
  std::size_t points = 4096;
  double exclusion = 1e-4;
};

struct ModelConfig {
  ModelSpec model;
  std::optional<SimulationConfig> simulation;
  GridConfig grid;
  std::size_t hmax = 50;
  nlohmann::json source;  // canonical form of the parsed document
};

/// Parses a model document. Unknown keys, missing keys and invalid values
/// raise ConfigError; model validation errors surface as ConfigError too.
ModelConfig parse_config(const nlohmann::json& doc);
ModelConfig load_config(const std::string& path);

Method parse_method(const std::string& name);

}  // namespace frmod::cli
