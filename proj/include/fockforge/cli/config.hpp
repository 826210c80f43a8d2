#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "fockforge/fock.hpp"
#include "fockforge/oneparticle.hpp"

namespace fockforge::cli {

// Malformed or semantically invalid configuration; maps to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct ThermoSection {
  double beta = 1.0;
  double mu = 0.0;
  // When set, H is a random hermitian matrix of this size drawn from the seed
  // instead of the model operator.
  std::optional<Index> random_modes;
};

struct RunConfig {
  std::optional<LatticeConfig> model;
  Statistics statistics = Statistics::fermion;
  int boson_cap = 3;
  std::optional<ThermoSection> thermo;
  std::vector<std::string> suite;
  std::uint64_t seed = 0;
  // Every known check name, defaults overridden by the config.
  std::map<std::string, double> tolerances;
  std::string output_path;
  std::string output_format = "json";
  // Field configurations for the equivalence sweep.
  std::vector<LatticeConfig> family;

  // The parsed document, used for the inputs digest.
  nlohmann::json source;
};

// Default tolerance of every named check.
const std::map<std::string, double>& default_tolerances();

// Names accepted in the suite list.
const std::vector<std::string>& known_suites();

// Throws ConfigError.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

// FNV-1a over the canonical config dump and the seed, as 16 hex digits.
std::string inputs_digest(const RunConfig& cfg);

}  // namespace fockforge::cli
