#include "fockforge/cli/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>

namespace fockforge::cli {
namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& item : obj.items())
    if (!allowed.contains(item.key()))
      throw ConfigError(where + ": unknown key '" + item.key() + "'");
}

double get_number(const json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return v.get<double>();
}

std::int64_t get_integer(const json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
  return v.get<std::int64_t>();
}

std::string get_string(const json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

std::vector<double> get_samples(const json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_array()) throw ConfigError(where + "." + key + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ConfigError(where + "." + key + ": expected an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

LatticeConfig parse_model(const json& obj, const std::string& where) {
  reject_unknown(obj, {"model", "sites", "spacing", "mass", "charge", "phi", "vecA"}, where);
  for (const char* key : {"model", "sites"})
    if (!obj.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  LatticeConfig cfg;
  try {
    cfg.model = lattice_model_from_string(get_string(obj, "model", where));
  } catch (const InvalidArgument& e) {
    throw ConfigError(where + ".model: " + e.what());
  }
  const auto sites = get_integer(obj, "sites", where);
  if (sites < 1) throw ConfigError(where + ".sites: must be >= 1");
  cfg.sites = static_cast<Index>(sites);
  cfg.spacing = obj.contains("spacing") ? get_number(obj, "spacing", where) : 1.0;
  cfg.mass = obj.contains("mass") ? get_number(obj, "mass", where) : 1.0;
  cfg.charge = obj.contains("charge") ? get_number(obj, "charge", where) : 1.0;
  const auto zeros = std::vector<double>(static_cast<std::size_t>(cfg.sites), 0.0);
  cfg.phi = obj.contains("phi") ? get_samples(obj, "phi", where) : zeros;
  cfg.vec_a = obj.contains("vecA") ? get_samples(obj, "vecA", where) : zeros;
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return cfg;
}

}  // namespace

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> table = {
      {"anomaly", 1e-10},      {"bogoliubov", 1e-10}, {"car", 1e-12},
      {"ccr", 1e-12},          {"cocycle", 1e-10},    {"dirac_sea", 1e-10},
      {"dispersion", 1e-10},   {"equivalence", 1e-14}, {"exp", 1e-9},
      {"free_energy", 1e-10},  {"group", 1e-10},      {"jself", 1e-10},
      {"projective_phase", 1e-8}, {"qq", 1e-10},      {"spectrum", 1e-10},
      {"wedge", 1e-10},
  };
  return table;
}

const std::vector<std::string>& known_suites() {
  static const std::vector<std::string> names = {
      "car",       "ccr",        "wedge",     "qq",          "group",
      "exp",       "anomaly",    "cocycle",   "jself",       "bogoliubov",
      "dirac_sea", "free_energy", "dispersion", "projective_phase",
  };
  return names;
}

RunConfig parse_config(const json& doc) {
  reject_unknown(doc,
                 {"model", "statistics", "boson_cap", "thermo", "suite", "seed", "tolerances",
                  "output", "family"},
                 "config");
  RunConfig cfg;
  cfg.source = doc;
  cfg.tolerances = default_tolerances();

  if (doc.contains("model")) cfg.model = parse_model(doc.at("model"), "model");
  if (doc.contains("statistics")) {
    try {
      cfg.statistics = statistics_from_string(get_string(doc, "statistics", "config"));
    } catch (const InvalidArgument& e) {
      throw ConfigError(std::string("config.statistics: ") + e.what());
    }
  }
  if (doc.contains("boson_cap")) {
    const auto cap = get_integer(doc, "boson_cap", "config");
    if (cap < 1 || cap > 1000) throw ConfigError("config.boson_cap: must be in [1, 1000]");
    cfg.boson_cap = static_cast<int>(cap);
  }
  if (doc.contains("thermo")) {
    const auto& t = doc.at("thermo");
    reject_unknown(t, {"beta", "mu", "random_modes"}, "thermo");
    if (!t.contains("beta")) throw ConfigError("thermo: missing 'beta'");
    ThermoSection th;
    th.beta = get_number(t, "beta", "thermo");
    th.mu = t.contains("mu") ? get_number(t, "mu", "thermo") : 0.0;
    if (!(th.beta > 0.0)) throw ConfigError("thermo.beta: must be positive");
    if (t.contains("random_modes")) {
      const auto n = get_integer(t, "random_modes", "thermo");
      if (n < 1 || n > 64) throw ConfigError("thermo.random_modes: must be in [1, 64]");
      th.random_modes = static_cast<Index>(n);
    }
    cfg.thermo = th;
  }
  if (doc.contains("suite")) {
    const auto& s = doc.at("suite");
    if (!s.is_array()) throw ConfigError("config.suite: expected an array of names");
    for (const auto& name : s) {
      if (!name.is_string()) throw ConfigError("config.suite: expected an array of names");
      const auto str = name.get<std::string>();
      const auto& known = known_suites();
      if (std::find(known.begin(), known.end(), str) == known.end())
        throw ConfigError("config.suite: unknown check '" + str + "'");
      cfg.suite.push_back(str);
    }
  }
  if (doc.contains("seed")) {
    const auto& s = doc.at("seed");
    if (!s.is_number_unsigned()) throw ConfigError("config.seed: expected a non-negative integer");
    cfg.seed = s.get<std::uint64_t>();
  }
  if (doc.contains("tolerances")) {
    const auto& t = doc.at("tolerances");
    if (!t.is_object()) throw ConfigError("config.tolerances: expected an object");
    for (const auto& item : t.items()) {
      if (!cfg.tolerances.contains(item.key()))
        throw ConfigError("config.tolerances: unknown check '" + item.key() + "'");
      if (!item.value().is_number() || !(item.value().get<double>() >= 0.0))
        throw ConfigError("config.tolerances." + item.key() + ": expected a non-negative number");
      cfg.tolerances[item.key()] = item.value().get<double>();
    }
  }
  if (doc.contains("output")) {
    const auto& o = doc.at("output");
    reject_unknown(o, {"path", "format"}, "output");
    if (o.contains("path")) cfg.output_path = get_string(o, "path", "output");
    if (o.contains("format")) cfg.output_format = get_string(o, "format", "output");
    if (cfg.output_format != "json" && cfg.output_format != "csv")
      throw ConfigError("output.format: expected json or csv");
  }
  if (doc.contains("family")) {
    const auto& f = doc.at("family");
    if (!f.is_array()) throw ConfigError("config.family: expected an array of model sections");
    for (std::size_t i = 0; i < f.size(); ++i)
      cfg.family.push_back(parse_model(f.at(i), "family[" + std::to_string(i) + "]"));
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  return parse_config(doc);
}

std::string inputs_digest(const RunConfig& cfg) {
  const std::string text = cfg.source.dump() + "#seed=" + std::to_string(cfg.seed);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace fockforge::cli
