#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <locale>
#include <sstream>

#include "json.hpp"

#include "fockforge/cli/commands.hpp"
#include "fockforge/cli/config.hpp"
#include "fockforge/cli/records.hpp"

using namespace fockforge;
using nlohmann::json;

namespace {

namespace fs = std::filesystem;

std::string fixture(const std::string& name) { return std::string(FOCKFORGE_FIXTURE_DIR) + "/" + name; }

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

json strip_volatile(json doc) {
  doc.erase("generated_at");
  for (auto& rec : doc["records"]) rec.erase("wall_time_s");
  return doc;
}

struct CommaDecimal : std::numpunct<char> {
  char do_decimal_point() const override { return ','; }
  char do_thousands_sep() const override { return '.'; }
  std::string do_grouping() const override { return "\3"; }
};

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "fockforge_test_cli";
  fs::create_directories(dir);
  const auto path = dir / name;
  fs::remove(path);
  return path;
}

}  // namespace

TEST_CASE("exit codes") {
  CHECK(invoke({"verify", "--config", fixture("verify_pass.json")}).code == cli::kExitPass);
  CHECK(invoke({"verify", "--config", fixture("verify_boson.json")}).code == cli::kExitPass);
  CHECK(invoke({"free-energy", "--config", fixture("free_energy_divergent.json")}).code ==
        cli::kExitCheckFailed);
  CHECK(invoke({"verify", "--config", fixture("malformed.json")}).code == cli::kExitConfigError);
  CHECK(invoke({"verify", "--config", fixture("unknown_key.json")}).code == cli::kExitConfigError);
  CHECK(invoke({"verify", "--config", fixture("missing.json")}).code == cli::kExitConfigError);
  CHECK(invoke({"verify"}).code == cli::kExitConfigError);
  CHECK(invoke({"explode", "--config", fixture("verify_pass.json")}).code == cli::kExitConfigError);
  CHECK(invoke({"verify", "--config", fixture("verify_pass.json"), "--jobs", "0"}).code ==
        cli::kExitConfigError);
  CHECK(invoke({"verify", "--config", fixture("verify_pass.json"), "--format", "xml"}).code ==
        cli::kExitConfigError);
  // Spectrum needs a model, equivalence a family.
  CHECK(invoke({"spectrum", "--config", fixture("equivalence.json")}).code == cli::kExitConfigError);
  CHECK(invoke({"equivalence", "--config", fixture("spectrum.json")}).code == cli::kExitConfigError);
}

TEST_CASE("budget environment") {
  setenv("FOCKFORGE_BUDGET", "16", 1);
  const auto exceeded = invoke({"verify", "--config", fixture("budget.json")});
  CHECK(exceeded.code == cli::kExitInternalError);
  CHECK(exceeded.out.empty());
  setenv("FOCKFORGE_BUDGET", "-4", 1);
  CHECK(invoke({"verify", "--config", fixture("budget.json")}).code == cli::kExitConfigError);
  unsetenv("FOCKFORGE_BUDGET");
  CHECK(invoke({"verify", "--config", fixture("budget.json")}).code == cli::kExitPass);
}

TEST_CASE("config errors write no output") {
  const auto path = scratch("never.json");
  const auto r = invoke({"verify", "--config", fixture("unknown_key.json"), "--out", path.string()});
  CHECK(r.code == cli::kExitConfigError);
  CHECK_FALSE(fs::exists(path));
  CHECK(r.out.empty());
  CHECK(r.err.find("colour") != std::string::npos);
}

TEST_CASE("json report layout") {
  const auto path = scratch("verify.json");
  REQUIRE(invoke({"verify", "--config", fixture("verify_pass.json"), "--out", path.string()}).code ==
          cli::kExitPass);
  std::ifstream in(path);
  const json doc = json::parse(in);
  CHECK(doc.at("schema_version") == cli::kSchemaVersion);
  CHECK(doc.at("command") == "verify");
  CHECK(doc.at("seed") == 7);
  CHECK(doc.at("all_passed") == true);
  CHECK(doc.at("inputs_digest").get<std::string>().size() == 16);
  CHECK(doc.at("generated_at").get<std::string>().back() == 'Z');
  REQUIRE(doc.at("records").size() == 6);
  const auto& first = doc.at("records").at(0);
  CHECK(first.at("name") == "car");
  for (const char* key : {"inputs_digest", "status", "residuals", "tolerance", "wall_time_s"})
    CHECK(first.contains(key));
  CHECK(first.at("inputs_digest") == doc.at("inputs_digest"));
}

TEST_CASE("output is deterministic apart from timing") {
  const std::vector<std::string> args{"verify", "--config", fixture("verify_pass.json")};
  const auto a = invoke(args);
  const auto b = invoke(args);
  CHECK(strip_volatile(json::parse(a.out)) == strip_volatile(json::parse(b.out)));
  auto threaded = args;
  threaded.insert(threaded.end(), {"--jobs", "3"});
  CHECK(strip_volatile(json::parse(invoke(threaded).out)) == strip_volatile(json::parse(a.out)));

  const std::vector<std::string> csv{"verify", "--config", fixture("verify_pass.json"), "--format", "csv"};
  CHECK(invoke(csv).out == invoke(csv).out);
}

TEST_CASE("seed override") {
  const auto base = json::parse(invoke({"verify", "--config", fixture("verify_pass.json")}).out);
  const auto other =
      json::parse(invoke({"verify", "--config", fixture("verify_pass.json"), "--seed", "8"}).out);
  CHECK(other.at("seed") == 8);
  CHECK(other.at("inputs_digest") != base.at("inputs_digest"));
  CHECK(other.at("records").at(0).at("residuals") != base.at("records").at(0).at("residuals"));
}

TEST_CASE("csv output") {
  const auto r = invoke({"spectrum", "--config", fixture("spectrum.json"), "--format", "csv"});
  REQUIRE(r.code == cli::kExitPass);
  std::istringstream lines(r.out);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "index,eigenvalue,analytic,deviation");
  CHECK(r.out.find("0.75000000000000022") != std::string::npos);

  CHECK(cli::format_number(0.1) == "0.10000000000000001");
  CHECK(cli::format_number(1.0) == "1");
  CHECK(cli::format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");

  // A comma-decimal global locale must not leak into the output.
  const auto saved = std::locale::global(std::locale(std::locale::classic(), new CommaDecimal));
  CHECK(cli::format_number(0.5) == "0.5");
  CHECK(invoke({"spectrum", "--config", fixture("spectrum.json"), "--format", "csv"}).out == r.out);
  std::locale::global(saved);
}

TEST_CASE("free energy and equivalence reports") {
  const auto fe = json::parse(invoke({"free-energy", "--config", fixture("free_energy.json")}).out);
  CHECK(fe.at("all_passed") == true);
  CHECK(fe.at("table").at("columns").at(0) == "value_formula");

  const auto div = json::parse(invoke({"free-energy", "--config", fixture("free_energy_divergent.json")}).out);
  CHECK(div.at("records").at(0).at("status") == "fail");

  const auto eq = invoke({"equivalence", "--config", fixture("equivalence.json")});
  CHECK(eq.code == cli::kExitPass);
  const auto doc = json::parse(eq.out);
  CHECK(doc.at("records").at(0).at("name") == "symmetry");
  CHECK(doc.at("records").at(1).at("status") == "skipped");
  CHECK(doc.at("records").at(1).at("name") == "config_2");
  // Refused distances are null in JSON.
  CHECK(doc.at("table").at("rows").at(0).at(3).is_null());
}

TEST_CASE("empty suite") {
  const auto path = scratch("empty_suite.json");
  std::ofstream(path) << R"({"model": {"model": "dirac1d", "sites": 2}, "suite": []})";
  const auto r = invoke({"verify", "--config", path.string()});
  CHECK(r.code == cli::kExitPass);
  CHECK(json::parse(r.out).at("records").empty());
}

TEST_CASE("config parsing") {
  const auto cfg = cli::parse_config(json::parse(R"({"model": {"model": "schrodinger1d", "sites": 3}})"));
  CHECK(cfg.model->mass == 1.0);
  CHECK(cfg.model->phi.size() == 3);
  CHECK(cfg.tolerances.at("car") == 1e-12);
  CHECK(cfg.suite.empty());

  CHECK_THROWS_AS(cli::parse_config(json::parse(R"({"model": {"model": "dirac1d", "sites": 2, "Mass": 1}})")),
                  cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_config(json::parse(R"({"suite": ["car", "nope"]})")), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_config(json::parse(R"({"tolerances": {"car": -1}})")), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_config(json::parse(R"({"thermo": {"mu": 1}})")), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_config(json::parse(R"({"model": {"model": "dirac1d", "sites": 2, "phi": [1]}})")),
                  cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_config(json::parse(R"({"boson_cap": 0})")), cli::ConfigError);
}
