#include "fockforge/cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

#include "CLI11.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include "fockforge/cli/suites.hpp"
#include "fockforge/physics.hpp"

namespace fockforge::cli {
namespace {

bool uniform_fields(const LatticeConfig& m) {
  for (double x : m.vec_a)
    if (x != 0.0) return false;
  for (double x : m.phi)
    if (x != m.phi.front()) return false;
  return true;
}

Report start_report(const std::string& command, const RunConfig& cfg) {
  Report report;
  report.command = command;
  report.inputs_digest = inputs_digest(cfg);
  report.seed = cfg.seed;
  return report;
}

struct Options {
  std::string command;
  std::string config_path;
  std::string out_path;
  std::string format;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int jobs = 1;
};

}  // namespace

Report cmd_spectrum(const RunConfig& cfg) {
  if (!cfg.model) throw ConfigError("spectrum needs a model section");
  const auto& m = *cfg.model;
  Report report = start_report("spectrum", cfg);
  const RVector numeric = model_spectrum(m);
  Table table;
  ResultRecord rec;
  rec.name = "spectrum";
  rec.inputs_digest = report.inputs_digest;
  rec.tolerance = cfg.tolerances.at("spectrum");
  if (uniform_fields(m)) {
    const RVector exact = analytic_free_spectrum(m).array() - m.charge * m.phi.front();
    table.columns = {"index", "eigenvalue", "analytic", "deviation"};
    double worst = 0.0;
    for (Index i = 0; i < numeric.size(); ++i) {
      const double dev = std::abs(numeric(i) - exact(i));
      worst = std::max(worst, dev);
      table.rows.push_back({static_cast<double>(i), numeric(i), exact(i), dev});
    }
    rec.residuals = {{"max_deviation", worst}};
    rec.judge();
  } else {
    table.columns = {"index", "eigenvalue"};
    for (Index i = 0; i < numeric.size(); ++i)
      table.rows.push_back({static_cast<double>(i), numeric(i)});
    rec.status = Status::skipped;
    rec.reason = "no closed-form spectrum for non-uniform fields";
  }
  rec.details["model"] = to_string(m.model);
  rec.details["dimension"] = numeric.size();
  report.records.push_back(std::move(rec));
  report.table = std::move(table);
  return report;
}

Report cmd_verify(const RunConfig& cfg, int jobs) {
  Report report = start_report("verify", cfg);
  report.records = run_suites(cfg, jobs);
  return report;
}

Report cmd_free_energy(const RunConfig& cfg) {
  if (!cfg.thermo) throw ConfigError("free-energy needs a thermo section");
  if (!cfg.thermo->random_modes && !cfg.model)
    throw ConfigError("free-energy needs a model section or thermo.random_modes");
  Report report = start_report("free-energy", cfg);
  ResultRecord rec = run_suite("free_energy", cfg);
  Table table;
  table.columns = {"value_formula", "value_trace", "discrepancy", "truncation_bound",
                   "sector_tail_bound"};
  const auto value = [&](const char* key) {
    return rec.details.contains(key) ? rec.details[key].get<double>()
                                     : std::numeric_limits<double>::quiet_NaN();
  };
  if (rec.status != Status::fail || !rec.residuals.empty()) {
    const double discrepancy =
        rec.residuals.empty() ? std::numeric_limits<double>::quiet_NaN() : rec.residuals[0].second;
    table.rows.push_back({value("value_formula"), value("value_trace"), discrepancy,
                          value("truncation_bound"), value("sector_tail_bound")});
  }
  report.records.push_back(std::move(rec));
  report.table = std::move(table);
  return report;
}

Report cmd_equivalence(const RunConfig& cfg) {
  if (cfg.family.size() < 2) throw ConfigError("equivalence needs a family of at least 2 models");
  Report report = start_report("equivalence", cfg);
  const auto table = equivalence_sweep(cfg.family);
  const auto count = static_cast<Index>(cfg.family.size());

  double asymmetry = 0.0;
  double diagonal = 0.0;
  Index usable = 0;
  for (Index i = 0; i < count; ++i) {
    if (table.refused[static_cast<std::size_t>(i)]) continue;
    ++usable;
    diagonal = std::max(diagonal, std::abs(table.distance(i, i)));
    for (Index j = 0; j < count; ++j)
      if (!table.refused[static_cast<std::size_t>(j)])
        asymmetry = std::max(asymmetry, std::abs(table.distance(i, j) - table.distance(j, i)));
  }
  ResultRecord sym;
  sym.name = "symmetry";
  sym.inputs_digest = report.inputs_digest;
  sym.tolerance = cfg.tolerances.at("equivalence");
  if (usable == 0) {
    sym.status = Status::skipped;
    sym.reason = "every config was refused";
  } else {
    sym.residuals = {{"asymmetry", asymmetry}, {"diagonal", diagonal}};
    sym.judge();
  }
  report.records.push_back(std::move(sym));
  for (Index i = 0; i < count; ++i) {
    if (!table.refused[static_cast<std::size_t>(i)]) continue;
    ResultRecord r;
    r.name = "config_" + std::to_string(i);
    r.inputs_digest = report.inputs_digest;
    r.status = Status::skipped;
    r.reason = table.reasons[static_cast<std::size_t>(i)];
    report.records.push_back(std::move(r));
  }

  Table out;
  out.columns.push_back("config");
  for (Index j = 0; j < count; ++j) out.columns.push_back("config_" + std::to_string(j));
  for (Index i = 0; i < count; ++i) {
    std::vector<double> row{static_cast<double>(i)};
    for (Index j = 0; j < count; ++j) row.push_back(table.distance(i, j));
    out.rows.push_back(std::move(row));
  }
  report.table = std::move(out);
  return report;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"fockforge: second quantization and quasi-free representations on lattices"};
  app.require_subcommand(1);
  Options opt;
  for (const char* name : {"spectrum", "verify", "free-energy", "equivalence"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", opt.config_path, "JSON run configuration")->required();
    sub->add_option("--out", opt.out_path, "output file (default: config output.path or stdout)");
    sub->add_option("--format", opt.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", opt.seed, "seed for randomized checks (overrides config)");
    sub->add_option("--jobs", opt.jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->callback([&opt, sub] {
      opt.command = sub->get_name();
      opt.seed_given = sub->count("--seed") > 0;
    });
  }

  std::vector<std::string> argv_storage{"fockforge"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  }

  RunConfig cfg;
  try {
    nonzero_budget();
    cfg = load_config(opt.config_path);
    if (opt.seed_given) cfg.seed = opt.seed;
    if (!opt.format.empty()) cfg.output_format = opt.format;
    if (!opt.out_path.empty()) cfg.output_path = opt.out_path;
  } catch (const Error& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }

#ifdef _OPENMP
  omp_set_num_threads(opt.jobs);
#endif

  Report report;
  try {
    if (opt.command == "spectrum") {
      report = cmd_spectrum(cfg);
    } else if (opt.command == "verify") {
      report = cmd_verify(cfg, opt.jobs);
    } else if (opt.command == "free-energy") {
      report = cmd_free_energy(cfg);
    } else {
      report = cmd_equivalence(cfg);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitInternalError;
  }

  const std::string text =
      cfg.output_format == "csv" ? to_csv(report) : to_json(report, utc_timestamp());
  if (cfg.output_path.empty()) {
    out << text;
  } else {
    std::ofstream file(cfg.output_path, std::ios::binary | std::ios::trunc);
    file << text;
    if (!file) {
      err << "cannot write '" << cfg.output_path << "'\n";
      return kExitInternalError;
    }
  }
  return report.all_passed() ? kExitPass : kExitCheckFailed;
}

}  // namespace fockforge::cli
