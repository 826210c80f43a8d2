#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace fockforge::cli {

inline constexpr int kSchemaVersion = 1;

enum class Status { pass, fail, skipped };

const char* to_string(Status s);

struct ResultRecord {
  std::string name;
  std::string inputs_digest;
  Status status = Status::pass;
  // Measured residuals in insertion order.
  std::vector<std::pair<std::string, double>> residuals;
  double tolerance = 0.0;
  double wall_time_s = 0.0;
  std::string reason;
  // Extra measured values (sigma, chi, ...), insertion ordered.
  nlohmann::ordered_json details = nlohmann::ordered_json::object();

  double max_residual() const;
  // pass iff every residual is finite and <= tolerance.
  void judge();
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct Report {
  std::string command;
  std::string inputs_digest;
  std::uint64_t seed = 0;
  std::vector<ResultRecord> records;
  std::optional<Table> table;

  bool all_passed() const;
};

// JSON document. The timestamp is the only field allowed to differ between
// runs of the same config and seed, together with the per-record wall times.
std::string to_json(const Report& report, const std::string& timestamp);

// CSV: the table when present, else one line per record. 17 significant
// digits, '.' decimal separator, no wall times or timestamps.
std::string to_csv(const Report& report);

// 17 significant digits, independent of locale.
std::string format_number(double value);

// ISO 8601 UTC.
std::string utc_timestamp();

}  // namespace fockforge::cli
