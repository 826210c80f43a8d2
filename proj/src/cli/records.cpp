#include "fockforge/cli/records.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>

namespace fockforge::cli {

const char* to_string(Status s) {
  switch (s) {
    case Status::pass:
      return "pass";
    case Status::fail:
      return "fail";
    case Status::skipped:
      return "skipped";
  }
  return "unknown";
}

double ResultRecord::max_residual() const {
  double worst = 0.0;
  for (const auto& [name, value] : residuals) {
    if (std::isnan(value)) return value;
    worst = std::max(worst, value);
  }
  return worst;
}

void ResultRecord::judge() {
  status = Status::pass;
  for (const auto& [name, value] : residuals) {
    if (!std::isfinite(value) || value > tolerance) {
      status = Status::fail;
      if (reason.empty()) reason = name + " exceeds tolerance";
    }
  }
}

bool Report::all_passed() const {
  for (const auto& r : records)
    if (r.status == Status::fail) return false;
  return true;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

nlohmann::ordered_json number_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string to_json(const Report& report, const std::string& timestamp) {
  nlohmann::ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["command"] = report.command;
  doc["generated_at"] = timestamp;
  doc["inputs_digest"] = report.inputs_digest;
  doc["seed"] = report.seed;
  doc["all_passed"] = report.all_passed();
  auto records = nlohmann::ordered_json::array();
  for (const auto& r : report.records) {
    nlohmann::ordered_json rec;
    rec["name"] = r.name;
    rec["inputs_digest"] = r.inputs_digest;
    rec["status"] = to_string(r.status);
    auto residuals = nlohmann::ordered_json::object();
    for (const auto& [name, value] : r.residuals) residuals[name] = number_or_null(value);
    rec["residuals"] = residuals;
    rec["tolerance"] = r.tolerance;
    rec["wall_time_s"] = r.wall_time_s;
    if (!r.reason.empty()) rec["reason"] = r.reason;
    if (!r.details.empty()) rec["details"] = r.details;
    records.push_back(std::move(rec));
  }
  doc["records"] = records;
  if (report.table) {
    nlohmann::ordered_json table;
    table["columns"] = report.table->columns;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : report.table->rows) {
      auto out = nlohmann::ordered_json::array();
      for (double v : row) out.push_back(number_or_null(v));
      rows.push_back(std::move(out));
    }
    table["rows"] = rows;
    doc["table"] = table;
  }
  return doc.dump(2) + "\n";
}

std::string to_csv(const Report& report) {
  std::string out;
  if (report.table) {
    for (std::size_t i = 0; i < report.table->columns.size(); ++i) {
      if (i) out += ',';
      out += csv_field(report.table->columns[i]);
    }
    out += '\n';
    for (const auto& row : report.table->rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += ',';
        out += format_number(row[i]);
      }
      out += '\n';
    }
    return out;
  }
  out += "name,status,max_residual,tolerance,inputs_digest,reason\n";
  for (const auto& r : report.records) {
    out += csv_field(r.name) + ',' + to_string(r.status) + ',' + format_number(r.max_residual()) +
           ',' + format_number(r.tolerance) + ',' + r.inputs_digest + ',' + csv_field(r.reason) +
           '\n';
  }
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace fockforge::cli
