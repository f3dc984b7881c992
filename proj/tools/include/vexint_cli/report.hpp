#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace vexint::cli {

/// FNV-1a 64 of a text, as 16 hex digits.
std::string digest(std::string_view text);

/// One checked quantity. pass iff margin >= 0, with margin = bound - value for upper bounds
/// and value - bound for lower bounds.
struct Row {
  std::string id;
  std::string digest;
  double value = 0.0;
  double bound = 0.0;
  double margin = 0.0;
  bool pass = false;

  static Row upper(std::string id, std::string_view inputs, double value, double bound);
  static Row lower(std::string id, std::string_view inputs, double value, double bound);
};

struct Report {
  std::string experiment;
  std::vector<Row> rows;
  nlohmann::json summary = nlohmann::json::object();
  nlohmann::json config = nlohmann::json::object();

  bool passed() const;
  void add(Row row) { rows.push_back(std::move(row)); }
  std::vector<std::string> failures() const;
};

std::string to_csv(const Report& report);
nlohmann::json to_json(const Report& report);
/// Writes <stem>.csv and <stem>.json under dir, creating it if needed.
void write_report(const Report& report, const std::filesystem::path& dir, const std::string& stem);

}  // namespace vexint::cli
