#include "vexint_cli/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "vexint/version.hpp"

namespace vexint::cli {

namespace {

std::string number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Row make_row(std::string id, std::string_view inputs, double value, double bound, double margin) {
  Row r;
  r.id = std::move(id);
  r.digest = digest(inputs);
  r.value = value;
  r.bound = bound;
  r.margin = margin;
  r.pass = std::isfinite(value) && !std::isnan(margin) && margin >= 0.0;
  return r;
}

}  // namespace

std::string digest(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Row Row::upper(std::string id, std::string_view inputs, double value, double bound) {
  return make_row(std::move(id), inputs, value, bound, bound - value);
}

Row Row::lower(std::string id, std::string_view inputs, double value, double bound) {
  return make_row(std::move(id), inputs, value, bound, value - bound);
}

bool Report::passed() const {
  for (const auto& r : rows)
    if (!r.pass) return false;
  return true;
}

std::vector<std::string> Report::failures() const {
  std::vector<std::string> out;
  for (const auto& r : rows)
    if (!r.pass) out.push_back(r.id);
  return out;
}

std::string to_csv(const Report& report) {
  std::ostringstream out;
  out << "id,digest,value,bound,margin,pass\n";
  for (const auto& r : report.rows) {
    out << r.id << ',' << r.digest << ',' << number(r.value) << ',' << number(r.bound) << ',' << number(r.margin) << ','
        << (r.pass ? "true" : "false") << '\n';
  }
  return out.str();
}

nlohmann::json to_json(const Report& report) {
  nlohmann::json j;
  j["experiment"] = report.experiment;
  j["version"] = std::string(version);
  j["config"] = report.config;
  j["summary"] = report.summary;
  j["rows"] = report.rows.size();
  j["failed"] = report.failures();
  j["passed"] = report.passed();
  return j;
}

void write_report(const Report& report, const std::filesystem::path& dir, const std::string& stem) {
  std::filesystem::create_directories(dir);
  std::ofstream csv(dir / (stem + ".csv"));
  std::ofstream json(dir / (stem + ".json"));
  if (!csv || !json) throw std::runtime_error("cannot write report files under " + dir.string());
  csv << to_csv(report);
  json << to_json(report).dump(2) << '\n';
}

}  // namespace vexint::cli
