#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "vexint/exponents.hpp"

namespace vexint::cli {

/// Schema violation; `where` is a JSON path or a line/column position.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

enum class ExperimentKind { norms, factorize_pp, factorize_pq_infty, holder, roundtrip, lebesgue_interp, inter_rest, suite };

std::string_view to_string(ExperimentKind kind) noexcept;

struct GridSpec {
  int n = 1;
  double L = 4.0;
  int N = 1024;
};

struct CorpusSpec {
  std::size_t count = 20;
  /// Coefficients per sequence, or terms per band-limited function.
  std::size_t size = 100;
  std::string distribution = "log-uniform";
  std::uint64_t seed = 0;
};

struct Tolerances {
  double reconstruction = 1e-9;
  double holder = 1e-9;
  double roundtrip = 1e-6;
  double modular = 1e-9;
  double interp = 1e-6;
  /// Allowed ratio bracket [1/C, C] for equivalence checks.
  double bracket = 8.0;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::norms;
  GridSpec grid;
  std::optional<int> levels;
  std::vector<double> thetas{0.5};
  std::map<std::string, ExponentRecipe> exponents;
  CorpusSpec corpus;
  Tolerances tolerances;
  bool corrupt = false;
  std::filesystem::path output_dir = "vexint-out";
  std::string output_stem = "report";
  nlohmann::json source;

  bool has(const std::string& name) const { return exponents.count(name) != 0; }
  /// Recipe by name, or the fallback when absent.
  ExponentRecipe recipe(const std::string& name, ExponentRecipe fallback) const;
};

ExperimentConfig parse_config(const nlohmann::json& doc);
/// Reads and parses a file; syntax errors report line and column.
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json recipe_json(const ExponentRecipe& recipe);

/// Published JSON Schema of the config format.
const nlohmann::json& config_schema();

}  // namespace vexint::cli
