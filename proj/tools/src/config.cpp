#include "vexint_cli/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace vexint::cli {

namespace {

using nlohmann::json;

const std::map<std::string, ExperimentKind>& kinds() {
  static const std::map<std::string, ExperimentKind> table{
      {"norms", ExperimentKind::norms},
      {"factorize-pp", ExperimentKind::factorize_pp},
      {"factorize-pq-infty", ExperimentKind::factorize_pq_infty},
      {"holder", ExperimentKind::holder},
      {"roundtrip", ExperimentKind::roundtrip},
      {"lebesgue-interp", ExperimentKind::lebesgue_interp},
      {"inter-rest", ExperimentKind::inter_rest},
      {"suite", ExperimentKind::suite},
  };
  return table;
}

const json& field(const json& obj, const std::string& path, const std::string& key) {
  if (!obj.contains(key)) throw ConfigError(path + "." + key, "required field is missing");
  return obj.at(key);
}

void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
}

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || a == key;
    if (!ok) throw ConfigError(path + "." + key, "unknown field");
  }
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw ConfigError(path, "expected a finite number");
  return x;
}

double positive(const json& j, const std::string& path) {
  const double x = number(j, path);
  if (!(x > 0.0)) throw ConfigError(path, "expected a positive number");
  return x;
}

std::int64_t integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<std::int64_t>();
}

std::uint64_t seed_value(const json& j, const std::string& path) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) throw ConfigError(path, "expected a non-negative integer seed");
  if (j.is_number_integer() && !j.is_number_unsigned() && j.get<std::int64_t>() < 0)
    throw ConfigError(path, "expected a non-negative integer seed");
  return j.get<std::uint64_t>();
}

ExponentRecipe parse_recipe(const json& j, const std::string& path) {
  expect_object(j, path);
  const auto& kind = field(j, path, "kind");
  if (!kind.is_string()) throw ConfigError(path + ".kind", "expected a string");
  const auto k = kind.get<std::string>();
  if (k == "constant") {
    reject_unknown(j, path, {"kind", "value"});
    return ConstantRecipe{number(field(j, path, "value"), path + ".value")};
  }
  if (k == "sine") {
    reject_unknown(j, path, {"kind", "base", "amplitude", "frequency"});
    return SineRecipe{number(field(j, path, "base"), path + ".base"),
                      number(field(j, path, "amplitude"), path + ".amplitude"),
                      number(field(j, path, "frequency"), path + ".frequency")};
  }
  if (k == "plateau-ramp") {
    reject_unknown(j, path, {"kind", "left", "right", "width"});
    return PlateauRampRecipe{number(field(j, path, "left"), path + ".left"),
                             number(field(j, path, "right"), path + ".right"),
                             positive(field(j, path, "width"), path + ".width")};
  }
  throw ConfigError(path + ".kind", "unknown recipe '" + k + "' (constant, sine, plateau-ramp)");
}

bool power_of_two(std::int64_t x) { return x > 0 && (x & (x - 1)) == 0; }

}  // namespace

std::string_view to_string(ExperimentKind kind) noexcept {
  for (const auto& [name, k] : kinds())
    if (k == kind) return name;
  return "unknown";
}

ExponentRecipe ExperimentConfig::recipe(const std::string& name, ExponentRecipe fallback) const {
  auto it = exponents.find(name);
  return it == exponents.end() ? fallback : it->second;
}

json recipe_json(const ExponentRecipe& recipe) {
  return std::visit(
      [](const auto& r) -> json {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, ConstantRecipe>) {
          return {{"kind", "constant"}, {"value", r.value}};
        } else if constexpr (std::is_same_v<R, SineRecipe>) {
          return {{"kind", "sine"}, {"base", r.base}, {"amplitude", r.amplitude}, {"frequency", r.frequency}};
        } else {
          return {{"kind", "plateau-ramp"}, {"left", r.left}, {"right", r.right}, {"width", r.width}};
        }
      },
      recipe);
}

ExperimentConfig parse_config(const json& doc) {
  const std::string root = "$";
  expect_object(doc, root);
  reject_unknown(doc, root,
                 {"experiment", "seed", "grid", "levels", "theta", "exponents", "corpus", "tolerances", "corrupt",
                  "output"});
  ExperimentConfig cfg;
  cfg.source = doc;

  const auto& kind = field(doc, root, "experiment");
  if (!kind.is_string() || !kinds().count(kind.get<std::string>()))
    throw ConfigError("$.experiment", "expected one of norms, factorize-pp, factorize-pq-infty, holder, roundtrip, "
                                      "lebesgue-interp, inter-rest, suite");
  cfg.kind = kinds().at(kind.get<std::string>());
  cfg.corpus.seed = seed_value(field(doc, root, "seed"), "$.seed");

  if (doc.contains("grid")) {
    const auto& g = doc.at("grid");
    expect_object(g, "$.grid");
    reject_unknown(g, "$.grid", {"n", "L", "N"});
    if (g.contains("n")) cfg.grid.n = static_cast<int>(integer(g.at("n"), "$.grid.n"));
    if (g.contains("L")) cfg.grid.L = positive(g.at("L"), "$.grid.L");
    if (g.contains("N")) cfg.grid.N = static_cast<int>(integer(g.at("N"), "$.grid.N"));
    if (cfg.grid.n != 1 && cfg.grid.n != 2) throw ConfigError("$.grid.n", "dimension must be 1 or 2");
    if (!power_of_two(cfg.grid.N) || cfg.grid.N < 16) throw ConfigError("$.grid.N", "must be a power of two >= 16");
  }
  if (doc.contains("levels")) {
    const auto v = integer(doc.at("levels"), "$.levels");
    if (v < 0) throw ConfigError("$.levels", "must be non-negative");
    cfg.levels = static_cast<int>(v);
  }
  if (doc.contains("theta")) {
    const auto& t = doc.at("theta");
    cfg.thetas.clear();
    if (t.is_number()) {
      cfg.thetas.push_back(number(t, "$.theta"));
    } else if (t.is_array() && !t.empty()) {
      for (std::size_t i = 0; i < t.size(); ++i) cfg.thetas.push_back(number(t[i], "$.theta[" + std::to_string(i) + "]"));
    } else {
      throw ConfigError("$.theta", "expected a number or a non-empty array of numbers");
    }
    for (std::size_t i = 0; i < cfg.thetas.size(); ++i)
      if (!(cfg.thetas[i] > 0.0 && cfg.thetas[i] < 1.0))
        throw ConfigError("$.theta[" + std::to_string(i) + "]", "theta must lie in (0, 1)");
  }
  if (doc.contains("exponents")) {
    const auto& e = doc.at("exponents");
    expect_object(e, "$.exponents");
    reject_unknown(e, "$.exponents", {"p0", "p1", "q0", "q1", "alpha0", "alpha1"});
    for (const auto& [name, value] : e.items()) cfg.exponents.emplace(name, parse_recipe(value, "$.exponents." + name));
  }
  if (doc.contains("corpus")) {
    const auto& c = doc.at("corpus");
    expect_object(c, "$.corpus");
    reject_unknown(c, "$.corpus", {"count", "size", "distribution"});
    if (c.contains("count")) {
      const auto v = integer(c.at("count"), "$.corpus.count");
      if (v < 1) throw ConfigError("$.corpus.count", "must be at least 1");
      cfg.corpus.count = static_cast<std::size_t>(v);
    }
    if (c.contains("size")) {
      const auto v = integer(c.at("size"), "$.corpus.size");
      if (v < 1) throw ConfigError("$.corpus.size", "must be at least 1");
      cfg.corpus.size = static_cast<std::size_t>(v);
    }
    if (c.contains("distribution")) {
      const auto& d = c.at("distribution");
      if (!d.is_string() || d.get<std::string>() != "log-uniform")
        throw ConfigError("$.corpus.distribution", "only 'log-uniform' is supported");
    }
  }
  if (doc.contains("tolerances")) {
    const auto& t = doc.at("tolerances");
    expect_object(t, "$.tolerances");
    reject_unknown(t, "$.tolerances", {"reconstruction", "holder", "roundtrip", "modular", "interp", "bracket"});
    auto read = [&](const char* key, double& slot) {
      if (t.contains(key)) slot = positive(t.at(key), std::string("$.tolerances.") + key);
    };
    read("reconstruction", cfg.tolerances.reconstruction);
    read("holder", cfg.tolerances.holder);
    read("roundtrip", cfg.tolerances.roundtrip);
    read("modular", cfg.tolerances.modular);
    read("interp", cfg.tolerances.interp);
    read("bracket", cfg.tolerances.bracket);
    if (cfg.tolerances.bracket < 1.0) throw ConfigError("$.tolerances.bracket", "must be at least 1");
  }
  if (doc.contains("corrupt")) {
    if (!doc.at("corrupt").is_boolean()) throw ConfigError("$.corrupt", "expected a boolean");
    cfg.corrupt = doc.at("corrupt").get<bool>();
  }
  if (doc.contains("output")) {
    const auto& o = doc.at("output");
    expect_object(o, "$.output");
    reject_unknown(o, "$.output", {"dir", "stem"});
    if (o.contains("dir")) {
      if (!o.at("dir").is_string()) throw ConfigError("$.output.dir", "expected a string");
      cfg.output_dir = o.at("dir").get<std::string>();
    }
    if (o.contains("stem")) {
      if (!o.at("stem").is_string()) throw ConfigError("$.output.stem", "expected a string");
      cfg.output_stem = o.at("stem").get<std::string>();
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open config file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ConfigError(path.string() + ":" + std::to_string(line) + ":" + std::to_string(column), "invalid JSON");
  }
  return parse_config(doc);
}

const json& config_schema() {
  static const json schema = json::parse(R"({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "vexint experiment config",
  "type": "object",
  "required": ["experiment", "seed"],
  "additionalProperties": false,
  "definitions": {
    "recipe": {
      "oneOf": [
        {"type": "object", "additionalProperties": false, "required": ["kind", "value"],
         "properties": {"kind": {"const": "constant"}, "value": {"type": "number"}}},
        {"type": "object", "additionalProperties": false, "required": ["kind", "base", "amplitude", "frequency"],
         "properties": {"kind": {"const": "sine"}, "base": {"type": "number"}, "amplitude": {"type": "number"},
                        "frequency": {"type": "number"}}},
        {"type": "object", "additionalProperties": false, "required": ["kind", "left", "right", "width"],
         "properties": {"kind": {"const": "plateau-ramp"}, "left": {"type": "number"}, "right": {"type": "number"},
                        "width": {"type": "number", "exclusiveMinimum": 0}}}
      ]
    }
  },
  "properties": {
    "experiment": {"enum": ["norms", "factorize-pp", "factorize-pq-infty", "holder", "roundtrip",
                            "lebesgue-interp", "inter-rest", "suite"]},
    "seed": {"type": "integer", "minimum": 0},
    "grid": {"type": "object", "additionalProperties": false,
             "properties": {"n": {"enum": [1, 2]}, "L": {"type": "number", "exclusiveMinimum": 0},
                            "N": {"type": "integer", "minimum": 16}}},
    "levels": {"type": "integer", "minimum": 0},
    "theta": {"oneOf": [{"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
                        {"type": "array", "minItems": 1,
                         "items": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1}}]},
    "exponents": {"type": "object", "additionalProperties": false,
                  "properties": {"p0": {"$ref": "#/definitions/recipe"}, "p1": {"$ref": "#/definitions/recipe"},
                                 "q0": {"$ref": "#/definitions/recipe"}, "q1": {"$ref": "#/definitions/recipe"},
                                 "alpha0": {"$ref": "#/definitions/recipe"}, "alpha1": {"$ref": "#/definitions/recipe"}}},
    "corpus": {"type": "object", "additionalProperties": false,
               "properties": {"count": {"type": "integer", "minimum": 1}, "size": {"type": "integer", "minimum": 1},
                              "distribution": {"const": "log-uniform"}}},
    "tolerances": {"type": "object", "additionalProperties": false,
                   "properties": {"reconstruction": {"type": "number", "exclusiveMinimum": 0},
                                  "holder": {"type": "number", "exclusiveMinimum": 0},
                                  "roundtrip": {"type": "number", "exclusiveMinimum": 0},
                                  "modular": {"type": "number", "exclusiveMinimum": 0},
                                  "interp": {"type": "number", "exclusiveMinimum": 0},
                                  "bracket": {"type": "number", "minimum": 1}}},
    "corrupt": {"type": "boolean"},
    "output": {"type": "object", "additionalProperties": false,
               "properties": {"dir": {"type": "string"}, "stem": {"type": "string"}}}
  }
})");
  return schema;
}

}  // namespace vexint::cli
