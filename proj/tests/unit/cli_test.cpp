#include <gtest/gtest.h>

#include <cmath>

#include "vexint_cli/config.hpp"
#include "vexint_cli/experiments.hpp"
#include "vexint_cli/report.hpp"

using namespace vexint;
using namespace vexint::cli;
using nlohmann::json;

namespace {

json minimal() {
  return json{{"experiment", "factorize-pp"},
              {"seed", 11},
              {"grid", {{"n", 1}, {"L", 4}, {"N", 256}}},
              {"levels", 3},
              {"theta", {0.25, 0.5}},
              {"exponents",
               {{"p0", {{"kind", "constant"}, {"value", 2.5}}},
                {"p1", {{"kind", "constant"}, {"value", 2.5}}},
                {"alpha0", {{"kind", "constant"}, {"value", 0.5}}},
                {"alpha1", {{"kind", "constant"}, {"value", 0.5}}}}},
              {"corpus", {{"count", 3}, {"size", 30}}}};
}

std::string error_path(const json& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.where();
  }
  return "";
}

}  // namespace

TEST(Config, ParsesAMinimalDocument) {
  const auto cfg = parse_config(minimal());
  EXPECT_EQ(cfg.kind, ExperimentKind::factorize_pp);
  EXPECT_EQ(cfg.corpus.seed, 11u);
  EXPECT_EQ(cfg.grid.N, 256);
  ASSERT_TRUE(cfg.levels.has_value());
  EXPECT_EQ(*cfg.levels, 3);
  EXPECT_EQ(cfg.thetas, (std::vector<double>{0.25, 0.5}));
  EXPECT_TRUE(cfg.has("alpha1"));
  EXPECT_FALSE(cfg.has("q0"));
  EXPECT_EQ(cfg.corpus.count, 3u);
}

TEST(Config, ReportsThePathOfTheOffendingField) {
  auto doc = minimal();
  doc.erase("seed");
  EXPECT_EQ(error_path(doc), "$.seed");

  doc = minimal();
  doc["colour"] = "red";
  EXPECT_EQ(error_path(doc), "$.colour");

  doc = minimal();
  doc["grid"]["N"] = 1000;
  EXPECT_EQ(error_path(doc), "$.grid.N");

  doc = minimal();
  doc["theta"] = {0.5, 1.0};
  EXPECT_EQ(error_path(doc), "$.theta[1]");

  doc = minimal();
  doc["exponents"]["p0"] = {{"kind", "spiral"}};
  EXPECT_EQ(error_path(doc), "$.exponents.p0.kind");

  doc = minimal();
  doc["seed"] = -3;
  EXPECT_EQ(error_path(doc), "$.seed");
}

TEST(Config, RecipesRoundTripThroughJson) {
  auto doc = minimal();
  doc["exponents"]["p1"] = {{"kind", "plateau-ramp"}, {"left", 1.5}, {"right", 3.0}, {"width", 0.75}};
  doc["exponents"]["q0"] = {{"kind", "sine"}, {"base", 2.0}, {"amplitude", 0.25}, {"frequency", 2.0}};
  const auto cfg = parse_config(doc);
  const auto& ramp = std::get<PlateauRampRecipe>(cfg.exponents.at("p1"));
  EXPECT_EQ(ramp.width, 0.75);
  EXPECT_EQ(recipe_json(cfg.exponents.at("p1")), doc["exponents"]["p1"]);
  EXPECT_EQ(recipe_json(cfg.exponents.at("q0")), doc["exponents"]["q0"]);
}

TEST(Config, SchemaNamesTheRequiredFields) {
  const auto& schema = config_schema();
  const auto& required = schema.at("required");
  EXPECT_NE(std::find(required.begin(), required.end(), "seed"), required.end());
  EXPECT_NE(std::find(required.begin(), required.end(), "experiment"), required.end());
}

TEST(Report, RowMarginsAndPass) {
  const auto u = Row::upper("a", "x", 0.25, 1.0);
  EXPECT_EQ(u.margin, 0.75);
  EXPECT_TRUE(u.pass);
  EXPECT_FALSE(Row::upper("b", "x", 2.0, 1.0).pass);
  EXPECT_TRUE(Row::upper("c", "x", 1.0, 1.0).pass);
  const auto l = Row::lower("d", "x", 0.25, 1.0);
  EXPECT_EQ(l.margin, -0.75);
  EXPECT_FALSE(l.pass);
  EXPECT_FALSE(Row::upper("e", "x", std::nan(""), 1.0).pass);
  EXPECT_EQ(u.digest, Row::upper("f", "x", 9.0, 9.0).digest);
  EXPECT_NE(u.digest, Row::upper("g", "y", 0.25, 1.0).digest);

  Report r;
  r.add(u);
  EXPECT_TRUE(r.passed());
  r.add(l);
  EXPECT_FALSE(r.passed());
  EXPECT_EQ(r.failures().size(), 1u);
}

TEST(Experiments, DegenerateFactorizationHasRatioOne) {
  const auto report = run_experiment(parse_config(minimal()));
  EXPECT_TRUE(report.passed());
  EXPECT_EQ(report.rows.size(), 2u * 3u * 5u);
  const auto bracket = report.summary.at("ratio_bracket");
  EXPECT_NEAR(bracket[0].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(bracket[1].get<double>(), 1.0, 1e-12);
}

TEST(Experiments, NormKindsParse) {
  EXPECT_EQ(parse_norm_kind("lux"), NormKind::lux);
  EXPECT_EQ(parse_norm_kind("Finfty"), NormKind::Finfty);
  EXPECT_ANY_THROW(parse_norm_kind("sobolev"));
}
