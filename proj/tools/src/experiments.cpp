#include "vexint_cli/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "vexint/calderon.hpp"
#include "vexint/corpus.hpp"
#include "vexint/error.hpp"
#include "vexint/interp.hpp"
#include "vexint/lebesgue.hpp"
#include "vexint/lpf.hpp"
#include "vexint/parallel.hpp"

namespace vexint::cli {

namespace {

using nlohmann::json;

std::string fmt(const char* pattern, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, x);
  return buf;
}

std::string item_id(const std::string& prefix, std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04zu", i);
  return prefix + "/" + buf;
}

std::string theta_tag(double theta) { return fmt("t%.6g", theta); }

std::string field_records(const GridFunction& f) {
  std::string out;
  for (const auto& z : f.values()) out += fmt("%.17g ", z.real()) + fmt("%.17g\n", z.imag());
  return out;
}

void require_constant(const ExponentField& field, const char* path) {
  if (!field.is_constant()) throw ConfigError(path, "must be a constant recipe for this experiment");
}

/// Per-item rows computed in parallel, appended in item order.
template <class Fn>
void collect(Report& report, std::size_t count, Fn&& fn) {
  std::vector<std::vector<Row>> slots(count);
  parallel_for(count, [&](std::size_t i) { slots[i] = fn(i); });
  for (auto& rows : slots)
    for (auto& row : rows) report.add(std::move(row));
}

std::vector<DyadicCoefficients> coefficient_corpus(const ExperimentConfig& config, const Setup& setup) {
  Rng rng(config.corpus.seed);
  std::vector<DyadicCoefficients> corpus;
  for (std::size_t i = 0; i < config.corpus.count; ++i)
    corpus.push_back(random_coefficients(setup.grid, setup.levels, config.corpus.size, rng));
  return corpus;
}

double band_of(const Setup& setup) { return std::ldexp(1.0, setup.levels); }

std::vector<GridFunction> function_corpus(const ExperimentConfig& config, const Setup& setup) {
  Rng rng(config.corpus.seed);
  std::vector<GridFunction> corpus;
  for (std::size_t i = 0; i < config.corpus.count; ++i)
    corpus.push_back(random_band_limited(setup.grid, band_of(setup), config.corpus.size, rng));
  return corpus;
}

Report run_norms(const ExperimentConfig& config) {
  const Setup s = make_setup(config);
  const auto corpus = coefficient_corpus(config, s);
  Report report;
  const double tol = config.tolerances.modular;
  collect(report, corpus.size(), [&](std::size_t i) {
    const auto& lambda = corpus[i];
    const std::string inputs = coefficient_records(lambda);
    const std::string id = item_id("norms", i);
    std::vector<Row> rows;
    const double norm = f_norm(lambda, s.alpha0, s.p0, s.q0).value;
    const double doubled = f_norm(lambda.scaled(2.0), s.alpha0, s.p0, s.q0).value;
    rows.push_back(Row::upper(id + "/homogeneity", inputs, std::abs(doubled - 2.0 * norm) / (2.0 * norm), tol));
    const auto fields = level_fields(lambda, s.alpha0);
    const auto envelope = lq_envelope(std::span<const std::vector<double>>(fields), s.q0);
    const double bisected = luxemburg_bisection(envelope, s.p0).value;
    rows.push_back(Row::upper(id + "/bisection", inputs, std::abs(bisected - norm) / norm, tol));
    const auto truncations = support_truncations(lambda, 8);
    const auto lattice = lattice_property_check(truncations, lambda, s.alpha0, s.p0, s.q0);
    rows.push_back(Row::upper(id + "/lattice", inputs, lattice.monotone ? lattice.final_gap : 1.0, tol));
    const double bound_ratio = coefficient_bound_check(lambda, s.alpha0, s.p0, s.q0);
    rows.push_back(Row::upper(id + "/coefficient-bound", inputs, bound_ratio, config.tolerances.bracket));
    return rows;
  });
  return report;
}

Report run_factorize(const ExperimentConfig& config, Construction construction) {
  const Setup s = make_setup(config);
  const auto corpus = coefficient_corpus(config, s);
  const bool endpoint = construction == Construction::pq_infty && !config.has("p1");
  if (construction == Construction::pq_infty) {
    require_constant(s.q0, "$.exponents.q0");
    require_constant(s.q1, "$.exponents.q1");
  }
  const std::string name(to_string(config.kind));
  Report report;
  double worst0 = 0.0;
  double worst1 = 0.0;
  double min_ratio = std::numeric_limits<double>::infinity();
  double max_ratio = 0.0;
  for (double theta : config.thetas) {
    const FactorizationParams params =
        endpoint ? make_endpoint_params(theta, s.p0, s.q0.min(), s.q1.min(), s.alpha0, s.alpha1)
        : construction == Construction::pp ? make_pp_params(theta, s.p0, s.p1, s.alpha0, s.alpha1)
                                           : make_params(theta, s.p0, s.p1, s.q0, s.q1, s.alpha0, s.alpha1);
    const CaseTag tag = case_classifier(params);
    if (construction == Construction::pq_infty && tag == CaseTag::unsupported)
      fail(ErrorKind::unsupported_parameters, "gamma vanishes on part of the grid");
    report.summary["case"][theta_tag(theta)] = std::string(to_string(tag));
    std::vector<double> n0(corpus.size());
    std::vector<double> n1(corpus.size());
    std::vector<double> ratios(corpus.size());
    collect(report, corpus.size(), [&](std::size_t i) {
      const auto& lambda = corpus[i];
      const std::string inputs = coefficient_records(lambda) + theta_tag(theta);
      const std::string id = item_id(name + "/" + theta_tag(theta), i);
      std::vector<Row> rows;
      const auto result = factorize(lambda, params, construction);
      rows.push_back(Row::upper(id + "/reconstruction", inputs, result.reconstruction_error,
                                config.tolerances.reconstruction));
      const auto normalized = lambda.scaled(1.0 / result.norm);
      const auto holder = verify_holder_direction(normalized, result.lambda0, result.lambda1, params,
                                                  result.selection ? &*result.selection : nullptr);
      const double margin = endpoint ? holder.restricted_margin : holder.margin;
      const double product = endpoint ? holder.restricted_product : holder.product;
      rows.push_back(Row::lower(id + "/holder", inputs, margin, -config.tolerances.holder * product));
      rows.push_back(Row::upper(id + "/norm0", inputs, result.norm0, config.tolerances.bracket));
      rows.push_back(Row::upper(id + "/norm1", inputs, result.norm1, config.tolerances.bracket));
      const double ratio = calderon_upper(result, theta) / result.norm;
      rows.push_back(Row::upper(id + "/ratio", inputs, ratio, config.tolerances.bracket));
      n0[i] = result.norm0;
      n1[i] = result.norm1;
      ratios[i] = ratio;
      return rows;
    });
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      worst0 = std::max(worst0, n0[i]);
      worst1 = std::max(worst1, n1[i]);
      min_ratio = std::min(min_ratio, ratios[i]);
      max_ratio = std::max(max_ratio, ratios[i]);
    }
  }
  report.summary["max_norm0"] = worst0;
  report.summary["max_norm1"] = worst1;
  report.summary["ratio_bracket"] = {min_ratio, max_ratio};
  return report;
}

Report run_holder(const ExperimentConfig& config) {
  const Setup s = make_setup(config);
  const auto corpus = coefficient_corpus(config, s);
  Report report;
  const bool endpoint = !config.has("p1");
  for (double theta : config.thetas) {
    const FactorizationParams params = endpoint
                                           ? make_endpoint_params(theta, s.p0, s.q0.min(), s.q1.min(), s.alpha0, s.alpha1)
                                           : make_pp_params(theta, s.p0, s.p1, s.alpha0, s.alpha1);
    const Construction construction = endpoint ? Construction::pq_infty : Construction::pp;
    if (endpoint) {
      require_constant(s.q0, "$.exponents.q0");
      require_constant(s.q1, "$.exponents.q1");
    }
    collect(report, corpus.size(), [&](std::size_t i) {
      const auto& lambda = corpus[i];
      auto result = factorize(lambda, params, construction);
      if (config.corrupt) {
        // shrink the first factor so that domination breaks on every other entry
        DyadicCoefficients broken(result.lambda0.grid(), result.lambda0.max_level());
        std::size_t k = 0;
        for (const auto& [cube, value] : result.lambda0) broken.set(cube, k++ % 2 == 0 ? 0.25 * value : value);
        result.lambda0 = std::move(broken);
      }
      const auto holder = verify_holder_direction(lambda.scaled(1.0 / result.norm), result.lambda0, result.lambda1,
                                                  params, result.selection ? &*result.selection : nullptr);
      const double margin = endpoint ? holder.restricted_margin : holder.margin;
      const double product = endpoint ? holder.restricted_product : holder.product;
      const std::string inputs = coefficient_records(lambda) + theta_tag(theta);
      return std::vector<Row>{Row::lower(item_id("holder/" + theta_tag(theta), i) + "/margin", inputs, margin,
                                         -config.tolerances.holder * product)};
    });
  }
  return report;
}

Report run_roundtrip(const ExperimentConfig& config) {
  const Setup s = make_setup(config);
  const auto corpus = function_corpus(config, s);
  const FilterBank duals = build_dual_pair(build_admissible_pair(s.grid, s.levels));
  const FilterBank partition = build_resolution_of_unity(s.grid, s.levels);
  Report report;
  report.summary["duality_residual"] = duals.diagnostics.duality_residual;
  report.summary["partition_residual"] = partition.diagnostics.partition_residual;
  const double tol = config.tolerances.roundtrip;
  collect(report, corpus.size(), [&](std::size_t i) {
    const std::string inputs = field_records(corpus[i]);
    const std::string id = item_id("roundtrip", i);
    const auto phi = phi_transform_roundtrip(corpus[i], duals);
    const auto retract = retract_roundtrip(corpus[i], partition);
    auto value = [](const RoundTrip& r) {
      return r.in_band() ? r.residual : std::numeric_limits<double>::infinity();
    };
    return std::vector<Row>{Row::upper(id + "/phi-transform", inputs, value(phi), tol),
                            Row::upper(id + "/retraction", inputs, value(retract), tol)};
  });
  return report;
}

Report run_lebesgue_interp(const ExperimentConfig& config) {
  const Setup s = make_setup(config);
  Rng rng(config.corpus.seed);
  std::vector<SimpleFunction> corpus;
  const int level = std::min(s.levels, 3);
  for (std::size_t i = 0; i < config.corpus.count; ++i)
    corpus.push_back(random_simple_function(s.grid, level, std::max<std::size_t>(1, config.corpus.size), rng));
  Report report;
  const double tol = config.tolerances.interp;
  for (double theta : config.thetas) {
    collect(report, corpus.size(), [&](std::size_t i) {
      const auto& f = corpus[i];
      std::string inputs = field_records(f.to_grid()) + theta_tag(theta);
      const std::string id = item_id("lebesgue-interp/" + theta_tag(theta), i);
      const auto sandwich = scalar_interp_sandwich(f, s.p0, s.p1, theta);
      return std::vector<Row>{
          Row::upper(id + "/upper-ratio", inputs, sandwich.upper_ratio, 1.0 + tol),
          Row::upper(id + "/rho0", inputs, sandwich.rho0, 1.0 + tol),
          Row::upper(id + "/rho1", inputs, sandwich.rho1, 1.0 + tol),
          Row::lower(id + "/three-lines", inputs, sandwich.three_lines_slack, -tol),
          Row::upper(id + "/lower-ratio", inputs, sandwich.lower_ratio, config.tolerances.bracket),
      };
    });
  }
  return report;
}

Report run_inter_rest(const ExperimentConfig& config) {
  const Setup s = make_setup(config);
  require_constant(s.q0, "$.exponents.q0");
  require_constant(s.q1, "$.exponents.q1");
  require_constant(s.alpha0, "$.exponents.alpha0");
  require_constant(s.alpha1, "$.exponents.alpha1");
  const auto corpus = function_corpus(config, s);
  const FilterBank admissible = build_admissible_pair(s.grid, s.levels);
  const FilterBank partition = build_resolution_of_unity(s.grid, s.levels);
  const double C = config.tolerances.bracket;
  Report report;
  for (double theta : config.thetas) {
    const InterRestParameters params{theta, s.p0, s.p1, s.q0, s.q1, s.alpha0, s.alpha1};
    collect(report, corpus.size(), [&](std::size_t i) {
      const std::string inputs = field_records(corpus[i]) + theta_tag(theta);
      const std::string id = item_id("inter-rest/" + theta_tag(theta), i);
      const auto r = inter_rest_check(corpus[i], params, partition, admissible);
      return std::vector<Row>{Row::upper(id + "/ratio", inputs, r.ratio, C),
                              Row::lower(id + "/ratio-lower", inputs, r.ratio, 1.0 / C),
                              Row::lower(id + "/holder", inputs, r.holder_slack, -config.tolerances.holder * r.anchor)};
    });
  }
  return report;
}

}  // namespace

Setup make_setup(const ExperimentConfig& config) {
  const Grid grid = make_grid(config.grid.n, config.grid.L, config.grid.N);
  const int levels = config.levels.value_or(grid.max_level());
  if (levels > grid.max_level())
    throw ConfigError("$.levels", "exceeds the finest resolved level " + std::to_string(grid.max_level()));
  const ExponentRecipe p0 = config.recipe("p0", ConstantRecipe{2.0});
  const ExponentRecipe p1 = config.recipe("p1", p0);
  const ExponentRecipe a0 = config.recipe("alpha0", ConstantRecipe{0.0});
  auto build = [&](const char* name, const ExponentRecipe& recipe, ExponentRole role) {
    try {
      return build_exponent(recipe, grid, role);
    } catch (const Error& e) {
      throw ConfigError(std::string("$.exponents.") + name, e.what());
    }
  };
  return Setup{grid,
               levels,
               build("p0", p0, ExponentRole::integrability),
               build("p1", p1, ExponentRole::integrability),
               build("q0", config.recipe("q0", p0), ExponentRole::integrability),
               build("q1", config.recipe("q1", p1), ExponentRole::integrability),
               build("alpha0", a0, ExponentRole::smoothness),
               build("alpha1", config.recipe("alpha1", a0), ExponentRole::smoothness)};
}

std::string coefficient_records(const DyadicCoefficients& lambda) {
  std::string out;
  char buf[160];
  for (const auto& [cube, value] : lambda) {
    std::snprintf(buf, sizeof buf, "%d %lld %lld %.17g %.17g\n", cube.level, static_cast<long long>(cube.index[0]),
                  static_cast<long long>(cube.index[1]), value.real(), value.imag());
    out += buf;
  }
  return out;
}

Report run_experiment(const ExperimentConfig& config) {
  Report report;
  switch (config.kind) {
    case ExperimentKind::norms:
      report = run_norms(config);
      break;
    case ExperimentKind::factorize_pp:
      report = run_factorize(config, Construction::pp);
      break;
    case ExperimentKind::factorize_pq_infty:
      report = run_factorize(config, Construction::pq_infty);
      break;
    case ExperimentKind::holder:
      report = run_holder(config);
      break;
    case ExperimentKind::roundtrip:
      report = run_roundtrip(config);
      break;
    case ExperimentKind::lebesgue_interp:
      report = run_lebesgue_interp(config);
      break;
    case ExperimentKind::inter_rest:
      report = run_inter_rest(config);
      break;
    case ExperimentKind::suite:
      throw ConfigError("$.experiment", "suite runs through the suite verb");
  }
  report.experiment = std::string(to_string(config.kind));
  report.config = config.source;
  report.summary["tolerances"] = {{"reconstruction", config.tolerances.reconstruction},
                                  {"holder", config.tolerances.holder},
                                  {"roundtrip", config.tolerances.roundtrip},
                                  {"modular", config.tolerances.modular},
                                  {"interp", config.tolerances.interp},
                                  {"bracket", config.tolerances.bracket}};
  report.summary["rows"] = report.rows.size();
  report.summary["failures"] = report.failures().size();
  return report;
}

NormKind parse_norm_kind(std::string_view text) {
  if (text == "lux") return NormKind::lux;
  if (text == "mixed") return NormKind::mixed;
  if (text == "f") return NormKind::f;
  if (text == "finfty") return NormKind::finfty;
  if (text == "F") return NormKind::F;
  if (text == "Finfty") return NormKind::Finfty;
  throw ConfigError("--kind", "expected lux, mixed, f, finfty, F or Finfty");
}

json evaluate_norms(const ExperimentConfig& config, NormKind kind) {
  const Setup s = make_setup(config);
  json out = json::array();
  Rng rng(config.corpus.seed);
  const bool on_functions = kind == NormKind::lux || kind == NormKind::F || kind == NormKind::Finfty;
  const bool needs_bank = kind == NormKind::F || kind == NormKind::Finfty;
  const std::optional<FilterBank> bank =
      needs_bank ? std::optional<FilterBank>(build_admissible_pair(s.grid, s.levels)) : std::nullopt;
  if (kind == NormKind::finfty || kind == NormKind::Finfty) require_constant(s.q0, "$.exponents.q0");
  for (std::size_t i = 0; i < config.corpus.count; ++i) {
    json item{{"id", i}};
    if (on_functions) {
      const GridFunction f = kind == NormKind::lux ? random_piecewise_constant(s.grid, std::min(s.levels, 3), rng)
                                                   : random_band_limited(s.grid, band_of(s), config.corpus.size, rng);
      item["digest"] = digest(field_records(f));
      if (kind == NormKind::lux) {
        const auto r = luxemburg_norm(f, s.p0);
        item["value"] = r.value;
        item["iterations"] = r.iterations;
        item["residual"] = r.residual;
      } else if (kind == NormKind::F) {
        item["value"] = F_norm(f, s.alpha0, s.p0, s.q0, *bank).value;
      } else {
        item["value"] = F_infty_norm(f, s.alpha0, s.q0.min(), *bank);
      }
    } else {
      const auto lambda = random_coefficients(s.grid, s.levels, config.corpus.size, rng);
      item["digest"] = digest(coefficient_records(lambda));
      if (kind == NormKind::mixed) {
        const auto fields = level_fields(lambda, s.alpha0);
        item["value"] = mixed_norm(std::span<const std::vector<double>>(fields), s.p0, s.q0).value;
      } else if (kind == NormKind::f) {
        item["value"] = f_norm(lambda, s.alpha0, s.p0, s.q0).value;
      } else {
        item["value"] = f_infty_norm(lambda, s.alpha0, s.q0.min());
      }
    }
    out.push_back(std::move(item));
  }
  return out;
}

}  // namespace vexint::cli
