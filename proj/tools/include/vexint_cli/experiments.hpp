#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "vexint/exponents.hpp"
#include "vexint/grid.hpp"
#include "vexint/seqspaces.hpp"
#include "vexint_cli/config.hpp"
#include "vexint_cli/report.hpp"

namespace vexint::cli {

/// Grid and exponent fields resolved from a config.
struct Setup {
  Grid grid;
  int levels;
  ExponentField p0;
  ExponentField p1;
  ExponentField q0;
  ExponentField q1;
  ExponentField alpha0;
  ExponentField alpha1;
};

Setup make_setup(const ExperimentConfig& config);

/// Record text of a coefficient set: one "v m0 m1 re im" line per entry.
std::string coefficient_records(const DyadicCoefficients& lambda);

/// Runs the experiment named in the config. Library contract errors propagate.
Report run_experiment(const ExperimentConfig& config);

enum class NormKind { lux, mixed, f, finfty, F, Finfty };

NormKind parse_norm_kind(std::string_view text);
/// Evaluates one norm on each corpus item of the config.
nlohmann::json evaluate_norms(const ExperimentConfig& config, NormKind kind);

}  // namespace vexint::cli
