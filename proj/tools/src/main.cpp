#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vexint/error.hpp"
#include "vexint/version.hpp"
#include "vexint_cli/config.hpp"
#include "vexint_cli/experiments.hpp"
#include "vexint_cli/report.hpp"
#include "vexint_cli/suite.hpp"

namespace {

using namespace vexint;
using namespace vexint::cli;

constexpr int exit_ok = 0;
constexpr int exit_contract = 1;
constexpr int exit_schema = 2;

bool is_configuration(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_configuration:
    case ErrorKind::invalid_exponent:
    case ErrorKind::unsupported_parameters:
    case ErrorKind::resolution_exceeded:
      return true;
    default:
      return false;
  }
}

void print_outcomes(const SuiteResult& result) {
  for (const auto& o : result.outcomes) {
    std::printf("%s C%02d %s:%s (%.2f s)\n", o.passed ? "PASS" : "FAIL", o.id, o.title.c_str(), o.detail.c_str(),
                o.seconds);
  }
}

int finish_suite(const SuiteResult& result, const std::filesystem::path& out) {
  print_outcomes(result);
  write_report(result.report, out, "suite");
  std::fflush(stdout);
  if (result.passed()) return exit_ok;
  std::string failed;
  for (const auto& o : result.outcomes)
    if (!o.passed) failed += " C" + std::to_string(o.id);
  std::fprintf(stderr, "failed criteria:%s\n", failed.c_str());
  return exit_contract;
}

int run_config(const std::string& path) {
  const ExperimentConfig config = load_config(path);
  if (config.kind == ExperimentKind::suite) {
    auto result = run_suite(config.corpus.seed);
    result.report.config = config.source;
    return finish_suite(result, config.output_dir);
  }
  const Report report = run_experiment(config);
  write_report(report, config.output_dir, config.output_stem);
  const auto failures = report.failures();
  std::printf("%s: %zu rows, %zu failed; report in %s\n", report.experiment.c_str(), report.rows.size(),
              failures.size(), (config.output_dir / (config.output_stem + ".csv")).string().c_str());
  for (std::size_t i = 0; i < failures.size() && i < 20; ++i) std::printf("  failed %s\n", failures[i].c_str());
  return failures.empty() ? exit_ok : exit_contract;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variable-exponent Triebel-Lizorkin numerics"};
  app.set_version_flag("--version", std::string(vexint::version));
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run the experiment described by a JSON config");
  run->add_option("config", config_path, "Config file")->required();

  std::uint64_t seed = 0;
  std::string out_dir = "vexint-suite";
  std::vector<int> only;
  auto* suite = app.add_subcommand("suite", "Run the acceptance matrix");
  suite->add_option("--seed", seed, "Seed")->required();
  suite->add_option("--out", out_dir, "Report directory");
  suite->add_option("--criterion", only, "Restrict to these criteria")->check(CLI::Range(1, criterion_count));

  std::string kind_text;
  std::string norm_config;
  auto* norm = app.add_subcommand("norm", "Evaluate one norm on the corpus of a config");
  norm->add_option("--kind", kind_text, "lux, mixed, f, finfty, F or Finfty")
      ->required()
      ->check(CLI::IsMember({"lux", "mixed", "f", "finfty", "F", "Finfty"}));
  norm->add_option("config", norm_config, "Config file")->required();

  auto* schema = app.add_subcommand("describe-schema", "Print the config JSON Schema");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_schema;
  }

  try {
    if (*run) return run_config(config_path);
    if (*suite) return finish_suite(run_suite(seed, only), out_dir);
    if (*norm) {
      const auto config = load_config(norm_config);
      std::cout << evaluate_norms(config, parse_norm_kind(kind_text)).dump(2) << '\n';
      return exit_ok;
    }
    if (*schema) {
      std::cout << config_schema().dump(2) << '\n';
      return exit_ok;
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return exit_schema;
  } catch (const Error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return is_configuration(e.kind()) ? exit_schema : exit_contract;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_contract;
  }
  return exit_ok;
}
