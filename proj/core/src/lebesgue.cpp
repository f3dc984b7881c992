#include "vexint/lebesgue.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vexint/error.hpp"
#include "vexint/parallel.hpp"

namespace vexint {

namespace {

constexpr int max_iterations = 200;

void check_grid(const Grid& a, const Grid& b) {
  require(a == b, ErrorKind::invalid_configuration, "function and exponent live on different grids");
}

double power_sum(std::span<const double> m, const ExponentField& p, double scale) {
  return pairwise_sum(m.size(), [&](std::size_t i) { return m[i] == 0.0 ? 0.0 : std::pow(m[i] * scale, p[i]); });
}

/// Modular evaluator on the support, parametrized by log(lambda).
class ModularCurve {
 public:
  ModularCurve(std::span<const double> m, const ExponentField& p) : cell_(p.grid().cell_measure()) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] > 0.0) {
        logs_.push_back(std::log(m[i]));
        exps_.push_back(p[i]);
      }
    }
  }

  double operator()(double log_lambda) const {
    return cell_ * pairwise_sum(logs_.size(), [&](std::size_t k) { return std::exp(exps_[k] * (logs_[k] - log_lambda)); });
  }

 private:
  double cell_;
  std::vector<double> logs_;
  std::vector<double> exps_;
};

double constant_norm(std::span<const double> m, double p, double cell) {
  const double peak = *std::max_element(m.begin(), m.end());
  const double s = pairwise_sum(m.size(), [&](std::size_t i) { return std::pow(m[i] / peak, p); });
  return peak * std::pow(s * cell, 1.0 / p);
}

}  // namespace

double modular(std::span<const double> moduli, const ExponentField& p) {
  require(moduli.size() == p.size(), ErrorKind::invalid_configuration, "length mismatch");
  return power_sum(moduli, p, 1.0) * p.grid().cell_measure();
}

double modular(const GridFunction& f, const ExponentField& p) {
  check_grid(f.grid(), p.grid());
  const auto m = f.moduli();
  return modular(m, p);
}

NormResult luxemburg_norm(std::span<const double> m, const ExponentField& p, double tol) {
  require(m.size() == p.size(), ErrorKind::invalid_configuration, "length mismatch");
  require(tol > 0.0, ErrorKind::invalid_configuration, "tolerance must be positive");
  double peak = 0.0;
  for (double x : m) {
    require(std::isfinite(x) && x >= 0.0, ErrorKind::invalid_input, "non-finite or negative modulus sample");
    peak = std::max(peak, x);
  }
  NormResult result;
  if (peak == 0.0) {
    result.method = p.is_constant() ? NormMethod::closed_form : NormMethod::bisection;
    return result;
  }
  if (!p.is_constant()) return luxemburg_bisection(m, p, tol);
  const ModularCurve rho(m, p);
  result.value = constant_norm(m, p.min(), p.grid().cell_measure());
  result.method = NormMethod::closed_form;
  result.residual = std::abs(rho(std::log(result.value)) - 1.0);
  return result;
}

NormResult luxemburg_bisection(std::span<const double> m, const ExponentField& p, double tol) {
  require(m.size() == p.size(), ErrorKind::invalid_configuration, "length mismatch");
  require(tol > 0.0, ErrorKind::invalid_configuration, "tolerance must be positive");
  double peak = 0.0;
  for (double x : m) {
    require(std::isfinite(x) && x >= 0.0, ErrorKind::invalid_input, "non-finite or negative modulus sample");
    peak = std::max(peak, x);
  }
  NormResult result;
  result.method = NormMethod::bisection;
  if (peak == 0.0) return result;
  const double cell = p.grid().cell_measure();
  const ModularCurve rho(m, p);
  double lo = std::log(0.5 * constant_norm(m, p.max(), cell));
  double hi = std::log(2.0 * constant_norm(m, p.min(), cell) + peak);
  for (int k = 0; rho(lo) <= 1.0; ++k) {
    require(k < max_iterations, ErrorKind::solver_failure, "could not bracket the norm from below");
    lo -= std::log(2.0);
  }
  for (int k = 0; rho(hi) > 1.0; ++k) {
    require(k < max_iterations, ErrorKind::solver_failure, "could not bracket the norm from above");
    hi += std::log(2.0);
  }
  const double width = std::log1p(tol);
  int iterations = 0;
  while (hi - lo > width) {
    require(iterations < max_iterations, ErrorKind::solver_failure,
            "bisection exceeded " + std::to_string(max_iterations) + " iterations");
    const double mid = 0.5 * (lo + hi);
    if (rho(mid) <= 1.0) {
      hi = mid;
    } else {
      lo = mid;
    }
    ++iterations;
  }
  result.value = std::exp(hi);
  result.iterations = iterations;
  result.residual = std::abs(rho(hi) - 1.0);
  return result;
}

NormResult luxemburg_norm(const GridFunction& f, const ExponentField& p, double tol) {
  check_grid(f.grid(), p.grid());
  const auto m = f.moduli();
  return luxemburg_norm(m, p, tol);
}

std::vector<double> lq_envelope(std::span<const std::vector<double>> family, const ExponentField& q) {
  std::vector<double> g(q.size(), 0.0);
  if (family.empty()) return g;
  for (const auto& f : family) {
    require(f.size() == q.size(), ErrorKind::invalid_configuration, "family member length mismatch");
  }
  if (family.size() == 1) {
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = family[0][i];
    return g;
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    double peak = 0.0;
    for (const auto& f : family) peak = std::max(peak, f[i]);
    if (peak == 0.0) continue;
    double s = 0.0;
    for (const auto& f : family) {
      if (f[i] > 0.0) s += std::pow(f[i] / peak, q[i]);
    }
    g[i] = peak * std::pow(s, 1.0 / q[i]);
  }
  return g;
}

NormResult mixed_norm(std::span<const std::vector<double>> family, const ExponentField& p, const ExponentField& q,
                      double tol) {
  check_grid(p.grid(), q.grid());
  require(q.role() == ExponentRole::integrability, ErrorKind::invalid_configuration,
          "inner exponent must be an integrability exponent");
  if (family.empty()) return NormResult{};
  const auto g = lq_envelope(family, q);
  return luxemburg_norm(g, p, tol);
}

NormResult mixed_norm(std::span<const GridFunction> family, const ExponentField& p, const ExponentField& q,
                      double tol) {
  std::vector<std::vector<double>> moduli;
  moduli.reserve(family.size());
  for (const auto& f : family) {
    check_grid(f.grid(), p.grid());
    moduli.push_back(f.moduli());
  }
  return mixed_norm(std::span<const std::vector<double>>(moduli), p, q, tol);
}

UnitBallCheck unit_ball_check(const GridFunction& f, const ExponentField& p) {
  UnitBallCheck check;
  const double rho = modular(f, p);
  check.modular_at_most_one = rho <= 1.0;
  const NormResult norm = luxemburg_norm(f, p);
  if (std::abs(norm.value - 1.0) <= 2.0 * default_norm_tolerance) {
    // bracket straddles 1: test lambda = 1 directly
    check.norm_at_most_one = rho <= 1.0;
  } else {
    check.norm_at_most_one = norm.value < 1.0;
  }
  return check;
}

}  // namespace vexint
