#include "vexint/interp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <string>

#include "vexint/error.hpp"
#include "vexint/lebesgue.hpp"
#include "vexint/parallel.hpp"

namespace vexint {

namespace {

double trapezoid_weight(std::size_t i, std::size_t count, double step) {
  return (i == 0 || i + 1 == count) ? 0.5 * step : step;
}

/// int e^{-k t^2} mu(t) dt over the quadrature nodes.
double damped_mass(const StripPoisson& kernel, int side, double damping, const StripQuadrature& quad) {
  const auto t = quad.nodes();
  return pairwise_sum(t.size(), [&](std::size_t i) {
    const double mu = side == 0 ? kernel.mu0(t[i]) : kernel.mu1(t[i]);
    return trapezoid_weight(i, t.size(), quad.step) * std::exp(-damping * t[i] * t[i]) * mu;
  });
}

}  // namespace

StripPoisson::StripPoisson(double theta) : theta_(theta) {
  require(theta > 0.0 && theta < 1.0, ErrorKind::invalid_input, "theta must lie in (0, 1)");
  sin_ = std::sin(std::numbers::pi * theta);
  cos_ = std::cos(std::numbers::pi * theta);
}

double StripPoisson::mu0(double t) const noexcept { return sin_ / (2.0 * (std::cosh(std::numbers::pi * t) - cos_)); }

double StripPoisson::mu1(double t) const noexcept { return sin_ / (2.0 * (std::cosh(std::numbers::pi * t) + cos_)); }

StripPoisson strip_poisson(double theta) { return StripPoisson(theta); }

std::vector<double> StripQuadrature::nodes() const {
  require(half_width > 0.0 && step > 0.0, ErrorKind::invalid_configuration, "bad strip quadrature");
  const auto count = static_cast<std::size_t>(std::llround(2.0 * half_width / step)) + 1;
  std::vector<double> t(count);
  for (std::size_t i = 0; i < count; ++i) t[i] = -half_width + step * static_cast<double>(i);
  return t;
}

PoissonMasses poisson_masses(const StripPoisson& kernel, const StripQuadrature& quad) {
  return {damped_mass(kernel, 0, 0.0, quad), damped_mass(kernel, 1, 0.0, quad)};
}

double poisson_extend(const StripPoisson& kernel, double s, const std::function<double(double)>& u0,
                      const std::function<double(double)>& u1, const StripQuadrature& quad) {
  const auto t = quad.nodes();
  return pairwise_sum(t.size(), [&](std::size_t i) {
    const double w = trapezoid_weight(i, t.size(), quad.step);
    return w * (u0(s + t[i]) * kernel.mu0(t[i]) + u1(s + t[i]) * kernel.mu1(t[i]));
  });
}

void SimpleFunction::validate() const {
  require(values.size() == regions.size(), ErrorKind::invalid_input, "one value per region required");
  std::vector<char> used(grid.size(), 0);
  for (std::size_t j = 0; j < regions.size(); ++j) {
    require(std::isfinite(values[j].real()) && std::isfinite(values[j].imag()), ErrorKind::invalid_input,
            "non-finite region value");
    require(!regions[j].empty(), ErrorKind::invalid_input, "empty region " + std::to_string(j));
    for (std::size_t x : regions[j]) {
      require(x < grid.size(), ErrorKind::invalid_input, "region point outside the grid");
      require(!used[x], ErrorKind::invalid_input, "regions overlap at grid point " + std::to_string(x));
      used[x] = 1;
    }
  }
}

GridFunction SimpleFunction::to_grid() const {
  std::vector<Complex> out(grid.size(), Complex(0.0));
  for (std::size_t j = 0; j < regions.size(); ++j)
    for (std::size_t x : regions[j]) out[x] = values[j];
  return GridFunction(grid, std::move(out));
}

SimpleFunction SimpleFunction::scaled(Complex factor) const {
  SimpleFunction out = *this;
  for (auto& a : out.values) a *= factor;
  return out;
}

SimpleFunction make_simple(const Grid& grid, std::vector<Complex> values, std::vector<std::vector<std::size_t>> regions) {
  SimpleFunction f{grid, std::move(values), std::move(regions)};
  f.validate();
  return f;
}

CompetitorFamily::CompetitorFamily(SimpleFunction f, ExponentField p0, ExponentField p1, double theta, double damping)
    : f_(std::move(f)),
      p0_(std::move(p0)),
      p1_(std::move(p1)),
      p_(interpolate_exponents(p0_, p1_, theta, InterpolationMode::harmonic)),
      theta_(theta),
      damping_(damping) {
  f_.validate();
  require(f_.grid == p0_.grid(), ErrorKind::invalid_configuration, "function and exponents live on different grids");
  value_at_.assign(f_.grid.size(), Complex(0.0));
  for (std::size_t j = 0; j < f_.regions.size(); ++j)
    for (std::size_t x : f_.regions[j]) value_at_[x] = f_.values[j];
  shift_at_.resize(f_.grid.size());
  for (std::size_t x = 0; x < shift_at_.size(); ++x) shift_at_[x] = p_[x] / p1_[x] - p_[x] / p0_[x];
}

Complex CompetitorFamily::evaluate(std::size_t x, Complex z) const {
  const Complex a = value_at_[x];
  if (a == Complex(0.0)) return a;
  const Complex w = z - theta_;
  return a * std::exp(shift_at_[x] * w * std::log(std::abs(a)) + damping_ * w * w);
}

double CompetitorFamily::boundary_modulus(std::size_t x, int side, double t) const {
  const double a = std::abs(value_at_[x]);
  if (a == 0.0) return 0.0;
  const double s = side - theta_;
  return a * std::exp(shift_at_[x] * s * std::log(a) + damping_ * (s * s - t * t));
}

CompetitorFamily competitor_family(const SimpleFunction& f, const ExponentField& p0, const ExponentField& p1,
                                   double theta, double damping) {
  return CompetitorFamily(f, p0, p1, theta, damping);
}

BoundaryModulars boundary_modulars(const CompetitorFamily& family, const std::vector<double>& heights) {
  const Grid& grid = family.function().grid;
  const double norm = luxemburg_norm(family.function().to_grid(), family.p()).value;
  require(std::abs(norm - 1.0) <= 1e-9, ErrorKind::invalid_input,
          "competitor must be built from a unit-norm function, got " + std::to_string(norm));
  BoundaryModulars out;
  std::vector<double> m(grid.size());
  for (double t : heights) {
    for (int side = 0; side < 2; ++side) {
      for (std::size_t x = 0; x < m.size(); ++x) m[x] = family.boundary_modulus(x, side, t);
      const double rho = modular(m, side == 0 ? family.p0() : family.p1());
      double& slot = side == 0 ? out.rho0 : out.rho1;
      slot = std::max(slot, rho);
    }
  }
  return out;
}

ThreeLinesResult three_lines_bound(const CompetitorFamily& family, std::size_t region, const StripQuadrature& quad) {
  const auto& f = family.function();
  require(region < f.regions.size(), ErrorKind::invalid_input, "region index out of range");
  const StripPoisson kernel(family.theta());
  const double theta = family.theta();
  const double k0 = damped_mass(kernel, 0, family.damping(), quad) / (1.0 - theta);
  const double k1 = damped_mass(kernel, 1, family.damping(), quad) / theta;
  ThreeLinesResult out;
  out.value = std::abs(f.values[region]);
  out.bound = std::numeric_limits<double>::infinity();
  for (std::size_t x : f.regions[region]) {
    const double i0 = family.boundary_modulus(x, 0, 0.0) * k0;
    const double i1 = family.boundary_modulus(x, 1, 0.0) * k1;
    out.bound = std::min(out.bound, std::pow(i0, 1.0 - theta) * std::pow(i1, theta));
  }
  out.slack = out.bound - out.value;
  return out;
}

SandwichReport scalar_interp_sandwich(const SimpleFunction& f, const ExponentField& p0, const ExponentField& p1,
                                      double theta, double damping, const StripQuadrature& quad) {
  const ExponentField p = interpolate_exponents(p0, p1, theta, InterpolationMode::harmonic);
  const double norm = luxemburg_norm(f.to_grid(), p).value;
  require(norm > 0.0, ErrorKind::invalid_input, "sandwich needs a nonzero function");
  const SimpleFunction unit = f.scaled(1.0 / norm);
  const double unit_norm = luxemburg_norm(unit.to_grid(), p).value;
  const Grid& grid = f.grid;
  const StripPoisson kernel(theta);
  const auto t = quad.nodes();

  SandwichReport report;
  report.three_lines_slack = std::numeric_limits<double>::infinity();
  for (double kappa : {0.0, damping}) {
    const CompetitorFamily family(unit, p0, p1, theta, kappa);
    if (kappa == 0.0) {
      const auto rho = boundary_modulars(family);
      report.rho0 = rho.rho0;
      report.rho1 = rho.rho1;
      double boundary = 0.0;
      std::vector<double> m(grid.size());
      for (double height : {0.0, 0.5, 2.0}) {
        for (int side = 0; side < 2; ++side) {
          for (std::size_t x = 0; x < m.size(); ++x) m[x] = family.boundary_modulus(x, side, height);
          boundary = std::max(boundary, luxemburg_norm(m, side == 0 ? p0 : p1).value);
        }
      }
      report.upper_ratio = boundary / unit_norm;
    }
    // G_i(x) = ((1/w_i) int |g(x, i + it)|^{p_i(x)} mu_i dt)^{1/p_i(x)}
    std::vector<double> g0(grid.size());
    std::vector<double> g1(grid.size());
    std::map<double, double> cache0;
    std::map<double, double> cache1;
    auto weight_for = [&](std::map<double, double>& cache, int side, double exponent) {
      auto it = cache.find(exponent);
      if (it != cache.end()) return it->second;
      const double mass = pairwise_sum(t.size(), [&](std::size_t i) {
        const double mu = side == 0 ? kernel.mu0(t[i]) : kernel.mu1(t[i]);
        return trapezoid_weight(i, t.size(), quad.step) * std::exp(-kappa * exponent * t[i] * t[i]) * mu;
      });
      const double w = mass / (side == 0 ? 1.0 - theta : theta);
      cache.emplace(exponent, w);
      return w;
    };
    for (std::size_t x = 0; x < grid.size(); ++x) {
      g0[x] = family.boundary_modulus(x, 0, 0.0) * std::pow(weight_for(cache0, 0, p0[x]), 1.0 / p0[x]);
      g1[x] = family.boundary_modulus(x, 1, 0.0) * std::pow(weight_for(cache1, 1, p1[x]), 1.0 / p1[x]);
    }
    const double product = std::pow(luxemburg_norm(g0, p0).value, 1.0 - theta) * std::pow(luxemburg_norm(g1, p1).value, theta);
    report.lower_ratio = std::max(report.lower_ratio, unit_norm / product);
    for (std::size_t j = 0; j < unit.regions.size(); ++j) {
      const auto tl = three_lines_bound(family, j, quad);
      report.three_lines_slack = std::min(report.three_lines_slack, tl.slack);
    }
  }
  return report;
}

InterRestReport inter_rest_check(const GridFunction& f, const InterRestParameters& params,
                                 const FilterBank& partition, const FilterBank& admissible) {
  for (const ExponentField* field : {&params.q0, &params.q1, &params.alpha0, &params.alpha1}) {
    require(field->is_constant(), ErrorKind::unsupported_parameters, "smoothness and q must be constant here");
  }
  require(partition.kind == BankKind::resolution_of_unity && partition.has_omega(), ErrorKind::invalid_configuration,
          "anchor needs a resolution-of-unity bank");
  const double theta = params.theta;
  const ExponentField p = interpolate_exponents(params.p0, params.p1, theta, InterpolationMode::harmonic);
  const ExponentField q = interpolate_exponents(params.q0, params.q1, theta, InterpolationMode::harmonic);
  const ExponentField alpha = interpolate_exponents(params.alpha0, params.alpha1, theta, InterpolationMode::affine);

  InterRestReport report;
  report.direct = F_norm(f, alpha, p, q, admissible).value;
  const auto anchor_levels = weighted_levels(f, alpha, partition);
  report.anchor = mixed_norm(std::span<const std::vector<double>>(anchor_levels), p, q).value;
  report.ratio = report.anchor > 0.0 ? report.direct / report.anchor : 1.0;
  const auto levels0 = weighted_levels(f, params.alpha0, partition);
  const auto levels1 = weighted_levels(f, params.alpha1, partition);
  report.endpoint0 = mixed_norm(std::span<const std::vector<double>>(levels0), params.p0, params.q0).value;
  report.endpoint1 = mixed_norm(std::span<const std::vector<double>>(levels1), params.p1, params.q1).value;
  report.holder_slack =
      std::pow(report.endpoint0, 1.0 - theta) * std::pow(report.endpoint1, theta) - report.anchor;
  return report;
}

}  // namespace vexint
