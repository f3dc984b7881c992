#include "vexint/lpf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "vexint/error.hpp"
#include "vexint/parallel.hpp"
#include "vexint/spectral.hpp"

namespace vexint {

namespace {

double bump(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

void check_levels(const Grid& grid, int levels) {
  require(levels >= 0, ErrorKind::invalid_configuration, "bank depth must be non-negative");
  require(levels <= grid.max_level(), ErrorKind::resolution_exceeded,
          "bank depth " + std::to_string(levels) + " exceeds grid resolution " + std::to_string(grid.max_level()));
  require(std::ldexp(2.0, levels) < grid.nyquist(), ErrorKind::resolution_exceeded,
          "top band 2^" + std::to_string(levels + 1) + " exceeds the Nyquist frequency");
}

std::vector<double> radial_multiplier(const Grid& grid, double (*profile)(double), double scale) {
  std::vector<double> m(grid.size());
  for (std::size_t k = 0; k < m.size(); ++k) m[k] = profile(scale * grid.frequency_norm(k));
  return m;
}

std::vector<double> partition_band(const Grid& grid, int v) {
  std::vector<double> m(grid.size());
  for (std::size_t k = 0; k < m.size(); ++k) {
    const double r = grid.frequency_norm(k);
    m[k] = v == 0 ? partition_low(r) : partition_low(std::ldexp(r, -v)) - partition_low(std::ldexp(r, 1 - v));
  }
  return m;
}

double profile_minimum(double (*profile)(double), double a, double b) {
  double lowest = std::numeric_limits<double>::infinity();
  constexpr int samples = 20000;
  for (int i = 0; i <= samples; ++i) lowest = std::min(lowest, profile(a + (b - a) * i / samples));
  return lowest;
}

std::vector<Complex> spectrum_of(const GridFunction& f) {
  std::vector<Complex> s = f.values();
  fft_forward(f.grid(), s);
  return s;
}

double out_of_band_fraction(const Grid& grid, const std::vector<Complex>& spectrum, double radius) {
  double inside = 0.0;
  double outside = 0.0;
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    (grid.frequency_norm(k) <= radius ? inside : outside) += std::norm(spectrum[k]);
  }
  const double total = inside + outside;
  return total > 0.0 ? outside / total : 0.0;
}

void check_grid(const Grid& a, const Grid& b) {
  require(a == b, ErrorKind::invalid_configuration, "operands live on different grids");
}

}  // namespace

double smooth_step(double t, double a, double b) {
  const double up = bump(b - t);
  const double down = bump(t - a);
  return up / (up + down);
}

double admissible_low(double r) { return smooth_step(r, 5.0 / 3.0, 2.0); }

double admissible_band(double r) { return (1.0 - smooth_step(r, 0.5, 0.6)) * smooth_step(r, 5.0 / 3.0, 2.0); }

double partition_low(double r) { return smooth_step(r, 1.0, 2.0); }

double FilterBank::band_radius() const noexcept {
  return kind == BankKind::admissible ? std::ldexp(5.0 / 3.0, max_level) : std::ldexp(1.0, max_level);
}

FilterBank build_admissible_pair(const Grid& grid, int levels) {
  check_levels(grid, levels);
  FilterBank bank{grid, levels, BankKind::admissible, {}, {}, {}, {}};
  bank.analysis.push_back(radial_multiplier(grid, admissible_low, 1.0));
  for (int v = 1; v <= levels; ++v) bank.analysis.push_back(radial_multiplier(grid, admissible_band, std::ldexp(1.0, -v)));
  bank.diagnostics.lower_bound =
      std::min(profile_minimum(admissible_low, 0.0, 5.0 / 3.0), profile_minimum(admissible_band, 0.6, 5.0 / 3.0));
  return bank;
}

FilterBank build_dual_pair(const FilterBank& bank) {
  require(bank.kind == BankKind::admissible, ErrorKind::invalid_configuration, "duals need an admissible bank");
  const Grid& grid = bank.grid;
  FilterBank out = bank;
  const double radius = bank.band_radius();
  std::vector<double> D(grid.size(), 0.0);
  for (const auto& m : bank.analysis)
    for (std::size_t k = 0; k < D.size(); ++k) D[k] += m[k] * m[k];
  double lowest = std::numeric_limits<double>::infinity();
  double highest = 0.0;
  double core = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < D.size(); ++k) {
    const double r = grid.frequency_norm(k);
    if (r <= radius) {
      lowest = std::min(lowest, D[k]);
      highest = std::max(highest, D[k]);
    }
    if (r <= 5.0 / 3.0) core = std::min(core, D[k]);
  }
  require(lowest >= 0.25, ErrorKind::admissibility_failure,
          "denominator drops to " + std::to_string(lowest) + " inside the resolved band");
  out.synthesis.assign(bank.analysis.size(), std::vector<double>(grid.size(), 0.0));
  for (std::size_t v = 0; v < bank.analysis.size(); ++v) {
    for (std::size_t k = 0; k < D.size(); ++k) {
      if (grid.frequency_norm(k) <= radius) out.synthesis[v][k] = bank.analysis[v][k] / D[k];
    }
  }
  double residual = 0.0;
  for (std::size_t k = 0; k < D.size(); ++k) {
    if (grid.frequency_norm(k) > radius) continue;
    double s = 0.0;
    for (std::size_t v = 0; v < bank.analysis.size(); ++v) s += bank.analysis[v][k] * out.synthesis[v][k];
    residual = std::max(residual, std::abs(s - 1.0));
  }
  out.diagnostics.min_denominator = lowest;
  out.diagnostics.max_denominator = highest;
  out.diagnostics.min_denominator_core = core;
  out.diagnostics.duality_residual = residual;
  return out;
}

FilterBank build_resolution_of_unity(const Grid& grid, int levels) {
  check_levels(grid, levels);
  FilterBank bank{grid, levels, BankKind::resolution_of_unity, {}, {}, {}, {}};
  for (int v = 0; v <= levels + 1; ++v) bank.analysis.push_back(partition_band(grid, v));
  const std::vector<double> beyond = std::move(bank.analysis.back());
  bank.analysis.pop_back();
  const double radius = bank.band_radius();
  double partition = 0.0;
  double lowest = std::numeric_limits<double>::infinity();
  double highest = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (grid.frequency_norm(k) > radius) continue;
    double s = 0.0;
    double d = 0.0;
    for (const auto& m : bank.analysis) {
      s += m[k];
      d += m[k] * m[k];
    }
    partition = std::max(partition, std::abs(s - 1.0));
    lowest = std::min(lowest, d);
    highest = std::max(highest, d);
  }
  double omega_residual = 0.0;
  for (int v = 0; v <= levels; ++v) {
    std::vector<double> w(bank.analysis[v]);
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (v > 0) w[k] += bank.analysis[v - 1][k];
      w[k] += v < levels ? bank.analysis[v + 1][k] : beyond[k];
      if (bank.analysis[v][k] != 0.0) omega_residual = std::max(omega_residual, std::abs(w[k] - 1.0));
    }
    bank.omega.push_back(std::move(w));
  }
  bank.diagnostics.lower_bound = profile_minimum(partition_low, 0.0, 1.0);
  bank.diagnostics.partition_residual = partition;
  bank.diagnostics.omega_residual = omega_residual;
  bank.diagnostics.min_denominator = lowest;
  bank.diagnostics.max_denominator = highest;
  return bank;
}

std::vector<double> band_moments(const FilterBank& bank, int level) {
  require(level >= 0 && level <= bank.max_level, ErrorKind::invalid_configuration, "level outside the bank");
  const double scale = std::ldexp(1.0, -level);
  auto m = [&](double x0, double x1) {
    const double r = std::hypot(x0, x1);
    if (bank.kind == BankKind::admissible) return level == 0 ? admissible_low(r) : admissible_band(scale * r);
    return level == 0 ? partition_low(r) : partition_low(scale * r) - partition_low(2.0 * scale * r);
  };
  const double d = 1e-3;
  std::vector<double> out;
  out.push_back(std::abs(m(0, 0)));
  out.push_back(std::abs((m(d, 0) - m(-d, 0)) / (2 * d)));
  out.push_back(std::abs((m(d, 0) - 2 * m(0, 0) + m(-d, 0)) / (d * d)));
  if (bank.grid.dimension() == 2) {
    out.push_back(std::abs((m(0, d) - m(0, -d)) / (2 * d)));
    out.push_back(std::abs((m(0, d) - 2 * m(0, 0) + m(0, -d)) / (d * d)));
    out.push_back(std::abs((m(d, d) - m(d, -d) - m(-d, d) + m(-d, -d)) / (4 * d * d)));
  }
  return out;
}

std::vector<GridFunction> co_retraction(const GridFunction& f, const FilterBank& bank) {
  check_grid(f.grid(), bank.grid);
  const auto spectrum = spectrum_of(f);
  std::vector<GridFunction> out;
  out.reserve(bank.analysis.size());
  for (const auto& m : bank.analysis) out.emplace_back(bank.grid, apply_multiplier(bank.grid, spectrum, m));
  return out;
}

GridFunction retraction(const std::vector<GridFunction>& family, const FilterBank& bank) {
  require(bank.has_omega(), ErrorKind::invalid_configuration, "retraction needs a resolution-of-unity bank");
  require(family.size() == bank.omega.size(), ErrorKind::invalid_configuration, "family depth differs from the bank");
  const Grid& grid = bank.grid;
  std::vector<Complex> total(grid.size(), Complex(0.0));
  for (std::size_t v = 0; v < family.size(); ++v) {
    check_grid(family[v].grid(), grid);
    const auto s = spectrum_of(family[v]);
    for (std::size_t k = 0; k < total.size(); ++k) total[k] += bank.omega[v][k] * s[k];
  }
  fft_inverse(grid, total);
  return GridFunction(grid, std::move(total));
}

DyadicCoefficients analyze(const GridFunction& f, const FilterBank& bank) {
  check_grid(f.grid(), bank.grid);
  require(bank.has_duals(), ErrorKind::invalid_configuration, "analysis needs a dual-ready bank");
  const Grid& grid = bank.grid;
  const auto spectrum = spectrum_of(f);
  DyadicCoefficients lambda(grid, bank.max_level);
  const int n = grid.dimension();
  for (int v = 0; v <= bank.max_level; ++v) {
    const auto filtered = apply_multiplier(grid, spectrum, bank.analysis[v]);
    const double weight = std::exp2(-0.5 * v * n);
    for (const auto& cube : enumerate_cubes(grid, v)) lambda.set(cube, weight * filtered[cube_corner(grid, cube)]);
  }
  return lambda;
}

GridFunction synthesize(const DyadicCoefficients& lambda, const FilterBank& bank) {
  check_grid(lambda.grid(), bank.grid);
  require(bank.has_duals(), ErrorKind::invalid_configuration, "synthesis needs dual multipliers");
  require(lambda.max_level() <= bank.max_level, ErrorKind::resolution_exceeded, "coefficients deeper than the bank");
  const Grid& grid = bank.grid;
  const int n = grid.dimension();
  std::vector<Complex> total(grid.size(), Complex(0.0));
  for (int v = 0; v <= lambda.max_level(); ++v) {
    std::vector<Complex> comb(grid.size(), Complex(0.0));
    bool any = false;
    const double weight = std::exp2(-0.5 * v * n) / grid.cell_measure();
    for (auto it = lambda.entries().lower_bound(DyadicCube{v, {0, 0}}); it != lambda.end() && it->first.level == v; ++it) {
      comb[cube_corner(grid, it->first)] += weight * it->second;
      any = true;
    }
    if (!any) continue;
    fft_forward(grid, comb);
    for (std::size_t k = 0; k < total.size(); ++k) total[k] += bank.synthesis[v][k] * comb[k];
  }
  fft_inverse(grid, total);
  return GridFunction(grid, std::move(total));
}

RoundTrip retract_roundtrip(const GridFunction& f, const FilterBank& bank) {
  RoundTrip out;
  const double peak = f.max_abs();
  if (peak == 0.0) return out;
  out.out_of_band = out_of_band_fraction(bank.grid, spectrum_of(f), bank.band_radius());
  const GridFunction back = retraction(co_retraction(f, bank), bank);
  out.residual = (back - f).max_abs() / peak;
  return out;
}

RoundTrip phi_transform_roundtrip(const GridFunction& f, const FilterBank& bank) {
  RoundTrip out;
  const double peak = f.max_abs();
  if (peak == 0.0) return out;
  out.out_of_band = out_of_band_fraction(bank.grid, spectrum_of(f), bank.band_radius());
  const GridFunction back = synthesize(analyze(f, bank), bank);
  out.residual = (back - f).max_abs() / peak;
  return out;
}

std::vector<std::vector<double>> weighted_levels(const GridFunction& f, const ExponentField& alpha,
                                                 const FilterBank& bank) {
  check_grid(f.grid(), bank.grid);
  check_grid(alpha.grid(), bank.grid);
  const auto spectrum = spectrum_of(f);
  std::vector<std::vector<double>> out(bank.analysis.size());
  parallel_for(out.size(), [&](std::size_t v) {
    const auto filtered = apply_multiplier(bank.grid, spectrum, bank.analysis[v]);
    std::vector<double> w(filtered.size());
    for (std::size_t x = 0; x < w.size(); ++x) w[x] = std::exp2(static_cast<double>(v) * alpha[x]) * std::abs(filtered[x]);
    out[v] = std::move(w);
  });
  return out;
}

NormResult F_norm(const GridFunction& f, const ExponentField& alpha, const ExponentField& p, const ExponentField& q,
                  const FilterBank& bank, double tol) {
  const auto levels = weighted_levels(f, alpha, bank);
  return mixed_norm(std::span<const std::vector<double>>(levels), p, q, tol);
}

double F_infty_norm(const GridFunction& f, const ExponentField& alpha, double q, const FilterBank& bank) {
  require(q > 0.0 && std::isfinite(q), ErrorKind::invalid_configuration, "q must be a positive constant");
  const Grid& grid = bank.grid;
  const auto levels = weighted_levels(f, alpha, bank);
  std::vector<double> tail(grid.size(), 0.0);
  double best = 0.0;
  for (int k = bank.max_level; k >= 0; --k) {
    for (std::size_t x = 0; x < tail.size(); ++x) tail[x] += std::pow(levels[k][x], q);
    std::vector<double> sums(cube_count(grid, k), 0.0);
    const int c = grid.cells_per_cube_axis(k);
    const auto per_axis = static_cast<std::size_t>(grid.cubes_per_axis(k));
    for (std::size_t x = 0; x < tail.size(); ++x) {
      std::size_t r = static_cast<std::size_t>(grid.axis_index(x, 0) / c);
      if (grid.dimension() == 2) r += per_axis * static_cast<std::size_t>(grid.axis_index(x, 1) / c);
      sums[r] += tail[x];
    }
    const double cells = std::pow(static_cast<double>(c), grid.dimension());
    for (double s : sums) best = std::max(best, s / cells);
  }
  return std::pow(best, 1.0 / q);
}

}  // namespace vexint
