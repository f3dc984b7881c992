#include "vexint/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "vexint/error.hpp"
#include "vexint/lebesgue.hpp"
#include "vexint/parallel.hpp"
#include "vexint/spectral.hpp"

namespace vexint {

namespace {

constexpr int gauss_points = 20;

struct GaussRule {
  std::array<double, gauss_points> nodes{};
  std::array<double, gauss_points> weights{};
};

const GaussRule& gauss_rule() {
  static const GaussRule rule = [] {
    GaussRule r;
    for (int i = 0; i < gauss_points; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (gauss_points + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= gauss_points; ++k) {
          const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = pk;
        }
        dp = gauss_points * (x * p1 - p0) / (x * x - 1.0);
        const double step = p1 / dp;
        x -= step;
        if (std::abs(step) < 1e-16) break;
      }
      r.nodes[i] = x;
      r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
  }();
  return rule;
}

template <class F>
double gauss(double a, double b, const F& f) {
  const auto& rule = gauss_rule();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < gauss_points; ++i) s += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return s * half;
}

/// Integral over [0, S] on the graded partition 0, 1/8, 1/4, ..., doubling up to S.
template <class F>
double graded(double S, const F& f) {
  double total = 0.0;
  double a = 0.0;
  double b = std::min(S, 0.125);
  while (a < S) {
    total += gauss(a, b, f);
    a = b;
    b = std::min(S, 2.0 * b);
  }
  return total;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

double eta_box_mass(int dimension, int level, double m_exp, double half_extent) {
  require(m_exp > 0.0, ErrorKind::invalid_configuration, "decay exponent must be positive");
  const double S = std::ldexp(half_extent, level);
  auto radial = [&](double r) { return std::pow(1.0 + r, -m_exp); };
  if (dimension == 1) return 2.0 * graded(S, radial);
  require(dimension == 2, ErrorKind::invalid_configuration, "dimension must be 1 or 2");
  auto slice = [&](double phi) {
    return graded(S / std::cos(phi), [&](double r) { return radial(r) * r; });
  };
  return 8.0 * gauss(0.0, 0.25 * std::numbers::pi, slice);
}

EtaKernel eta(int level, double m_exp, const Grid& grid) {
  require(m_exp > 0.0, ErrorKind::invalid_configuration, "decay exponent must be positive");
  require(level >= 0, ErrorKind::invalid_configuration, "level must be non-negative");
  const int n = grid.dimension();
  const double scale = std::ldexp(1.0, level);
  const double height = std::pow(scale, n);
  std::vector<Complex> values(grid.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = height * std::pow(1.0 + scale * grid.norm(i), -m_exp);
  GridFunction samples(grid, std::move(values));
  const double grid_mass = samples.integral().real();
  return EtaKernel{level, m_exp, std::move(samples), eta_box_mass(n, level, m_exp, grid.half_extent()), grid_mass,
                   m_exp > n};
}

GridFunction convolve(const GridFunction& f, const GridFunction& k) {
  require(f.grid() == k.grid(), ErrorKind::invalid_configuration, "convolution operands live on different grids");
  const Grid& grid = f.grid();
  std::vector<Complex> a = f.values();
  std::vector<Complex> b = k.values();
  fft_forward(grid, a);
  fft_forward(grid, b);
  const double h = grid.cell_measure();
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i] * h;
  fft_inverse(grid, a);
  return GridFunction(grid, std::move(a));
}

AlphaShiftReport verify_alpha_shift(const ExponentField& alpha, double h_exp, double R, std::span<const int> levels,
                                    const AlphaShiftOptions& options) {
  const Grid& grid = alpha.grid();
  const auto& a = alpha.values();
  const int N = grid.points_per_axis();
  AlphaShiftReport report;
  report.estimated_c_loc = log_holder_constants(alpha).local_constant;
  report.precondition_ok = R >= report.estimated_c_loc;
  report.per_level.assign(levels.size(), 0.0);

  auto log_ratio = [&](int v, double da, double d) {
    const double s = std::log1p(std::ldexp(d, v));
    return v * std::numbers::ln2 * da - ((h_exp + R) * s - h_exp * s);
  };

  if (grid.size() <= options.exhaustive_limit) {
    report.exhaustive = true;
    // largest a(x) - a(y) over pairs with y = x - shift
    const int rows = grid.dimension() == 1 ? 1 : N;
    const std::size_t shifts = static_cast<std::size_t>(N) * rows;
    std::vector<double> spread(shifts, 0.0);
    std::vector<double> dist(shifts, 0.0);
    parallel_for(shifts, [&](std::size_t s) {
      const int d0 = static_cast<int>(s % N);
      const int d1 = static_cast<int>(s / N);
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t x = 0; x < grid.size(); ++x) {
        const int y0 = (grid.axis_index(x, 0) - d0 + N) % N;
        const int y1 = grid.dimension() == 1 ? 0 : (grid.axis_index(x, 1) - d1 + N) % N;
        best = std::max(best, a[x] - a[grid.flat_index(y0, y1)]);
      }
      spread[s] = best;
      dist[s] = std::hypot(grid.axis_distance(d0), grid.dimension() == 1 ? 0.0 : grid.axis_distance(d1));
    });
    for (std::size_t k = 0; k < levels.size(); ++k) {
      double worst = -std::numeric_limits<double>::infinity();
      for (std::size_t s = 0; s < shifts; ++s) worst = std::max(worst, log_ratio(levels[k], spread[s], dist[s]));
      report.per_level[k] = std::exp(worst);
    }
    report.pairs = shifts * grid.size();
  } else {
    report.exhaustive = false;
    std::mt19937_64 rng(options.seed);
    std::vector<double> worst(levels.size(), 0.0);
    for (std::size_t k = 0; k < levels.size(); ++k) worst[k] = log_ratio(levels[k], 0.0, 0.0);
    for (std::size_t t = 0; t < options.pair_budget; ++t) {
      const auto x = std::min(grid.size() - 1, static_cast<std::size_t>(uniform01(rng) * grid.size()));
      const auto y = std::min(grid.size() - 1, static_cast<std::size_t>(uniform01(rng) * grid.size()));
      const double d = grid.distance(x, y);
      for (std::size_t k = 0; k < levels.size(); ++k) {
        worst[k] = std::max(worst[k], log_ratio(levels[k], a[x] - a[y], d));
      }
    }
    for (std::size_t k = 0; k < levels.size(); ++k) report.per_level[k] = std::exp(worst[k]);
    report.pairs = options.pair_budget;
  }
  report.constant = report.per_level.empty() ? 0.0 : *std::max_element(report.per_level.begin(), report.per_level.end());
  return report;
}

EtaMaximalReport verify_eta_maximal(const ExponentField& p, const ExponentField& q, double m_exp,
                                    std::span<const std::vector<GridFunction>> families) {
  const Grid& grid = p.grid();
  require(p.grid() == q.grid(), ErrorKind::invalid_configuration, "exponents live on different grids");
  require(p.min() > 1.0 && q.min() > 1.0, ErrorKind::precondition_violation,
          "maximal estimate needs exponents bounded away from 1");
  require(m_exp > grid.dimension(), ErrorKind::precondition_violation, "decay exponent must exceed the dimension");
  std::size_t depth = 0;
  for (const auto& family : families) depth = std::max(depth, family.size());
  std::vector<std::vector<Complex>> spectra(depth);
  EtaMaximalReport report;
  for (std::size_t v = 0; v < depth; ++v) {
    const EtaKernel k = eta(static_cast<int>(v), m_exp, grid);
    report.young_bound = std::max(report.young_bound, k.grid_mass);
    spectra[v] = k.samples.values();
    fft_forward(grid, spectra[v]);
  }
  report.ratios.assign(families.size(), 0.0);
  parallel_for(families.size(), [&](std::size_t j) {
    const auto& family = families[j];
    std::vector<std::vector<double>> before;
    std::vector<std::vector<double>> after;
    for (std::size_t v = 0; v < family.size(); ++v) {
      require(family[v].grid() == grid, ErrorKind::invalid_configuration, "family member on a different grid");
      before.push_back(family[v].moduli());
      std::vector<Complex> s = family[v].values();
      fft_forward(grid, s);
      for (std::size_t i = 0; i < s.size(); ++i) s[i] *= spectra[v][i] * grid.cell_measure();
      fft_inverse(grid, s);
      std::vector<double> m(s.size());
      for (std::size_t i = 0; i < s.size(); ++i) m[i] = std::abs(s[i]);
      after.push_back(std::move(m));
    }
    const double denominator = mixed_norm(std::span<const std::vector<double>>(before), p, q).value;
    const double numerator = mixed_norm(std::span<const std::vector<double>>(after), p, q).value;
    report.ratios[j] = denominator > 0.0 ? numerator / denominator : 0.0;
  });
  report.max_ratio = report.ratios.empty() ? 0.0 : *std::max_element(report.ratios.begin(), report.ratios.end());
  return report;
}

JensenReport verify_jensen_gamma(const ExponentField& p, double m_exp, const GridFunction& f,
                                 std::span<const int> levels, std::optional<double> gamma_override) {
  const Grid& grid = f.grid();
  require(p.grid() == grid, ErrorKind::invalid_configuration, "exponent and function live on different grids");
  require(p.role() == ExponentRole::integrability, ErrorKind::invalid_configuration, "p must be an exponent");
  const double size = luxemburg_norm(f, p).value + f.max_abs();
  require(size <= 1.0 + 1e-12, ErrorKind::invalid_input,
          "input must satisfy |f|_p + |f|_inf <= 1, got " + std::to_string(size));

  std::vector<double> inverse(p.size());
  for (std::size_t i = 0; i < inverse.size(); ++i) inverse[i] = 1.0 / p[i];
  const ExponentField reciprocal(grid, std::move(inverse), ExponentRole::smoothness, 1.0 / p.limit());
  JensenReport report;
  report.c_log = log_holder_constants(reciprocal).local_constant;
  report.gamma = gamma_override ? *gamma_override : (report.c_log > 0.0 ? std::exp(-2.0 * m_exp / report.c_log) : 1.0);

  const auto m = f.moduli();
  std::vector<double> decay(grid.size());
  for (std::size_t i = 0; i < decay.size(); ++i) decay[i] = std::pow(std::numbers::e + grid.norm(i), -m_exp);

  std::vector<DyadicCube> cubes;
  for (int v : levels) {
    auto level = enumerate_cubes(grid, v);
    cubes.insert(cubes.end(), level.begin(), level.end());
  }
  std::vector<double> margins(cubes.size());
  parallel_for(cubes.size(), [&](std::size_t c) {
    const auto cells = cube_cells(grid, cubes[c]);
    const double count = static_cast<double>(cells.size());
    const double mean_abs = pairwise_sum(cells.size(), [&](std::size_t k) { return m[cells[k]]; }) / count;
    const double mean_pow =
        pairwise_sum(cells.size(), [&](std::size_t k) { return std::pow(m[cells[k]], p[cells[k]]); }) / count;
    const double mean_decay = pairwise_sum(cells.size(), [&](std::size_t k) { return decay[cells[k]]; }) / count;
    const double weight = std::min(std::pow(cubes[c].measure(grid.dimension()), m_exp), 1.0);
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t x : cells) {
      const double lhs = std::pow(report.gamma * mean_abs, p[x]);
      const double rhs = mean_pow + weight * (decay[x] + mean_decay);
      worst = std::min(worst, rhs - lhs);
    }
    margins[c] = worst;
  });
  report.cubes = cubes.size();
  report.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < cubes.size(); ++c) {
    if (margins[c] < 0.0) ++report.negative;
    if (margins[c] < report.worst_margin) {
      report.worst_margin = margins[c];
      report.worst_cube = cubes[c];
    }
  }
  if (cubes.empty()) report.worst_margin = 0.0;
  return report;
}

}  // namespace vexint
