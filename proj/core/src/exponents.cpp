#include "vexint/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "vexint/error.hpp"
#include "vexint/parallel.hpp"

namespace vexint {

namespace {

double plateau_ramp(const PlateauRampRecipe& r, double x, double L) {
  const double a = 0.5 * L;
  const double b = 1.5 * L;
  if (x >= a && x <= b) return r.right;
  if (x < a - r.width || x > b + r.width) return r.left;
  const double t = x < a ? (x - (a - r.width)) / r.width : ((b + r.width) - x) / r.width;
  return r.left + (r.right - r.left) * t;
}

double holder_weight(double distance) { return std::log(std::numbers::e + 1.0 / distance); }

double displacement_oscillation(const Grid& grid, const std::vector<double>& g, int d0, int d1) {
  const int N = grid.points_per_axis();
  double worst = 0.0;
  if (grid.dimension() == 1) {
    for (int i = 0; i < N - d0; ++i) worst = std::max(worst, std::abs(g[i + d0] - g[i]));
    for (int i = N - d0; i < N; ++i) worst = std::max(worst, std::abs(g[i + d0 - N] - g[i]));
    return worst;
  }
  for (int i1 = 0; i1 < N; ++i1) {
    const double* row = g.data() + static_cast<std::size_t>(i1) * N;
    const double* shifted = g.data() + static_cast<std::size_t>((i1 + d1) % N) * N;
    for (int i0 = 0; i0 < N - d0; ++i0) worst = std::max(worst, std::abs(shifted[i0 + d0] - row[i0]));
    for (int i0 = N - d0; i0 < N; ++i0) worst = std::max(worst, std::abs(shifted[i0 + d0 - N] - row[i0]));
  }
  return worst;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

ExponentField::ExponentField(Grid grid, std::vector<double> values, ExponentRole role, std::optional<double> limit)
    : grid_(grid), values_(std::move(values)), role_(role) {
  require(values_.size() == grid_.size(), ErrorKind::invalid_configuration,
          "exponent array length does not match grid size");
  for (double x : values_) require(std::isfinite(x), ErrorKind::invalid_exponent, "non-finite exponent sample");
  const auto [lo, hi] = std::minmax_element(values_.begin(), values_.end());
  min_ = *lo;
  max_ = *hi;
  if (role_ == ExponentRole::integrability) {
    require(min_ >= 1.0, ErrorKind::invalid_exponent,
            "integrability exponent dips below 1 (min " + std::to_string(min_) + ")");
  }
  limit_ = limit.value_or(values_.front());
  require(std::isfinite(limit_), ErrorKind::invalid_exponent, "non-finite limit value");
}

ExponentField build_exponent(const ExponentRecipe& recipe, const Grid& grid, ExponentRole role) {
  std::vector<double> values(grid.size());
  const double L = grid.half_extent();
  std::visit(
      [&](const auto& r) {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, ConstantRecipe>) {
          std::fill(values.begin(), values.end(), r.value);
        } else if constexpr (std::is_same_v<R, SineRecipe>) {
          for (std::size_t i = 0; i < values.size(); ++i) {
            const double x = grid.coordinate(i, 0);
            values[i] = r.base + r.amplitude * std::sin(2.0 * std::numbers::pi * r.frequency * x / (2.0 * L));
          }
        } else {
          require(r.width > 0.0 && r.width <= 0.5 * L, ErrorKind::invalid_configuration,
                  "plateau-ramp width must lie in (0, L/2]");
          for (std::size_t i = 0; i < values.size(); ++i) values[i] = plateau_ramp(r, grid.coordinate(i, 0), L);
        }
      },
      recipe);
  return ExponentField(grid, std::move(values), role);
}

ExponentField constant_field(const Grid& grid, double value, ExponentRole role) {
  return build_exponent(ConstantRecipe{value}, grid, role);
}

LogHolderReport log_holder_constants(const ExponentField& field, const LogHolderOptions& options) {
  const Grid& grid = field.grid();
  const auto& g = field.values();
  const int N = grid.points_per_axis();
  LogHolderReport report;
  report.limit = field.limit();

  for (std::size_t i = 0; i < g.size(); ++i) {
    report.decay_constant = std::max(report.decay_constant,
                                     std::abs(g[i] - report.limit) * std::log(std::numbers::e + grid.distance_to_center(i)));
  }

  if (field.is_constant()) {
    report.local_constant = 0.0;
    report.pairs = 0;
  } else if (grid.size() <= options.exhaustive_limit) {
    std::vector<std::pair<int, int>> shifts;
    const int rows = grid.dimension() == 1 ? 1 : N;
    for (int d1 = 0; d1 < rows; ++d1) {
      for (int d0 = 0; d0 < N; ++d0) {
        if (d0 == 0 && d1 == 0) continue;
        const int n0 = (N - d0) % N;
        const int n1 = grid.dimension() == 1 ? 0 : (N - d1) % N;
        if (std::make_pair(d1, d0) > std::make_pair(n1, n0)) continue;
        shifts.emplace_back(d0, d1);
      }
    }
    std::vector<double> best(shifts.size());
    parallel_for(shifts.size(), [&](std::size_t s) {
      const auto [d0, d1] = shifts[s];
      const double dist = std::hypot(grid.axis_distance(d0), grid.dimension() == 1 ? 0.0 : grid.axis_distance(d1));
      best[s] = holder_weight(dist) * displacement_oscillation(grid, g, d0, d1);
    });
    report.local_constant = best.empty() ? 0.0 : *std::max_element(best.begin(), best.end());
    report.pairs = shifts.size() * grid.size();
    report.exhaustive = true;
  } else {
    double worst = 0.0;
    std::size_t pairs = 0;
    const int r = std::min(options.near_radius, N / 2);
    const int r1 = grid.dimension() == 1 ? 0 : r;
    for (int d1 = -r1; d1 <= r1; ++d1) {
      for (int d0 = -r; d0 <= r; ++d0) {
        if (d0 == 0 && d1 == 0) continue;
        const double dist = std::hypot(grid.axis_distance(d0), grid.axis_distance(d1));
        const int s0 = (d0 + N) % N;
        const int s1 = grid.dimension() == 1 ? 0 : (d1 + N) % N;
        worst = std::max(worst, holder_weight(dist) * displacement_oscillation(grid, g, s0, s1));
        pairs += grid.size();
      }
    }
    std::mt19937_64 rng(options.seed);
    const std::size_t budget = options.sampled_pairs;
    for (std::size_t k = 0; k < budget; ++k) {
      const auto x = std::min(grid.size() - 1,
                              static_cast<std::size_t>((static_cast<double>(k) + uniform01(rng)) * grid.size() / budget));
      const auto y = std::min(grid.size() - 1, static_cast<std::size_t>(uniform01(rng) * grid.size()));
      if (x == y) continue;
      worst = std::max(worst, holder_weight(grid.distance(x, y)) * std::abs(g[x] - g[y]));
      ++pairs;
    }
    report.local_constant = worst;
    report.pairs = pairs;
    report.exhaustive = false;
  }
  if (options.budget) {
    report.within_budget = report.local_constant <= *options.budget && report.decay_constant <= *options.budget;
  }
  return report;
}

ExponentField conjugate(const ExponentField& field) {
  require(field.role() == ExponentRole::integrability, ErrorKind::invalid_configuration,
          "conjugate needs an integrability exponent");
  require(field.min() > 1.0, ErrorKind::conjugate_undefined, "exponent reaches 1, conjugate would be infinite");
  std::vector<double> values(field.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = field[i] / (field[i] - 1.0);
  const double limit = field.limit() > 1.0 ? field.limit() / (field.limit() - 1.0) : values.front();
  return ExponentField(field.grid(), std::move(values), ExponentRole::integrability, limit);
}

ExponentField interpolate_exponents(const ExponentField& a0, const ExponentField& a1, double theta,
                                    InterpolationMode mode) {
  require(a0.grid() == a1.grid(), ErrorKind::invalid_configuration, "exponent fields live on different grids");
  require(theta > 0.0 && theta < 1.0, ErrorKind::invalid_configuration, "theta must lie in (0, 1)");
  const bool harmonic = mode == InterpolationMode::harmonic;
  const ExponentRole role = harmonic ? ExponentRole::integrability : ExponentRole::smoothness;
  require(a0.role() == role && a1.role() == role, ErrorKind::invalid_configuration,
          harmonic ? "harmonic interpolation needs integrability exponents"
                   : "affine interpolation needs smoothness fields");
  auto combine = [&](double x0, double x1) {
    if (x0 == x1) return x0;
    return harmonic ? 1.0 / ((1.0 - theta) / x0 + theta / x1) : (1.0 - theta) * x0 + theta * x1;
  };
  std::vector<double> values(a0.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = combine(a0[i], a1[i]);
  return ExponentField(a0.grid(), std::move(values), role, combine(a0.limit(), a1.limit()));
}

}  // namespace vexint
