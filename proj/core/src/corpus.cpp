#include "vexint/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "vexint/error.hpp"

namespace vexint {

std::size_t Rng::index(std::size_t count) {
  require(count > 0, ErrorKind::invalid_input, "empty range");
  return std::min(count - 1, static_cast<std::size_t>(uniform() * static_cast<double>(count)));
}

double Rng::log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }

Complex Rng::unit_phase() { return std::polar(1.0, 2.0 * std::numbers::pi * uniform()); }

DyadicCoefficients random_coefficients(const Grid& grid, int max_level, std::size_t count, Rng& rng, double lo,
                                       double hi) {
  require(max_level >= 0 && max_level <= grid.max_level(), ErrorKind::resolution_exceeded,
          "coefficient level beyond the grid");
  std::vector<std::size_t> offsets{0};
  for (int v = 0; v <= max_level; ++v) offsets.push_back(offsets.back() + cube_count(grid, v));
  const std::size_t total = offsets.back();
  DyadicCoefficients lambda(grid, max_level);
  std::set<std::size_t> chosen;
  const std::size_t target = std::min(count, total);
  while (chosen.size() < target) {
    const std::size_t k = rng.index(total);
    const double modulus = rng.log_uniform(lo, hi);
    const Complex phase = rng.unit_phase();
    if (!chosen.insert(k).second) continue;
    const auto level = static_cast<int>(std::upper_bound(offsets.begin(), offsets.end(), k) - offsets.begin()) - 1;
    lambda.set(cube_from_rank(grid, level, k - offsets[static_cast<std::size_t>(level)]), modulus * phase);
  }
  return lambda;
}

DyadicCoefficients rehost_coefficients(const DyadicCoefficients& lambda, const Grid& grid, int max_level) {
  require(grid.dimension() == lambda.grid().dimension() && grid.half_extent() == lambda.grid().half_extent(),
          ErrorKind::invalid_configuration, "rehosting needs the same box");
  DyadicCoefficients out(grid, max_level);
  for (const auto& [cube, value] : lambda) out.set(cube, value);
  return out;
}

GridFunction random_band_limited(const Grid& grid, double band, std::size_t terms, Rng& rng) {
  const double unit = std::numbers::pi / grid.half_extent();
  const int kmax = static_cast<int>(std::floor(band / unit));
  require(kmax >= 0, ErrorKind::invalid_input, "negative band");
  std::vector<Complex> values(grid.size(), Complex(0.0));
  for (std::size_t t = 0; t < terms; ++t) {
    int k0 = 0;
    int k1 = 0;
    do {
      k0 = static_cast<int>(rng.index(static_cast<std::size_t>(2 * kmax + 1))) - kmax;
      k1 = grid.dimension() == 2 ? static_cast<int>(rng.index(static_cast<std::size_t>(2 * kmax + 1))) - kmax : 0;
    } while (std::hypot(k0, k1) > static_cast<double>(kmax));
    const Complex amplitude = rng.uniform(0.1, 1.0) * rng.unit_phase();
    for (std::size_t x = 0; x < values.size(); ++x) {
      double phase = unit * k0 * grid.coordinate(x, 0);
      if (grid.dimension() == 2) phase += unit * k1 * grid.coordinate(x, 1);
      values[x] += amplitude * std::polar(1.0, phase);
    }
  }
  return GridFunction(grid, std::move(values));
}

GridFunction random_piecewise_constant(const Grid& grid, int level, Rng& rng) {
  std::vector<Complex> values(grid.size(), Complex(0.0));
  for (const auto& cube : enumerate_cubes(grid, level)) {
    const double modulus = rng.uniform() < 0.25 ? 0.0 : rng.uniform();
    const Complex value = modulus * rng.unit_phase();
    for (std::size_t x : cube_cells(grid, cube)) values[x] = value;
  }
  return GridFunction(grid, std::move(values));
}

SimpleFunction random_simple_function(const Grid& grid, int level, std::size_t regions, Rng& rng) {
  require(regions > 0, ErrorKind::invalid_input, "need at least one region");
  const auto cubes = enumerate_cubes(grid, level);
  std::vector<std::vector<std::size_t>> sets(regions);
  for (const auto& cube : cubes) {
    const std::size_t slot = rng.index(regions + 1);
    if (slot == regions) continue;
    auto cells = cube_cells(grid, cube);
    sets[slot].insert(sets[slot].end(), cells.begin(), cells.end());
  }
  std::vector<std::vector<std::size_t>> kept;
  std::vector<Complex> values;
  for (auto& s : sets) {
    if (s.empty()) continue;
    kept.push_back(std::move(s));
    values.push_back(rng.log_uniform(0.1, 10.0) * rng.unit_phase());
  }
  if (kept.empty()) {
    kept.push_back(cube_cells(grid, cubes.front()));
    values.push_back(1.0);
  }
  return make_simple(grid, std::move(values), std::move(kept));
}

ExponentRecipe random_recipe(const Grid& grid, Rng& rng, double lo, double hi) {
  switch (rng.index(3)) {
    case 0:
      return ConstantRecipe{rng.uniform(lo, hi)};
    case 1: {
      const double amplitude = rng.uniform(0.05, 0.5 * (hi - lo) * 0.9);
      return SineRecipe{rng.uniform(lo + amplitude, hi - amplitude), amplitude, static_cast<double>(1 + rng.index(3))};
    }
    default:
      return PlateauRampRecipe{rng.uniform(lo, hi), rng.uniform(lo, hi), rng.uniform(0.25, 0.5) * grid.half_extent()};
  }
}

}  // namespace vexint
