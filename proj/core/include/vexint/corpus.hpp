#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "vexint/exponents.hpp"
#include "vexint/grid.hpp"
#include "vexint/interp.hpp"
#include "vexint/seqspaces.hpp"

namespace vexint {

/// Seeded generator with platform-independent uniform draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, count).
  std::size_t index(std::size_t count);
  /// exp of a uniform draw on [log lo, log hi).
  double log_uniform(double lo, double hi);
  Complex unit_phase();
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Up to `count` distinct cubes drawn uniformly from all cubes of levels 0..max_level, with
/// log-uniform moduli in [1e-3, 1e3] and uniform phases.
DyadicCoefficients random_coefficients(const Grid& grid, int max_level, std::size_t count, Rng& rng,
                                       double lo = 1e-3, double hi = 1e3);

/// Same cubes and values on another grid with the same box.
DyadicCoefficients rehost_coefficients(const DyadicCoefficients& lambda, const Grid& grid, int max_level);

/// Sum of `terms` random complex exponentials with integer wavenumbers and |xi| <= band.
GridFunction random_band_limited(const Grid& grid, double band, std::size_t terms, Rng& rng);

/// Constant on each cube of the given level, moduli uniform in [0, 1], about a quarter of the cubes zero.
GridFunction random_piecewise_constant(const Grid& grid, int level, Rng& rng);

/// Up to `regions` disjoint regions, each a union of cubes of the given level, with nonzero complex values.
SimpleFunction random_simple_function(const Grid& grid, int level, std::size_t regions, Rng& rng);

/// Constant, sine or plateau recipe with values inside [lo, hi].
ExponentRecipe random_recipe(const Grid& grid, Rng& rng, double lo = 1.2, double hi = 4.0);

}  // namespace vexint
