#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "vexint/grid.hpp"

namespace vexint {

enum class ExponentRole { integrability, smoothness };

struct ConstantRecipe {
  double value = 2.0;
};

/// base + amplitude * sin(2 pi frequency x_1 / (2L)).
struct SineRecipe {
  double base = 3.0;
  double amplitude = 0.5;
  double frequency = 1.0;
};

/// Takes `left` near the box boundary and `right` on the plateau [L/2, 3L/2] along x_1,
/// joined by linear ramps of the given width.
struct PlateauRampRecipe {
  double left = 2.0;
  double right = 3.0;
  double width = 0.5;
};

using ExponentRecipe = std::variant<ConstantRecipe, SineRecipe, PlateauRampRecipe>;

/// Sampled exponent or smoothness field.
class ExponentField {
 public:
  ExponentField(Grid grid, std::vector<double> values, ExponentRole role, std::optional<double> limit = {});

  const Grid& grid() const noexcept { return grid_; }
  const std::vector<double>& values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }
  ExponentRole role() const noexcept { return role_; }
  double min() const noexcept { return min_; }
  double max() const noexcept { return max_; }
  bool is_constant() const noexcept { return min_ == max_; }
  /// Declared value at infinity; defaults to the sample at the origin (boundary belt).
  double limit() const noexcept { return limit_; }

 private:
  Grid grid_;
  std::vector<double> values_;
  ExponentRole role_;
  double min_ = 0.0;
  double max_ = 0.0;
  double limit_ = 0.0;
};

ExponentField build_exponent(const ExponentRecipe& recipe, const Grid& grid,
                             ExponentRole role = ExponentRole::integrability);
ExponentField constant_field(const Grid& grid, double value, ExponentRole role = ExponentRole::integrability);

struct LogHolderOptions {
  /// Above this many grid points, pairs are sampled instead of enumerated.
  std::size_t exhaustive_limit = std::size_t{1} << 16;
  std::size_t sampled_pairs = std::size_t{1} << 20;
  /// Pairs with every axis offset below this radius are always enumerated when sampling.
  int near_radius = 8;
  std::uint64_t seed = 0x5eed;
  std::optional<double> budget;
};

struct LogHolderReport {
  double local_constant = 0.0;
  double decay_constant = 0.0;
  double limit = 0.0;
  bool exhaustive = true;
  std::size_t pairs = 0;
  bool within_budget = true;
};

LogHolderReport log_holder_constants(const ExponentField& field, const LogHolderOptions& options = {});

ExponentField conjugate(const ExponentField& field);

enum class InterpolationMode { harmonic, affine };

ExponentField interpolate_exponents(const ExponentField& a0, const ExponentField& a1, double theta,
                                    InterpolationMode mode);

}  // namespace vexint
