#pragma once

#include <array>
#include <complex>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace vexint {

using Complex = std::complex<double>;

/// Uniform periodic grid on the box [0, 2L)^n.
/// Flat indices run with axis 0 fastest: flat = i0 + N * i1.
class Grid {
 public:
  Grid(int dimension, double half_extent, int points_per_axis);

  int dimension() const noexcept { return dim_; }
  double half_extent() const noexcept { return half_extent_; }
  double box_length() const noexcept { return 2.0 * half_extent_; }
  int points_per_axis() const noexcept { return points_; }
  double spacing() const noexcept { return spacing_; }
  /// Finest dyadic level whose cubes still hold at least 4 grid points per axis.
  int max_level() const noexcept { return max_level_; }
  std::size_t size() const noexcept { return size_; }
  double cell_measure() const noexcept { return cell_measure_; }

  int axis_index(std::size_t flat, int axis) const noexcept {
    return axis == 0 ? static_cast<int>(flat % points_) : static_cast<int>(flat / points_);
  }
  std::size_t flat_index(int i0, int i1 = 0) const noexcept {
    return static_cast<std::size_t>(i0) + static_cast<std::size_t>(points_) * static_cast<std::size_t>(i1);
  }
  double coordinate(std::size_t flat, int axis) const noexcept { return axis_index(flat, axis) * spacing_; }

  /// Periodic distance along one axis for an index offset.
  double axis_distance(long offset) const noexcept;
  /// Periodic Euclidean distance between two grid points.
  double distance(std::size_t a, std::size_t b) const noexcept;
  /// Periodic distance from a grid point to the origin.
  double norm(std::size_t flat) const noexcept;
  /// Periodic distance from a grid point to the box center (L, ..., L).
  double distance_to_center(std::size_t flat) const noexcept;

  /// Angular frequency of a DFT index along one axis, wrapped to [-N/2, N/2).
  double frequency(int k) const noexcept;
  /// Euclidean length of the angular frequency vector at a flat DFT index.
  double frequency_norm(std::size_t flat) const noexcept;
  double nyquist() const noexcept;

  std::int64_t cubes_per_axis(int level) const;
  int cells_per_cube_axis(int level) const;

  friend bool operator==(const Grid& a, const Grid& b) noexcept {
    return a.dim_ == b.dim_ && a.half_extent_ == b.half_extent_ && a.points_ == b.points_;
  }

 private:
  int dim_;
  double half_extent_;
  int points_;
  double spacing_;
  int max_level_;
  std::size_t size_;
  double cell_measure_;
};

Grid make_grid(int dimension, double half_extent, int points_per_axis);

/// Dyadic cube Q_{v,m} = prod_i [2^{-v} m_i, 2^{-v}(m_i + 1)).
struct DyadicCube {
  int level = 0;
  std::array<std::int64_t, 2> index{0, 0};

  double side() const noexcept;
  double measure(int dimension) const noexcept;
  double corner(int axis) const noexcept { return side() * static_cast<double>(index[axis]); }

  friend auto operator<=>(const DyadicCube&, const DyadicCube&) = default;
};

/// Throws unless the cube lies in the box and is resolved by the grid.
void validate_cube(const Grid& grid, const DyadicCube& cube);
std::vector<DyadicCube> enumerate_cubes(const Grid& grid, int level);
/// Flat indices of the grid points in a cube, axis 0 fastest.
std::vector<std::size_t> cube_cells(const Grid& grid, const DyadicCube& cube);
std::size_t cube_corner(const Grid& grid, const DyadicCube& cube);
/// The level-v cube containing a grid point.
DyadicCube cube_of(const Grid& grid, int level, std::size_t flat);
/// Position of a cube among all cubes of its level (dense numbering).
std::size_t cube_rank(const Grid& grid, const DyadicCube& cube);
DyadicCube cube_from_rank(const Grid& grid, int level, std::size_t rank);
std::size_t cube_count(const Grid& grid, int level);
bool cube_contains(const DyadicCube& outer, const DyadicCube& inner) noexcept;

/// Complex samples on a grid; every entry is finite.
class GridFunction {
 public:
  GridFunction(Grid grid, std::vector<Complex> values);

  static GridFunction zeros(const Grid& grid);
  static GridFunction constant(const Grid& grid, Complex value);
  static GridFunction from_real(const Grid& grid, std::span<const double> values);

  const Grid& grid() const noexcept { return grid_; }
  const std::vector<Complex>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  const Complex& operator[](std::size_t i) const noexcept { return values_[i]; }

  std::vector<double> moduli() const;
  double max_abs() const noexcept;
  /// Quadrature integral sum * h^n.
  Complex integral() const;

  GridFunction scaled(Complex factor) const;
  GridFunction operator+(const GridFunction& other) const;
  GridFunction operator-(const GridFunction& other) const;

 private:
  Grid grid_;
  std::vector<Complex> values_;
};

GridFunction cube_mask(const DyadicCube& cube, const Grid& grid);

}  // namespace vexint
