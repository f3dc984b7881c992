#include "vexint/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "vexint/error.hpp"
#include "vexint/parallel.hpp"

namespace vexint {

namespace {

bool is_power_of_two(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) return false;
  int exponent = 0;
  return std::frexp(x, &exponent) == 0.5;
}

int log2_exact(double x) {
  int exponent = 0;
  std::frexp(x, &exponent);
  return exponent - 1;
}

}  // namespace

Grid::Grid(int dimension, double half_extent, int points_per_axis)
    : dim_(dimension), half_extent_(half_extent), points_(points_per_axis) {
  require(dim_ == 1 || dim_ == 2, ErrorKind::invalid_configuration,
          "dimension must be 1 or 2, got " + std::to_string(dim_));
  require(points_ >= 16 && is_power_of_two(points_), ErrorKind::invalid_configuration,
          "points per axis must be a power of two >= 16, got " + std::to_string(points_));
  require(is_power_of_two(half_extent_), ErrorKind::invalid_configuration,
          "half extent must be a power of two, got " + std::to_string(half_extent_));
  require(half_extent_ >= 0.5, ErrorKind::invalid_configuration, "box must contain a unit cube");
  spacing_ = 2.0 * half_extent_ / points_;
  const double per_unit = points_ / (2.0 * half_extent_);
  require(per_unit >= 4.0, ErrorKind::invalid_configuration,
          "grid too coarse: unit cubes need at least 4 points per axis");
  max_level_ = log2_exact(per_unit) - 2;
  size_ = dim_ == 1 ? static_cast<std::size_t>(points_)
                    : static_cast<std::size_t>(points_) * static_cast<std::size_t>(points_);
  cell_measure_ = std::pow(spacing_, dim_);
}

Grid make_grid(int dimension, double half_extent, int points_per_axis) {
  return Grid(dimension, half_extent, points_per_axis);
}

double Grid::axis_distance(long offset) const noexcept {
  long r = offset % points_;
  if (r < 0) r += points_;
  return static_cast<double>(std::min<long>(r, points_ - r)) * spacing_;
}

double Grid::distance(std::size_t a, std::size_t b) const noexcept {
  const double d0 = axis_distance(static_cast<long>(axis_index(a, 0)) - axis_index(b, 0));
  if (dim_ == 1) return d0;
  const double d1 = axis_distance(static_cast<long>(axis_index(a, 1)) - axis_index(b, 1));
  return std::hypot(d0, d1);
}

double Grid::norm(std::size_t flat) const noexcept {
  const double d0 = axis_distance(axis_index(flat, 0));
  if (dim_ == 1) return d0;
  return std::hypot(d0, axis_distance(axis_index(flat, 1)));
}

double Grid::distance_to_center(std::size_t flat) const noexcept {
  const long half = points_ / 2;
  const double d0 = axis_distance(axis_index(flat, 0) - half);
  if (dim_ == 1) return d0;
  return std::hypot(d0, axis_distance(axis_index(flat, 1) - half));
}

double Grid::frequency(int k) const noexcept {
  const int wrapped = k >= points_ / 2 ? k - points_ : k;
  return std::numbers::pi * wrapped / half_extent_;
}

double Grid::frequency_norm(std::size_t flat) const noexcept {
  const double x0 = frequency(axis_index(flat, 0));
  if (dim_ == 1) return std::abs(x0);
  return std::hypot(x0, frequency(axis_index(flat, 1)));
}

double Grid::nyquist() const noexcept { return std::numbers::pi / spacing_; }

std::int64_t Grid::cubes_per_axis(int level) const {
  return static_cast<std::int64_t>(std::ldexp(box_length(), level));
}

int Grid::cells_per_cube_axis(int level) const {
  return static_cast<int>(std::ldexp(1.0 / spacing_, -level));
}

double DyadicCube::side() const noexcept { return std::ldexp(1.0, -level); }

double DyadicCube::measure(int dimension) const noexcept { return std::ldexp(1.0, -level * dimension); }

void validate_cube(const Grid& grid, const DyadicCube& cube) {
  require(cube.level >= 0, ErrorKind::invalid_configuration, "cube level must be non-negative");
  require(cube.level <= grid.max_level(), ErrorKind::resolution_exceeded,
          "level " + std::to_string(cube.level) + " exceeds finest level " + std::to_string(grid.max_level()));
  const std::int64_t count = grid.cubes_per_axis(cube.level);
  for (int axis = 0; axis < 2; ++axis) {
    const std::int64_t m = cube.index[axis];
    if (axis >= grid.dimension()) {
      require(m == 0, ErrorKind::invalid_configuration, "unused cube index must be zero");
      continue;
    }
    require(m >= 0 && m < count, ErrorKind::invalid_configuration,
            "cube index " + std::to_string(m) + " outside the box at level " + std::to_string(cube.level));
  }
}

std::vector<DyadicCube> enumerate_cubes(const Grid& grid, int level) {
  require(level >= 0, ErrorKind::invalid_configuration, "cube level must be non-negative");
  require(level <= grid.max_level(), ErrorKind::resolution_exceeded,
          "level " + std::to_string(level) + " exceeds finest level " + std::to_string(grid.max_level()));
  const std::size_t count = cube_count(grid, level);
  std::vector<DyadicCube> cubes;
  cubes.reserve(count);
  for (std::size_t r = 0; r < count; ++r) cubes.push_back(cube_from_rank(grid, level, r));
  return cubes;
}

std::size_t cube_count(const Grid& grid, int level) {
  const auto per_axis = static_cast<std::size_t>(grid.cubes_per_axis(level));
  return grid.dimension() == 1 ? per_axis : per_axis * per_axis;
}

std::size_t cube_rank(const Grid& grid, const DyadicCube& cube) {
  const auto per_axis = static_cast<std::size_t>(grid.cubes_per_axis(cube.level));
  return static_cast<std::size_t>(cube.index[0]) + per_axis * static_cast<std::size_t>(cube.index[1]);
}

DyadicCube cube_from_rank(const Grid& grid, int level, std::size_t rank) {
  const auto per_axis = static_cast<std::size_t>(grid.cubes_per_axis(level));
  DyadicCube cube;
  cube.level = level;
  cube.index[0] = static_cast<std::int64_t>(rank % per_axis);
  cube.index[1] = grid.dimension() == 1 ? 0 : static_cast<std::int64_t>(rank / per_axis);
  return cube;
}

std::vector<std::size_t> cube_cells(const Grid& grid, const DyadicCube& cube) {
  validate_cube(grid, cube);
  const int c = grid.cells_per_cube_axis(cube.level);
  const int i0 = static_cast<int>(cube.index[0]) * c;
  std::vector<std::size_t> cells;
  if (grid.dimension() == 1) {
    cells.reserve(c);
    for (int a = 0; a < c; ++a) cells.push_back(grid.flat_index(i0 + a));
    return cells;
  }
  const int i1 = static_cast<int>(cube.index[1]) * c;
  cells.reserve(static_cast<std::size_t>(c) * c);
  for (int b = 0; b < c; ++b)
    for (int a = 0; a < c; ++a) cells.push_back(grid.flat_index(i0 + a, i1 + b));
  return cells;
}

std::size_t cube_corner(const Grid& grid, const DyadicCube& cube) {
  validate_cube(grid, cube);
  const int c = grid.cells_per_cube_axis(cube.level);
  return grid.flat_index(static_cast<int>(cube.index[0]) * c,
                         grid.dimension() == 1 ? 0 : static_cast<int>(cube.index[1]) * c);
}

DyadicCube cube_of(const Grid& grid, int level, std::size_t flat) {
  require(level >= 0 && level <= grid.max_level(), ErrorKind::resolution_exceeded,
          "level " + std::to_string(level) + " not resolved");
  const int c = grid.cells_per_cube_axis(level);
  DyadicCube cube;
  cube.level = level;
  cube.index[0] = grid.axis_index(flat, 0) / c;
  cube.index[1] = grid.dimension() == 1 ? 0 : grid.axis_index(flat, 1) / c;
  return cube;
}

bool cube_contains(const DyadicCube& outer, const DyadicCube& inner) noexcept {
  if (inner.level < outer.level) return false;
  const int shift = inner.level - outer.level;
  return (inner.index[0] >> shift) == outer.index[0] && (inner.index[1] >> shift) == outer.index[1];
}

GridFunction::GridFunction(Grid grid, std::vector<Complex> values) : grid_(grid), values_(std::move(values)) {
  require(values_.size() == grid_.size(), ErrorKind::invalid_configuration,
          "value array length " + std::to_string(values_.size()) + " does not match grid size " +
              std::to_string(grid_.size()));
  for (std::size_t i = 0; i < values_.size(); ++i) {
    require(std::isfinite(values_[i].real()) && std::isfinite(values_[i].imag()), ErrorKind::invalid_input,
            "non-finite sample at index " + std::to_string(i));
  }
}

GridFunction GridFunction::zeros(const Grid& grid) { return constant(grid, Complex(0.0)); }

GridFunction GridFunction::constant(const Grid& grid, Complex value) {
  return GridFunction(grid, std::vector<Complex>(grid.size(), value));
}

GridFunction GridFunction::from_real(const Grid& grid, std::span<const double> values) {
  return GridFunction(grid, std::vector<Complex>(values.begin(), values.end()));
}

std::vector<double> GridFunction::moduli() const {
  std::vector<double> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(), [](const Complex& z) { return std::abs(z); });
  return out;
}

double GridFunction::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& z : values_) m = std::max(m, std::abs(z));
  return m;
}

Complex GridFunction::integral() const {
  const double re = pairwise_sum(values_.size(), [&](std::size_t i) { return values_[i].real(); });
  const double im = pairwise_sum(values_.size(), [&](std::size_t i) { return values_[i].imag(); });
  return Complex(re, im) * grid_.cell_measure();
}

GridFunction GridFunction::scaled(Complex factor) const {
  std::vector<Complex> out(values_);
  for (auto& z : out) z *= factor;
  return GridFunction(grid_, std::move(out));
}

GridFunction GridFunction::operator+(const GridFunction& other) const {
  require(grid_ == other.grid_, ErrorKind::invalid_configuration, "grid mismatch");
  std::vector<Complex> out(values_);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += other.values_[i];
  return GridFunction(grid_, std::move(out));
}

GridFunction GridFunction::operator-(const GridFunction& other) const {
  require(grid_ == other.grid_, ErrorKind::invalid_configuration, "grid mismatch");
  std::vector<Complex> out(values_);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= other.values_[i];
  return GridFunction(grid_, std::move(out));
}

GridFunction cube_mask(const DyadicCube& cube, const Grid& grid) {
  std::vector<Complex> values(grid.size(), Complex(0.0));
  for (std::size_t i : cube_cells(grid, cube)) values[i] = 1.0;
  return GridFunction(grid, std::move(values));
}

}  // namespace vexint
