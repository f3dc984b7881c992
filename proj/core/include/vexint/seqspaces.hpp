#pragma once

#include <map>
#include <span>
#include <vector>

#include "vexint/exponents.hpp"
#include "vexint/grid.hpp"
#include "vexint/lebesgue.hpp"

namespace vexint {

/// Finitely supported sequence (v, m) -> lambda_{v,m} on the cubes of a grid.
class DyadicCoefficients {
 public:
  using Map = std::map<DyadicCube, Complex>;

  DyadicCoefficients(Grid grid, int max_level);

  const Grid& grid() const noexcept { return grid_; }
  int max_level() const noexcept { return max_level_; }

  void set(const DyadicCube& cube, Complex value);
  Complex get(const DyadicCube& cube) const;
  bool contains(const DyadicCube& cube) const { return entries_.count(cube) != 0; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const Map& entries() const noexcept { return entries_; }
  Map::const_iterator begin() const noexcept { return entries_.begin(); }
  Map::const_iterator end() const noexcept { return entries_.end(); }

  /// Cubes carrying a nonzero value.
  std::vector<DyadicCube> support() const;
  double max_abs() const noexcept;
  DyadicCoefficients scaled(Complex factor) const;

 private:
  Grid grid_;
  int max_level_;
  Map entries_;
};

/// Level fields F_v(x) = 2^{v(a(x) + n/2)} |lambda_{v,m}| on the cube holding x, v = 0..V.
std::vector<std::vector<double>> level_fields(const DyadicCoefficients& lambda, const ExponentField& alpha);

NormResult f_norm(const DyadicCoefficients& lambda, const ExponentField& alpha, const ExponentField& p,
                  const ExponentField& q, double tol = default_norm_tolerance);

double f_infty_norm(const DyadicCoefficients& lambda, const ExponentField& alpha, double q);

/// max over supported (j, m) and x in Q_{j,m} of |lambda| 2^{j(a(x) - n/p(x) + n/2)} / |lambda|_f.
double coefficient_bound_check(const DyadicCoefficients& lambda, const ExponentField& alpha, const ExponentField& p,
                               const ExponentField& q);

/// Per-cube grid subsets E_Q with |E_Q| > |Q|/2, or |E_Q| >= |Q|/2 when not strict.
struct SubsetSelection {
  std::map<DyadicCube, std::vector<std::size_t>> cells;
  bool strict = true;

  void validate(const Grid& grid) const;
};

double f_infty_subset_norm(const DyadicCoefficients& lambda, const ExponentField& alpha, double q,
                           const SubsetSelection& selection);

SubsetSelection full_selection(const DyadicCoefficients& lambda);
/// Keeps in each cube the floor(cells/2)+1 cells where the full sum is smallest, ties by cell index.
SubsetSelection greedy_selection(const DyadicCoefficients& lambda, const ExponentField& alpha, double q);
/// Exact infimum over admissible selections; minimal masks suffice because the value is monotone in each E_Q.
double brute_force_subset_infimum(const DyadicCoefficients& lambda, const ExponentField& alpha, double q,
                                  std::size_t max_combinations = std::size_t{1} << 20);

struct SubsetEquivalenceReport {
  double direct = 0.0;
  double subset = 0.0;
  double ratio = 1.0;
  bool brute_force = false;
};

SubsetEquivalenceReport subset_equivalence_check(const DyadicCoefficients& lambda, const ExponentField& alpha, double q);

}  // namespace vexint
