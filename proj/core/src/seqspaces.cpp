#include "vexint/seqspaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "vexint/error.hpp"
#include "vexint/parallel.hpp"

namespace vexint {

namespace {

void check_fields(const DyadicCoefficients& lambda, const ExponentField& field) {
  require(lambda.grid() == field.grid(), ErrorKind::invalid_configuration,
          "coefficients and field live on different grids");
}

std::vector<double> level_moduli(const DyadicCoefficients& lambda, int level) {
  std::vector<double> dense(cube_count(lambda.grid(), level), 0.0);
  const DyadicCube first{level, {0, 0}};
  for (auto it = lambda.entries().lower_bound(first); it != lambda.end() && it->first.level == level; ++it) {
    dense[cube_rank(lambda.grid(), it->first)] = std::abs(it->second);
  }
  return dense;
}

std::size_t rank_of_point(const Grid& grid, int level, std::size_t x) {
  const int c = grid.cells_per_cube_axis(level);
  const auto per_axis = static_cast<std::size_t>(grid.cubes_per_axis(level));
  const std::size_t r0 = static_cast<std::size_t>(grid.axis_index(x, 0) / c);
  if (grid.dimension() == 1) return r0;
  return r0 + per_axis * static_cast<std::size_t>(grid.axis_index(x, 1) / c);
}

std::vector<int> populated_levels(const DyadicCoefficients& lambda) {
  std::vector<int> levels;
  for (const auto& [cube, value] : lambda) {
    if (value != Complex(0.0) && (levels.empty() || levels.back() != cube.level)) levels.push_back(cube.level);
  }
  return levels;
}

/// Pointwise sum over cubes of 2^{v(a(x)+n/2)q}|lambda|^q restricted to the given masks.
std::vector<double> subset_power_sum(const DyadicCoefficients& lambda, const ExponentField& alpha, double q,
                                     const SubsetSelection& selection) {
  const Grid& grid = lambda.grid();
  const double half_n = 0.5 * grid.dimension();
  std::vector<double> s(grid.size(), 0.0);
  for (const auto& [cube, cells] : selection.cells) {
    const double modulus = std::abs(lambda.get(cube));
    if (modulus == 0.0) continue;
    for (std::size_t x : cells) s[x] += std::pow(std::exp2(cube.level * (alpha[x] + half_n)) * modulus, q);
  }
  return s;
}

}  // namespace

DyadicCoefficients::DyadicCoefficients(Grid grid, int max_level) : grid_(grid), max_level_(max_level) {
  require(max_level_ >= 0, ErrorKind::invalid_configuration, "max level must be non-negative");
  require(max_level_ <= grid_.max_level(), ErrorKind::resolution_exceeded,
          "max level " + std::to_string(max_level_) + " exceeds grid resolution " + std::to_string(grid_.max_level()));
}

void DyadicCoefficients::set(const DyadicCube& cube, Complex value) {
  validate_cube(grid_, cube);
  require(cube.level <= max_level_, ErrorKind::resolution_exceeded,
          "coefficient level " + std::to_string(cube.level) + " above max level " + std::to_string(max_level_));
  require(std::isfinite(value.real()) && std::isfinite(value.imag()), ErrorKind::invalid_input,
          "non-finite coefficient");
  entries_[cube] = value;
}

Complex DyadicCoefficients::get(const DyadicCube& cube) const {
  const auto it = entries_.find(cube);
  return it == entries_.end() ? Complex(0.0) : it->second;
}

std::vector<DyadicCube> DyadicCoefficients::support() const {
  std::vector<DyadicCube> cubes;
  for (const auto& [cube, value] : entries_) {
    if (value != Complex(0.0)) cubes.push_back(cube);
  }
  return cubes;
}

double DyadicCoefficients::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& [cube, value] : entries_) m = std::max(m, std::abs(value));
  return m;
}

DyadicCoefficients DyadicCoefficients::scaled(Complex factor) const {
  DyadicCoefficients out(grid_, max_level_);
  for (const auto& [cube, value] : entries_) out.entries_[cube] = value * factor;
  return out;
}

std::vector<std::vector<double>> level_fields(const DyadicCoefficients& lambda, const ExponentField& alpha) {
  check_fields(lambda, alpha);
  const Grid& grid = lambda.grid();
  const double half_n = 0.5 * grid.dimension();
  const auto levels = populated_levels(lambda);
  std::vector<std::vector<double>> fields(levels.size());
  parallel_for(levels.size(), [&](std::size_t k) {
    const int v = levels[k];
    const auto dense = level_moduli(lambda, v);
    std::vector<double> f(grid.size(), 0.0);
    for (std::size_t x = 0; x < f.size(); ++x) {
      const double modulus = dense[rank_of_point(grid, v, x)];
      if (modulus != 0.0) f[x] = std::exp2(v * (alpha[x] + half_n)) * modulus;
    }
    fields[k] = std::move(f);
  });
  return fields;
}

NormResult f_norm(const DyadicCoefficients& lambda, const ExponentField& alpha, const ExponentField& p,
                  const ExponentField& q, double tol) {
  check_fields(lambda, p);
  check_fields(lambda, q);
  const auto fields = level_fields(lambda, alpha);
  return mixed_norm(std::span<const std::vector<double>>(fields), p, q, tol);
}

double f_infty_norm(const DyadicCoefficients& lambda, const ExponentField& alpha, double q) {
  check_fields(lambda, alpha);
  require(q > 0.0 && std::isfinite(q), ErrorKind::invalid_configuration, "q must be a positive constant");
  const Grid& grid = lambda.grid();
  const double half_n = 0.5 * grid.dimension();
  std::vector<double> tail(grid.size(), 0.0);
  double best = 0.0;
  for (int k = lambda.max_level(); k >= 0; --k) {
    const auto dense = level_moduli(lambda, k);
    bool any = false;
    for (double m : dense) any = any || m != 0.0;
    if (any) {
      for (std::size_t x = 0; x < tail.size(); ++x) {
        const double modulus = dense[rank_of_point(grid, k, x)];
        if (modulus != 0.0) tail[x] += std::pow(std::exp2(k * (alpha[x] + half_n)) * modulus, q);
      }
    }
    std::vector<double> sums(cube_count(grid, k), 0.0);
    for (std::size_t x = 0; x < tail.size(); ++x) sums[rank_of_point(grid, k, x)] += tail[x];
    const double cells = std::pow(static_cast<double>(grid.cells_per_cube_axis(k)), grid.dimension());
    for (double s : sums) best = std::max(best, s / cells);
  }
  return std::pow(best, 1.0 / q);
}

double coefficient_bound_check(const DyadicCoefficients& lambda, const ExponentField& alpha, const ExponentField& p,
                               const ExponentField& q) {
  const double norm = f_norm(lambda, alpha, p, q).value;
  require(norm > 0.0, ErrorKind::invalid_input, "coefficient bound needs a nonzero sequence");
  const Grid& grid = lambda.grid();
  const double n = grid.dimension();
  double worst = 0.0;
  for (const auto& [cube, value] : lambda) {
    const double modulus = std::abs(value);
    if (modulus == 0.0) continue;
    for (std::size_t x : cube_cells(grid, cube)) {
      worst = std::max(worst, modulus * std::exp2(cube.level * (alpha[x] - n / p[x] + 0.5 * n)) / norm);
    }
  }
  return worst;
}

void SubsetSelection::validate(const Grid& grid) const {
  for (const auto& [cube, chosen] : cells) {
    validate_cube(grid, cube);
    const std::size_t total = static_cast<std::size_t>(std::pow(grid.cells_per_cube_axis(cube.level), grid.dimension()));
    std::vector<std::size_t> sorted(chosen);
    std::sort(sorted.begin(), sorted.end());
    require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), ErrorKind::invalid_selection,
            "selection repeats a cell");
    for (std::size_t x : sorted) {
      require(x < grid.size() && cube_of(grid, cube.level, x) == cube, ErrorKind::invalid_selection,
              "selected cell outside its cube");
    }
    const bool ok = strict ? 2 * sorted.size() > total : 2 * sorted.size() >= total;
    require(ok, ErrorKind::invalid_selection,
            "selection holds " + std::to_string(sorted.size()) + " of " + std::to_string(total) +
                " cells, below half of the cube");
  }
}

double f_infty_subset_norm(const DyadicCoefficients& lambda, const ExponentField& alpha, double q,
                           const SubsetSelection& selection) {
  check_fields(lambda, alpha);
  require(q > 0.0 && std::isfinite(q), ErrorKind::invalid_configuration, "q must be a positive constant");
  selection.validate(lambda.grid());
  const auto support = lambda.support();
  require(support.size() == selection.cells.size(), ErrorKind::invalid_selection,
          "selection does not cover exactly the support");
  for (const auto& cube : support) {
    require(selection.cells.count(cube) != 0, ErrorKind::invalid_selection, "supported cube missing from selection");
  }
  const auto s = subset_power_sum(lambda, alpha, q, selection);
  const double peak = s.empty() ? 0.0 : *std::max_element(s.begin(), s.end());
  return std::pow(peak, 1.0 / q);
}

SubsetSelection full_selection(const DyadicCoefficients& lambda) {
  SubsetSelection selection;
  for (const auto& cube : lambda.support()) selection.cells[cube] = cube_cells(lambda.grid(), cube);
  return selection;
}

SubsetSelection greedy_selection(const DyadicCoefficients& lambda, const ExponentField& alpha, double q) {
  const SubsetSelection full = full_selection(lambda);
  const auto s = subset_power_sum(lambda, alpha, q, full);
  SubsetSelection selection;
  for (const auto& [cube, cells] : full.cells) {
    std::vector<std::size_t> order(cells);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return s[a] < s[b] || (s[a] == s[b] && a < b);
    });
    order.resize(cells.size() / 2 + 1);
    std::sort(order.begin(), order.end());
    selection.cells[cube] = std::move(order);
  }
  return selection;
}

namespace {

struct BruteForce {
  const Grid& grid;
  std::vector<std::vector<std::size_t>> cells;
  std::vector<std::vector<double>> terms;
  std::vector<std::size_t> keep;
  std::vector<double> sum;
  double best = std::numeric_limits<double>::infinity();

  void search(std::size_t cube, double current) {
    if (current >= best) return;
    if (cube == cells.size()) {
      best = current;
      return;
    }
    const std::size_t c = cells[cube].size();
    std::vector<std::size_t> pick(keep[cube]);
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
      double peak = current;
      for (std::size_t k : pick) {
        sum[cells[cube][k]] += terms[cube][k];
        peak = std::max(peak, sum[cells[cube][k]]);
      }
      search(cube + 1, peak);
      for (std::size_t k : pick) sum[cells[cube][k]] -= terms[cube][k];
      // next combination in lexicographic order
      std::size_t i = pick.size();
      while (i > 0 && pick[i - 1] == c - pick.size() + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < pick.size(); ++j) pick[j] = pick[j - 1] + 1;
    }
  }
};

double log_binomial(std::size_t n, std::size_t k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

double brute_force_subset_infimum(const DyadicCoefficients& lambda, const ExponentField& alpha, double q,
                                  std::size_t max_combinations) {
  check_fields(lambda, alpha);
  const Grid& grid = lambda.grid();
  const double half_n = 0.5 * grid.dimension();
  BruteForce search{grid, {}, {}, {}, std::vector<double>(grid.size(), 0.0)};
  double log_total = 0.0;
  for (const auto& cube : lambda.support()) {
    auto cells = cube_cells(grid, cube);
    const double modulus = std::abs(lambda.get(cube));
    std::vector<double> terms(cells.size());
    for (std::size_t k = 0; k < cells.size(); ++k) {
      terms[k] = std::pow(std::exp2(cube.level * (alpha[cells[k]] + half_n)) * modulus, q);
    }
    search.keep.push_back(cells.size() / 2 + 1);
    log_total += log_binomial(cells.size(), cells.size() / 2 + 1);
    search.cells.push_back(std::move(cells));
    search.terms.push_back(std::move(terms));
  }
  require(log_total <= std::log(static_cast<double>(max_combinations)), ErrorKind::invalid_configuration,
          "instance too large for exhaustive mask enumeration");
  if (search.cells.empty()) return 0.0;
  search.search(0, 0.0);
  return std::pow(search.best, 1.0 / q);
}

SubsetEquivalenceReport subset_equivalence_check(const DyadicCoefficients& lambda, const ExponentField& alpha, double q) {
  SubsetEquivalenceReport report;
  report.direct = f_infty_norm(lambda, alpha, q);
  const auto support = lambda.support();
  if (support.empty()) return report;
  double log_total = 0.0;
  for (const auto& cube : support) {
    const auto c = static_cast<std::size_t>(std::pow(lambda.grid().cells_per_cube_axis(cube.level), lambda.grid().dimension()));
    log_total += log_binomial(c, c / 2 + 1);
  }
  constexpr std::size_t brute_limit = std::size_t{1} << 16;
  if (log_total <= std::log(static_cast<double>(brute_limit))) {
    report.subset = brute_force_subset_infimum(lambda, alpha, q, brute_limit);
    report.brute_force = true;
  } else {
    report.subset = f_infty_subset_norm(lambda, alpha, q, greedy_selection(lambda, alpha, q));
  }
  report.ratio = report.subset / report.direct;
  return report;
}

}  // namespace vexint
