#include <gtest/gtest.h>

#include <cmath>

#include "vexint/corpus.hpp"
#include "vexint/error.hpp"
#include "vexint/seqspaces.hpp"

using namespace vexint;

namespace {

// max over all cubes P of (avg_P sum_{j >= level P} |2^{j(a + n/2)} lambda_{j,m} chi_{j,m}|^q)^{1/q}
double f_infty_oracle(const DyadicCoefficients& lambda, const ExponentField& alpha, double q) {
  const Grid& g = lambda.grid();
  const double half_n = 0.5 * g.dimension();
  double best = 0.0;
  for (int k = 0; k <= lambda.max_level(); ++k) {
    for (const auto& P : enumerate_cubes(g, k)) {
      const auto cells = cube_cells(g, P);
      double total = 0.0;
      for (std::size_t x : cells) {
        for (const auto& [Q, value] : lambda) {
          if (Q.level < k || !cube_contains(Q, cube_of(g, g.max_level(), x))) continue;
          if (cube_of(g, Q.level, x) != Q) continue;
          total += std::pow(std::exp2(Q.level * (alpha[x] + half_n)) * std::abs(value), q);
        }
      }
      best = std::max(best, total / static_cast<double>(cells.size()));
    }
  }
  return std::pow(best, 1.0 / q);
}

// p = q constant: (sum_x sum_j |2^{j(a + n/2)} lambda chi|^p h^n)^{1/p}
double f_norm_oracle(const DyadicCoefficients& lambda, const ExponentField& alpha, double p) {
  const Grid& g = lambda.grid();
  double s = 0.0;
  for (const auto& [Q, value] : lambda)
    for (std::size_t x : cube_cells(g, Q))
      s += std::pow(std::exp2(Q.level * (alpha[x] + 0.5 * g.dimension())) * std::abs(value), p);
  return std::pow(s * g.cell_measure(), 1.0 / p);
}

}  // namespace

TEST(DyadicCoefficients, StorageAndValidation) {
  const Grid g = make_grid(1, 4.0, 256);
  DyadicCoefficients lambda(g, 2);
  lambda.set(DyadicCube{1, {3, 0}}, Complex(0.0, -2.0));
  EXPECT_EQ(lambda.get(DyadicCube{1, {3, 0}}), Complex(0.0, -2.0));
  EXPECT_EQ(lambda.get(DyadicCube{1, {4, 0}}), Complex(0.0));
  EXPECT_EQ(lambda.max_abs(), 2.0);
  EXPECT_THROW(lambda.set(DyadicCube{3, {0, 0}}, 1.0), Error);
  EXPECT_THROW(lambda.set(DyadicCube{0, {8, 0}}, 1.0), Error);
  EXPECT_THROW(DyadicCoefficients(g, 9), Error);
}

TEST(FNorm, SingleCoefficientClosedForms) {
  const Grid g = make_grid(1, 4.0, 1024);
  const auto zero_alpha = constant_field(g, 0.0, ExponentRole::smoothness);
  const auto two = constant_field(g, 2.0);
  DyadicCoefficients unit(g, 4);
  unit.set(DyadicCube{0, {0, 0}}, 1.0);
  EXPECT_NEAR(f_norm(unit, zero_alpha, two, two).value, 1.0, 1e-14);

  for (int j : {0, 2, 4}) {
    for (double p : {1.5, 3.0}) {
      const double a = 0.75;
      DyadicCoefficients lambda(g, 4);
      lambda.set(DyadicCube{j, {1, 0}}, 1.0);
      const auto pf = constant_field(g, p);
      const double expected = std::exp2(j * (a + 0.5 - 1.0 / p));
      EXPECT_NEAR(f_norm(lambda, constant_field(g, a, ExponentRole::smoothness), pf, pf).value, expected,
                  1e-12 * expected);
    }
  }
  EXPECT_EQ(f_norm(DyadicCoefficients(g, 4), zero_alpha, two, two).value, 0.0);
}

TEST(FNorm, DiagonalCaseMatchesDirectSum) {
  const Grid g = make_grid(1, 4.0, 512);
  Rng rng(21);
  const auto alpha = build_exponent(SineRecipe{0.5, 0.4, 1.0}, g, ExponentRole::smoothness);
  for (double p : {1.0, 2.0, 3.5}) {
    const auto lambda = random_coefficients(g, 4, 40, rng);
    const auto pf = constant_field(g, p);
    const double oracle = f_norm_oracle(lambda, alpha, p);
    EXPECT_NEAR(f_norm(lambda, alpha, pf, pf).value, oracle, 1e-9 * oracle);
  }
}

TEST(FInfty, SingleAndPairExamples) {
  const Grid g = make_grid(1, 4.0, 256);
  const double a = 0.3;
  const auto alpha = constant_field(g, a, ExponentRole::smoothness);
  DyadicCoefficients one(g, 3);
  one.set(DyadicCube{2, {5, 0}}, Complex(3.0, 4.0));
  const double expected = std::exp2(2 * (a + 0.5)) * 5.0;
  EXPECT_NEAR(f_infty_norm(one, alpha, 2.0), expected, 1e-12 * expected);
  DyadicCoefficients two = one;
  two.set(DyadicCube{2, {9, 0}}, Complex(-5.0, 0.0));
  EXPECT_NEAR(f_infty_norm(two, alpha, 2.0), expected, 1e-12 * expected);
  EXPECT_EQ(f_infty_norm(DyadicCoefficients(g, 3), alpha, 2.0), 0.0);
}

TEST(FInfty, MatchesExhaustiveCubeScan) {
  const Grid g = make_grid(1, 2.0, 128);
  Rng rng(4);
  const auto alpha = build_exponent(SineRecipe{0.2, 0.5, 1.0}, g, ExponentRole::smoothness);
  for (double q : {1.0, 2.0, 4.0}) {
    const auto lambda = random_coefficients(g, 3, 12, rng);
    const double oracle = f_infty_oracle(lambda, alpha, q);
    EXPECT_NEAR(f_infty_norm(lambda, alpha, q), oracle, 1e-12 * oracle);
  }
}

TEST(FInfty, TwoDimensionalScan) {
  const Grid g = make_grid(2, 1.0, 32);
  Rng rng(12);
  const auto alpha = constant_field(g, -0.25, ExponentRole::smoothness);
  const auto lambda = random_coefficients(g, 2, 10, rng);
  const double oracle = f_infty_oracle(lambda, alpha, 2.0);
  EXPECT_NEAR(f_infty_norm(lambda, alpha, 2.0), oracle, 1e-12 * oracle);
}

TEST(CoefficientBound, EqualityAndDomination) {
  const Grid g = make_grid(1, 4.0, 1024);
  const auto alpha = constant_field(g, 0.4, ExponentRole::smoothness);
  const auto p = constant_field(g, 2.5);
  const auto q = constant_field(g, 1.5);
  DyadicCoefficients one(g, 4);
  one.set(DyadicCube{3, {17, 0}}, 2.0);
  EXPECT_NEAR(coefficient_bound_check(one, alpha, p, q), 1.0, 1e-9);
  Rng rng(2);
  for (int k = 0; k < 5; ++k) {
    EXPECT_LE(coefficient_bound_check(random_coefficients(g, 4, 100, rng), alpha, p, q), 1.0 + 1e-9);
  }
}

TEST(Subsets, FullGreedyAndBruteForceOrdering) {
  const Grid g = make_grid(1, 2.0, 64);
  const auto alpha = constant_field(g, 0.5, ExponentRole::smoothness);
  DyadicCoefficients one(g, 2);
  one.set(DyadicCube{1, {2, 0}}, 2.0);
  const double single = std::exp2(1 * (0.5 + 0.5)) * 2.0;
  EXPECT_NEAR(f_infty_subset_norm(one, alpha, 2.0, full_selection(one)), single, 1e-12);

  const Grid small = make_grid(1, 1.0, 16);
  const auto flat = constant_field(small, 0.5, ExponentRole::smoothness);
  Rng rng(31);
  for (int k = 0; k < 5; ++k) {
    const auto lambda = random_coefficients(small, 1, 3, rng);
    const double full = f_infty_subset_norm(lambda, flat, 2.0, full_selection(lambda));
    const double greedy = f_infty_subset_norm(lambda, flat, 2.0, greedy_selection(lambda, flat, 2.0));
    const double brute = brute_force_subset_infimum(lambda, flat, 2.0);
    EXPECT_LE(greedy, full * (1.0 + 1e-12));
    EXPECT_LE(brute, greedy * (1.0 + 1e-12));
    EXPECT_GT(brute, 0.0);
  }
}

TEST(Subsets, RejectsSmallOrForeignSelections) {
  const Grid g = make_grid(1, 2.0, 64);
  const auto alpha = constant_field(g, 0.0, ExponentRole::smoothness);
  DyadicCoefficients one(g, 2);
  const DyadicCube cube{1, {0, 0}};
  one.set(cube, 1.0);
  auto cells = cube_cells(g, cube);
  SubsetSelection half;
  half.cells[cube] = std::vector<std::size_t>(cells.begin(), cells.begin() + cells.size() / 2);
  try {
    f_infty_subset_norm(one, alpha, 2.0, half);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_selection);
  }
  half.strict = false;
  EXPECT_NO_THROW(f_infty_subset_norm(one, alpha, 2.0, half));

  SubsetSelection foreign;
  foreign.cells[cube] = cube_cells(g, DyadicCube{1, {1, 0}});
  EXPECT_THROW(f_infty_subset_norm(one, alpha, 2.0, foreign), Error);
}

TEST(SubsetEquivalence, ZeroAndSingleCoefficient) {
  const Grid g = make_grid(1, 2.0, 64);
  const auto alpha = constant_field(g, 0.5, ExponentRole::smoothness);
  const auto zero = subset_equivalence_check(DyadicCoefficients(g, 2), alpha, 2.0);
  EXPECT_EQ(zero.direct, 0.0);
  EXPECT_EQ(zero.subset, 0.0);

  DyadicCoefficients one(g, 2);
  one.set(DyadicCube{2, {3, 0}}, 1.5);
  const auto r = subset_equivalence_check(one, alpha, 2.0);
  const double expected = std::exp2(2 * (0.5 + 0.5)) * 1.5;
  EXPECT_NEAR(r.direct, expected, 1e-12);
  EXPECT_LE(r.subset, r.direct * (1.0 + 1e-12));
  EXPECT_GE(r.ratio, 1.0 - 1e-12);
}
