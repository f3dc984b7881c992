#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "vexint/corpus.hpp"
#include "vexint/error.hpp"
#include "vexint/kernels.hpp"
#include "vexint/lebesgue.hpp"

using namespace vexint;

namespace {

GridFunction indicator(const Grid& g, double lo, double hi) {
  std::vector<Complex> v(g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.coordinate(i, 0);
    if (x >= lo && x < hi) v[i] = 1.0;
  }
  return GridFunction(g, std::move(v));
}

// sum_y f(y) k(x - y) h, periodic, O(N^2)
std::vector<Complex> direct_convolution(const GridFunction& f, const GridFunction& k) {
  const std::size_t N = f.size();
  std::vector<Complex> out(N, 0.0);
  for (std::size_t x = 0; x < N; ++x)
    for (std::size_t y = 0; y < N; ++y) out[x] += f[y] * k[(x + N - y) % N];
  for (auto& z : out) z *= f.grid().cell_measure();
  return out;
}

}  // namespace

TEST(Eta, TruncatedMassMatchesAntiderivative) {
  for (double L : {4.0, 100.0}) {
    for (int v = 0; v <= 6; ++v) {
      const double S = std::ldexp(L, v);
      EXPECT_NEAR(eta_box_mass(1, v, 2.0, L), 2.0 * (1.0 - 1.0 / (1.0 + S)), 1e-12) << "v " << v << " L " << L;
    }
  }
}

TEST(Eta, TwoDimensionalMassIsBracketedByDiskIntegrals) {
  // the box of half side S holds the disk of radius S; 2 pi int_0^R r (1 + r)^{-3} dr
  const auto disk = [](double R) { return std::numbers::pi * (1.0 - (1.0 + 2.0 * R) / ((1.0 + R) * (1.0 + R))); };
  for (int v : {0, 4, 10}) {
    const double S = std::ldexp(4.0, v);
    const double m = eta_box_mass(2, v, 3.0, 4.0);
    EXPECT_GE(m, disk(S));
    EXPECT_LE(m, disk(std::sqrt(2.0) * S));
  }
}

TEST(Eta, MassIncreasesTowardsTheFullLineIntegral) {
  double previous = 0.0;
  for (int v = 0; v <= 12; ++v) {
    const double m = eta_box_mass(1, v, 2.0, 4.0);
    EXPECT_GT(m, previous);
    EXPECT_LT(m, 2.0);
    previous = m;
  }
  EXPECT_LE(2.0 - previous, 2.0 / std::ldexp(4.0, 12));
}

TEST(Eta, NonIntegrableTailIsReported) {
  const Grid g = make_grid(1, 4.0, 256);
  const auto k = eta(0, 0.5, g);
  EXPECT_FALSE(k.integrable);
  EXPECT_LT(eta_box_mass(1, 0, 0.5, 4.0), eta_box_mass(1, 0, 0.5, 16.0));
  EXPECT_LT(eta_box_mass(1, 0, 0.5, 16.0), eta_box_mass(1, 0, 0.5, 64.0));
  EXPECT_TRUE(eta(0, 2.0, g).integrable);
}

TEST(Eta, SamplesFollowTheFormula) {
  const Grid g = make_grid(1, 4.0, 256);
  const auto k = eta(3, 2.0, g);
  for (std::size_t i : {std::size_t{0}, std::size_t{5}, std::size_t{128}, std::size_t{250}}) {
    EXPECT_NEAR(k.samples[i].real(), 8.0 / std::pow(1.0 + 8.0 * g.norm(i), 2.0), 1e-14);
  }
  EXPECT_NEAR(k.grid_mass, k.mass, 0.05 * k.mass);
}

TEST(Convolution, UnitCellIdentity) {
  const Grid g = make_grid(1, 2.0, 64);
  std::vector<Complex> d(g.size(), 0.0);
  d[0] = 1.0 / g.cell_measure();
  Rng rng(5);
  const auto f = random_piecewise_constant(g, 2, rng);
  const auto out = convolve(f, GridFunction(g, d));
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(std::abs(out[i] - f[i]), 0.0, 1e-13);
}

TEST(Convolution, IndicatorSelfConvolutionIsTheHat) {
  const Grid g = make_grid(1, 4.0, 256);
  const auto chi = indicator(g, 0.0, 1.0);
  const auto out = convolve(chi, chi);
  const auto oracle = direct_convolution(chi, chi);
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_NEAR(std::abs(out[i] - oracle[i]), 0.0, 1e-12);
    const double x = g.coordinate(i, 0);
    const double hat = std::max(0.0, 1.0 - std::abs(x - 1.0));
    EXPECT_NEAR(out[i].real(), hat, g.spacing() + 1e-12);
  }
}

TEST(Convolution, MatchesDirectSummationInTwoDimensions) {
  const Grid g = make_grid(2, 1.0, 16);
  Rng rng(6);
  const auto f = random_piecewise_constant(g, 0, rng);
  const auto k = random_piecewise_constant(g, 1, rng);
  const auto out = convolve(f, k);
  std::vector<Complex> oracle(g.size(), 0.0);
  const int N = g.points_per_axis();
  for (std::size_t x = 0; x < g.size(); ++x)
    for (std::size_t y = 0; y < g.size(); ++y) {
      const int d0 = (g.axis_index(x, 0) - g.axis_index(y, 0) + N) % N;
      const int d1 = (g.axis_index(x, 1) - g.axis_index(y, 1) + N) % N;
      oracle[x] += f[y] * k[g.flat_index(d0, d1)] * g.cell_measure();
    }
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(std::abs(out[i] - oracle[i]), 0.0, 1e-12);
}

TEST(AlphaShift, ConstantSmoothnessGivesOne) {
  const Grid g = make_grid(1, 4.0, 256);
  const std::vector<int> levels{0, 1, 2, 3, 4, 5};
  const auto r = verify_alpha_shift(constant_field(g, 0.7, ExponentRole::smoothness), 2.0, 0.0, levels);
  EXPECT_EQ(r.constant, 1.0);
  EXPECT_EQ(r.estimated_c_loc, 0.0);
}

TEST(AlphaShift, WithoutDecayReserveTheRatioGrows) {
  const Grid g = make_grid(1, 4.0, 256);
  const std::vector<int> levels{0, 1, 2, 3, 4, 5, 6};
  const auto alpha = build_exponent(SineRecipe{0.0, 1.0, 1.0}, g, ExponentRole::smoothness);
  const auto bare = verify_alpha_shift(alpha, 2.0, 0.0, levels);
  EXPECT_FALSE(bare.precondition_ok);
  for (std::size_t k = 1; k < levels.size(); ++k) EXPECT_GT(bare.per_level[k], bare.per_level[k - 1]);
  const auto reserved = verify_alpha_shift(alpha, 2.0, bare.estimated_c_loc, levels);
  EXPECT_TRUE(reserved.precondition_ok);
  EXPECT_TRUE(std::isfinite(reserved.constant));
  EXPECT_GE(bare.per_level.back(), 2.0 * reserved.constant);
}

TEST(Jensen, ConstantExponentReducesToConvexity) {
  const Grid g = make_grid(1, 4.0, 256);
  const auto p = constant_field(g, 2.5);
  Rng rng(8);
  auto f = random_piecewise_constant(g, 3, rng);
  f = f.scaled(0.5 / (luxemburg_norm(f, p).value + f.max_abs()));
  const std::vector<int> levels{0, 1, 2, 3};
  const auto r = verify_jensen_gamma(p, 2.0, f, levels);
  EXPECT_EQ(r.gamma, 1.0);
  EXPECT_EQ(r.negative, 0u);
  EXPECT_GE(r.worst_margin, 0.0);
}

TEST(Jensen, NormalizedIndicatorOnRamp) {
  const Grid g = make_grid(1, 4.0, 256);
  const auto p = build_exponent(PlateauRampRecipe{2.0, 3.0, 1.0}, g);
  auto f = indicator(g, 0.0, 1.0);
  f = f.scaled(1.0 / (luxemburg_norm(f, p).value + f.max_abs()));
  const std::vector<int> levels{0, 1, 2, 3};
  const auto r = verify_jensen_gamma(p, 2.0, f, levels);
  EXPECT_LT(r.gamma, 1.0);
  EXPECT_EQ(r.negative, 0u);
}

TEST(Jensen, OversizedGammaBreaksTheEstimate) {
  const Grid g = make_grid(1, 4.0, 256);
  const auto p = build_exponent(PlateauRampRecipe{1.0, 4.0, 0.25}, g);
  std::vector<Complex> v(g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i)
    if (p[i] > 3.5) v[i] = 0.4;
  auto f = GridFunction(g, std::move(v));
  f = f.scaled(0.9 / (luxemburg_norm(f, p).value + f.max_abs()));
  const std::vector<int> levels{0, 1, 2, 3};
  const auto r = verify_jensen_gamma(p, 2.0, f, levels, 1.0);
  EXPECT_GT(r.negative, 0u);
  EXPECT_LT(r.worst_margin, 0.0);
}

TEST(Jensen, RejectsUnnormalizedInput) {
  const Grid g = make_grid(1, 4.0, 256);
  const std::vector<int> levels{0};
  EXPECT_THROW(verify_jensen_gamma(constant_field(g, 2.0), 2.0, GridFunction::constant(g, 3.0), levels), Error);
}
