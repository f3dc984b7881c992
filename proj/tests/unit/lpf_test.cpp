#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "vexint/corpus.hpp"
#include "vexint/error.hpp"
#include "vexint/lpf.hpp"

using namespace vexint;

namespace {

GridFunction plane_wave(const Grid& g, int k) {
  std::vector<Complex> v(g.size());
  const double unit = std::numbers::pi / g.half_extent();
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = std::polar(1.0, unit * k * g.coordinate(i, 0));
  return GridFunction(g, std::move(v));
}

}  // namespace

TEST(Profiles, PlateausAndSupports) {
  EXPECT_EQ(smooth_step(0.2, 0.5, 1.0), 1.0);
  EXPECT_EQ(smooth_step(1.2, 0.5, 1.0), 0.0);
  EXPECT_NEAR(smooth_step(0.75, 0.5, 1.0), 0.5, 1e-15);
  for (double r : {0.0, 1.0, 5.0 / 3.0}) EXPECT_EQ(admissible_low(r), 1.0);
  for (double r : {2.0, 3.0}) EXPECT_EQ(admissible_low(r), 0.0);
  for (double r : {0.6, 1.0, 5.0 / 3.0}) EXPECT_EQ(admissible_band(r), 1.0);
  for (double r : {0.0, 0.4, 0.5, 2.0, 2.5}) EXPECT_EQ(admissible_band(r), 0.0);
  for (double r : {0.0, 0.5, 1.0}) EXPECT_EQ(partition_low(r), 1.0);
  EXPECT_EQ(partition_low(2.0), 0.0);
}

TEST(AdmissiblePair, DefaultBankInvariants) {
  const Grid g = make_grid(1, 4.0, 1024);
  const auto bank = build_admissible_pair(g, 4);
  EXPECT_EQ(bank.analysis.size(), 5u);
  EXPECT_GE(bank.diagnostics.lower_bound, 1.0);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double r = g.frequency_norm(k);
    if (r >= 2.0) {
      EXPECT_EQ(bank.analysis[0][k], 0.0);
    }
    for (int v = 1; v <= 4; ++v) {
      const double s = std::ldexp(r, -v);
      if (s <= 0.5 || s >= 2.0) {
        EXPECT_EQ(bank.analysis[v][k], 0.0);
      }
    }
  }
  EXPECT_THROW(build_admissible_pair(g, 12), Error);
  try {
    build_admissible_pair(g, 12);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::resolution_exceeded);
  }
}

TEST(DualPair, DualityResidualAndCoreDenominator) {
  const Grid g = make_grid(1, 4.0, 1024);
  const auto duals = build_dual_pair(build_admissible_pair(g, 4));
  EXPECT_LE(duals.diagnostics.duality_residual, 1e-10);
  EXPECT_GE(duals.diagnostics.min_denominator_core, 1.0);
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g.frequency_norm(k) <= 0.5) {
      EXPECT_NEAR(duals.synthesis[0][k], duals.analysis[0][k], 1e-15);
    }
  }
}

TEST(DualPair, ZeroedBandFailsAdmissibility) {
  const Grid g = make_grid(1, 4.0, 1024);
  auto bank = build_admissible_pair(g, 4);
  std::fill(bank.analysis[2].begin(), bank.analysis[2].end(), 0.0);
  try {
    build_dual_pair(bank);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::admissibility_failure);
  }
}

TEST(ResolutionOfUnity, PartitionHoldsOnTheResolvedBand) {
  const Grid g = make_grid(1, 4.0, 1024);
  for (int V : {0, 2, 4}) {
    const auto rou = build_resolution_of_unity(g, V);
    EXPECT_LE(rou.diagnostics.partition_residual, 1e-12) << "V " << V;
    for (std::size_t k = 0; k < g.size(); ++k) {
      if (g.frequency_norm(k) > std::ldexp(1.0, V)) continue;
      double s = 0.0;
      for (const auto& m : rou.analysis) s += m[k];
      EXPECT_NEAR(s, 1.0, 1e-12);
    }
    EXPECT_LE(rou.diagnostics.omega_residual, 1e-12);
  }
}

TEST(ResolutionOfUnity, TwoDimensionalPartition) {
  const Grid g = make_grid(2, 2.0, 64);
  const auto rou = build_resolution_of_unity(g, 2);
  EXPECT_LE(rou.diagnostics.partition_residual, 1e-12);
}

TEST(Moments, BandFiltersHaveVanishingMoments) {
  const Grid g = make_grid(1, 4.0, 1024);
  const auto bank = build_admissible_pair(g, 4);
  const auto low = band_moments(bank, 0);
  EXPECT_EQ(low[0], 1.0);
  for (int v = 1; v <= 4; ++v)
    for (double m : band_moments(bank, v)) EXPECT_EQ(m, 0.0);
}

TEST(Analysis, ZeroInZeroOut) {
  const Grid g = make_grid(1, 4.0, 512);
  const auto duals = build_dual_pair(build_admissible_pair(g, 3));
  const auto lambda = analyze(GridFunction::zeros(g), duals);
  EXPECT_EQ(lambda.max_abs(), 0.0);
  const auto back = synthesize(DyadicCoefficients(g, 3), duals);
  EXPECT_EQ(back.max_abs(), 0.0);
}

TEST(Analysis, PlaneWaveOnlyReachesLevelsThatSeeItsFrequency) {
  const Grid g = make_grid(1, 4.0, 1024);
  const auto duals = build_dual_pair(build_admissible_pair(g, 4));
  const double unit = std::numbers::pi / 4.0;
  for (int k : {3, 9, 20}) {
    const double xi = k * unit;
    const auto lambda = analyze(plane_wave(g, k), duals);
    for (int v = 0; v <= 4; ++v) {
      const double multiplier = v == 0 ? admissible_low(xi) : admissible_band(std::ldexp(xi, -v));
      double peak = 0.0;
      for (const auto& [cube, value] : lambda)
        if (cube.level == v) peak = std::max(peak, std::abs(value));
      if (multiplier == 0.0) {
        EXPECT_LE(peak, 1e-8) << "k " << k << " v " << v;
      } else if (multiplier > 1e-3) {
        EXPECT_GT(peak, 1e-8) << "k " << k << " v " << v;
      }
    }
  }
}

TEST(Synthesis, SingleCoefficientIsATranslatedDual) {
  const Grid g = make_grid(1, 4.0, 256);
  const auto duals = build_dual_pair(build_admissible_pair(g, 3));
  const int v = 2;
  const DyadicCube cube{v, {5, 0}};
  DyadicCoefficients lambda(g, 3);
  lambda.set(cube, Complex(0.5, -1.0));
  const auto out = synthesize(lambda, duals);
  const std::size_t corner = cube_corner(g, cube);
  const int N = g.points_per_axis();
  const double weight = std::exp2(-0.5 * v) / g.cell_measure();
  for (std::size_t x = 0; x < g.size(); x += 7) {
    Complex s = 0.0;
    for (int k = 0; k < N; ++k) {
      const double phase = 2.0 * std::numbers::pi * k * (static_cast<double>(x) - static_cast<double>(corner)) / N;
      s += duals.synthesis[v][static_cast<std::size_t>(k)] * std::polar(1.0, phase);
    }
    const Complex expected = Complex(0.5, -1.0) * weight * s / static_cast<double>(N);
    EXPECT_NEAR(std::abs(out[x] - expected), 0.0, 1e-12 * std::max(1.0, std::abs(expected)));
  }
}

TEST(RoundTrips, BandLimitedFunctionsComeBack) {
  const Grid g = make_grid(1, 4.0, 1024);
  const auto duals = build_dual_pair(build_admissible_pair(g, 4));
  const auto rou = build_resolution_of_unity(g, 4);
  Rng rng(13);
  for (int i = 0; i < 10; ++i) {
    const auto f = random_band_limited(g, 16.0, 8, rng);
    const auto a = phi_transform_roundtrip(f, duals);
    const auto b = retract_roundtrip(f, rou);
    EXPECT_TRUE(a.in_band());
    EXPECT_TRUE(b.in_band());
    EXPECT_LE(a.residual, 1e-6);
    EXPECT_LE(b.residual, 1e-6);
  }
  EXPECT_EQ(retract_roundtrip(GridFunction::zeros(g), rou).residual, 0.0);
}

TEST(RoundTrips, OutOfBandEnergyIsFlagged) {
  const Grid g = make_grid(1, 4.0, 1024);
  const auto rou = build_resolution_of_unity(g, 2);
  const auto r = retract_roundtrip(plane_wave(g, 60), rou);
  EXPECT_FALSE(r.in_band());
  EXPECT_GT(r.out_of_band, 0.99);
}

TEST(FunctionNorms, ZeroAndPlancherelSanity) {
  const Grid g = make_grid(1, 4.0, 1024);
  const auto duals = build_dual_pair(build_admissible_pair(g, 4));
  const auto alpha = constant_field(g, 0.0, ExponentRole::smoothness);
  const auto two = constant_field(g, 2.0);
  EXPECT_EQ(F_norm(GridFunction::zeros(g), alpha, two, two, duals).value, 0.0);
  EXPECT_EQ(F_infty_norm(GridFunction::zeros(g), alpha, 2.0, duals), 0.0);
  // a level-0 wave sees only the low-pass filter, which is 1 there
  const auto f = plane_wave(g, 1);
  const double l2 = std::sqrt(2.0 * g.half_extent());
  EXPECT_NEAR(F_norm(f, alpha, two, two, duals).value, l2, 1e-9 * l2);
}
