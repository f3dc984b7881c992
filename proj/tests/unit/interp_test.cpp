#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "vexint/corpus.hpp"
#include "vexint/error.hpp"
#include "vexint/interp.hpp"

using namespace vexint;

namespace {

std::vector<std::size_t> interval(const Grid& g, double lo, double hi) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.coordinate(i, 0);
    if (x >= lo && x < hi) out.push_back(i);
  }
  return out;
}

SimpleFunction normalized(const SimpleFunction& f, const ExponentField& p) {
  return f.scaled(1.0 / luxemburg_norm(f.to_grid(), p).value);
}

}  // namespace

TEST(StripPoisson, MassesMatchTheta) {
  for (double theta : {0.1, 0.25, 0.5, 0.75, 0.9}) {
    const auto m = poisson_masses(strip_poisson(theta));
    EXPECT_NEAR(m.mass0, 1.0 - theta, 1e-8) << theta;
    EXPECT_NEAR(m.mass1, theta, 1e-8) << theta;
  }
  EXPECT_THROW(strip_poisson(0.0), Error);
  EXPECT_THROW(strip_poisson(1.0), Error);
}

TEST(StripPoisson, ReflectionSymmetry) {
  for (double theta : {0.2, 0.5, 0.7}) {
    const auto a = strip_poisson(theta);
    const auto b = strip_poisson(1.0 - theta);
    for (double t : {-3.0, -0.5, 0.0, 0.25, 2.0}) EXPECT_NEAR(a.mu0(t), b.mu1(t), 1e-12);
  }
}

TEST(StripPoisson, ReproducesHarmonicPolynomials) {
  // Re z^k with z = x + i y: 1, x, x^2 - y^2
  for (double theta : {0.25, 0.5, 0.8}) {
    const auto kernel = strip_poisson(theta);
    for (double s : {0.0, 0.7}) {
      EXPECT_NEAR(poisson_extend(kernel, s, [](double) { return 1.0; }, [](double) { return 1.0; }), 1.0, 1e-6);
      EXPECT_NEAR(poisson_extend(kernel, s, [](double) { return 0.0; }, [](double) { return 1.0; }), theta, 1e-6);
      const double expected = theta * theta - s * s;
      const double got = poisson_extend(
          kernel, s, [](double y) { return -y * y; }, [](double y) { return 1.0 - y * y; });
      EXPECT_NEAR(got, expected, 1e-6) << theta << " " << s;
    }
  }
}

TEST(SimpleFunctions, ValidationCatchesOverlapsAndEmptyRegions) {
  const Grid g = make_grid(1, 4.0, 256);
  EXPECT_THROW(make_simple(g, {1.0, 2.0}, {interval(g, 0.0, 1.0), interval(g, 0.5, 2.0)}), Error);
  EXPECT_THROW(make_simple(g, {1.0}, {{}}), Error);
  EXPECT_THROW(make_simple(g, {1.0, 2.0}, {interval(g, 0.0, 1.0)}), Error);
  EXPECT_NO_THROW(make_simple(g, {1.0, 2.0}, {interval(g, 0.0, 1.0), interval(g, 1.0, 2.0)}));
}

TEST(Competitor, EqualsFAtThetaAndIsConstantOnRegions) {
  const Grid g = make_grid(1, 4.0, 256);
  const auto p0 = build_exponent(SineRecipe{2.5, 0.5, 1.0}, g);
  const auto p1 = build_exponent(PlateauRampRecipe{1.5, 4.0, 1.0}, g);
  const auto f = make_simple(g, {Complex(0.3, 0.4), Complex(-2.0, 0.0)}, {interval(g, 0.0, 1.0), interval(g, 3.0, 3.5)});
  const auto fam = competitor_family(f, p0, p1, 0.4);
  for (std::size_t j = 0; j < f.regions.size(); ++j) {
    for (std::size_t x : f.regions[j]) EXPECT_EQ(fam.evaluate(x, 0.4), f.values[j]);
  }
  EXPECT_EQ(fam.evaluate(interval(g, 2.0, 2.5).front(), Complex(0.1, 1.0)), Complex(0.0));

  const auto same = competitor_family(f, p0, p0, 0.4);
  for (std::size_t x : f.regions[1]) {
    EXPECT_NEAR(std::abs(same.evaluate(x, Complex(0.9, -2.0)) - f.values[1]), 0.0, 1e-15);
  }
}

TEST(BoundaryModulars, UnitNormFamiliesStayInTheBall) {
  const Grid g = make_grid(1, 4.0, 512);
  const auto p = constant_field(g, 3.0);
  const auto chi = normalized(make_simple(g, {1.0}, {interval(g, 0.0, 1.0)}), p);
  const auto flat = boundary_modulars(competitor_family(chi, p, p, 0.5));
  EXPECT_NEAR(flat.rho0, 1.0, 1e-9);
  EXPECT_NEAR(flat.rho1, 1.0, 1e-9);

  const auto p0 = build_exponent(SineRecipe{2.0, 0.5, 1.0}, g);
  const auto p1 = build_exponent(SineRecipe{4.0, 1.0, 2.0}, g);
  const auto pt = interpolate_exponents(p0, p1, 0.3, InterpolationMode::harmonic);
  const auto two = normalized(make_simple(g, {2.0, Complex(0.0, 0.5)}, {interval(g, 0.5, 1.5), interval(g, 4.0, 6.0)}), pt);
  const auto r = boundary_modulars(competitor_family(two, p0, p1, 0.3));
  EXPECT_LE(r.rho0, 1.0 + 1e-9);
  EXPECT_LE(r.rho1, 1.0 + 1e-9);

  const auto big = make_simple(g, {5.0}, {interval(g, 0.0, 1.0)});
  EXPECT_THROW(boundary_modulars(competitor_family(big, p0, p1, 0.3)), Error);
}

TEST(ThreeLines, DegenerateAndHomogeneous) {
  const Grid g = make_grid(1, 4.0, 256);
  const auto p = constant_field(g, 2.0);
  const auto f = make_simple(g, {Complex(0.0, 3.0)}, {interval(g, 1.0, 2.0)});
  const auto flat = three_lines_bound(competitor_family(f, p, p, 0.5), 0);
  EXPECT_NEAR(flat.bound, 3.0, 1e-8);

  const auto p0 = build_exponent(SineRecipe{2.0, 0.5, 1.0}, g);
  const auto p1 = constant_field(g, 4.0);
  const auto a = three_lines_bound(competitor_family(f, p0, p1, 0.5), 0);
  const auto b = three_lines_bound(competitor_family(f.scaled(2.5), p0, p1, 0.5), 0);
  EXPECT_GE(a.slack, -1e-8);
  EXPECT_NEAR(b.value, 2.5 * a.value, 1e-12);
  EXPECT_NEAR(b.bound, 2.5 * a.bound, 1e-8 * b.bound);
}

TEST(Sandwich, ClosedFormCase) {
  const Grid g = make_grid(1, 4.0, 1024);
  const auto f = make_simple(g, {1.0}, {interval(g, 0.0, 1.0)});
  const auto r = scalar_interp_sandwich(f, constant_field(g, 2.0), constant_field(g, 4.0), 0.5);
  EXPECT_NEAR(r.upper_ratio, 1.0, 1e-9);
  EXPECT_GE(r.three_lines_slack, -1e-8);
}

TEST(Sandwich, DegenerateExponentsGiveRatioOne) {
  const Grid g = make_grid(1, 4.0, 512);
  Rng rng(19);
  const auto p = build_exponent(SineRecipe{2.5, 0.5, 1.0}, g);
  const auto f = random_simple_function(g, 3, 3, rng);
  const auto r = scalar_interp_sandwich(f, p, p, 0.3);
  EXPECT_NEAR(r.upper_ratio, 1.0, 1e-9);
  EXPECT_LE(r.lower_ratio, 1.0 + 1e-6);
}

TEST(Sandwich, RandomVariableRecipes) {
  const Grid g = make_grid(1, 4.0, 512);
  Rng rng(20);
  for (int k = 0; k < 5; ++k) {
    const auto p0 = build_exponent(random_recipe(g, rng), g);
    const auto p1 = build_exponent(random_recipe(g, rng), g);
    const auto r = scalar_interp_sandwich(random_simple_function(g, 3, 4, rng), p0, p1, rng.uniform(0.2, 0.8));
    EXPECT_LE(r.upper_ratio, 1.0 + 1e-6);
    EXPECT_GE(r.three_lines_slack, -1e-8);
    EXPECT_TRUE(std::isfinite(r.lower_ratio));
  }
}

TEST(InterRest, DegenerateThetaIndependence) {
  const Grid g = make_grid(1, 4.0, 1024);
  Rng rng(40);
  const auto f = random_band_limited(g, 16.0, 6, rng);
  const auto partition = build_resolution_of_unity(g, 4);
  const auto admissible = build_dual_pair(build_admissible_pair(g, 4));
  const auto p = build_exponent(SineRecipe{2.5, 0.5, 1.0}, g);
  const auto q = constant_field(g, 2.0);
  const auto a = constant_field(g, 0.5, ExponentRole::smoothness);
  double first = 0.0;
  for (double theta : {0.2, 0.5, 0.8}) {
    const auto r = inter_rest_check(f, InterRestParameters{theta, p, p, q, q, a, a}, partition, admissible);
    if (first == 0.0) first = r.ratio;
    EXPECT_NEAR(r.ratio, first, 1e-9 * first);
    EXPECT_GE(r.holder_slack, -1e-9 * r.anchor);
  }
}

TEST(InterRest, RejectsVariableSmoothness) {
  const Grid g = make_grid(1, 4.0, 256);
  const auto partition = build_resolution_of_unity(g, 2);
  const auto admissible = build_dual_pair(build_admissible_pair(g, 2));
  const auto p = constant_field(g, 2.0);
  const auto a = build_exponent(SineRecipe{0.0, 0.5, 1.0}, g, ExponentRole::smoothness);
  try {
    inter_rest_check(GridFunction::constant(g, 1.0), InterRestParameters{0.5, p, p, p, p, a, a}, partition, admissible);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::unsupported_parameters);
  }
}
