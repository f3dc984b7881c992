#include <gtest/gtest.h>

#include <cmath>

#include "vexint/calderon.hpp"
#include "vexint/corpus.hpp"
#include "vexint/error.hpp"

using namespace vexint;

namespace {

ExponentField smooth(const Grid& g, double value) { return constant_field(g, value, ExponentRole::smoothness); }

ExponentField smooth(const Grid& g, ExponentRecipe recipe) {
  return build_exponent(recipe, g, ExponentRole::smoothness);
}

// |Q cap {w > 2^ell}| counted cell by cell
std::size_t count_above(const std::vector<double>& w, const std::vector<std::size_t>& cells, int ell) {
  std::size_t k = 0;
  for (std::size_t x : cells) k += w[x] > std::ldexp(1.0, ell) ? 1 : 0;
  return k;
}

}  // namespace

TEST(Identities, ThirdThetaEndpointExample) {
  const Grid g = make_grid(1, 4.0, 1024);
  const auto params =
      make_endpoint_params(1.0 / 3.0, constant_field(g, 3.0), 2.0, 4.0, smooth(g, 0.0), smooth(g, 1.0));
  const auto r = identity_residuals(params);
  EXPECT_LE(r.ratio, 1e-15);
  EXPECT_LE(r.harmonic_q, 1e-15);
  EXPECT_LE(r.shift, 1e-15);
  for (std::size_t x = 0; x < g.size(); x += 97) {
    EXPECT_NEAR(params.p[x], 4.5, 1e-15);
    EXPECT_NEAR(params.delta[x], -params.q[x] / 4.0, 1e-15);
    EXPECT_NEAR(params.gamma[x], params.p[x] / 3.0 - params.q[x] / 2.0, 1e-15);
  }
}

TEST(Identities, RandomVariableParameters) {
  const Grid g = make_grid(1, 4.0, 512);
  Rng rng(77);
  for (int k = 0; k < 20; ++k) {
    const double theta = rng.uniform(0.1, 0.9);
    const auto p0 = build_exponent(random_recipe(g, rng), g);
    const auto p1 = build_exponent(random_recipe(g, rng), g);
    const auto q0 = build_exponent(random_recipe(g, rng), g);
    const auto q1 = build_exponent(random_recipe(g, rng), g);
    const auto a0 = smooth(g, random_recipe(g, rng, -1.0, 2.0));
    const auto a1 = smooth(g, random_recipe(g, rng, -1.0, 2.0));
    const auto r = identity_residuals(make_params(theta, p0, p1, q0, q1, a0, a1));
    EXPECT_LE(r.shift, 1e-12);
    EXPECT_LE(r.harmonic_p, 1e-12);
    EXPECT_LE(r.harmonic_q, 1e-12);
  }
}

TEST(Classifier, CaseTags) {
  const Grid g = make_grid(1, 4.0, 512);
  const auto p0 = build_exponent(SineRecipe{3.0, 0.5, 1.0}, g);
  const auto p1 = build_exponent(SineRecipe{2.0, 0.5, 2.0}, g);
  EXPECT_EQ(case_classifier(p0, p1, p0, p1, 0.4), CaseTag::case_i);

  const auto three = constant_field(g, 3.0);
  const auto p1b = build_exponent(SineRecipe{3.0, 0.5, 1.0}, g);
  EXPECT_EQ(case_classifier(three, p1b, constant_field(g, 2.0), constant_field(g, 4.0), 0.5), CaseTag::case_ii);

  // gamma vanishes where p0 = q0 and p1 = q1, which happens only on part of the box
  const auto ramp = build_exponent(PlateauRampRecipe{2.0, 3.0, 1.0}, g);
  EXPECT_EQ(case_classifier(ramp, constant_field(g, 2.0), constant_field(g, 2.0), constant_field(g, 2.0), 0.5),
            CaseTag::unsupported);
}

TEST(FactorizePP, SingleCoefficientFactorsHaveUnitNorm) {
  const Grid g = make_grid(1, 4.0, 1024);
  const auto params = make_pp_params(0.4, constant_field(g, 2.0), constant_field(g, 5.0), smooth(g, 0.5), smooth(g, -0.5));
  for (int j : {0, 2, 4}) {
    DyadicCoefficients lambda(g, 4);
    lambda.set(DyadicCube{j, {3, 0}}, Complex(0.0, 7.0));
    const auto r = factorize_pp(lambda, params);
    EXPECT_LE(r.reconstruction_error, 1e-14);
    EXPECT_NEAR(r.norm0, 1.0, 1e-12);
    EXPECT_NEAR(r.norm1, 1.0, 1e-12);
    const double expected = 7.0 * std::exp2(j * (params.alpha[0] + 0.5 - 1.0 / params.p[0]));
    EXPECT_NEAR(r.norm, expected, 1e-12 * expected);
    EXPECT_NEAR(calderon_upper(r, params.theta), r.norm, 1e-12 * r.norm);
  }
}

TEST(FactorizePP, DegenerateParametersGiveTheNormItself) {
  const Grid g = make_grid(1, 4.0, 1024);
  Rng rng(3);
  const auto p = build_exponent(SineRecipe{2.5, 0.5, 1.0}, g);
  const auto a = smooth(g, SineRecipe{0.3, 0.2, 1.0});
  const auto params = make_pp_params(0.5, p, p, a, a);
  const auto lambda = random_coefficients(g, 4, 60, rng);
  const auto r = factorize_pp(lambda, params);
  EXPECT_LE(r.reconstruction_error, 1e-12);
  EXPECT_NEAR(r.norm0, 1.0, 1e-9);
  EXPECT_NEAR(r.norm1, 1.0, 1e-9);
  const std::vector<DyadicCoefficients> corpus{lambda};
  const auto eq = equivalence_experiment(corpus, params, Construction::pp);
  EXPECT_NEAR(eq.max_ratio, 1.0, 1e-9);
  EXPECT_NEAR(eq.min_ratio, 1.0, 1e-9);
}

TEST(FactorizePP, RandomCorpusReconstructs) {
  const Grid g = make_grid(1, 4.0, 1024);
  Rng rng(8);
  const auto params = make_pp_params(0.3, build_exponent(SineRecipe{2.5, 0.8, 1.0}, g),
                                     build_exponent(PlateauRampRecipe{1.5, 3.5, 1.0}, g),
                                     smooth(g, SineRecipe{0.0, 0.5, 2.0}), smooth(g, 1.0));
  for (int k = 0; k < 5; ++k) {
    const auto lambda = random_coefficients(g, 5, 200, rng);
    const auto r = factorize_pp(lambda, params);
    EXPECT_LE(r.reconstruction_error, 1e-9);
    EXPECT_TRUE(std::isfinite(r.norm0));
    EXPECT_TRUE(std::isfinite(r.norm1));
  }
}

TEST(FactorizePP, RejectsZeroSequence) {
  const Grid g = make_grid(1, 4.0, 256);
  const auto params = make_pp_params(0.5, constant_field(g, 2.0), constant_field(g, 3.0), smooth(g, 0.0), smooth(g, 0.0));
  try {
    factorize_pp(DyadicCoefficients(g, 2), params);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_input);
  }
}

TEST(FactorizePqInfty, SingleCoefficientAgreesWithSequenceNorms) {
  const Grid g = make_grid(1, 4.0, 1024);
  const auto params =
      make_endpoint_params(0.5, build_exponent(SineRecipe{2.0, 0.5, 1.0}, g), 2.0, 4.0, smooth(g, 0.0), smooth(g, 0.5));
  DyadicCoefficients lambda(g, 4);
  lambda.set(DyadicCube{2, {9, 0}}, 3.0);
  const auto r = factorize_pq_infty(lambda, params);
  EXPECT_LE(r.reconstruction_error, 1e-12);
  ASSERT_TRUE(r.level_sets.has_value());
  EXPECT_EQ(r.level_sets->class_of.size(), 1u);
  EXPECT_NEAR(r.norm0, f_norm(r.lambda0, params.alpha0, params.p0, params.q0).value, 1e-12 * r.norm0);
  EXPECT_NEAR(r.norm1, f_infty_subset_norm(r.lambda1, params.alpha1, 4.0, *r.selection), 1e-12 * r.norm1);
  EXPECT_NEAR(r.norm1_direct, f_infty_norm(r.lambda1, params.alpha1, 4.0), 1e-12 * r.norm1_direct);
}

TEST(FactorizePqInfty, RandomCorpusReconstructsAndDominates) {
  const Grid g = make_grid(1, 4.0, 1024);
  Rng rng(15);
  const auto params = make_endpoint_params(0.4, build_exponent(PlateauRampRecipe{1.5, 3.0, 1.0}, g), 3.0, 1.5,
                                           smooth(g, SineRecipe{0.5, 0.5, 1.0}), smooth(g, -0.5));
  for (int k = 0; k < 4; ++k) {
    const auto lambda = random_coefficients(g, 5, 200, rng);
    const auto r = factorize_pq_infty(lambda, params);
    EXPECT_LE(r.reconstruction_error, 1e-9);
    const auto h = verify_holder_direction(lambda.scaled(1.0 / r.norm), r.lambda0, r.lambda1, params, &*r.selection);
    EXPECT_GE(h.restricted_margin, -1e-9 * h.restricted_product);
  }
}

TEST(LevelSets, NestingDisjointnessAndMembership) {
  const Grid g = make_grid(1, 4.0, 1024);
  Rng rng(23);
  const auto params =
      make_endpoint_params(0.5, build_exponent(SineRecipe{2.5, 0.5, 1.0}, g), 2.0, 3.0, smooth(g, 0.0), smooth(g, 0.0));
  for (int k = 0; k < 5; ++k) {
    const auto lambda = random_coefficients(g, 5, 150, rng);
    const auto sets = build_level_sets(lambda, params);
    for (int ell = sets.ell_min; ell <= sets.ell_max; ++ell) {
      const auto& outer = sets.mask(ell);
      const auto& inner = sets.mask(ell + 1);
      for (std::size_t x = 0; x < g.size(); ++x) EXPECT_LE(inner[x], outer[x]);
    }
    std::size_t assigned = 0;
    for (const auto& [ell, size] : sets.class_sizes()) assigned += size;
    EXPECT_EQ(assigned, sets.class_of.size());
    EXPECT_EQ(assigned + sets.unassigned.size(), lambda.size());
    for (const auto& [cube, ell] : sets.class_of) {
      const auto cells = cube_cells(g, cube);
      EXPECT_GT(2 * count_above(sets.weight, cells, ell), cells.size());
      EXPECT_LE(2 * count_above(sets.weight, cells, ell + 1), cells.size());
    }
    for (const auto& cube : sets.unassigned) EXPECT_LE(std::abs(lambda.get(cube)), 1e-12 * sets.norm);
  }
}

TEST(LevelSets, SeparatesVeryDifferentMagnitudes) {
  const Grid g = make_grid(1, 4.0, 1024);
  const auto params = make_endpoint_params(0.5, constant_field(g, 2.0), 2.0, 3.0, smooth(g, 0.0), smooth(g, 0.0));
  DyadicCoefficients lambda(g, 3);
  lambda.set(DyadicCube{1, {2, 0}}, 1.0);
  lambda.set(DyadicCube{1, {12, 0}}, 1e4);
  const auto sets = build_level_sets(lambda, params);
  ASSERT_EQ(sets.class_of.size(), 2u);
  EXPECT_NE(sets.class_of.at(DyadicCube{1, {2, 0}}), sets.class_of.at(DyadicCube{1, {12, 0}}));
  EXPECT_TRUE(build_level_sets(DyadicCoefficients(g, 3), params).empty());
}

TEST(LevelSets, RejectsVanishingGamma) {
  const Grid g = make_grid(1, 4.0, 256);
  const auto two = constant_field(g, 2.0);
  const auto params = make_params(0.5, two, constant_field(g, 3.0), two, constant_field(g, 3.0), smooth(g, 0.0),
                                  smooth(g, 0.0));
  DyadicCoefficients lambda(g, 2);
  lambda.set(DyadicCube{0, {0, 0}}, 1.0);
  EXPECT_THROW(build_level_sets(lambda, params), Error);
}

TEST(Holder, SelfFactorizationHasZeroMargin) {
  const Grid g = make_grid(1, 4.0, 1024);
  Rng rng(29);
  const auto p = constant_field(g, 2.5);
  const auto a = smooth(g, 0.5);
  const auto params = make_pp_params(0.5, p, p, a, a);
  const auto lambda = random_coefficients(g, 4, 50, rng);
  const auto unit = lambda.scaled(1.0 / interpolated_norm(lambda, params));
  const auto h = verify_holder_direction(unit, unit, unit, params);
  EXPECT_GE(h.margin, -1e-12);
  EXPECT_NEAR(h.margin, 0.0, 1e-9);
}

TEST(Holder, BrokenDominationIsAPreconditionViolation) {
  const Grid g = make_grid(1, 4.0, 256);
  const auto params = make_pp_params(0.5, constant_field(g, 2.0), constant_field(g, 3.0), smooth(g, 0.0), smooth(g, 0.0));
  DyadicCoefficients lambda(g, 2);
  lambda.set(DyadicCube{1, {1, 0}}, 1.0);
  try {
    verify_holder_direction(lambda, lambda.scaled(0.5), lambda.scaled(0.5), params);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::precondition_violation);
    EXPECT_NE(std::string(e.what()).find("(1,[1])"), std::string::npos);
  }
}

TEST(Lattice, TruncationsAndRamps) {
  const Grid g = make_grid(1, 4.0, 512);
  Rng rng(31);
  const auto lambda = random_coefficients(g, 4, 40, rng);
  const auto alpha = smooth(g, SineRecipe{0.2, 0.3, 1.0});
  const auto p = build_exponent(SineRecipe{2.5, 0.5, 1.0}, g);
  const auto q = constant_field(g, 2.0);
  const auto trunc = lattice_property_check(support_truncations(lambda, 8), lambda, alpha, p, q);
  EXPECT_TRUE(trunc.monotone);
  EXPECT_TRUE(trunc.passed);
  EXPECT_LE(trunc.final_gap, 1e-9);

  const auto ramp_seq = magnitude_ramp(lambda, 6);
  const auto ramp = lattice_property_check(ramp_seq, lambda, alpha, p, q);
  EXPECT_TRUE(ramp.passed);
  for (std::size_t k = 0; k + 1 < ramp_seq.size(); ++k) {
    EXPECT_NEAR(ramp.norms[k], (1.0 - 1.0 / static_cast<double>(k + 2)) * ramp.target, 1e-9 * ramp.target);
  }
}
