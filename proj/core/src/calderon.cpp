#include "vexint/calderon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "vexint/error.hpp"
#include "vexint/lebesgue.hpp"
#include "vexint/parallel.hpp"

namespace vexint {

namespace {

constexpr double gamma_floor = 1e-12;

void check_theta(double theta) {
  require(theta > 0.0 && theta < 1.0, ErrorKind::invalid_configuration, "theta must lie in (0, 1)");
}

std::vector<double> pointwise(std::size_t size, const auto& fn) {
  std::vector<double> out(size);
  for (std::size_t x = 0; x < size; ++x) out[x] = fn(x);
  return out;
}

/// a b - c d with one rounding.
double cross(double a, double b, double c, double d) {
  const double w = c * d;
  return std::fma(a, b, -w) + std::fma(-c, d, w);
}

// gamma and delta in cancellation-free form
void fill_gamma_delta(FactorizationParams& params) {
  const std::size_t size = params.grid().size();
  const double t = params.theta;
  if (!params.p1) {
    params.gamma = pointwise(size, [&](std::size_t x) {
      const double q0 = params.q0[x];
      return t * q0 / ((1.0 - t) * ((1.0 - t) * params.q1[x] + t * q0));
    });
    params.delta = pointwise(size, [&](std::size_t x) {
      const double q0 = params.q0[x];
      return -q0 / ((1.0 - t) * params.q1[x] + t * q0);
    });
    return;
  }
  const ExponentField& p1 = *params.p1;
  params.gamma = pointwise(size, [&](std::size_t x) {
    const double p0 = params.p0[x], q0 = params.q0[x];
    const double a = (1.0 - t) + t * p0 / p1[x];
    const double b = (1.0 - t) + t * q0 / params.q1[x];
    return t * cross(q0, p1[x], p0, params.q1[x]) / (params.q1[x] * p1[x] * a * b);
  });
  params.delta = pointwise(size, [&](std::size_t x) {
    const double p0 = params.p0[x], q0 = params.q0[x];
    const double c = t + (1.0 - t) * p1[x] / p0;
    const double d = t + (1.0 - t) * params.q1[x] / q0;
    return -(1.0 - t) * cross(q0, p1[x], p0, params.q1[x]) / (q0 * p0 * c * d);
  });
}

double constant_value(const ExponentField& field, const char* name) {
  require(field.is_constant(), ErrorKind::unsupported_parameters, std::string(name) + " must be constant here");
  return field.min();
}

double relative_norm_error(double lhs, double rhs) { return std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)); }

std::size_t corner_of(const Grid& grid, const DyadicCube& cube) { return cube_corner(grid, cube); }

/// ell with 2^ell < w <= 2^{ell+1}.
int level_below(double w) {
  int ell = static_cast<int>(std::ceil(std::log2(w))) - 1;
  while (std::ldexp(1.0, ell + 1) < w) ++ell;
  while (!(std::ldexp(1.0, ell) < w)) --ell;
  return ell;
}

double factor_norm0(const DyadicCoefficients& lambda0, const FactorizationParams& params) {
  return f_norm(lambda0, params.alpha0, params.p0, params.q0).value;
}

}  // namespace

std::string_view to_string(Construction construction) noexcept {
  return construction == Construction::pp ? "pp" : "pq-infty";
}

std::string_view to_string(CaseTag tag) noexcept {
  switch (tag) {
    case CaseTag::case_i:
      return "case-i";
    case CaseTag::case_ii:
      return "case-ii";
    case CaseTag::endpoint:
      return "endpoint";
    case CaseTag::unsupported:
      break;
  }
  return "unsupported";
}

FactorizationParams make_pp_params(double theta, const ExponentField& p0, const ExponentField& p1,
                                   const ExponentField& alpha0, const ExponentField& alpha1) {
  return make_params(theta, p0, p1, p0, p1, alpha0, alpha1);
}

FactorizationParams make_params(double theta, const ExponentField& p0, const ExponentField& p1, const ExponentField& q0,
                                const ExponentField& q1, const ExponentField& alpha0, const ExponentField& alpha1) {
  check_theta(theta);
  FactorizationParams params{theta,
                             p0,
                             p1,
                             q0,
                             q1,
                             alpha0,
                             alpha1,
                             interpolate_exponents(p0, p1, theta, InterpolationMode::harmonic),
                             interpolate_exponents(q0, q1, theta, InterpolationMode::harmonic),
                             interpolate_exponents(alpha0, alpha1, theta, InterpolationMode::affine),
                             {},
                             {}};
  fill_gamma_delta(params);
  return params;
}

FactorizationParams make_endpoint_params(double theta, const ExponentField& p0, double q0, double q1,
                                         const ExponentField& alpha0, const ExponentField& alpha1) {
  check_theta(theta);
  const Grid& grid = p0.grid();
  auto q0_field = constant_field(grid, q0);
  auto q1_field = constant_field(grid, q1);
  std::vector<double> p(grid.size());
  for (std::size_t x = 0; x < p.size(); ++x) p[x] = p0[x] / (1.0 - theta);
  FactorizationParams params{theta,
                             p0,
                             std::nullopt,
                             q0_field,
                             q1_field,
                             alpha0,
                             alpha1,
                             ExponentField(grid, std::move(p), ExponentRole::integrability),
                             constant_field(grid, 1.0 / ((1.0 - theta) / q0 + theta / q1)),
                             interpolate_exponents(alpha0, alpha1, theta, InterpolationMode::affine),
                             {},
                             {}};
  fill_gamma_delta(params);
  return params;
}

ExponentShifts exponent_shifts(const FactorizationParams& params, Construction construction) {
  const std::size_t size = params.grid().size();
  const double theta = params.theta;
  const double half_n = 0.5 * params.grid().dimension();
  ExponentShifts s;
  if (construction == Construction::pp) {
    require(!params.endpoint(), ErrorKind::unsupported_parameters, "the pp construction needs a finite p1");
    s.r0 = pointwise(size, [&](std::size_t x) { return params.p[x] / params.p0[x]; });
    s.r1 = pointwise(size, [&](std::size_t x) { return params.p[x] / (*params.p1)[x]; });
  } else {
    s.r0 = pointwise(size, [&](std::size_t x) { return params.q[x] / params.q0[x]; });
    s.r1 = pointwise(size, [&](std::size_t x) { return params.q[x] / params.q1[x]; });
  }
  s.u = pointwise(size, [&](std::size_t x) {
    return theta * (params.alpha1[x] * s.r0[x] - params.alpha0[x] * s.r1[x]) + half_n * (s.r0[x] - 1.0);
  });
  s.v = pointwise(size, [&](std::size_t x) {
    return (1.0 - theta) * (params.alpha0[x] * s.r1[x] - params.alpha1[x] * s.r0[x]) + half_n * (s.r1[x] - 1.0);
  });
  return s;
}

double IdentityResiduals::max() const noexcept { return std::max({shift, ratio, harmonic_p, harmonic_q}); }

IdentityResiduals identity_residuals(const FactorizationParams& params) {
  const double theta = params.theta;
  const std::size_t size = params.grid().size();
  IdentityResiduals out;
  std::vector<Construction> constructions{Construction::pq_infty};
  if (!params.endpoint()) constructions.push_back(Construction::pp);
  for (Construction c : constructions) {
    const auto s = exponent_shifts(params, c);
    for (std::size_t x = 0; x < size; ++x)
      out.shift = std::max(out.shift, std::abs((1.0 - theta) * s.u[x] + theta * s.v[x]));
  }
  const CaseTag tag = case_classifier(params);
  const bool level_sets = tag == CaseTag::case_ii || tag == CaseTag::endpoint;
  for (std::size_t x = 0; x < size; ++x) {
    if (level_sets && std::abs(params.gamma[x]) > gamma_floor)
      out.ratio = std::max(out.ratio, std::abs((1.0 - theta) + params.delta[x] / params.gamma[x] * theta));
    const double rp1 = params.p1 ? params.p[x] / (*params.p1)[x] : 0.0;
    out.harmonic_p = std::max(out.harmonic_p, std::abs((1.0 - theta) * params.p[x] / params.p0[x] + theta * rp1 - 1.0));
    out.harmonic_q = std::max(
        out.harmonic_q, std::abs((1.0 - theta) * params.q[x] / params.q0[x] + theta * params.q[x] / params.q1[x] - 1.0));
  }
  return out;
}

CaseTag case_classifier(const ExponentField& p0, const ExponentField& p1, const ExponentField& q0,
                        const ExponentField& q1, double theta) {
  const auto p = interpolate_exponents(p0, p1, theta, InterpolationMode::harmonic);
  const auto q = interpolate_exponents(q0, q1, theta, InterpolationMode::harmonic);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    const double g = std::abs(p[x] / p0[x] - q[x] / q0[x]);
    lo = std::min(lo, g);
    hi = std::max(hi, g);
  }
  if (hi <= gamma_floor) return CaseTag::case_i;
  if (q0.is_constant() && q1.is_constant() && lo > gamma_floor) return CaseTag::case_ii;
  return CaseTag::unsupported;
}

CaseTag case_classifier(const FactorizationParams& params) {
  if (params.endpoint()) return CaseTag::endpoint;
  return case_classifier(params.p0, *params.p1, params.q0, params.q1, params.theta);
}

const std::vector<char>& LevelSetDecomposition::mask(int ell) const {
  require(ell >= ell_min && ell <= ell_max + 1, ErrorKind::invalid_input, "level set index out of range");
  return masks[static_cast<std::size_t>(ell - ell_min)];
}

std::vector<DyadicCube> LevelSetDecomposition::members(int ell) const {
  std::vector<DyadicCube> out;
  for (const auto& [cube, l] : class_of)
    if (l == ell) out.push_back(cube);
  return out;
}

std::map<int, std::size_t> LevelSetDecomposition::class_sizes() const {
  std::map<int, std::size_t> out;
  for (const auto& [cube, l] : class_of) ++out[l];
  return out;
}

LevelSetDecomposition build_level_sets(const DyadicCoefficients& lambda, const FactorizationParams& params) {
  require(lambda.grid() == params.grid(), ErrorKind::invalid_configuration, "coefficients and exponents differ in grid");
  for (double g : params.gamma)
    require(std::abs(g) > gamma_floor, ErrorKind::invalid_configuration, "gamma vanishes; use the pp construction");
  constant_value(params.q, "q");
  const Grid& grid = lambda.grid();

  LevelSetDecomposition out;
  const auto fields = level_fields(lambda, params.alpha);
  out.g = lq_envelope(std::span<const std::vector<double>>(fields), params.q);
  if (out.g.empty()) out.g.assign(grid.size(), 0.0);
  out.norm = luxemburg_norm(out.g, params.p).value;
  if (out.norm == 0.0) {
    for (const auto& [cube, value] : lambda) out.unassigned.push_back(cube);
    out.weight.assign(grid.size(), 0.0);
    return out;
  }
  out.weight = pointwise(grid.size(), [&](std::size_t x) {
    if (out.g[x] == 0.0) return params.gamma[x] > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::pow(out.g[x] / out.norm, params.gamma[x]);
  });

  int lo = std::numeric_limits<int>::max();
  int hi = std::numeric_limits<int>::min();
  for (const auto& [cube, value] : lambda) {
    if (value == Complex(0.0)) {
      out.unassigned.push_back(cube);
      continue;
    }
    auto w = [&] {
      std::vector<double> values;
      for (std::size_t x : cube_cells(grid, cube)) values.push_back(out.weight[x]);
      return values;
    }();
    const bool finite = std::all_of(w.begin(), w.end(), [](double s) { return s > 0.0 && std::isfinite(s); });
    if (!finite) {
      out.unassigned.push_back(cube);
      continue;
    }
    const std::size_t k = w.size() / 2 + 1;
    std::nth_element(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(k - 1), w.end(), std::greater<>());
    const int ell = level_below(w[k - 1]);
    out.class_of.emplace(cube, ell);
    lo = std::min(lo, ell);
    hi = std::max(hi, ell);
  }
  if (out.class_of.empty()) return out;
  out.ell_min = lo;
  out.ell_max = hi;
  for (int ell = lo; ell <= hi + 1; ++ell) {
    const double threshold = std::ldexp(1.0, ell);
    std::vector<char> mask(grid.size());
    for (std::size_t x = 0; x < mask.size(); ++x) mask[x] = out.weight[x] > threshold ? 1 : 0;
    out.masks.push_back(std::move(mask));
  }
  return out;
}

namespace {

double reconstruction_error(const DyadicCoefficients& lambda, const DyadicCoefficients& lambda0,
                            const DyadicCoefficients& lambda1, double norm, double theta) {
  double worst = 0.0;
  for (const auto& [cube, value] : lambda) {
    const double rebuilt =
        norm * std::pow(std::abs(lambda0.get(cube)), 1.0 - theta) * std::pow(std::abs(lambda1.get(cube)), theta);
    worst = std::max(worst, std::abs(std::abs(value) - rebuilt) / norm);
  }
  return worst;
}

}  // namespace

FactorizationResult factorize_pp(const DyadicCoefficients& lambda, const FactorizationParams& params) {
  require(!params.endpoint(), ErrorKind::unsupported_parameters, "the pp construction needs a finite p1");
  const double norm = interpolated_norm(lambda, params);
  require(norm > 0.0, ErrorKind::invalid_input, "factorization needs a nonzero sequence");
  const Grid& grid = lambda.grid();
  const auto s = exponent_shifts(params, Construction::pp);
  FactorizationResult out{.construction = Construction::pp,
                          .lambda0 = DyadicCoefficients(grid, lambda.max_level()),
                          .lambda1 = DyadicCoefficients(grid, lambda.max_level()),
                          .norm = norm};
  for (const auto& [cube, value] : lambda) {
    if (value == Complex(0.0)) {
      ++out.zero_count;
      continue;
    }
    const std::size_t x = corner_of(grid, cube);
    const double a = std::abs(value) / norm;
    out.lambda0.set(cube, std::exp2(cube.level * s.u[x]) * std::pow(a, s.r0[x]));
    out.lambda1.set(cube, std::exp2(cube.level * s.v[x]) * std::pow(a, s.r1[x]));
  }
  out.reconstruction_error = reconstruction_error(lambda, out.lambda0, out.lambda1, norm, params.theta);
  out.norm0 = factor_norm0(out.lambda0, params);
  out.norm1 = f_norm(out.lambda1, params.alpha1, *params.p1, params.q1).value;
  out.norm1_direct = out.norm1;
  return out;
}

FactorizationResult factorize_pq_infty(const DyadicCoefficients& lambda, const FactorizationParams& params) {
  const double q1 = constant_value(params.q1, "q1");
  constant_value(params.q0, "q0");
  auto sets = build_level_sets(lambda, params);
  require(sets.norm > 0.0, ErrorKind::invalid_input, "factorization needs a nonzero sequence");
  const Grid& grid = lambda.grid();
  const double norm = sets.norm;
  const auto s = exponent_shifts(params, Construction::pq_infty);
  FactorizationResult out{.construction = Construction::pq_infty,
                          .lambda0 = DyadicCoefficients(grid, lambda.max_level()),
                          .lambda1 = DyadicCoefficients(grid, lambda.max_level()),
                          .norm = norm};
  SubsetSelection selection;
  selection.strict = false;
  for (const auto& [cube, ell] : sets.class_of) {
    const std::size_t x = corner_of(grid, cube);
    const double a = std::abs(lambda.get(cube)) / norm;
    const double ratio = params.delta[x] / params.gamma[x];
    out.lambda0.set(cube, std::exp2(ell + cube.level * s.u[x]) * std::pow(a, s.r0[x]));
    out.lambda1.set(cube, std::exp2(ell * ratio + cube.level * s.v[x]) * std::pow(a, s.r1[x]));
    const double threshold = std::ldexp(1.0, ell + 1);
    std::vector<std::size_t> kept;
    for (std::size_t cell : cube_cells(grid, cube))
      if (!(sets.weight[cell] > threshold)) kept.push_back(cell);
    selection.cells.emplace(cube, std::move(kept));
  }
  out.zero_count = sets.unassigned.size();
  out.reconstruction_error = reconstruction_error(lambda, out.lambda0, out.lambda1, norm, params.theta);
  out.norm0 = factor_norm0(out.lambda0, params);
  if (params.endpoint()) {
    out.norm1 = f_infty_subset_norm(out.lambda1, params.alpha1, q1, selection);
    out.norm1_direct = f_infty_norm(out.lambda1, params.alpha1, q1);
  } else {
    out.norm1 = f_norm(out.lambda1, params.alpha1, *params.p1, params.q1).value;
    out.norm1_direct = out.norm1;
  }
  out.level_sets = std::move(sets);
  out.selection = std::move(selection);
  return out;
}

FactorizationResult factorize(const DyadicCoefficients& lambda, const FactorizationParams& params,
                              Construction construction) {
  return construction == Construction::pp ? factorize_pp(lambda, params) : factorize_pq_infty(lambda, params);
}

double interpolated_norm(const DyadicCoefficients& lambda, const FactorizationParams& params) {
  return f_norm(lambda, params.alpha, params.p, params.q).value;
}

HolderReport verify_holder_direction(const DyadicCoefficients& lambda, const DyadicCoefficients& lambda0,
                                     const DyadicCoefficients& lambda1, const FactorizationParams& params,
                                     const SubsetSelection* selection) {
  const double theta = params.theta;
  std::vector<DyadicCube> offenders;
  for (const auto& [cube, value] : lambda) {
    const double bound = std::pow(std::abs(lambda0.get(cube)), 1.0 - theta) * std::pow(std::abs(lambda1.get(cube)), theta);
    if (std::abs(value) > bound * (1.0 + 1e-9) + std::numeric_limits<double>::min()) offenders.push_back(cube);
  }
  if (!offenders.empty()) {
    std::ostringstream msg;
    msg << offenders.size() << " coefficient(s) not dominated by the factors:";
    for (std::size_t i = 0; i < std::min<std::size_t>(offenders.size(), 10); ++i) {
      const auto& c = offenders[i];
      msg << " (" << c.level << ",[" << c.index[0];
      if (lambda.grid().dimension() == 2) msg << "," << c.index[1];
      msg << "])";
    }
    if (offenders.size() > 10) msg << " ...";
    fail(ErrorKind::precondition_violation, msg.str());
  }

  HolderReport out;
  out.lower = interpolated_norm(lambda, params);
  const double norm0 = f_norm(lambda0, params.alpha0, params.p0, params.q0).value;
  if (!params.endpoint()) {
    const double norm1 = f_norm(lambda1, params.alpha1, *params.p1, params.q1).value;
    out.product = std::pow(norm0, 1.0 - theta) * std::pow(norm1, theta);
    out.margin = out.product - out.lower;
    out.tolerance = 1e-9 * out.product;
    out.restricted = out.lower;
    out.restricted_product = out.product;
    out.restricted_margin = out.margin;
    out.passed = out.margin >= -out.tolerance;
    return out;
  }

  const double q1 = constant_value(params.q1, "q1");
  const double q = constant_value(params.q, "q");
  out.product = std::pow(norm0, 1.0 - theta) * std::pow(f_infty_norm(lambda1, params.alpha1, q1), theta);
  out.margin = out.product - out.lower;
  const SubsetSelection chosen = selection ? *selection : greedy_selection(lambda1, params.alpha1, q1);
  const double subset = f_infty_subset_norm(lambda1, params.alpha1, q1, chosen);

  const Grid& grid = lambda.grid();
  const double half_n = 0.5 * grid.dimension();
  std::vector<double> power(grid.size(), 0.0);
  for (const auto& [cube, value] : lambda) {
    if (value == Complex(0.0)) continue;
    auto it = chosen.cells.find(cube);
    require(it != chosen.cells.end(), ErrorKind::invalid_selection, "selection misses a supported cube");
    for (std::size_t x : it->second)
      power[x] += std::pow(std::exp2(cube.level * (params.alpha[x] + half_n)) * std::abs(value), q);
  }
  for (double& s : power) s = std::pow(s, 1.0 / q);
  out.restricted = luxemburg_norm(power, params.p).value;
  out.restricted_product = std::pow(norm0, 1.0 - theta) * std::pow(subset, theta);
  out.restricted_margin = out.restricted_product - out.restricted;
  out.subset_constant = out.restricted > 0.0 ? out.lower / out.restricted : 1.0;
  out.tolerance = 1e-9 * out.restricted_product;
  out.passed = out.restricted_margin >= -out.tolerance;
  return out;
}

double calderon_upper(const FactorizationResult& result, double theta) {
  return result.norm * std::pow(std::max(1.0, result.norm0), 1.0 - theta) * std::pow(std::max(1.0, result.norm1), theta);
}

double calderon_upper(const DyadicCoefficients& lambda, const FactorizationParams& params, Construction construction) {
  return calderon_upper(factorize(lambda, params, construction), params.theta);
}

std::vector<DyadicCoefficients> support_truncations(const DyadicCoefficients& lambda, std::size_t steps) {
  require(steps > 0, ErrorKind::invalid_input, "need at least one truncation");
  std::vector<DyadicCoefficients> out;
  const std::size_t total = lambda.size();
  for (std::size_t k = 1; k <= steps; ++k) {
    const std::size_t keep = (total * k + steps - 1) / steps;
    DyadicCoefficients t(lambda.grid(), lambda.max_level());
    std::size_t i = 0;
    for (const auto& [cube, value] : lambda) {
      if (i++ >= keep) break;
      t.set(cube, value);
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<DyadicCoefficients> magnitude_ramp(const DyadicCoefficients& lambda, std::size_t steps) {
  std::vector<DyadicCoefficients> out;
  for (std::size_t k = 1; k <= steps; ++k) out.push_back(lambda.scaled(1.0 - 1.0 / static_cast<double>(k + 1)));
  out.push_back(lambda);
  return out;
}

LatticeReport lattice_property_check(const std::vector<DyadicCoefficients>& sequence, const DyadicCoefficients& lambda,
                                     const ExponentField& alpha, const ExponentField& p, const ExponentField& q) {
  LatticeReport out;
  out.target = f_norm(lambda, alpha, p, q).value;
  for (const auto& item : sequence) {
    for (const auto& [cube, value] : item)
      require(std::abs(value) <= std::abs(lambda.get(cube)), ErrorKind::precondition_violation,
              "truncation exceeds the limit sequence");
    out.norms.push_back(f_norm(item, alpha, p, q).value);
  }
  for (std::size_t k = 1; k < out.norms.size(); ++k)
    if (out.norms[k] < out.norms[k - 1] * (1.0 - 1e-9)) out.monotone = false;
  out.final_gap = out.norms.empty() ? out.target : relative_norm_error(out.norms.back(), out.target);
  out.passed = out.monotone && out.final_gap <= 1e-9;
  return out;
}

EquivalenceReport equivalence_experiment(const std::vector<DyadicCoefficients>& corpus,
                                         const FactorizationParams& params, Construction construction) {
  require(!corpus.empty(), ErrorKind::invalid_input, "empty corpus");
  EquivalenceReport out;
  out.rows.resize(corpus.size());
  const CaseTag tag = case_classifier(params);
  parallel_for(corpus.size(), [&](std::size_t i) {
    EquivalenceRow row;
    row.id = i;
    row.tag = tag;
    row.lower = interpolated_norm(corpus[i], params);
    if (row.lower > 0.0) {
      row.upper = calderon_upper(corpus[i], params, construction);
      row.ratio = row.upper / row.lower;
    }
    out.rows[i] = row;
  });
  out.min_ratio = std::numeric_limits<double>::infinity();
  for (const auto& row : out.rows) {
    out.min_ratio = std::min(out.min_ratio, row.ratio);
    out.max_ratio = std::max(out.max_ratio, row.ratio);
  }
  return out;
}

}  // namespace vexint
