#include "vexint_cli/suite.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>

#include "vexint/calderon.hpp"
#include "vexint/corpus.hpp"
#include "vexint/error.hpp"
#include "vexint/interp.hpp"
#include "vexint/kernels.hpp"
#include "vexint/lebesgue.hpp"
#include "vexint/lpf.hpp"
#include "vexint/parallel.hpp"
#include "vexint_cli/config.hpp"
#include "vexint_cli/experiments.hpp"

namespace vexint::cli {

namespace {

// pinned tolerances
constexpr double identity_tol = 1e-12;
constexpr double identity_seconds = 1.0;
constexpr double reconstruction_tol = 1e-9;
constexpr double reconstruction_seconds = 30.0;
constexpr double holder_tol = 1e-9;
constexpr double stability_factor = 2.0;
constexpr double closed_form_tol = 1e-8;
constexpr double homogeneity_tol = 1e-9;
constexpr double eta_mass_tol = 1e-6;
constexpr double eta_variation_tol = 1e-3;
constexpr double sampled_budget_tol = 0.05;
constexpr double divergence_factor = 2.0;
constexpr double jensen_tol = 1e-12;
constexpr double partition_tol = 1e-12;
constexpr double duality_tol = 1e-10;
constexpr double roundtrip_tol = 1e-6;
constexpr double roundtrip_seconds = 60.0;
constexpr double poisson_mass_tol = 1e-8;
constexpr double harmonic_tol = 1e-6;
constexpr double sandwich_tol = 1e-6;
constexpr double closed_sandwich_tol = 1e-9;
constexpr double single_coefficient_tol = 1e-9;
constexpr double vanishing_tol = 1e-12;
constexpr double suite_seconds = 300.0;

constexpr std::array<std::string_view, criterion_count> titles{
    "exponent identities",
    "factorization reconstruction",
    "Holder direction",
    "factor-norm stability",
    "equivalence brackets",
    "Luxemburg correctness",
    "eta-kernel mass",
    "alpha-shift constant",
    "Jensen-type estimate",
    "partition and duality identities",
    "round trips",
    "phi-transform equivalence",
    "Poisson masses",
    "scalar interpolation sandwich",
    "coefficient bound",
    "level-set structure",
    "determinism and runtime",
};

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stream(std::uint64_t seed, std::uint64_t tag) { return mix(seed ^ mix(tag)); }

std::string fmt(const char* pattern, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, x);
  return buf;
}

std::string num(std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04zu", i);
  return buf;
}

double spread(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) return std::numeric_limits<double>::infinity();
  return std::max(a / b, b / a);
}

Grid grid_1d() { return make_grid(1, 4.0, 1024); }
Grid grid_1d_fine() { return make_grid(1, 4.0, 2048); }
Grid grid_2d() { return make_grid(2, 2.0, 256); }

ExponentField smooth(const ExponentRecipe& r, const Grid& g) { return build_exponent(r, g, ExponentRole::smoothness); }
ExponentField expo(const ExponentRecipe& r, const Grid& g) { return build_exponent(r, g); }

std::string recipe_text(const ExponentRecipe& r) { return recipe_json(r).dump(); }

/// Rows and notes of one criterion.
struct Run {
  std::string prefix;
  std::vector<Row> rows;
  std::ostringstream detail;
  bool extra = true;

  void upper(const std::string& id, std::string_view inputs, double value, double bound) {
    rows.push_back(Row::upper(prefix + "/" + id, inputs, value, bound));
  }
  void lower(const std::string& id, std::string_view inputs, double value, double bound) {
    rows.push_back(Row::lower(prefix + "/" + id, inputs, value, bound));
  }
  void runtime(double seconds, double limit) {
    detail << " runtime " << fmt("%.2f", seconds) << " s (limit " << fmt("%g", limit) << " s);";
    if (!(seconds < limit)) extra = false;
  }
};

enum class SpecKind { pp, general, endpoint };

/// Recipes of one parameter set; fields are built per grid.
struct ParamSpec {
  SpecKind kind = SpecKind::pp;
  double theta = 0.5;
  ExponentRecipe p0;
  ExponentRecipe p1;
  ExponentRecipe q0;
  ExponentRecipe q1;
  ExponentRecipe alpha0;
  ExponentRecipe alpha1;

  FactorizationParams build(const Grid& g) const {
    switch (kind) {
      case SpecKind::pp:
        return make_pp_params(theta, expo(p0, g), expo(p1, g), smooth(alpha0, g), smooth(alpha1, g));
      case SpecKind::general:
        return make_params(theta, expo(p0, g), expo(p1, g), expo(q0, g), expo(q1, g), smooth(alpha0, g),
                           smooth(alpha1, g));
      case SpecKind::endpoint:
        return make_endpoint_params(theta, expo(p0, g), std::get<ConstantRecipe>(q0).value,
                                    std::get<ConstantRecipe>(q1).value, smooth(alpha0, g), smooth(alpha1, g));
    }
    fail(ErrorKind::invalid_configuration, "unknown parameter kind");
  }

  std::string text() const {
    return std::to_string(static_cast<int>(kind)) + " " + fmt("%.17g ", theta) + recipe_text(p0) + recipe_text(p1) +
           recipe_text(q0) + recipe_text(q1) + recipe_text(alpha0) + recipe_text(alpha1);
  }
};

ParamSpec random_spec(SpecKind kind, const Grid& g, Rng& rng) {
  ParamSpec s;
  s.kind = kind;
  s.theta = rng.uniform(0.1, 0.9);
  s.p0 = random_recipe(g, rng);
  s.p1 = random_recipe(g, rng);
  s.alpha0 = random_recipe(g, rng, -1.0, 2.0);
  s.alpha1 = random_recipe(g, rng, -1.0, 2.0);
  if (kind == SpecKind::general) {
    s.q0 = random_recipe(g, rng);
    s.q1 = random_recipe(g, rng);
  } else if (kind == SpecKind::endpoint) {
    s.q0 = ConstantRecipe{rng.uniform(1.2, 4.0)};
    s.q1 = ConstantRecipe{rng.uniform(1.2, 4.0)};
  } else {
    s.q0 = s.p0;
    s.q1 = s.p1;
  }
  return s;
}

/// The worked case-ii family: q0 = 2, q1 = 4, p0 = 3, variable p1.
ParamSpec case_ii_spec() {
  ParamSpec s;
  s.kind = SpecKind::general;
  s.theta = 0.5;
  s.p0 = ConstantRecipe{3.0};
  s.p1 = SineRecipe{3.0, 0.5, 1.0};
  s.q0 = ConstantRecipe{2.0};
  s.q1 = ConstantRecipe{4.0};
  s.alpha0 = ConstantRecipe{0.0};
  s.alpha1 = SineRecipe{0.5, 0.25, 1.0};
  return s;
}

struct FactorRecord {
  double reconstruction = 0.0;
  double margin = 0.0;
  double product = 0.0;
  double norm0 = 0.0;
  double norm1 = 0.0;
};

FactorRecord factor_record(const DyadicCoefficients& lambda, const FactorizationParams& params,
                           Construction construction) {
  const auto r = factorize(lambda, params, construction);
  const auto h = verify_holder_direction(lambda.scaled(1.0 / r.norm), r.lambda0, r.lambda1, params,
                                         r.selection ? &*r.selection : nullptr);
  const bool endpoint = params.endpoint();
  return {r.reconstruction_error, endpoint ? h.restricted_margin : h.margin,
          endpoint ? h.restricted_product : h.product, r.norm0, r.norm1};
}

/// One coefficient corpus factorized by both constructions.
struct FactorSet {
  std::vector<DyadicCoefficients> lambdas;
  std::vector<std::size_t> spec_of;
  std::vector<FactorRecord> pp;
  std::vector<FactorRecord> endpoint;
};

FactorSet factor_set(std::vector<DyadicCoefficients> lambdas, const std::vector<ParamSpec>& pp_specs,
                     const std::vector<ParamSpec>& ep_specs) {
  FactorSet out;
  const Grid g = lambdas.front().grid();
  std::vector<FactorizationParams> pp_params;
  std::vector<FactorizationParams> ep_params;
  for (const auto& s : pp_specs) pp_params.push_back(s.build(g));
  for (const auto& s : ep_specs) ep_params.push_back(s.build(g));
  out.pp.resize(lambdas.size());
  out.endpoint.resize(lambdas.size());
  for (std::size_t i = 0; i < lambdas.size(); ++i) out.spec_of.push_back(i % pp_specs.size());
  parallel_for(lambdas.size(), [&](std::size_t i) {
    out.pp[i] = factor_record(lambdas[i], pp_params[out.spec_of[i]], Construction::pp);
    out.endpoint[i] = factor_record(lambdas[i], ep_params[out.spec_of[i]], Construction::pq_infty);
  });
  out.lambdas = std::move(lambdas);
  return out;
}

std::vector<DyadicCoefficients> draw_corpus(const Grid& g, int levels, std::size_t count, std::size_t max_size,
                                            std::uint64_t seed) {
  Rng rng(seed);
  std::vector<DyadicCoefficients> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_coefficients(g, levels, 1 + rng.index(max_size), rng));
  return out;
}

std::vector<DyadicCoefficients> rehost_all(const std::vector<DyadicCoefficients>& corpus, const Grid& g) {
  std::vector<DyadicCoefficients> out;
  for (const auto& lambda : corpus) out.push_back(rehost_coefficients(lambda, g, lambda.max_level()));
  return out;
}

/// Lazily built data shared by several criteria.
class Context {
 public:
  explicit Context(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed(int criterion) const { return stream(seed_, static_cast<std::uint64_t>(criterion)); }

  const std::vector<ParamSpec>& pp_specs() { return specs().first; }
  const std::vector<ParamSpec>& ep_specs() { return specs().second; }
  const std::vector<ParamSpec>& pp_specs_2d() { return specs_2d().first; }
  const std::vector<ParamSpec>& ep_specs_2d() { return specs_2d().second; }

  /// 100 sequences on the 1D grid, up to 500 coefficients each, V = 5.
  const FactorSet& factors() {
    if (!factors_) factors_ = factor_set(draw_corpus(grid_1d(), 5, 100, 500, stream(seed_, 1001)), pp_specs(), ep_specs());
    return *factors_;
  }
  /// 8 sequences on the 2D grid, up to 200 coefficients each, V = 4.
  const FactorSet& factors_2d() {
    if (!factors_2d_)
      factors_2d_ = factor_set(draw_corpus(grid_2d(), 4, 8, 200, stream(seed_, 1002)), pp_specs_2d(), ep_specs_2d());
    return *factors_2d_;
  }
  std::uint64_t corpus_seed() const { return stream(seed_, 1001); }

 private:
  using SpecPair = std::pair<std::vector<ParamSpec>, std::vector<ParamSpec>>;

  static SpecPair draw_specs(const Grid& g, std::uint64_t seed) {
    Rng rng(seed);
    SpecPair out;
    for (int k = 0; k < 4; ++k) out.first.push_back(random_spec(SpecKind::pp, g, rng));
    for (int k = 0; k < 4; ++k) out.second.push_back(random_spec(SpecKind::endpoint, g, rng));
    return out;
  }
  const SpecPair& specs() {
    if (!specs_) specs_ = draw_specs(grid_1d(), stream(seed_, 1003));
    return *specs_;
  }
  const SpecPair& specs_2d() {
    if (!specs_2d_) specs_2d_ = draw_specs(grid_2d(), stream(seed_, 1004));
    return *specs_2d_;
  }

  std::uint64_t seed_;
  std::optional<SpecPair> specs_;
  std::optional<SpecPair> specs_2d_;
  std::optional<FactorSet> factors_;
  std::optional<FactorSet> factors_2d_;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// 1
void exponent_identities(Context& ctx, Run& run) {
  const auto start = Clock::now();
  Rng rng(ctx.seed(1));
  double worst = 0.0;
  for (std::size_t i = 0; i < 100; ++i) {
    const Grid g = i % 10 == 9 ? grid_2d() : grid_1d();
    const auto kind = std::array{SpecKind::pp, SpecKind::general, SpecKind::endpoint, SpecKind::general}[i % 4];
    ParamSpec spec = random_spec(kind, g, rng);
    if (i % 4 == 3) {
      spec.q0 = ConstantRecipe{rng.uniform(1.2, 4.0)};
      spec.q1 = ConstantRecipe{rng.uniform(1.2, 4.0)};
    }
    const double r = identity_residuals(spec.build(g)).max();
    worst = std::max(worst, r);
    run.upper("set/" + num(i), spec.text(), r, identity_tol);
  }
  ParamSpec example = case_ii_spec();
  example.kind = SpecKind::endpoint;
  example.theta = 1.0 / 3.0;
  example.alpha1 = ConstantRecipe{0.0};
  const double r = identity_residuals(example.build(grid_1d())).max();
  worst = std::max(worst, r);
  run.upper("third", example.text(), r, identity_tol);
  const double r2 = identity_residuals(case_ii_spec().build(grid_1d())).max();
  worst = std::max(worst, r2);
  run.upper("case-ii", case_ii_spec().text(), r2, identity_tol);
  run.detail << " worst residual " << fmt("%.3g", worst) << ";";
  run.runtime(seconds_since(start), identity_seconds);
}

// 2
void reconstruction(Context& ctx, Run& run) {
  const auto start = Clock::now();
  double worst = 0.0;
  auto record = [&](const FactorSet& set, const std::string& tag) {
    for (std::size_t i = 0; i < set.lambdas.size(); ++i) {
      const std::string inputs = coefficient_records(set.lambdas[i]);
      run.upper(tag + "/pp/" + num(i), inputs, set.pp[i].reconstruction, reconstruction_tol);
      run.upper(tag + "/endpoint/" + num(i), inputs, set.endpoint[i].reconstruction, reconstruction_tol);
      worst = std::max({worst, set.pp[i].reconstruction, set.endpoint[i].reconstruction});
    }
  };
  const auto& set = ctx.factors();
  const double elapsed = seconds_since(start);
  record(set, "1d");
  record(ctx.factors_2d(), "2d");
  run.detail << " worst relative error " << fmt("%.3g", worst) << ";";
  run.runtime(elapsed, reconstruction_seconds);
}

// 3
void holder_direction(Context& ctx, Run& run) {
  std::size_t negative_pp = 0;
  std::size_t failed_pp = 0;
  std::size_t failed_ep = 0;
  double worst_pp = std::numeric_limits<double>::infinity();
  double worst_ep = std::numeric_limits<double>::infinity();
  auto record = [&](const FactorSet& set, const std::string& tag) {
    for (std::size_t i = 0; i < set.lambdas.size(); ++i) {
      const std::string inputs = coefficient_records(set.lambdas[i]);
      const auto& a = set.pp[i];
      const auto& b = set.endpoint[i];
      run.lower(tag + "/pp/" + num(i), inputs, a.margin, -holder_tol * a.product);
      run.lower(tag + "/endpoint/" + num(i), inputs, b.margin, -holder_tol * b.product);
      if (a.margin < 0.0) ++negative_pp;
      if (a.margin < -holder_tol * a.product) ++failed_pp;
      if (b.margin < -holder_tol * b.product) ++failed_ep;
      worst_pp = std::min(worst_pp, a.margin / a.product);
      worst_ep = std::min(worst_ep, b.margin / b.product);
    }
  };
  record(ctx.factors(), "1d");
  record(ctx.factors_2d(), "2d");
  run.detail << " pp: " << failed_pp << " below tolerance, worst relative margin " << fmt("%.3g", worst_pp)
             << "; endpoint: " << failed_ep << " below tolerance, worst relative margin " << fmt("%.3g", worst_ep)
             << ";";
}

// 4
void factor_stability(Context& ctx, Run& run) {
  const auto& base = ctx.factors();
  auto maxima = [](const FactorSet& set) {
    std::array<double, 4> m{0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < set.lambdas.size(); ++i) {
      m[0] = std::max(m[0], set.pp[i].norm0);
      m[1] = std::max(m[1], set.pp[i].norm1);
      m[2] = std::max(m[2], set.endpoint[i].norm0);
      m[3] = std::max(m[3], set.endpoint[i].norm1);
    }
    return m;
  };
  const auto refined = factor_set(rehost_all(base.lambdas, grid_1d_fine()), ctx.pp_specs(), ctx.ep_specs());
  const auto shallow = factor_set(draw_corpus(grid_1d(), 4, 100, 500, ctx.corpus_seed()), ctx.pp_specs(), ctx.ep_specs());
  const auto m_base = maxima(base);
  const auto m_fine = maxima(refined);
  const auto m_shallow = maxima(shallow);
  const std::array<const char*, 4> names{"pp/norm0", "pp/norm1", "endpoint/norm0", "endpoint/norm1"};
  for (std::size_t k = 0; k < names.size(); ++k) {
    const std::string inputs = std::string(names[k]) + fmt(" %.17g", m_base[k]);
    run.upper(std::string(names[k]) + "/refine", inputs, m_fine[k] / m_base[k], stability_factor);
    run.upper(std::string(names[k]) + "/level", inputs, m_base[k] / m_shallow[k], stability_factor);
    run.detail << " " << names[k] << " max " << fmt("%.4g", m_shallow[k]) << " (V=4), " << fmt("%.4g", m_base[k])
               << " (V=5), " << fmt("%.4g", m_fine[k]) << " (2N);";
  }
}

// 5
struct Family {
  std::string name;
  ParamSpec spec;
  Construction construction;
};

void equivalence_brackets(Context& ctx, Run& run) {
  std::vector<Family> families;
  {
    ParamSpec s;
    s.kind = SpecKind::pp;
    s.p0 = ConstantRecipe{2.0};
    s.p1 = ConstantRecipe{4.0};
    s.q0 = s.p0;
    s.q1 = s.p1;
    s.alpha0 = ConstantRecipe{0.0};
    s.alpha1 = ConstantRecipe{1.0};
    families.push_back({"constant", s, Construction::pp});
    s.p0 = SineRecipe{2.5, 0.5, 1.0};
    s.p1 = PlateauRampRecipe{2.0, 3.5, 1.0};
    s.q0 = s.p0;
    s.q1 = s.p1;
    s.alpha0 = SineRecipe{0.5, 0.25, 1.0};
    s.alpha1 = ConstantRecipe{1.0};
    families.push_back({"case-i", s, Construction::pp});
    families.push_back({"case-ii", case_ii_spec(), Construction::pq_infty});
    ParamSpec e;
    e.kind = SpecKind::endpoint;
    e.p0 = SineRecipe{2.5, 0.5, 1.0};
    e.p1 = e.p0;
    e.q0 = ConstantRecipe{2.0};
    e.q1 = ConstantRecipe{4.0};
    e.alpha0 = ConstantRecipe{0.0};
    e.alpha1 = ConstantRecipe{0.5};
    families.push_back({"endpoint", e, Construction::pq_infty});
  }
  const std::uint64_t seed = ctx.seed(5);
  const auto corpus = draw_corpus(grid_1d(), 5, 16, 200, seed);
  const auto doubled = draw_corpus(grid_1d(), 5, 32, 200, seed);
  const auto refined = rehost_all(corpus, grid_1d_fine());
  for (const auto& f : families) {
    const auto params = f.spec.build(grid_1d());
    const auto expected = f.name == "constant" || f.name == "case-i" ? CaseTag::case_i
                          : f.name == "case-ii"                     ? CaseTag::case_ii
                                                                    : CaseTag::endpoint;
    const CaseTag tag = case_classifier(params);
    run.upper(f.name + "/case", f.spec.text(), tag == expected ? 0.0 : 1.0, 0.0);
    const auto base = equivalence_experiment(corpus, params, f.construction);
    const auto fine = equivalence_experiment(refined, f.spec.build(grid_1d_fine()), f.construction);
    const auto more = equivalence_experiment(doubled, params, f.construction);
    const std::string inputs = f.spec.text();
    run.upper(f.name + "/refine", inputs, spread(base.max_ratio, fine.max_ratio), stability_factor);
    run.upper(f.name + "/corpus", inputs, spread(base.max_ratio, more.max_ratio), stability_factor);
    run.lower(f.name + "/lower-anchor", inputs, base.min_ratio, 1.0);
    run.detail << " " << f.name << " [" << fmt("%.4g", base.min_ratio) << ", " << fmt("%.4g", base.max_ratio)
               << "] refined max " << fmt("%.4g", fine.max_ratio) << " doubled max " << fmt("%.4g", more.max_ratio)
               << ";";
  }
}

// 6
void luxemburg(Context& ctx, Run& run) {
  Rng rng(ctx.seed(6));
  double worst_closed = 0.0;
  std::size_t agree = 0;
  double worst_homog = 0.0;
  for (std::size_t i = 0; i < 200; ++i) {
    const Grid g = i % 10 == 9 ? grid_2d() : grid_1d();
    const GridFunction f = random_piecewise_constant(g, 3, rng).scaled(rng.log_uniform(1e-2, 1e2));
    const double p = rng.uniform(1.0, 5.0);
    const auto field = constant_field(g, p);
    const auto closed = luxemburg_norm(f, field).value;
    const auto bisected = luxemburg_bisection(f.moduli(), field).value;
    const double err = closed == 0.0 ? std::abs(bisected) : std::abs(bisected - closed) / closed;
    worst_closed = std::max(worst_closed, err);
    run.upper("closed-form/" + num(i), fmt("%.17g", p) + fmt(" %.17g", closed), err, closed_form_tol);
  }
  for (std::size_t i = 0; i < 200; ++i) {
    const Grid g = i % 10 == 9 ? grid_2d() : grid_1d();
    const auto recipe = random_recipe(g, rng, 1.0, 5.0);
    const auto p = expo(recipe, g);
    GridFunction f = random_piecewise_constant(g, 3, rng);
    const double n = luxemburg_norm(f, p).value;
    const double target = i % 4 == 0 ? 1.0 : rng.log_uniform(0.5, 2.0);
    if (n > 0.0) f = f.scaled(target / n);
    const auto check = unit_ball_check(f, p);
    const bool same = check.norm_at_most_one == check.modular_at_most_one;
    if (same) ++agree;
    run.upper("unit-ball/" + num(i), recipe_text(recipe) + fmt(" %.17g", target), same ? 0.0 : 1.0, 0.0);
  }
  for (std::size_t i = 0; i < 100; ++i) {
    const Grid g = i % 10 == 9 ? grid_2d() : grid_1d();
    const auto recipe = random_recipe(g, rng, 1.0, 5.0);
    const auto p = expo(recipe, g);
    const GridFunction f = random_piecewise_constant(g, 3, rng);
    const Complex c = rng.log_uniform(1e-3, 1e3) * rng.unit_phase();
    const double n = luxemburg_norm(f, p).value;
    const double nc = luxemburg_norm(f.scaled(c), p).value;
    const double err = n == 0.0 ? nc : std::abs(nc - std::abs(c) * n) / (std::abs(c) * n);
    worst_homog = std::max(worst_homog, err);
    run.upper("homogeneity/" + num(i), recipe_text(recipe) + fmt(" %.17g", std::abs(c)), err, homogeneity_tol);
  }
  run.detail << " closed form worst " << fmt("%.3g", worst_closed) << "; unit ball " << agree
             << "/200; homogeneity worst " << fmt("%.3g", worst_homog) << ";";
}

// 7
void eta_mass(Context&, Run& run) {
  const double L = 2048.0;
  const Grid g = make_grid(1, L, 16384);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  double worst = 0.0;
  for (int v = 0; v <= 6; ++v) {
    const auto k = eta(v, 2.0, g);
    const double expected = 2.0 * (1.0 - 1.0 / (1.0 + std::ldexp(L, v)));
    const double err = std::abs(k.mass - expected);
    worst = std::max(worst, err);
    run.upper(fmt("level/%g", v), fmt("%.17g", L), err, eta_mass_tol);
    if (std::ldexp(L, v) >= 1e3) {
      lo = std::min(lo, k.mass);
      hi = std::max(hi, k.mass);
    }
  }
  run.upper("variation", fmt("%.17g", L), hi - lo, eta_variation_tol);
  run.detail << " worst mass error " << fmt("%.3g", worst) << "; variation " << fmt("%.3g", hi - lo) << ";";
}

// 8
void alpha_shift(Context&, Run& run) {
  const std::vector<int> levels{0, 1, 2, 3, 4, 5, 6};
  const auto flat = verify_alpha_shift(smooth(ConstantRecipe{0.7}, grid_1d()), 2.0, 0.0, levels);
  run.upper("constant", "0.7", std::abs(flat.constant - 1.0), 0.0);

  const ExponentRecipe sine = SineRecipe{0.0, 1.0, 1.0};
  const auto a = smooth(sine, make_grid(1, 4.0, 2048));
  const auto b = smooth(sine, make_grid(1, 4.0, 4096));
  const double c_loc = log_holder_constants(a).local_constant;
  const auto at_ca = verify_alpha_shift(a, 2.0, c_loc, levels);
  const auto at_cb = verify_alpha_shift(b, 2.0, log_holder_constants(b).local_constant, levels);
  const std::string inputs = recipe_text(sine);
  run.upper("finite", inputs, std::isfinite(at_ca.constant) ? 0.0 : 1.0, 0.0);
  run.upper("precondition", inputs, at_ca.precondition_ok ? 0.0 : 1.0, 0.0);
  run.upper("refine", inputs, spread(at_ca.constant, at_cb.constant), stability_factor);
  AlphaShiftOptions sampled;
  sampled.exhaustive_limit = 0;
  sampled.pair_budget = std::size_t{1} << 16;
  const auto s16 = verify_alpha_shift(a, 2.0, c_loc, levels, sampled);
  sampled.pair_budget = std::size_t{1} << 17;
  const auto s17 = verify_alpha_shift(a, 2.0, c_loc, levels, sampled);
  run.upper("budget", inputs, std::abs(s16.constant / s17.constant - 1.0), sampled_budget_tol);
  const auto bare = verify_alpha_shift(a, 2.0, 0.0, levels);
  const double growth = bare.per_level.back() / at_ca.constant;
  run.lower("divergence", inputs, growth, divergence_factor);
  run.detail << " c_loc " << fmt("%.4g", c_loc) << "; c " << fmt("%.6g", at_ca.constant) << " (N=2048), "
             << fmt("%.6g", at_cb.constant) << " (N=4096); R=0 ratio at v=6 " << fmt("%.4g", bare.per_level.back())
             << ";";
}

// 9
void jensen(Context& ctx, Run& run) {
  Rng rng(ctx.seed(9));
  const std::vector<int> levels{0, 1, 2, 3};
  const std::vector<ExponentRecipe> recipes{SineRecipe{2.5, 1.0, 1.0}, PlateauRampRecipe{1.5, 3.5, 1.0},
                                            ConstantRecipe{2.0}};
  double worst = std::numeric_limits<double>::infinity();
  std::size_t index = 0;
  for (const Grid& g : {grid_1d(), grid_2d()}) {
    const bool planar = g.dimension() == 2;
    const std::size_t per_recipe = planar ? 2 : 6;
    const double m_exp = g.dimension() + 1.0;
    for (std::size_t r = 0; r < (planar ? 2 : recipes.size()); ++r) {
      const auto p = expo(recipes[r], g);
      std::optional<double> gamma;
      if (planar) {
        std::vector<double> inverse(p.size());
        for (std::size_t x = 0; x < inverse.size(); ++x) inverse[x] = 1.0 / p[x];
        LogHolderOptions options;
        options.exhaustive_limit = 0;
        const double c = log_holder_constants(ExponentField(g, inverse, ExponentRole::smoothness), options).local_constant;
        gamma = c > 0.0 ? std::exp(-2.0 * m_exp / c) : 1.0;
      }
      for (std::size_t k = 0; k < per_recipe; ++k) {
        GridFunction f = random_piecewise_constant(g, 3, rng);
        const double size = luxemburg_norm(f, p).value + f.max_abs();
        if (size > 0.0) f = f.scaled(1.0 / size);
        const auto report = verify_jensen_gamma(p, m_exp, f, levels, gamma);
        worst = std::min(worst, report.worst_margin);
        run.lower(fmt("%gd/", g.dimension()) + num(index++), recipe_text(recipes[r]), report.worst_margin, -jensen_tol);
      }
    }
  }
  run.detail << " worst margin " << fmt("%.3g", worst) << ";";
}

// 10
void partition_identities(Context&, Run& run) {
  double worst_partition = 0.0;
  double worst_duality = 0.0;
  for (const auto& [g, levels] : {std::pair{grid_1d(), 5}, std::pair{grid_1d(), 4}, std::pair{grid_2d(), 4}}) {
    const std::string tag = fmt("%gd", g.dimension()) + fmt("/V%g", levels);
    const std::string inputs = tag + fmt(" %g", g.points_per_axis());
    const auto rou = build_resolution_of_unity(g, levels);
    const auto duals = build_dual_pair(build_admissible_pair(g, levels));
    run.upper(tag + "/partition", inputs, rou.diagnostics.partition_residual, partition_tol);
    run.upper(tag + "/omega", inputs, rou.diagnostics.omega_residual, partition_tol);
    run.upper(tag + "/duality", inputs, duals.diagnostics.duality_residual, duality_tol);
    worst_partition = std::max({worst_partition, rou.diagnostics.partition_residual, rou.diagnostics.omega_residual});
    worst_duality = std::max(worst_duality, duals.diagnostics.duality_residual);
  }
  run.detail << " partition " << fmt("%.3g", worst_partition) << "; duality " << fmt("%.3g", worst_duality) << ";";
}

// 11
void round_trips(Context& ctx, Run& run) {
  const auto start = Clock::now();
  const Grid g = grid_1d();
  const int levels = 4;
  const auto duals = build_dual_pair(build_admissible_pair(g, levels));
  const auto rou = build_resolution_of_unity(g, levels);
  Rng rng(ctx.seed(11));
  std::vector<GridFunction> corpus;
  for (int i = 0; i < 50; ++i) corpus.push_back(random_band_limited(g, std::ldexp(1.0, levels), 8, rng));
  std::vector<std::pair<RoundTrip, RoundTrip>> results(corpus.size());
  parallel_for(corpus.size(), [&](std::size_t i) {
    results[i] = {phi_transform_roundtrip(corpus[i], duals), retract_roundtrip(corpus[i], rou)};
  });
  const double elapsed = seconds_since(start);
  double worst = 0.0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    auto value = [](const RoundTrip& r) {
      return r.in_band() ? r.residual : std::numeric_limits<double>::infinity();
    };
    const std::string inputs = fmt("%.17g", corpus[i][0].real()) + fmt(" %.17g", corpus[i][1].imag());
    run.upper("phi/" + num(i), inputs, value(results[i].first), roundtrip_tol);
    run.upper("retraction/" + num(i), inputs, value(results[i].second), roundtrip_tol);
    worst = std::max({worst, value(results[i].first), value(results[i].second)});
  }
  run.detail << " worst residual " << fmt("%.3g", worst) << ";";
  run.runtime(elapsed, roundtrip_seconds);
}

// 12
void phi_equivalence(Context& ctx, Run& run) {
  const ExponentRecipe alpha = SineRecipe{0.5, 0.25, 1.0};
  const ExponentRecipe p = SineRecipe{2.5, 0.5, 1.0};
  const ExponentRecipe q = ConstantRecipe{2.0};
  auto bracket = [&](const Grid& g) {
    const int levels = 4;
    const auto bank = build_dual_pair(build_admissible_pair(g, levels));
    const auto a = smooth(alpha, g);
    const auto pf = expo(p, g);
    const auto qf = expo(q, g);
    Rng rng(ctx.seed(12));
    std::vector<GridFunction> corpus;
    for (int i = 0; i < 20; ++i) corpus.push_back(random_band_limited(g, std::ldexp(1.0, levels), 8, rng));
    std::vector<double> ratios(corpus.size());
    parallel_for(corpus.size(), [&](std::size_t i) {
      ratios[i] = f_norm(analyze(corpus[i], bank), a, pf, qf).value / F_norm(corpus[i], a, pf, qf, bank).value;
    });
    return std::pair{*std::min_element(ratios.begin(), ratios.end()), *std::max_element(ratios.begin(), ratios.end())};
  };
  const auto base = bracket(grid_1d());
  const auto fine = bracket(grid_1d_fine());
  const std::string inputs = recipe_text(alpha) + recipe_text(p) + recipe_text(q);
  run.upper("refine/min", inputs, spread(base.first, fine.first), stability_factor);
  run.upper("refine/max", inputs, spread(base.second, fine.second), stability_factor);
  run.detail << " bracket [" << fmt("%.4g", base.first) << ", " << fmt("%.4g", base.second) << "] at N=1024, ["
             << fmt("%.4g", fine.first) << ", " << fmt("%.4g", fine.second) << "] at N=2048;";
}

// 13
void poisson(Context&, Run& run) {
  double worst_mass = 0.0;
  double worst_harmonic = 0.0;
  for (double theta : {0.1, 0.25, 0.5, 0.75, 0.9}) {
    const StripPoisson kernel(theta);
    const auto m = poisson_masses(kernel);
    const std::string inputs = fmt("%.17g", theta);
    const double e0 = std::abs(m.mass0 - (1.0 - theta));
    const double e1 = std::abs(m.mass1 - theta);
    run.upper(fmt("t%g/mass0", theta), inputs, e0, poisson_mass_tol);
    run.upper(fmt("t%g/mass1", theta), inputs, e1, poisson_mass_tol);
    worst_mass = std::max({worst_mass, e0, e1});
    for (double s : {0.0, 0.5, 1.5}) {
      const std::array<double, 3> expected{1.0, theta, theta * theta - s * s};
      const std::array<double, 3> got{
          poisson_extend(kernel, s, [](double) { return 1.0; }, [](double) { return 1.0; }),
          poisson_extend(kernel, s, [](double) { return 0.0; }, [](double) { return 1.0; }),
          poisson_extend(kernel, s, [](double t) { return -t * t; }, [](double t) { return 1.0 - t * t; })};
      for (int k = 0; k < 3; ++k) {
        const double err = std::abs(got[k] - expected[k]);
        worst_harmonic = std::max(worst_harmonic, err);
        run.upper(fmt("t%g", theta) + fmt("/s%g", s) + fmt("/k%g", k), inputs + fmt(" %.17g", s), err, harmonic_tol);
      }
    }
  }
  run.detail << " mass error " << fmt("%.3g", worst_mass) << "; harmonic error " << fmt("%.3g", worst_harmonic) << ";";
}

// 14
void sandwich(Context& ctx, Run& run) {
  const Grid g = grid_1d();
  const auto chi = make_simple(g, {Complex(1.0)}, {cube_cells(g, DyadicCube{0, {0, 0}})});
  const auto closed = scalar_interp_sandwich(chi, constant_field(g, 2.0), constant_field(g, 4.0), 0.5);
  run.upper("closed-form", "chi 2 4 0.5", std::abs(closed.upper_ratio - 1.0), closed_sandwich_tol);
  Rng rng(ctx.seed(14));
  struct Item {
    SimpleFunction f;
    ExponentRecipe p0;
    ExponentRecipe p1;
    double theta;
  };
  std::vector<Item> items;
  for (int i = 0; i < 20; ++i) {
    auto f = random_simple_function(g, 3, 1 + rng.index(4), rng);
    auto p0 = random_recipe(g, rng);
    auto p1 = random_recipe(g, rng);
    items.push_back({std::move(f), p0, p1, std::array{0.25, 0.5, 0.75}[rng.index(3)]});
  }
  std::vector<SandwichReport> reports(items.size());
  parallel_for(items.size(), [&](std::size_t i) {
    reports[i] = scalar_interp_sandwich(items[i].f, expo(items[i].p0, g), expo(items[i].p1, g), items[i].theta);
  });
  double worst = closed.upper_ratio;
  double slack = closed.three_lines_slack;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const std::string inputs = recipe_text(items[i].p0) + recipe_text(items[i].p1) + fmt(" %.17g", items[i].theta) +
                               " " + std::to_string(items[i].f.regions.size());
    run.upper("upper/" + num(i), inputs, reports[i].upper_ratio, 1.0 + sandwich_tol);
    run.lower("three-lines/" + num(i), inputs, reports[i].three_lines_slack, -sandwich_tol);
    worst = std::max(worst, reports[i].upper_ratio);
    slack = std::min(slack, reports[i].three_lines_slack);
  }
  run.detail << " closed-form upper ratio " << fmt("%.15g", closed.upper_ratio) << "; worst upper ratio "
             << fmt("%.15g", worst) << "; three-lines slack " << fmt("%.3g", slack) << ";";
}

// 15
void coefficient_bound(Context& ctx, Run& run) {
  Rng rng(ctx.seed(15));
  const Grid g = grid_1d();
  double worst_single = 0.0;
  for (std::size_t i = 0; i < 20; ++i) {
    const int level = static_cast<int>(rng.index(6));
    DyadicCoefficients lambda(g, 5);
    lambda.set(cube_from_rank(g, level, rng.index(cube_count(g, level))), rng.log_uniform(1e-3, 1e3) * rng.unit_phase());
    const double a = rng.uniform(-1.0, 2.0);
    const double p = rng.uniform(1.2, 4.0);
    const double q = rng.uniform(1.2, 4.0);
    const double ratio = coefficient_bound_check(lambda, smooth(ConstantRecipe{a}, g), constant_field(g, p),
                                                 constant_field(g, q));
    worst_single = std::max(worst_single, std::abs(ratio - 1.0));
    run.upper("single/" + num(i), coefficient_records(lambda) + fmt("%.17g", a) + fmt(" %.17g", p),
              std::abs(ratio - 1.0), single_coefficient_tol);
  }
  const ExponentRecipe alpha = SineRecipe{0.5, 0.5, 1.0};
  const ExponentRecipe p = PlateauRampRecipe{2.0, 3.5, 1.0};
  const ExponentRecipe q = SineRecipe{2.0, 0.5, 2.0};
  const auto corpus = draw_corpus(g, 5, 20, 200, stream(ctx.seed(15), 1));
  auto worst = [&](const std::vector<DyadicCoefficients>& set, const Grid& grid) {
    std::vector<double> r(set.size());
    const auto a = smooth(alpha, grid);
    const auto pf = expo(p, grid);
    const auto qf = expo(q, grid);
    parallel_for(set.size(), [&](std::size_t i) { r[i] = coefficient_bound_check(set[i], a, pf, qf); });
    return *std::max_element(r.begin(), r.end());
  };
  const double base = worst(corpus, g);
  const double fine = worst(rehost_all(corpus, grid_1d_fine()), grid_1d_fine());
  const std::string inputs = recipe_text(alpha) + recipe_text(p) + recipe_text(q);
  run.upper("corpus/finite", inputs, std::isfinite(base) ? 0.0 : 1.0, 0.0);
  run.upper("corpus/refine", inputs, spread(base, fine), stability_factor);
  run.detail << " single worst |ratio-1| " << fmt("%.3g", worst_single) << "; corpus max " << fmt("%.4g", base)
             << " (N=1024), " << fmt("%.4g", fine) << " (N=2048);";
}

// 16
std::size_t level_set_violations(const DyadicCoefficients& lambda, const FactorizationParams& params) {
  const auto sets = build_level_sets(lambda, params);
  const Grid& g = lambda.grid();
  std::size_t bad = 0;
  for (int ell = sets.ell_min; ell <= sets.ell_max && !sets.empty(); ++ell) {
    const auto& outer = sets.mask(ell);
    const auto& inner = sets.mask(ell + 1);
    for (std::size_t x = 0; x < outer.size(); ++x)
      if (inner[x] && !outer[x]) ++bad;
  }
  // independent envelope: direct per-point sum over the coefficients
  const double q = params.q[0];
  const double half_n = 0.5 * g.dimension();
  std::vector<double> power(g.size(), 0.0);
  for (const auto& [cube, value] : lambda) {
    if (value == Complex(0.0)) continue;
    for (std::size_t x : cube_cells(g, cube))
      power[x] += std::pow(std::exp2(cube.level * (params.alpha[x] + half_n)) * std::abs(value), q);
  }
  std::vector<double> envelope(g.size());
  for (std::size_t x = 0; x < g.size(); ++x) envelope[x] = std::pow(power[x], 1.0 / q);
  const double norm = luxemburg_bisection(envelope, params.p).value;
  std::vector<double> weight(g.size());
  for (std::size_t x = 0; x < g.size(); ++x)
    weight[x] = envelope[x] > 0.0 ? std::pow(envelope[x] / norm, params.gamma[x]) : 0.0;

  for (const auto& [cube, value] : lambda) {
    const auto it = sets.class_of.find(cube);
    if (value == Complex(0.0) || std::abs(value) <= vanishing_tol * norm) {
      if (it != sets.class_of.end() && value == Complex(0.0)) ++bad;
      continue;
    }
    if (it == sets.class_of.end()) {
      ++bad;
      continue;
    }
    const auto cells = cube_cells(g, cube);
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t x : cells) {
      lo = std::min(lo, weight[x]);
      hi = std::max(hi, weight[x]);
    }
    const double half = 0.5 * static_cast<double>(cells.size());
    std::vector<int> matches;
    for (int ell = static_cast<int>(std::floor(std::log2(lo))) - 2; ell <= static_cast<int>(std::ceil(std::log2(hi))) + 2;
         ++ell) {
      std::size_t above = 0;
      std::size_t above_next = 0;
      for (std::size_t x : cells) {
        if (weight[x] > std::ldexp(1.0, ell)) ++above;
        if (weight[x] > std::ldexp(1.0, ell + 1)) ++above_next;
      }
      if (static_cast<double>(above) > half && static_cast<double>(above_next) <= half) matches.push_back(ell);
    }
    if (matches.size() != 1 || matches.front() != it->second) ++bad;
  }
  for (const auto& cube : sets.unassigned)
    if (std::abs(lambda.get(cube)) > vanishing_tol * sets.norm) ++bad;
  return bad;
}

void level_sets(Context& ctx, Run& run) {
  Rng rng(ctx.seed(16));
  struct Item {
    DyadicCoefficients lambda;
    ParamSpec spec;
  };
  std::vector<Item> items;
  for (std::size_t i = 0; i < 100; ++i) {
    const Grid g = i % 5 == 4 ? grid_2d() : grid_1d();
    const int levels = g.dimension() == 2 ? 4 : 5;
    ParamSpec spec = i % 4 == 3 ? case_ii_spec() : random_spec(SpecKind::endpoint, g, rng);
    if (i % 4 == 3) spec.theta = rng.uniform(0.2, 0.8);
    auto lambda = random_coefficients(g, levels, 1 + rng.index(300), rng);
    for (int k = 0; k < 3; ++k) {
      const int v = static_cast<int>(rng.index(static_cast<std::size_t>(levels) + 1));
      const auto cube = cube_from_rank(g, v, rng.index(cube_count(g, v)));
      if (!lambda.contains(cube)) lambda.set(cube, 0.0);
    }
    items.push_back({std::move(lambda), std::move(spec)});
  }
  std::vector<std::size_t> bad(items.size());
  parallel_for(items.size(), [&](std::size_t i) {
    bad[i] = level_set_violations(items[i].lambda, items[i].spec.build(items[i].lambda.grid()));
  });
  std::size_t clean = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (bad[i] == 0) ++clean;
    run.upper("decomposition/" + num(i), coefficient_records(items[i].lambda) + items[i].spec.text(),
              static_cast<double>(bad[i]), 0.0);
  }
  run.detail << " " << clean << "/100 decompositions clean;";
}

using Criterion = std::function<void(Context&, Run&)>;

const std::array<Criterion, criterion_count - 1>& criteria() {
  static const std::array<Criterion, criterion_count - 1> table{
      exponent_identities, reconstruction,  holder_direction, factor_stability, equivalence_brackets, luxemburg,
      eta_mass,            alpha_shift,     jensen,           partition_identities, round_trips,       phi_equivalence,
      poisson,             sandwich,        coefficient_bound, level_sets};
  return table;
}

std::string label(int id) { return fmt("C%02.0f", id); }

CriterionOutcome run_one(Context& ctx, int id, Report& report) {
  CriterionOutcome outcome{id, std::string(criterion_title(id)), false, {}, 0.0};
  Run run;
  run.prefix = label(id);
  const auto start = Clock::now();
  try {
    criteria()[static_cast<std::size_t>(id - 1)](ctx, run);
    std::size_t failed = 0;
    for (const auto& row : run.rows)
      if (!row.pass) ++failed;
    outcome.passed = failed == 0 && run.extra && !run.rows.empty();
    outcome.detail = fmt("%g rows", static_cast<double>(run.rows.size())) + fmt(", %g failed;", static_cast<double>(failed)) +
                     run.detail.str();
  } catch (const std::exception& e) {
    outcome.detail = std::string("error: ") + e.what();
  }
  outcome.seconds = seconds_since(start);
  for (auto& row : run.rows) report.add(std::move(row));
  return outcome;
}

SuiteResult run_criteria(std::uint64_t seed, const std::vector<int>& ids) {
  SuiteResult result;
  result.report.experiment = "suite";
  Context ctx(seed);
  for (int id : ids) result.outcomes.push_back(run_one(ctx, id, result.report));
  return result;
}

}  // namespace

std::string_view criterion_title(int id) {
  require(id >= 1 && id <= criterion_count, ErrorKind::invalid_input, "criterion id out of range");
  return titles[static_cast<std::size_t>(id - 1)];
}

bool SuiteResult::passed() const {
  return !outcomes.empty() &&
         std::all_of(outcomes.begin(), outcomes.end(), [](const CriterionOutcome& o) { return o.passed; });
}

SuiteResult run_suite(std::uint64_t seed, std::span<const int> only) {
  std::vector<int> ids(only.begin(), only.end());
  if (ids.empty())
    for (int id = 1; id <= criterion_count; ++id) ids.push_back(id);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  for (int id : ids) require(id >= 1 && id <= criterion_count, ErrorKind::invalid_input, "criterion id out of range");
  const bool determinism = ids.back() == criterion_count;
  if (determinism) ids.pop_back();

  const auto start = Clock::now();
  SuiteResult result = run_criteria(seed, ids);
  const double first_seconds = seconds_since(start);
  if (determinism) {
    CriterionOutcome outcome{criterion_count, std::string(criterion_title(criterion_count)), false, {}, 0.0};
    std::vector<int> all;
    for (int id = 1; id < criterion_count; ++id) all.push_back(id);
    const auto t0 = Clock::now();
    const SuiteResult first = ids.size() == all.size() ? SuiteResult{} : run_criteria(seed, all);
    const double full_seconds = ids.size() == all.size() ? first_seconds : seconds_since(t0);
    const SuiteResult& reference = ids.size() == all.size() ? result : first;
    const SuiteResult second = run_criteria(seed, all);
    const bool identical = to_csv(reference.report) == to_csv(second.report);
    outcome.passed = identical && full_seconds <= suite_seconds;
    outcome.detail = std::string(identical ? "CSV reports identical" : "CSV reports differ") + fmt("; full suite %.1f s", full_seconds) +
                     fmt(" (limit %g s);", suite_seconds);
    outcome.seconds = seconds_since(t0);
    result.report.add(Row::upper(label(criterion_count) + "/identical", fmt("%.17g", static_cast<double>(seed)),
                                 identical ? 0.0 : 1.0, 0.0));
    result.outcomes.push_back(outcome);
  }
  result.report.summary["seed"] = seed;
  nlohmann::json criteria_json = nlohmann::json::array();
  for (const auto& o : result.outcomes)
    criteria_json.push_back({{"id", o.id}, {"title", o.title}, {"passed", o.passed}, {"detail", o.detail},
                             {"seconds", o.seconds}});
  result.report.summary["criteria"] = criteria_json;
  return result;
}

}  // namespace vexint::cli
