#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "vexint/exponents.hpp"
#include "vexint/seqspaces.hpp"

namespace vexint {

enum class Construction { pp, pq_infty };
enum class CaseTag { case_i, case_ii, endpoint, unsupported };

std::string_view to_string(Construction construction) noexcept;
std::string_view to_string(CaseTag tag) noexcept;

/// Exponent data of one interpolation couple. Without p1 the second space is f_{infty, q1}.
struct FactorizationParams {
  double theta = 0.5;
  ExponentField p0;
  std::optional<ExponentField> p1;
  ExponentField q0;
  ExponentField q1;
  ExponentField alpha0;
  ExponentField alpha1;
  /// Interpolated exponents.
  ExponentField p;
  ExponentField q;
  ExponentField alpha;
  /// gamma = p/p0 - q/q0 and delta = p/p1 - q/q1 (delta = -q/q1 at the endpoint).
  std::vector<double> gamma;
  std::vector<double> delta;

  bool endpoint() const noexcept { return !p1.has_value(); }
  const Grid& grid() const noexcept { return p0.grid(); }
};

/// q_i = p_i.
FactorizationParams make_pp_params(double theta, const ExponentField& p0, const ExponentField& p1,
                                   const ExponentField& alpha0, const ExponentField& alpha1);
FactorizationParams make_params(double theta, const ExponentField& p0, const ExponentField& p1, const ExponentField& q0,
                                const ExponentField& q1, const ExponentField& alpha0, const ExponentField& alpha1);
/// 1/p = (1 - theta)/p0 and constant q0, q1.
FactorizationParams make_endpoint_params(double theta, const ExponentField& p0, double q0, double q1,
                                         const ExponentField& alpha0, const ExponentField& alpha1);

/// Pointwise u, v of a construction: with r_i = p/p_i (pp) or q/q_i (pq_infty),
/// u = theta (alpha1 r0 - alpha0 r1) + n/2 (r0 - 1) and v = (1 - theta)(alpha0 r1 - alpha1 r0) + n/2 (r1 - 1).
struct ExponentShifts {
  std::vector<double> r0;
  std::vector<double> r1;
  std::vector<double> u;
  std::vector<double> v;
};

ExponentShifts exponent_shifts(const FactorizationParams& params, Construction construction);

/// Largest deviations from the exponent identities.
struct IdentityResiduals {
  /// (1 - theta) u + theta v, worst over both constructions.
  double shift = 0.0;
  /// (1 - theta) + (delta/gamma) theta; only for case-ii and endpoint parameters, where gamma has no zeros.
  double ratio = 0.0;
  /// (1 - theta) p/p0 + theta p/p1 - 1.
  double harmonic_p = 0.0;
  /// (1 - theta) q/q0 + theta q/q1 - 1.
  double harmonic_q = 0.0;

  double max() const noexcept;
};

IdentityResiduals identity_residuals(const FactorizationParams& params);

CaseTag case_classifier(const ExponentField& p0, const ExponentField& p1, const ExponentField& q0,
                        const ExponentField& q1, double theta);
/// endpoint for params without p1.
CaseTag case_classifier(const FactorizationParams& params);

/// Level sets A_l = {(g/|lambda|)^gamma > 2^l} and the classes C_l of the endpoint construction.
struct LevelSetDecomposition {
  std::vector<double> g;
  /// (g/|lambda|)^gamma, pointwise.
  std::vector<double> weight;
  double norm = 0.0;
  int ell_min = 0;
  int ell_max = -1;
  /// A_l for l = ell_min .. ell_max + 1.
  std::vector<std::vector<char>> masks;
  std::map<DyadicCube, int> class_of;
  std::vector<DyadicCube> unassigned;

  bool empty() const noexcept { return class_of.empty(); }
  const std::vector<char>& mask(int ell) const;
  /// Cubes of C_l, in cube order.
  std::vector<DyadicCube> members(int ell) const;
  std::map<int, std::size_t> class_sizes() const;
};

LevelSetDecomposition build_level_sets(const DyadicCoefficients& lambda, const FactorizationParams& params);

struct FactorizationResult {
  Construction construction = Construction::pp;
  DyadicCoefficients lambda0;
  DyadicCoefficients lambda1;
  double norm = 0.0;
  /// max | |lambda| - norm (lambda0)^{1-theta} (lambda1)^theta | / norm.
  double reconstruction_error = 0.0;
  double norm0 = 0.0;
  /// Subset route with E = Q minus A_{l+1} at the endpoint.
  double norm1 = 0.0;
  double norm1_direct = 0.0;
  std::optional<LevelSetDecomposition> level_sets = std::nullopt;
  std::optional<SubsetSelection> selection = std::nullopt;
  std::size_t zero_count = 0;
};

FactorizationResult factorize_pp(const DyadicCoefficients& lambda, const FactorizationParams& params);
FactorizationResult factorize_pq_infty(const DyadicCoefficients& lambda, const FactorizationParams& params);
FactorizationResult factorize(const DyadicCoefficients& lambda, const FactorizationParams& params,
                              Construction construction);

struct HolderReport {
  double lower = 0.0;
  double product = 0.0;
  /// product - lower.
  double margin = 0.0;
  /// Endpoint only: the same chain on E-restricted indicators, which holds without constants.
  double restricted = 0.0;
  double restricted_product = 0.0;
  double restricted_margin = 0.0;
  /// lower / restricted; the measured subset constant.
  double subset_constant = 1.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Requires |lambda| <= |lambda0|^{1-theta} |lambda1|^theta on the support of lambda.
HolderReport verify_holder_direction(const DyadicCoefficients& lambda, const DyadicCoefficients& lambda0,
                                     const DyadicCoefficients& lambda1, const FactorizationParams& params,
                                     const SubsetSelection* selection = nullptr);

/// |lambda| max(1, |lambda0|)^{1-theta} max(1, |lambda1|)^theta.
double calderon_upper(const FactorizationResult& result, double theta);
double calderon_upper(const DyadicCoefficients& lambda, const FactorizationParams& params, Construction construction);

/// Norm in the interpolated space of the params.
double interpolated_norm(const DyadicCoefficients& lambda, const FactorizationParams& params);

/// Growing supports: the first k entries in cube order, k spread evenly up to the full support.
std::vector<DyadicCoefficients> support_truncations(const DyadicCoefficients& lambda, std::size_t steps);
/// (1 - 1/k) lambda for k = 1 .. steps, then lambda itself.
std::vector<DyadicCoefficients> magnitude_ramp(const DyadicCoefficients& lambda, std::size_t steps);

struct LatticeReport {
  std::vector<double> norms;
  double target = 0.0;
  double final_gap = 0.0;
  bool monotone = true;
  bool passed = false;
};

LatticeReport lattice_property_check(const std::vector<DyadicCoefficients>& sequence, const DyadicCoefficients& lambda,
                                     const ExponentField& alpha, const ExponentField& p, const ExponentField& q);

struct EquivalenceRow {
  std::size_t id = 0;
  double lower = 0.0;
  double upper = 0.0;
  double ratio = 1.0;
  CaseTag tag = CaseTag::unsupported;
};

struct EquivalenceReport {
  std::vector<EquivalenceRow> rows;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
};

EquivalenceReport equivalence_experiment(const std::vector<DyadicCoefficients>& corpus,
                                         const FactorizationParams& params, Construction construction);

}  // namespace vexint
