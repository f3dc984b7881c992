#pragma once

#include <vector>

#include "vexint/exponents.hpp"
#include "vexint/grid.hpp"
#include "vexint/lebesgue.hpp"
#include "vexint/seqspaces.hpp"

namespace vexint {

/// C-infinity step: 1 for t <= a, 0 for t >= b, built from exp(-1/t).
double smooth_step(double t, double a, double b);
/// Radial profile of the low-pass filter: 1 on [0, 5/3], 0 from 2 on.
double admissible_low(double r);
/// Radial profile of the band filter: 1 on [3/5, 5/3], 0 below 1/2 and from 2 on.
double admissible_band(double r);
/// Radial profile of the partition generator: 1 on [0, 1], 0 from 2 on.
double partition_low(double r);

enum class BankKind { admissible, resolution_of_unity };

struct BankDiagnostics {
  /// Lower bound of the low-pass and band profiles on their required sets.
  double lower_bound = 0.0;
  /// min / max of D = sum_v |F phi_v|^2 over |xi| <= 2^V 5/3.
  double min_denominator = 0.0;
  double max_denominator = 0.0;
  /// min of D over |xi| <= 5/3.
  double min_denominator_core = 0.0;
  double duality_residual = -1.0;
  double partition_residual = -1.0;
  /// max |F omega_v - 1| over supp F phi_v.
  double omega_residual = -1.0;
};

/// Fourier multipliers in DFT order for levels 0..V; level 0 holds the low-pass filter.
struct FilterBank {
  Grid grid;
  int max_level = 0;
  BankKind kind = BankKind::admissible;
  std::vector<std::vector<double>> analysis;
  std::vector<std::vector<double>> synthesis;
  std::vector<std::vector<double>> omega;
  BankDiagnostics diagnostics;

  bool has_duals() const noexcept { return !synthesis.empty(); }
  bool has_omega() const noexcept { return !omega.empty(); }
  /// Radius |xi| <= band_radius() on which duality is enforced.
  double band_radius() const noexcept;
};

FilterBank build_admissible_pair(const Grid& grid, int levels);
FilterBank build_dual_pair(const FilterBank& bank);
FilterBank build_resolution_of_unity(const Grid& grid, int levels);

/// Moments of the level-v band filter, |int x^g phi_v| for |g| <= 2 along each axis,
/// obtained from derivatives of its multiplier at the origin.
std::vector<double> band_moments(const FilterBank& bank, int level);

/// Per-level filtered fields phi_v * f, v = 0..V.
std::vector<GridFunction> co_retraction(const GridFunction& f, const FilterBank& bank);
/// sum_v omega_v * f_v.
GridFunction retraction(const std::vector<GridFunction>& family, const FilterBank& bank);

DyadicCoefficients analyze(const GridFunction& f, const FilterBank& bank);
GridFunction synthesize(const DyadicCoefficients& lambda, const FilterBank& bank);

struct RoundTrip {
  double residual = 0.0;
  /// Fraction of spectral energy outside |xi| <= 2^V; nonzero means the contract does not apply.
  double out_of_band = 0.0;
  /// Leak at the FFT rounding floor still counts as in band.
  bool in_band() const noexcept { return out_of_band <= 1e-24; }
};

RoundTrip retract_roundtrip(const GridFunction& f, const FilterBank& bank);
RoundTrip phi_transform_roundtrip(const GridFunction& f, const FilterBank& bank);

NormResult F_norm(const GridFunction& f, const ExponentField& alpha, const ExponentField& p, const ExponentField& q,
                  const FilterBank& bank, double tol = default_norm_tolerance);
double F_infty_norm(const GridFunction& f, const ExponentField& alpha, double q, const FilterBank& bank);

/// Weighted level fields 2^{v a(x)} |phi_v * f(x)|, v = 0..V.
std::vector<std::vector<double>> weighted_levels(const GridFunction& f, const ExponentField& alpha,
                                                 const FilterBank& bank);

}  // namespace vexint
