#pragma once

#include <functional>
#include <vector>

#include "vexint/exponents.hpp"
#include "vexint/grid.hpp"
#include "vexint/lpf.hpp"

namespace vexint {

/// Harmonic-measure densities of the two boundary lines of the strip 0 < Re z < 1 seen from theta.
class StripPoisson {
 public:
  explicit StripPoisson(double theta);

  double theta() const noexcept { return theta_; }
  /// Density on Re z = 0 at height t; total mass 1 - theta.
  double mu0(double t) const noexcept;
  /// Density on Re z = 1 at height t; total mass theta.
  double mu1(double t) const noexcept;

 private:
  double theta_;
  double sin_;
  double cos_;
};

StripPoisson strip_poisson(double theta);

/// Uniform t-grid on |t| <= half_width.
struct StripQuadrature {
  double half_width = 8.0;
  double step = 1.0 / 256.0;

  std::vector<double> nodes() const;
};

struct PoissonMasses {
  double mass0 = 0.0;
  double mass1 = 0.0;
};

PoissonMasses poisson_masses(const StripPoisson& kernel, const StripQuadrature& quad = {});

/// Value at theta + i s of the harmonic function with boundary values u0(t) on Re z = 0 and u1(t) on Re z = 1.
double poisson_extend(const StripPoisson& kernel, double s, const std::function<double(double)>& u0,
                      const std::function<double(double)>& u1, const StripQuadrature& quad = {});

/// sum_j a_j chi_{A_j} with pairwise disjoint regions.
struct SimpleFunction {
  Grid grid;
  std::vector<Complex> values;
  std::vector<std::vector<std::size_t>> regions;

  void validate() const;
  GridFunction to_grid() const;
  SimpleFunction scaled(Complex factor) const;
};

SimpleFunction make_simple(const Grid& grid, std::vector<Complex> values, std::vector<std::vector<std::size_t>> regions);

/// g(x, z) = f(x) |f(x)|^{(p/p1 - p/p0)(x)(z - theta)} exp(damping (z - theta)^2).
class CompetitorFamily {
 public:
  CompetitorFamily(SimpleFunction f, ExponentField p0, ExponentField p1, double theta, double damping = 0.0);

  const SimpleFunction& function() const noexcept { return f_; }
  const ExponentField& p0() const noexcept { return p0_; }
  const ExponentField& p1() const noexcept { return p1_; }
  const ExponentField& p() const noexcept { return p_; }
  double theta() const noexcept { return theta_; }
  double damping() const noexcept { return damping_; }

  /// g(x, z) at a grid point; zero outside the regions.
  Complex evaluate(std::size_t x, Complex z) const;
  /// |g(x, side + i t)|, side 0 or 1.
  double boundary_modulus(std::size_t x, int side, double t) const;

 private:
  SimpleFunction f_;
  ExponentField p0_;
  ExponentField p1_;
  ExponentField p_;
  double theta_;
  double damping_;
  std::vector<Complex> value_at_;
  std::vector<double> shift_at_;
};

CompetitorFamily competitor_family(const SimpleFunction& f, const ExponentField& p0, const ExponentField& p1,
                                   double theta, double damping = 0.0);

struct BoundaryModulars {
  double rho0 = 0.0;
  double rho1 = 0.0;
};

BoundaryModulars boundary_modulars(const CompetitorFamily& family, const std::vector<double>& heights = {0.0, 0.5, 2.0});

struct ThreeLinesResult {
  double value = 0.0;
  /// Smallest right-hand side over the region's points.
  double bound = 0.0;
  double slack = 0.0;
};

ThreeLinesResult three_lines_bound(const CompetitorFamily& family, std::size_t region,
                                   const StripQuadrature& quad = {});

struct SandwichReport {
  /// |g|_F / |f|_p for the undamped competitor; at most 1 up to quadrature.
  double upper_ratio = 0.0;
  /// |f|_p / (|G0|_{p0}^{1-theta} |G1|_{p1}^theta), worst over the competitors tried.
  double lower_ratio = 0.0;
  double rho0 = 0.0;
  double rho1 = 0.0;
  double three_lines_slack = 0.0;
};

SandwichReport scalar_interp_sandwich(const SimpleFunction& f, const ExponentField& p0, const ExponentField& p1,
                                      double theta, double damping = 1.0, const StripQuadrature& quad = {});

struct InterRestParameters {
  double theta = 0.5;
  ExponentField p0;
  ExponentField p1;
  ExponentField q0;
  ExponentField q1;
  ExponentField alpha0;
  ExponentField alpha1;
};

struct InterRestReport {
  double direct = 0.0;
  double anchor = 0.0;
  double ratio = 1.0;
  double endpoint0 = 0.0;
  double endpoint1 = 0.0;
  /// endpoint0^{1-theta} endpoint1^theta - anchor.
  double holder_slack = 0.0;
};

/// Compares the F-norm at the interpolated parameters (admissible bank) with the weighted mixed norm
/// of the resolution-of-unity pieces.
InterRestReport inter_rest_check(const GridFunction& f, const InterRestParameters& params,
                                 const FilterBank& partition, const FilterBank& admissible);

}  // namespace vexint
