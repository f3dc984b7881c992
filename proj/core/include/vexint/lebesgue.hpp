#pragma once

#include <span>
#include <vector>

#include "vexint/exponents.hpp"
#include "vexint/grid.hpp"

namespace vexint {

enum class NormMethod { closed_form, bisection };

struct NormResult {
  double value = 0.0;
  int iterations = 0;
  /// |rho(f / value) - 1| at termination (0 for the zero function).
  double residual = 0.0;
  NormMethod method = NormMethod::closed_form;
};

inline constexpr double default_norm_tolerance = 1e-10;

/// sum_x |f(x)|^{p(x)} h^n.
double modular(const GridFunction& f, const ExponentField& p);
/// Same modular on non-negative real samples.
double modular(std::span<const double> moduli, const ExponentField& p);

NormResult luxemburg_norm(const GridFunction& f, const ExponentField& p, double tol = default_norm_tolerance);
NormResult luxemburg_norm(std::span<const double> moduli, const ExponentField& p,
                          double tol = default_norm_tolerance);
/// Bisection even when p is constant.
NormResult luxemburg_bisection(std::span<const double> moduli, const ExponentField& p,
                               double tol = default_norm_tolerance);

/// Pointwise l^{q(x)} sum of a family of non-negative fields.
std::vector<double> lq_envelope(std::span<const std::vector<double>> family, const ExponentField& q);

NormResult mixed_norm(std::span<const GridFunction> family, const ExponentField& p, const ExponentField& q,
                      double tol = default_norm_tolerance);
NormResult mixed_norm(std::span<const std::vector<double>> family, const ExponentField& p, const ExponentField& q,
                      double tol = default_norm_tolerance);

struct UnitBallCheck {
  bool norm_at_most_one = false;
  bool modular_at_most_one = false;
};

UnitBallCheck unit_ball_check(const GridFunction& f, const ExponentField& p);

}  // namespace vexint
