#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "vexint/exponents.hpp"
#include "vexint/grid.hpp"

namespace vexint {

/// Samples of x -> 2^{nv} (1 + 2^v |x|)^{-m} with |x| the periodic distance to 0.
struct EtaKernel {
  int level = 0;
  double decay = 0.0;
  GridFunction samples;
  /// L1 mass of the continuous kernel over the box [-L, L]^n.
  double mass = 0.0;
  /// Quadrature mass sum * h^n of the samples.
  double grid_mass = 0.0;
  bool integrable = false;
};

EtaKernel eta(int level, double m_exp, const Grid& grid);

/// Integral of 2^{nv}(1 + 2^v|x|)^{-m} over [-L, L]^n by graded Gauss-Legendre quadrature.
double eta_box_mass(int dimension, int level, double m_exp, double half_extent);

/// Periodic convolution (f * k)(x) = sum_y f(y) k(x - y) h^n, computed with FFTs.
GridFunction convolve(const GridFunction& f, const GridFunction& k);

struct AlphaShiftOptions {
  std::size_t exhaustive_limit = std::size_t{1} << 16;
  std::size_t pair_budget = std::size_t{1} << 18;
  std::uint64_t seed = 0xa1fa;
};

struct AlphaShiftReport {
  /// max over sampled (x, y, v) of 2^{v a(x)} eta_{v,h+R}(x-y) / (2^{v a(y)} eta_{v,h}(x-y)).
  double constant = 0.0;
  std::vector<double> per_level;
  double estimated_c_loc = 0.0;
  bool precondition_ok = true;
  bool exhaustive = true;
  std::size_t pairs = 0;
};

AlphaShiftReport verify_alpha_shift(const ExponentField& alpha, double h_exp, double R, std::span<const int> levels,
                                    const AlphaShiftOptions& options = {});

struct EtaMaximalReport {
  double max_ratio = 0.0;
  std::vector<double> ratios;
  /// Largest quadrature mass among the kernels used; the Young bound when p = q is constant.
  double young_bound = 0.0;
};

/// Each family is indexed by level v starting at 0.
EtaMaximalReport verify_eta_maximal(const ExponentField& p, const ExponentField& q, double m_exp,
                                    std::span<const std::vector<GridFunction>> families);

struct JensenReport {
  double gamma = 1.0;
  double c_log = 0.0;
  double worst_margin = 0.0;
  DyadicCube worst_cube;
  std::size_t cubes = 0;
  std::size_t negative = 0;
};

JensenReport verify_jensen_gamma(const ExponentField& p, double m_exp, const GridFunction& f,
                                 std::span<const int> levels, std::optional<double> gamma_override = {});

}  // namespace vexint
