#pragma once

#include <vector>

#include "vexint/grid.hpp"

namespace vexint {

/// In-place unnormalized forward DFT over the grid's axes.
void fft_forward(const Grid& grid, std::vector<Complex>& data);
/// In-place inverse DFT, normalized by 1/N^n.
void fft_inverse(const Grid& grid, std::vector<Complex>& data);

/// IFFT(multiplier * FFT(f)) for a real multiplier given in DFT order.
std::vector<Complex> apply_multiplier(const Grid& grid, const std::vector<Complex>& spectrum,
                                      const std::vector<double>& multiplier);

}  // namespace vexint
