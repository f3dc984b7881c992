#include "vexint/spectral.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

#include "vexint/error.hpp"

namespace vexint {

namespace {

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int dimension, int points, int sign) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_tuple(dimension, points, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    const std::size_t size = dimension == 1 ? points : static_cast<std::size_t>(points) * points;
    auto* buffer = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * size));
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan = dimension == 1 ? fftw_plan_dft_1d(points, buffer, buffer, sign, flags)
                                    : fftw_plan_dft_2d(points, points, buffer, buffer, sign, flags);
    fftw_free(buffer);
    require(plan != nullptr, ErrorKind::solver_failure, "FFTW planning failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

void execute(const Grid& grid, std::vector<Complex>& data, int sign) {
  require(data.size() == grid.size(), ErrorKind::invalid_configuration, "FFT length mismatch");
  fftw_plan plan = plan_cache().get(grid.dimension(), grid.points_per_axis(), sign);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, ptr, ptr);
}

}  // namespace

void fft_forward(const Grid& grid, std::vector<Complex>& data) { execute(grid, data, FFTW_FORWARD); }

void fft_inverse(const Grid& grid, std::vector<Complex>& data) {
  execute(grid, data, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (auto& z : data) z *= scale;
}

std::vector<Complex> apply_multiplier(const Grid& grid, const std::vector<Complex>& spectrum,
                                      const std::vector<double>& multiplier) {
  require(spectrum.size() == grid.size() && multiplier.size() == grid.size(), ErrorKind::invalid_configuration,
          "multiplier length mismatch");
  std::vector<Complex> out(spectrum.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = spectrum[i] * multiplier[i];
  fft_inverse(grid, out);
  return out;
}

}  // namespace vexint
