#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace mll::detail {

namespace {

// Plan creation in FFTW is not thread-safe, execution through the new-array
// interface is. Plans are created once per (dim, n, sign) under the lock.
class PlanRegistry {
 public:
  static PlanRegistry& instance() {
    static PlanRegistry registry;
    return registry;
  }

  fftw_plan get(int dim, int n, int sign) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_tuple(dim, n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    std::size_t size = 1;
    int dims[3];
    for (int i = 0; i < dim; ++i) {
      dims[i] = n;
      size *= static_cast<std::size_t>(n);
    }
    std::vector<fftw_complex> scratch_in(size), scratch_out(size);
    fftw_plan plan = fftw_plan_dft(dim, dims, scratch_in.data(), scratch_out.data(), sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan) throw std::runtime_error("FFTW plan creation failed");
    plans_.emplace(key, plan);
    return plan;
  }

  PlanRegistry(const PlanRegistry&) = delete;
  PlanRegistry& operator=(const PlanRegistry&) = delete;

 private:
  PlanRegistry() = default;
  ~PlanRegistry() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

void forward_transform(const TorusGrid& grid, std::span<const Complex> physical, std::span<Complex> spectral) {
  if (physical.size() != grid.size() || spectral.size() != grid.size()) {
    throw std::invalid_argument("transform buffer size does not match the grid");
  }
  fftw_plan plan = PlanRegistry::instance().get(grid.dim(), grid.n(), FFTW_FORWARD);
  // FFTW may overwrite its input, so work on a copy.
  std::vector<Complex> input(physical.begin(), physical.end());
  fftw_execute_dft(plan, as_fftw(input.data()), as_fftw(spectral.data()));
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (auto& c : spectral) c *= scale;
}

void inverse_transform(const TorusGrid& grid, std::span<const Complex> spectral, std::span<Complex> physical) {
  if (physical.size() != grid.size() || spectral.size() != grid.size()) {
    throw std::invalid_argument("transform buffer size does not match the grid");
  }
  fftw_plan plan = PlanRegistry::instance().get(grid.dim(), grid.n(), FFTW_BACKWARD);
  std::vector<Complex> input(spectral.begin(), spectral.end());
  fftw_execute_dft(plan, as_fftw(input.data()), as_fftw(physical.data()));
}

}  // namespace mll::detail
