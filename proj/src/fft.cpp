#include "nsteady/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace nsteady::detail {

namespace {

// One cached in-place plan per (n, sign). Plans are created with
// FFTW_ESTIMATE (deterministic across runs) and FFTW_UNALIGNED so they can be
// re-executed on any buffer via fftw_execute_dft.
class PlanCache {
 public:
  static fftw_plan get(int n, int sign) {
    static PlanCache cache;
    std::scoped_lock lock(cache.mutex_);
    auto key = std::make_pair(n, sign);
    auto it = cache.plans_.find(key);
    if (it != cache.plans_.end()) return it->second;

    std::size_t count = static_cast<std::size_t>(n) * n * n;
    fftw_complex* buf = fftw_alloc_complex(count);
    if (!buf) throw std::bad_alloc();
    fftw_plan plan = fftw_plan_dft_3d(n, n, n, buf, buf, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    if (!plan) throw std::runtime_error("fftw plan creation failed");
    cache.plans_.emplace(key, plan);
    return plan;
  }

 private:
  PlanCache() = default;
  std::mutex mutex_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

}  // namespace

void fft3(int n, std::complex<double>* data, bool forward) {
  fftw_plan plan = PlanCache::get(n, forward ? FFTW_FORWARD : FFTW_BACKWARD);
  fftw_complex* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plan, p, p);
  if (forward) {
    const double scale = 1.0 / (static_cast<double>(n) * n * n);
    std::size_t count = static_cast<std::size_t>(n) * n * n;
    for (std::size_t i = 0; i < count; ++i) data[i] *= scale;
  }
}

}  // namespace nsteady::detail
