#include "cnt/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>
#include <tuple>

namespace cnt {
namespace {

// Plans are cached per (width, height, sign) and executed on plan-owned
// aligned buffers; callers' data is copied in and out. FFTW_ESTIMATE keeps
// plan selection deterministic, which the reproducibility contract relies on.
class PlanCache {
public:
  static PlanCache& instance() {
    static PlanCache c;
    return c;
  }

  void execute(ComplexGrid& g, int sign) {
    const int w = g.width();
    const int h = g.height();
    std::lock_guard<std::mutex> lock(mu_);
    Entry& e = entry(w, h, sign);
    std::memcpy(e.buf, g.data(), sizeof(fftw_complex) * g.size());
    fftw_execute(e.plan);
    std::memcpy(g.data(), e.buf, sizeof(fftw_complex) * g.size());
  }

private:
  struct Entry {
    fftw_plan plan = nullptr;
    fftw_complex* buf = nullptr;
  };

  Entry& entry(int w, int h, int sign) {
    const auto key = std::make_tuple(w, h, sign);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    Entry e;
    e.buf = fftw_alloc_complex(static_cast<size_t>(w) * h);
    e.plan = fftw_plan_dft_2d(h, w, e.buf, e.buf, sign, FFTW_ESTIMATE);
    return cache_.emplace(key, e).first->second;
  }

  std::mutex mu_;
  std::map<std::tuple<int, int, int>, Entry> cache_;
};

}  // namespace

void fft2_forward(ComplexGrid& g) {
  if (g.size() == 0) return;
  PlanCache::instance().execute(g, FFTW_FORWARD);
}

void fft2_inverse(ComplexGrid& g) {
  if (g.size() == 0) return;
  PlanCache::instance().execute(g, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(g.size());
  for (size_t i = 0; i < g.size(); ++i) g.data()[i] *= scale;
}

}  // namespace cnt
