#include "cnt/filter.hpp"

#include <cmath>
#include <stdexcept>

#include "cnt/error.hpp"
#include "cnt/fft.hpp"

namespace cnt {

void FilterSpec::validate(int width, int height) const {
  const int nyquist = std::min(width, height) / 2;
  if (omega < 1 || omega > nyquist)
    throw ConfigError("FilterSpec: omega must be in [1, min(dims)/2]");
}

Grid transfer_function(const FilterSpec& spec, int width, int height) {
  spec.validate(width, height);
  Grid h(width, height);
  const double om2 = static_cast<double>(spec.omega) * spec.omega;
  for (int fy = 0; fy < height; ++fy) {
    const int dy = std::min(fy, height - fy);
    for (int fx = 0; fx < width; ++fx) {
      const int dx = std::min(fx, width - fx);
      const double r2 = static_cast<double>(dx) * dx + static_cast<double>(dy) * dy;
      if (spec.shape == FilterShape::kIdealCircular)
        h.at(fx, fy) = r2 <= om2 ? 1.0 : 0.0;
      else
        h.at(fx, fy) = std::exp(-r2 / (2.0 * om2));
    }
  }
  return h;
}

SpeckleMap lowpass(const SpeckleMap& map, const FilterSpec& spec) {
  if (map.stage != MapStage::kAggregated)
    throw InputError("lowpass: input must be an aggregated-stage map");
  const int w = map.values.width();
  const int h = map.values.height();
  const Grid tf = transfer_function(spec, w, h);

  ComplexGrid g(w, h);
  for (size_t i = 0; i < g.size(); ++i) g.data()[i] = map.values.data()[i];
  fft2_forward(g);
  for (size_t i = 0; i < g.size(); ++i) g.data()[i] *= tf.data()[i];
  fft2_inverse(g);

  SpeckleMap out;
  out.values = Grid(w, h);
  out.t_center = map.t_center;
  out.window = map.window;
  out.stage = MapStage::kDenoised;
  double max_re = 0.0, max_im = 0.0;
  for (size_t i = 0; i < g.size(); ++i) {
    out.values.data()[i] = g.data()[i].real();
    max_re = std::max(max_re, std::fabs(g.data()[i].real()));
    max_im = std::max(max_im, std::fabs(g.data()[i].imag()));
  }
  // H is conjugate-symmetric, so the imaginary residue is pure rounding.
  if (max_im > 1e-9 * std::max(max_re, 1e-30) && max_im > 1e-12)
    throw std::logic_error("lowpass: unexpected imaginary residue");
  return out;
}

}  // namespace cnt
