#pragma once

#include "cnt/aggregate.hpp"
#include "cnt/grid.hpp"

namespace cnt {

enum class FilterShape { kIdealCircular, kGaussian };

/// Fourier-domain lowpass with cutoff `omega` in DFT bin-radius units.
struct FilterSpec {
  int omega = 40;
  FilterShape shape = FilterShape::kIdealCircular;

  void validate(int width, int height) const;  // throws ConfigError
};

/// Transfer function H(f; omega) on a width x height DFT grid, DC at bin
/// (0, 0), wrap-aware radial distance. Real and symmetric under f -> -f.
Grid transfer_function(const FilterSpec& spec, int width, int height);

/// Lowpass denoise: forward DFT, multiply by H, inverse DFT, real part.
/// Input must be an aggregated-stage map; the result is denoised-stage.
SpeckleMap lowpass(const SpeckleMap& map, const FilterSpec& spec);

}  // namespace cnt
