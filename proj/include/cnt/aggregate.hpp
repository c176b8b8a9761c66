#pragma once

#include <vector>

#include "cnt/events.hpp"
#include "cnt/grid.hpp"

namespace cnt {

enum class MapStage { kAggregated, kDenoised, kMeanSubtracted };

/// Neuromorphic speckle map: per-pixel polarity sums over a temporal window
/// (aggregated), optionally lowpass filtered (denoised) and mean-subtracted.
struct SpeckleMap {
  Grid values;
  double t_center = 0.0;  // seconds
  double window = 0.0;    // seconds
  MapStage stage = MapStage::kAggregated;
};

/// Temporal ratio n relates the aggregation window to the reference exposure
/// tau: window = tau / n.
struct AggregationParams {
  int n = 1;
  double tau = 0.040;  // seconds

  double window() const { return tau / n; }
  void validate() const;  // throws ConfigError
};

/// Sums event polarities per pixel over the half-open window
/// [t_center - dt/2, t_center + dt/2) with dt = tau/n. The stream must be
/// sorted by timestamp.
SpeckleMap aggregate(const EventStream& stream, double t_center,
                     const AggregationParams& params);

/// Maps centered at t_start + k*dt for k = 0..count-1; windows abut exactly
/// (integer-microsecond bounds), so consecutive windows partition the span.
std::vector<SpeckleMap> map_sequence(const EventStream& stream, double t_start,
                                     int count, const AggregationParams& params);

}  // namespace cnt
