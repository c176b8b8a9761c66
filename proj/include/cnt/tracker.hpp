#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cnt/aggregate.hpp"
#include "cnt/filter.hpp"
#include "cnt/scene.hpp"

namespace cnt {

/// Circular cross-correlation surface indexed by displacement; peak location
/// carries the subpixel refinement, peak_value the normalized correlation at
/// the integer peak.
struct CorrelationSurface {
  Grid values;  // values.at(ix, iy) is the correlation at wrapped displacement
  int ipeak_dx = 0;
  int ipeak_dy = 0;
  double peak_dx = 0.0;
  double peak_dy = 0.0;
  double peak_value = 0.0;
};

enum class TrajectoryTag { kGroundTruth, kEstimated };

struct TrajectorySample {
  double t = 0.0;  // seconds
  double x = 0.0;  // mm
  double y = 0.0;  // mm
};

struct Trajectory {
  std::vector<TrajectorySample> samples;  // starts at (0, 0)
  TrajectoryTag tag = TrajectoryTag::kEstimated;
};

struct StepEstimate {
  double dx_mm = 0.0;
  double dy_mm = 0.0;
  double peak_value = 0.0;
};

struct StepInfo {
  double t_from = 0.0;
  double t_to = 0.0;
  double dx_mm = 0.0;
  double dy_mm = 0.0;
  double peak_value = 0.0;
  bool ok = true;              // false when the pair was degenerate
  bool ome_violation = false;  // per-step displacement >= d_ome
};

/// Errors against ground truth, attached by attach_ground_truth.
struct TrackErrors {
  bool valid = false;
  double endpoint_abs_mm = 0.0;
  double endpoint_rel = 0.0;  // |est - gt| / |gt| at the final sample
  double speed_rel = 0.0;     // | |est| - |gt| | / |gt|, displacement magnitudes
  double path_rel = 0.0;      // |est - gt| endpoint error / ground-truth path length
};

struct TrackReport {
  Trajectory trajectory;
  std::vector<StepInfo> steps;
  double d_ome_mm = 0.0;  // 0 = no margin checking
  int degenerate_steps = 0;
  std::string note;
  TrackErrors errors;
};

struct TrackCalib {
  double px_per_mm = 7.5;
  double d_ome_mm = 2.0;
};

/// Subtracts the spatial mean; accepts aggregated or denoised maps.
SpeckleMap mean_subtract(const SpeckleMap& map);

/// Circular frequency-domain cross-correlation of two mean-subtracted maps,
/// normalized so a shifted identical pattern peaks at 1. Integer peak ties
/// break toward smaller |displacement| then lexicographic (dy, dx); subpixel
/// refinement is an independent 3-point parabolic fit per axis.
CorrelationSurface cross_correlate(const SpeckleMap& ref, const SpeckleMap& cur);

/// Displacement of `cur` relative to `ref` in mm, plus peak confidence.
StepEstimate estimate_step(const SpeckleMap& ref, const SpeckleMap& cur,
                           double px_per_mm);

/// Full CNT tracking pipeline: aggregate at (n, tau), lowpass, mean-subtract,
/// correlate consecutive maps with the reference updated every step, and
/// accumulate displacements. Steps whose displacement reaches d_ome are
/// flagged but still recorded.
TrackReport track_recursive(const EventStream& stream, const AggregationParams& params,
                            const FilterSpec& filter, const TrackCalib& calib);

/// Frame-based baseline: the same correlography pipeline applied to
/// consecutive intensity frames.
TrackReport track_frames(const FrameSequence& frames,
                         const std::optional<FilterSpec>& filter, double px_per_mm);

/// Event-only baseline: n = 1 aggregation, no denoising.
TrackReport track_event_only(const EventStream& stream, double tau, double px_per_mm,
                             double d_ome_mm);

/// Fills report.errors by sampling the ground-truth trajectory at the
/// report's sample times.
void attach_ground_truth(TrackReport& report, const TrajectorySpec& traj);

}  // namespace cnt
