#include "cnt/tracker.hpp"

#include <algorithm>
#include <cmath>

#include "cnt/error.hpp"
#include "cnt/fft.hpp"

namespace cnt {

SpeckleMap mean_subtract(const SpeckleMap& map) {
  SpeckleMap out = map;
  const double mu = out.values.mean();
  for (double& v : out.values.values()) v -= mu;
  out.stage = MapStage::kMeanSubtracted;
  return out;
}

namespace {

int wrap_signed(int idx, int dim) { return idx < (dim + 1) / 2 ? idx : idx - dim; }

double parabolic_offset(double cm, double c0, double cp) {
  const double denom = cm + cp - 2.0 * c0;
  if (denom == 0.0) return 0.0;
  return std::clamp((cm - cp) / (2.0 * denom), -0.999999, 0.999999);
}

}  // namespace

CorrelationSurface cross_correlate(const SpeckleMap& ref, const SpeckleMap& cur) {
  if (ref.stage != MapStage::kMeanSubtracted || cur.stage != MapStage::kMeanSubtracted)
    throw InputError("cross_correlate: maps must be mean-subtracted");
  if (!ref.values.same_dims(cur.values))
    throw InputError("cross_correlate: dimension mismatch");

  const int w = ref.values.width();
  const int h = ref.values.height();
  const size_t n = ref.values.size();

  const double e_ref = ref.values.energy();
  const double e_cur = cur.values.energy();
  const double tol_ref = 1e-12 * ref.values.max_abs();
  const double tol_cur = 1e-12 * cur.values.max_abs();
  if (e_ref <= 0.0 || e_cur <= 0.0 || std::sqrt(e_ref / n) <= tol_ref ||
      std::sqrt(e_cur / n) <= tol_cur)
    throw DegenerateInputError("cross_correlate: zero-energy map");

  ComplexGrid fr(w, h), fc(w, h);
  for (size_t i = 0; i < n; ++i) {
    fr.data()[i] = ref.values.data()[i];
    fc.data()[i] = cur.values.data()[i];
  }
  fft2_forward(fr);
  fft2_forward(fc);
  for (size_t i = 0; i < n; ++i)
    fr.data()[i] = std::conj(fr.data()[i]) * fc.data()[i];
  fft2_inverse(fr);

  CorrelationSurface surf;
  surf.values = Grid(w, h);
  const double scale = 1.0 / std::sqrt(e_ref * e_cur);
  for (size_t i = 0; i < n; ++i)
    surf.values.data()[i] = fr.data()[i].real() * scale;

  // Integer peak with the documented tie-breaking.
  int bx = 0, by = 0;
  double best = surf.values.at(0, 0);
  long best_r2 = 0;
  int best_dy = 0, best_dx = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double v = surf.values.at(x, y);
      const int dx = wrap_signed(x, w);
      const int dy = wrap_signed(y, h);
      const long r2 = static_cast<long>(dx) * dx + static_cast<long>(dy) * dy;
      bool take = false;
      if (v > best) {
        take = true;
      } else if (v == best) {
        if (r2 != best_r2) take = r2 < best_r2;
        else if (dy != best_dy) take = dy < best_dy;
        else take = dx < best_dx;
      }
      if (take) {
        best = v;
        bx = x;
        by = y;
        best_r2 = r2;
        best_dx = dx;
        best_dy = dy;
      }
    }
  }

  surf.ipeak_dx = best_dx;
  surf.ipeak_dy = best_dy;
  surf.peak_value = best;

  const double cmx = surf.values.at((bx - 1 + w) % w, by);
  const double cpx = surf.values.at((bx + 1) % w, by);
  const double cmy = surf.values.at(bx, (by - 1 + h) % h);
  const double cpy = surf.values.at(bx, (by + 1) % h);
  surf.peak_dx = best_dx + parabolic_offset(cmx, best, cpx);
  surf.peak_dy = best_dy + parabolic_offset(cmy, best, cpy);
  return surf;
}

StepEstimate estimate_step(const SpeckleMap& ref, const SpeckleMap& cur,
                           double px_per_mm) {
  if (px_per_mm <= 0.0) throw ConfigError("estimate_step: px_per_mm must be > 0");
  const CorrelationSurface surf = cross_correlate(ref, cur);
  return {surf.peak_dx / px_per_mm, surf.peak_dy / px_per_mm, surf.peak_value};
}

namespace {

// Shared fold over consecutive map pairs: estimate each step, update the
// reference to the newer map, accumulate per Eq.-style summation. Degenerate
// pairs are recorded and contribute zero displacement.
TrackReport track_map_sequence(const std::vector<SpeckleMap>& maps, double px_per_mm,
                               double d_ome_mm) {
  TrackReport report;
  report.d_ome_mm = d_ome_mm;
  report.trajectory.tag = TrajectoryTag::kEstimated;
  report.trajectory.samples.push_back({maps.front().t_center, 0.0, 0.0});

  double cx = 0.0, cy = 0.0;
  for (size_t k = 0; k + 1 < maps.size(); ++k) {
    StepInfo step;
    step.t_from = maps[k].t_center;
    step.t_to = maps[k + 1].t_center;
    try {
      const StepEstimate est = estimate_step(maps[k], maps[k + 1], px_per_mm);
      step.dx_mm = est.dx_mm;
      step.dy_mm = est.dy_mm;
      step.peak_value = est.peak_value;
    } catch (const DegenerateInputError&) {
      step.ok = false;
      ++report.degenerate_steps;
    }
    const double mag = std::hypot(step.dx_mm, step.dy_mm);
    if (d_ome_mm > 0.0 && mag >= d_ome_mm) step.ome_violation = true;
    cx += step.dx_mm;
    cy += step.dy_mm;
    report.trajectory.samples.push_back({step.t_to, cx, cy});
    report.steps.push_back(step);
  }
  if (report.degenerate_steps > 0)
    report.note = std::to_string(report.degenerate_steps) + " degenerate step(s)";
  return report;
}

int window_count(const EventStream& stream, double dt) {
  const double span = stream.duration_us * 1e-6;
  int count = static_cast<int>(std::floor(span / dt + 1e-9));
  while (count > 0 &&
         std::llround((count - 0.5) * dt * 1e6) + std::llround(dt * 1e6 / 2) >
             stream.duration_us)
    --count;
  return count;
}

}  // namespace

TrackReport track_recursive(const EventStream& stream, const AggregationParams& params,
                            const FilterSpec& filter, const TrackCalib& calib) {
  params.validate();
  const double dt = params.window();
  const int count = window_count(stream, dt);
  if (count < 2) throw RangeError("track_recursive: stream spans fewer than 2 windows");

  auto maps = map_sequence(stream, dt / 2.0, count, params);
  for (auto& m : maps) m = mean_subtract(lowpass(m, filter));
  return track_map_sequence(maps, calib.px_per_mm, calib.d_ome_mm);
}

TrackReport track_frames(const FrameSequence& frames,
                         const std::optional<FilterSpec>& filter, double px_per_mm) {
  if (frames.frames.size() < 2)
    throw RangeError("track_frames: need at least 2 frames");

  std::vector<SpeckleMap> maps;
  maps.reserve(frames.frames.size());
  for (size_t i = 0; i < frames.frames.size(); ++i) {
    SpeckleMap m;
    m.values = frames.frames[i];
    m.t_center = frames.timestamps[i] + frames.exposure / 2.0;
    m.window = frames.exposure;
    m.stage = MapStage::kAggregated;
    if (filter) m = lowpass(m, *filter);
    maps.push_back(mean_subtract(m));
  }
  return track_map_sequence(maps, px_per_mm, 0.0);
}

TrackReport track_event_only(const EventStream& stream, double tau, double px_per_mm,
                             double d_ome_mm) {
  const AggregationParams params{1, tau};
  const double dt = params.window();
  const int count = window_count(stream, dt);
  if (count < 2) throw RangeError("track_event_only: stream spans fewer than 2 windows");

  auto maps = map_sequence(stream, dt / 2.0, count, params);
  for (auto& m : maps) m = mean_subtract(m);
  return track_map_sequence(maps, px_per_mm, d_ome_mm);
}

void attach_ground_truth(TrackReport& report, const TrajectorySpec& traj) {
  auto& samples = report.trajectory.samples;
  if (samples.size() < 2) return;

  const Vec2 gt0 = sample_trajectory(traj, samples.front().t);
  double gt_path = 0.0;
  Vec2 gt_end;
  Vec2 prev{0.0, 0.0};
  for (size_t i = 1; i < samples.size(); ++i) {
    const Vec2 gt = sample_trajectory(traj, samples[i].t) - gt0;
    gt_path += (gt - prev).norm();
    prev = gt;
    gt_end = gt;
  }

  const Vec2 est_end{samples.back().x, samples.back().y};
  const double gt_norm = gt_end.norm();
  report.errors.endpoint_abs_mm = (est_end - gt_end).norm();
  if (gt_norm > 0.0) {
    report.errors.valid = true;
    report.errors.endpoint_rel = report.errors.endpoint_abs_mm / gt_norm;
    report.errors.speed_rel = std::fabs(est_end.norm() - gt_norm) / gt_norm;
  }
  if (gt_path > 0.0) report.errors.path_rel = report.errors.endpoint_abs_mm / gt_path;
}

}  // namespace cnt
