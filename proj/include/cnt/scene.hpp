#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "cnt/events.hpp"
#include "cnt/grid.hpp"

namespace cnt {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  double norm() const;
};

Vec2 operator+(Vec2 a, Vec2 b);
Vec2 operator-(Vec2 a, Vec2 b);
Vec2 operator*(Vec2 a, double c);

/// Synthetic scattering scene parameters. Units are sensor pixels,
/// millimeters and dimensionless scale factors.
///
/// `illumination` in (0, 1] scales the mean photon flux; 1.0 is the
/// bright-light reference and the lux analog is linear (reference 10.5 lux
/// maps to 1.0, so e.g. 0.9 lux maps to 0.086).
struct SceneConfig {
  int grid_width = 346;
  int grid_height = 260;
  double speckle_grain = 2.5;   // mean speckle size, px
  double px_per_mm = 7.5;       // sensor calibration: pixels per millimeter
  double d_ome_mm = 2.0;        // memory-effect displacement limit
  double illumination = 1.0;    // (0, 1]
  uint64_t rng_seed = 1;
  double pad_mm = 8.0;          // largest displacement the field must cover
  double photons_per_ms = 50.0; // mean photons/px/ms at illumination 1.0

  void validate() const;  // throws ConfigError
};

class LayerStore;

/// Base speckle field, padded beyond the sensor window so any in-range
/// displacement samples real data. `values` holds the zero-displacement
/// intensity; correlated layers for beyond-memory-effect displacements are
/// derived lazily from the same seed.
struct SpeckleField {
  Grid values;            // |E0|^2 on the padded grid, mean-normalized to 1
  int origin_offset = 0;  // padding in px on each side of the sensor window
  std::shared_ptr<LayerStore> layers;
};

enum class TrajectoryKind { kConstantVelocity, kPiecewiseLinear, kWaypointPath };

struct Waypoint {
  double t = 0.0;  // seconds
  double x = 0.0;  // mm
  double y = 0.0;  // mm
};

struct VelocitySegment {
  double t = 0.0;   // segment start, seconds
  double vx = 0.0;  // mm/s
  double vy = 0.0;  // mm/s
};

struct TrajectorySpec {
  TrajectoryKind kind = TrajectoryKind::kConstantVelocity;
  Vec2 velocity;                          // constant-velocity
  std::vector<VelocitySegment> segments;  // piecewise-linear
  std::vector<Waypoint> waypoints;        // waypoint-path
  double duration = 1.0;                  // seconds

  void validate() const;
  /// Total arc length of the path over [0, duration], mm.
  double path_length() const;
  /// Largest |position(t) - position(0)| over the duration, mm.
  double max_displacement() const;
};

/// Position at time t per the spec'd motion model, mm. t outside
/// [0, duration] throws RangeError.
Vec2 sample_trajectory(const TrajectorySpec& traj, double t);

/// Displacement relative to the start position.
Vec2 trajectory_displacement(const TrajectorySpec& traj, double t);

/// Frame camera: fixed-exposure integration with shot noise, additive read
/// noise, a static fixed-pattern offset and 8-bit quantization.
struct FrameCamera {
  double fps = 25.0;
  double exposure = 0.040;          // seconds, <= 1/fps
  bool noise = true;                // master switch for shot/read/FPN
  double read_noise = 10.0;         // photons RMS per frame
  double fpn_frac = 0.03;           // fixed-pattern offset RMS / full scale
  double full_scale_photons = 0.0;  // 0 = auto (4x bright-light mean)
};

struct FrameSequence {
  std::vector<Grid> frames;        // 8-bit DN values stored as doubles
  double fps = 25.0;
  double exposure = 0.040;
  std::vector<double> timestamps;  // frame start times, seconds
};

/// Threshold-crossing event camera model. `noise_rate` is the spurious event
/// rate per pixel per second at illumination 1.0; the effective rate scales
/// as noise_rate / illumination.
struct EventCameraModel {
  double threshold = 0.2;      // log-intensity contrast step D
  int64_t refractory_us = 100; // per-pixel dead time
  double noise_rate = 1.0;     // events/px/s at illumination 1.0
  double log_floor = 1e-3;     // offset added to intensity before log
};

/// Builds the padded base speckle field for the scene. Deterministic per
/// seed; bit-identical for identical configs.
SpeckleField generate_field(const SceneConfig& cfg);

/// Intensity pattern on the sensor window for a given object displacement.
/// Within the memory-effect range the pattern is a rigid (bilinear) shift of
/// the base field; beyond it the pattern is blended with independent
/// same-seed layers so its correlation with the zero-displacement pattern
/// decays linearly to zero over [d_ome, 2*d_ome]. Output is scaled by
/// illumination.
Grid instantaneous_intensity(const SpeckleField& field, const SceneConfig& cfg,
                             Vec2 displacement_mm);

FrameSequence simulate_frames(const SpeckleField& field, const SceneConfig& cfg,
                              const TrajectorySpec& traj, const FrameCamera& cam);

EventStream simulate_events(const SpeckleField& field, const SceneConfig& cfg,
                            const TrajectorySpec& traj, const EventCameraModel& model);

}  // namespace cnt
