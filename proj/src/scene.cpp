#include "cnt/scene.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

#include "cnt/error.hpp"
#include "cnt/fft.hpp"
#include "cnt/random.hpp"

namespace cnt {

double Vec2::norm() const { return std::hypot(x, y); }
Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
Vec2 operator*(Vec2 a, double c) { return {a.x * c, a.y * c}; }

void SceneConfig::validate() const {
  if (grid_width < 32 || grid_height < 32)
    throw ConfigError("SceneConfig: grid dimensions must be >= 32");
  const double max_grain = std::min(grid_width, grid_height) / 8.0;
  if (speckle_grain < 1.0 || speckle_grain > max_grain)
    throw ConfigError("SceneConfig: speckle_grain must be in [1, min(grid)/8]");
  if (px_per_mm <= 0.0) throw ConfigError("SceneConfig: px_per_mm must be > 0");
  if (d_ome_mm <= 0.0) throw ConfigError("SceneConfig: d_ome_mm must be > 0");
  if (illumination <= 0.0 || illumination > 1.0)
    throw ConfigError("SceneConfig: illumination must be in (0, 1]");
  if (pad_mm <= 0.0) throw ConfigError("SceneConfig: pad_mm must be > 0");
  if (photons_per_ms <= 0.0)
    throw ConfigError("SceneConfig: photons_per_ms must be > 0");
}

namespace {

constexpr int kMaxFieldDim = 8192;
constexpr int kMaxLayers = 64;
constexpr size_t kMaxEvents = 120'000'000;

int padding_px(const SceneConfig& cfg) {
  return static_cast<int>(std::ceil(cfg.pad_mm * cfg.px_per_mm)) + 2;
}

}  // namespace

/// Lazily generated chain of independent unit-power speckle layers, all
/// derived from the scene seed. Layer j is seeded by (seed, kFieldLayer, j),
/// so the set of layers touched never changes their content.
class LayerStore {
public:
  LayerStore(const SceneConfig& cfg, int width, int height)
      : cfg_(cfg), width_(width), height_(height) {}

  const ComplexGrid& layer(int j) {
    if (j < 0 || j >= kMaxLayers)
      throw RangeError("speckle field: displacement beyond supported layer chain");
    std::lock_guard<std::mutex> lock(mu_);
    if (static_cast<size_t>(j) >= layers_.size()) layers_.resize(j + 1);
    if (!layers_[j]) layers_[j] = std::make_unique<ComplexGrid>(make_layer(j));
    return *layers_[j];
  }

private:
  // Fully developed speckle: a circular-Gaussian spectrum limited to an
  // elliptical support whose radius sets the mean grain size, inverse
  // transformed and normalized to unit mean power.
  ComplexGrid make_layer(int j) const {
    ComplexGrid g(width_, height_);
    Rng rng = Rng::derive(cfg_.rng_seed, {rng_tag::kFieldLayer, static_cast<uint64_t>(j)});
    const double rx = width_ / (2.0 * cfg_.speckle_grain);
    const double ry = height_ / (2.0 * cfg_.speckle_grain);
    for (int fy = 0; fy < height_; ++fy) {
      const double dy = std::min(fy, height_ - fy) / ry;
      for (int fx = 0; fx < width_; ++fx) {
        const double dx = std::min(fx, width_ - fx) / rx;
        if (dx * dx + dy * dy <= 1.0) {
          const double re = rng.gaussian();
          const double im = rng.gaussian();
          g.at(fx, fy) = {re, im};
        }
      }
    }
    fft2_inverse(g);
    double power = 0.0;
    for (size_t i = 0; i < g.size(); ++i) power += std::norm(g.data()[i]);
    power /= static_cast<double>(g.size());
    const double scale = 1.0 / std::sqrt(power);
    for (size_t i = 0; i < g.size(); ++i) g.data()[i] *= scale;
    return g;
  }

  SceneConfig cfg_;
  int width_;
  int height_;
  mutable std::mutex mu_;
  std::vector<std::unique_ptr<ComplexGrid>> layers_;
};

SpeckleField generate_field(const SceneConfig& cfg) {
  cfg.validate();
  const int pad = padding_px(cfg);
  const int w = cfg.grid_width + 2 * pad;
  const int h = cfg.grid_height + 2 * pad;
  if (w > kMaxFieldDim || h > kMaxFieldDim)
    throw ConfigError("generate_field: grid too small for requested padding (field would exceed " +
                      std::to_string(kMaxFieldDim) + " px)");
  SpeckleField field;
  field.origin_offset = pad;
  field.layers = std::make_shared<LayerStore>(cfg, w, h);
  const ComplexGrid& e0 = field.layers->layer(0);
  field.values = Grid(w, h);
  for (size_t i = 0; i < e0.size(); ++i)
    field.values.data()[i] = std::norm(e0.data()[i]);
  return field;
}

namespace {

// Samples the blended complex field on the sensor window shifted by the
// displacement, writing |E|^2 * illumination into `out`. The blend weights
// give an intensity correlation with the zero-displacement pattern of
// exactly max(0, 1 - max(0, s/d_ome - 1)) for |d| = s.
void sample_intensity(const SpeckleField& field, const SceneConfig& cfg,
                      Vec2 d_mm, Grid& out) {
  const int w = cfg.grid_width;
  const int h = cfg.grid_height;
  const int pad = field.origin_offset;
  if (out.width() != w || out.height() != h) out = Grid(w, h);

  const double sx = d_mm.x * cfg.px_per_mm;
  const double sy = d_mm.y * cfg.px_per_mm;
  if (std::fabs(sx) > pad - 1 || std::fabs(sy) > pad - 1)
    throw RangeError("instantaneous_intensity: displacement exceeds field padding");

  const double s = d_mm.norm();
  int lo_layer = 0, hi_layer = 0;
  double wa = 1.0, wb = 0.0;
  if (s > cfg.d_ome_mm) {
    const double r = s / cfg.d_ome_mm;
    const int k = static_cast<int>(std::floor(r));
    const double u = r - k;
    lo_layer = k - 1;
    hi_layer = k;
    wa = std::sqrt(1.0 - u);
    wb = std::sqrt(u);
  }

  const ComplexGrid& la = field.layers->layer(lo_layer);
  const ComplexGrid& lb = field.layers->layer(hi_layer);
  const int fw = la.width();

  const double ox = pad - sx;
  const double oy = pad - sy;
  const int ix0 = static_cast<int>(std::floor(ox));
  const int iy0 = static_cast<int>(std::floor(oy));
  const double fx = ox - ix0;
  const double fy = oy - iy0;
  const double w00 = (1.0 - fx) * (1.0 - fy);
  const double w10 = fx * (1.0 - fy);
  const double w01 = (1.0 - fx) * fy;
  const double w11 = fx * fy;

  const bool blend = hi_layer != lo_layer;
  const double illum = cfg.illumination;
  for (int y = 0; y < h; ++y) {
    const std::complex<double>* a0 = la.data() + static_cast<size_t>(y + iy0) * fw + ix0;
    const std::complex<double>* a1 = a0 + fw;
    const std::complex<double>* b0 = lb.data() + static_cast<size_t>(y + iy0) * fw + ix0;
    const std::complex<double>* b1 = b0 + fw;
    double* row = out.data() + static_cast<size_t>(y) * w;
    for (int x = 0; x < w; ++x) {
      std::complex<double> e = w00 * a0[x] + w10 * a0[x + 1] + w01 * a1[x] + w11 * a1[x + 1];
      if (blend) {
        const std::complex<double> eb =
            w00 * b0[x] + w10 * b0[x + 1] + w01 * b1[x] + w11 * b1[x + 1];
        e = wa * e + wb * eb;
      }
      row[x] = std::norm(e) * illum;
    }
  }
}

}  // namespace

Grid instantaneous_intensity(const SpeckleField& field, const SceneConfig& cfg,
                             Vec2 displacement_mm) {
  if (!std::isfinite(displacement_mm.x) || !std::isfinite(displacement_mm.y))
    throw RangeError("instantaneous_intensity: non-finite displacement");
  Grid out;
  sample_intensity(field, cfg, displacement_mm, out);
  return out;
}

void TrajectorySpec::validate() const {
  if (!(duration > 0.0)) throw ConfigError("TrajectorySpec: duration must be > 0");
  switch (kind) {
    case TrajectoryKind::kConstantVelocity:
      break;
    case TrajectoryKind::kPiecewiseLinear: {
      if (segments.empty()) throw ConfigError("TrajectorySpec: no velocity segments");
      if (segments.front().t != 0.0)
        throw ConfigError("TrajectorySpec: first segment must start at t = 0");
      for (size_t i = 1; i < segments.size(); ++i)
        if (segments[i].t <= segments[i - 1].t)
          throw ConfigError("TrajectorySpec: segment times must be strictly increasing");
      break;
    }
    case TrajectoryKind::kWaypointPath: {
      if (waypoints.size() < 2) throw ConfigError("TrajectorySpec: need >= 2 waypoints");
      if (waypoints.front().t != 0.0)
        throw ConfigError("TrajectorySpec: first waypoint must be at t = 0");
      for (size_t i = 1; i < waypoints.size(); ++i)
        if (waypoints[i].t <= waypoints[i - 1].t)
          throw ConfigError("TrajectorySpec: waypoint times must be strictly increasing");
      if (waypoints.back().t < duration - 1e-9)
        throw ConfigError("TrajectorySpec: waypoints must cover the full duration");
      break;
    }
  }
}

Vec2 sample_trajectory(const TrajectorySpec& traj, double t) {
  if (t < -1e-9 || t > traj.duration + 1e-9)
    throw RangeError("sample_trajectory: t outside [0, duration]");
  t = std::clamp(t, 0.0, traj.duration);
  switch (traj.kind) {
    case TrajectoryKind::kConstantVelocity:
      return {traj.velocity.x * t, traj.velocity.y * t};
    case TrajectoryKind::kPiecewiseLinear: {
      Vec2 pos;
      for (size_t i = 0; i < traj.segments.size(); ++i) {
        const double t0 = traj.segments[i].t;
        const double t1 = (i + 1 < traj.segments.size()) ? traj.segments[i + 1].t
                                                         : traj.duration;
        if (t <= t0) break;
        const double span = std::min(t, t1) - t0;
        pos.x += traj.segments[i].vx * span;
        pos.y += traj.segments[i].vy * span;
      }
      return pos;
    }
    case TrajectoryKind::kWaypointPath: {
      const auto& wp = traj.waypoints;
      if (t <= wp.front().t) return {wp.front().x, wp.front().y};
      for (size_t i = 1; i < wp.size(); ++i) {
        if (t <= wp[i].t) {
          const double f = (t - wp[i - 1].t) / (wp[i].t - wp[i - 1].t);
          return {wp[i - 1].x + f * (wp[i].x - wp[i - 1].x),
                  wp[i - 1].y + f * (wp[i].y - wp[i - 1].y)};
        }
      }
      return {wp.back().x, wp.back().y};
    }
  }
  return {};
}

Vec2 trajectory_displacement(const TrajectorySpec& traj, double t) {
  return sample_trajectory(traj, t) - sample_trajectory(traj, 0.0);
}

double TrajectorySpec::path_length() const {
  switch (kind) {
    case TrajectoryKind::kConstantVelocity:
      return velocity.norm() * duration;
    case TrajectoryKind::kPiecewiseLinear: {
      double len = 0.0;
      for (size_t i = 0; i < segments.size(); ++i) {
        const double t0 = segments[i].t;
        const double t1 = (i + 1 < segments.size()) ? segments[i + 1].t : duration;
        if (t0 >= duration) break;
        len += Vec2{segments[i].vx, segments[i].vy}.norm() * (std::min(t1, duration) - t0);
      }
      return len;
    }
    case TrajectoryKind::kWaypointPath: {
      double len = 0.0;
      for (size_t i = 1; i < waypoints.size(); ++i) {
        if (waypoints[i - 1].t >= duration) break;
        Vec2 a{waypoints[i - 1].x, waypoints[i - 1].y};
        Vec2 b{waypoints[i].x, waypoints[i].y};
        double seg = (b - a).norm();
        if (waypoints[i].t > duration) {
          const double f = (duration - waypoints[i - 1].t) / (waypoints[i].t - waypoints[i - 1].t);
          seg *= f;
        }
        len += seg;
      }
      return len;
    }
  }
  return 0.0;
}

double TrajectorySpec::max_displacement() const {
  const int samples = 1024;
  double best = 0.0;
  const Vec2 p0 = sample_trajectory(*this, 0.0);
  for (int i = 0; i <= samples; ++i) {
    const double t = duration * i / samples;
    best = std::max(best, (sample_trajectory(*this, t) - p0).norm());
  }
  return best;
}

FrameSequence simulate_frames(const SpeckleField& field, const SceneConfig& cfg,
                              const TrajectorySpec& traj, const FrameCamera& cam) {
  cfg.validate();
  traj.validate();
  if (cam.fps <= 0.0) throw ConfigError("FrameCamera: fps must be > 0");
  if (cam.exposure <= 0.0 || cam.exposure > 1.0 / cam.fps + 1e-12)
    throw ConfigError("FrameCamera: exposure must be in (0, 1/fps]");

  const int w = cfg.grid_width;
  const int h = cfg.grid_height;
  const size_t npx = static_cast<size_t>(w) * h;
  const int count = static_cast<int>(std::floor(traj.duration * cam.fps + 1e-9));
  const double exp_ms = cam.exposure * 1e3;
  const double full_scale = cam.full_scale_photons > 0.0
                                ? cam.full_scale_photons
                                : 4.0 * cfg.photons_per_ms * exp_ms;

  Grid fpn;
  if (cam.noise && cam.fpn_frac > 0.0) {
    fpn = Grid(w, h);
    Rng rng = Rng::derive(cfg.rng_seed, {rng_tag::kFixedPattern});
    for (size_t i = 0; i < npx; ++i)
      fpn.data()[i] = rng.gaussian() * cam.fpn_frac * full_scale;
  }

  FrameSequence seq;
  seq.fps = cam.fps;
  seq.exposure = cam.exposure;
  seq.frames.reserve(count);
  seq.timestamps.reserve(count);

  const Vec2 origin = sample_trajectory(traj, 0.0);
  Grid accum(w, h);
  Grid sample;
  for (int f = 0; f < count; ++f) {
    const double t0 = f / cam.fps;
    const Vec2 d0 = sample_trajectory(traj, t0) - origin;
    const Vec2 d1 = sample_trajectory(traj, std::min(t0 + cam.exposure, traj.duration)) - origin;
    const double blur_px = (d1 - d0).norm() * cfg.px_per_mm;
    const int ksub = std::max(8, static_cast<int>(std::ceil(4.0 * blur_px)));

    std::fill(accum.values().begin(), accum.values().end(), 0.0);
    for (int j = 0; j < ksub; ++j) {
      const double t = t0 + (j + 0.5) * cam.exposure / ksub;
      sample_intensity(field, cfg, sample_trajectory(traj, std::min(t, traj.duration)) - origin,
                       sample);
      accum += sample;
    }
    const double photon_scale = cfg.photons_per_ms * exp_ms / ksub;

    Grid frame(w, h);
    if (cam.noise) {
      Rng rng = Rng::derive(cfg.rng_seed, {rng_tag::kFrameNoise, static_cast<uint64_t>(f)});
      for (size_t i = 0; i < npx; ++i) {
        double photons = static_cast<double>(rng.poisson(accum.data()[i] * photon_scale));
        photons += cam.read_noise * rng.gaussian();
        if (!fpn.empty()) photons += fpn.data()[i];
        frame.data()[i] = std::clamp(std::round(photons / full_scale * 255.0), 0.0, 255.0);
      }
    } else {
      for (size_t i = 0; i < npx; ++i) {
        const double photons = accum.data()[i] * photon_scale;
        frame.data()[i] = std::clamp(std::round(photons / full_scale * 255.0), 0.0, 255.0);
      }
    }
    seq.frames.push_back(std::move(frame));
    seq.timestamps.push_back(t0);
  }
  return seq;
}

EventStream simulate_events(const SpeckleField& field, const SceneConfig& cfg,
                            const TrajectorySpec& traj, const EventCameraModel& model) {
  cfg.validate();
  traj.validate();
  if (model.threshold <= 0.0) throw ConfigError("EventCameraModel: threshold must be > 0");
  if (model.refractory_us < 0) throw ConfigError("EventCameraModel: refractory must be >= 0");
  if (model.noise_rate < 0.0) throw ConfigError("EventCameraModel: noise_rate must be >= 0");
  if (model.log_floor <= 0.0) throw ConfigError("EventCameraModel: log_floor must be > 0");

  const int w = cfg.grid_width;
  const int h = cfg.grid_height;
  const size_t npx = static_cast<size_t>(w) * h;
  const double dt = 1e-3;  // simulation step, spec'd <= 1 ms
  const double d_thresh = model.threshold;

  const Vec2 origin = sample_trajectory(traj, 0.0);
  Grid intensity;
  sample_intensity(field, cfg, {0.0, 0.0}, intensity);

  std::vector<double> l_ref(npx), l_prev(npx);
  for (size_t i = 0; i < npx; ++i)
    l_ref[i] = l_prev[i] = std::log(intensity.data()[i] + model.log_floor);
  std::vector<int64_t> last_emit(npx, std::numeric_limits<int64_t>::min() / 2);

  EventStream stream;
  stream.width = w;
  stream.height = h;
  stream.duration_us = static_cast<int64_t>(std::llround(traj.duration * 1e6));

  Rng noise_rng = Rng::derive(cfg.rng_seed, {rng_tag::kEventNoise});
  const double noise_rate_eff = model.noise_rate / cfg.illumination;

  double t_prev = 0.0;
  int step = 0;
  while (t_prev < traj.duration - 1e-12) {
    ++step;
    const double t_now = std::min(step * dt, traj.duration);
    sample_intensity(field, cfg, sample_trajectory(traj, t_now) - origin, intensity);

    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const size_t i = static_cast<size_t>(y) * w + x;
        const double l_now = std::log(intensity.data()[i] + model.log_floor);
        double delta = l_now - l_ref[i];
        if (delta >= d_thresh || delta <= -d_thresh) {
          const int8_t p = delta > 0 ? int8_t{1} : int8_t{-1};
          const double pd = p * d_thresh;
          const double denom = l_now - l_prev[i];
          double level = l_ref[i];
          while (std::fabs(l_now - level) >= d_thresh) {
            level += pd;
            double f = denom != 0.0 ? (level - l_prev[i]) / denom : 1.0;
            f = std::clamp(f, 0.0, 1.0);
            const int64_t t_us =
                static_cast<int64_t>(std::llround((t_prev + f * (t_now - t_prev)) * 1e6));
            if (t_us - last_emit[i] >= model.refractory_us) {
              stream.events.push_back({t_us, static_cast<uint16_t>(x),
                                       static_cast<uint16_t>(y), p});
              last_emit[i] = t_us;
            }
          }
          l_ref[i] = level;
        }
        l_prev[i] = l_now;
      }
    }

    if (noise_rate_eff > 0.0) {
      const double lambda = noise_rate_eff * static_cast<double>(npx) * (t_now - t_prev);
      const int64_t n = noise_rng.poisson(lambda);
      for (int64_t j = 0; j < n; ++j) {
        const size_t idx = noise_rng.uniform_int(npx);
        const double t = t_prev + noise_rng.uniform() * (t_now - t_prev);
        const int8_t p = (noise_rng.next() & 1) ? int8_t{1} : int8_t{-1};
        stream.events.push_back({static_cast<int64_t>(std::llround(t * 1e6)),
                                 static_cast<uint16_t>(idx % w),
                                 static_cast<uint16_t>(idx / w), p});
      }
    }

    if (stream.events.size() > kMaxEvents)
      throw RangeError("simulate_events: event stream exceeds size guard");
    t_prev = t_now;
  }

  std::sort(stream.events.begin(), stream.events.end(), event_less);
  return stream;
}

}  // namespace cnt
