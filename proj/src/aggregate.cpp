#include "cnt/aggregate.hpp"

#include <algorithm>
#include <cmath>

#include "cnt/error.hpp"

namespace cnt {

void AggregationParams::validate() const {
  if (n < 1) throw ConfigError("AggregationParams: n must be >= 1");
  if (tau <= 0.0) throw ConfigError("AggregationParams: tau must be > 0");
}

namespace {

// Window bounds are materialized as integer microseconds so that abutting
// windows share the exact boundary (additivity / partition property).
int64_t to_us(double t_s) { return static_cast<int64_t>(std::llround(t_s * 1e6)); }

SpeckleMap aggregate_us(const EventStream& stream, double t_center, int64_t lo_us,
                        int64_t hi_us, double window_s) {
  SpeckleMap map;
  map.values = Grid(stream.width, stream.height);
  map.t_center = t_center;
  map.window = window_s;
  map.stage = MapStage::kAggregated;

  const auto& ev = stream.events;
  auto first = std::lower_bound(ev.begin(), ev.end(), lo_us,
                                [](const EventRecord& e, int64_t t) { return e.t_us < t; });
  for (auto it = first; it != ev.end() && it->t_us < hi_us; ++it)
    map.values.at(it->x, it->y) += it->p;
  return map;
}

}  // namespace

SpeckleMap aggregate(const EventStream& stream, double t_center,
                     const AggregationParams& params) {
  params.validate();
  if (!stream.sorted()) throw InputError("aggregate: event stream not sorted");
  const double dt = params.window();
  return aggregate_us(stream, t_center, to_us(t_center - dt / 2),
                      to_us(t_center + dt / 2), dt);
}

std::vector<SpeckleMap> map_sequence(const EventStream& stream, double t_start,
                                     int count, const AggregationParams& params) {
  params.validate();
  if (count < 2) throw ConfigError("map_sequence: count must be >= 2");
  if (!stream.sorted()) throw InputError("map_sequence: event stream not sorted");

  const double dt = params.window();
  const int64_t first_lo = to_us(t_start - dt / 2);
  const int64_t last_hi = to_us(t_start + (count - 1 + 0.5) * dt);
  if (first_lo < 0 || last_hi > stream.duration_us)
    throw RangeError("map_sequence: windows extend past the stream span");

  std::vector<SpeckleMap> maps;
  maps.reserve(count);
  for (int k = 0; k < count; ++k) {
    const double center = t_start + k * dt;
    maps.push_back(aggregate_us(stream, center, to_us(t_start + (k - 0.5) * dt),
                                to_us(t_start + (k + 0.5) * dt), dt));
  }
  return maps;
}

}  // namespace cnt
