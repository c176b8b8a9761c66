#pragma once

#include <cstdint>
#include <vector>

namespace cnt {

/// One asynchronous polarity event: pixel (x, y) saw its log-intensity cross
/// the contrast threshold at time t_us with sign p.
struct EventRecord {
  int64_t t_us = 0;
  uint16_t x = 0;
  uint16_t y = 0;
  int8_t p = 1;  // +1 or -1
};

/// Canonical event ordering: timestamp, then (y, x, polarity).
inline bool event_less(const EventRecord& a, const EventRecord& b) {
  if (a.t_us != b.t_us) return a.t_us < b.t_us;
  if (a.y != b.y) return a.y < b.y;
  if (a.x != b.x) return a.x < b.x;
  return a.p < b.p;
}

struct EventStream {
  int width = 0;
  int height = 0;
  int64_t duration_us = 0;
  std::vector<EventRecord> events;

  bool sorted() const {
    for (size_t i = 1; i < events.size(); ++i)
      if (event_less(events[i], events[i - 1])) return false;
    return true;
  }
};

}  // namespace cnt
