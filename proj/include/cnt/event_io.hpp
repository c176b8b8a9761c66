#pragma once

#include <string>

#include "cnt/events.hpp"

namespace cnt {

enum class EventFormat { kCsv, kBinary };

/// Writes the stream to `path`. CSV format: header "t_us,x,y,p", one event
/// per line. Binary format: magic "EVS1" followed by little-endian 16-byte
/// records (t_us u64, x u16, y u16, p s8, 3 reserved zero bytes).
void write_events(const std::string& path, const EventStream& stream,
                  EventFormat format);

/// Reads either format (binary detected by the magic). Events are
/// re-validated against the supplied sensor dimensions and re-sorted into
/// canonical order.
EventStream read_events(const std::string& path, int width, int height,
                        int64_t duration_us = -1);

}  // namespace cnt
