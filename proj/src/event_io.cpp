#include "cnt/event_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstring>
#include <fstream>

#include "cnt/error.hpp"

namespace cnt {
namespace {

constexpr char kMagic[4] = {'E', 'V', 'S', '1'};
constexpr size_t kRecordSize = 16;

void put_u16(unsigned char* p, uint16_t v) {
  p[0] = static_cast<unsigned char>(v & 0xff);
  p[1] = static_cast<unsigned char>(v >> 8);
}

void put_u64(unsigned char* p, uint64_t v) {
  for (int i = 0; i < 8; ++i) p[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
}

uint16_t get_u16(const unsigned char* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

uint64_t get_u64(const unsigned char* p) {
  uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

long long parse_int(std::string_view s, const std::string& what, size_t line) {
  long long v = 0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  if (b != e && *b == '+') ++b;
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc{} || ptr != e)
    throw InputError("event csv line " + std::to_string(line) + ": bad " + what +
                     " field '" + std::string(s) + "'");
  return v;
}

}  // namespace

void write_events(const std::string& path, const EventStream& stream,
                  EventFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("write_events: cannot open " + path);

  if (format == EventFormat::kCsv) {
    out << "t_us,x,y,p\n";
    for (const auto& e : stream.events)
      out << e.t_us << ',' << e.x << ',' << e.y << ',' << static_cast<int>(e.p) << '\n';
  } else {
    out.write(kMagic, 4);
    std::array<unsigned char, kRecordSize> rec{};
    for (const auto& e : stream.events) {
      rec.fill(0);
      put_u64(rec.data(), static_cast<uint64_t>(e.t_us));
      put_u16(rec.data() + 8, e.x);
      put_u16(rec.data() + 10, e.y);
      rec[12] = static_cast<unsigned char>(e.p);
      out.write(reinterpret_cast<const char*>(rec.data()), kRecordSize);
    }
  }
  if (!out) throw IoError("write_events: write failed for " + path);
}

namespace {

EventStream read_csv(std::ifstream& in, int width, int height) {
  EventStream stream;
  stream.width = width;
  stream.height = height;

  std::string line;
  size_t lineno = 0;
  if (!std::getline(in, line)) throw InputError("event csv: empty file");
  ++lineno;
  if (line == "t_us,x,y,p\r") line.pop_back();
  if (line != "t_us,x,y,p")
    throw InputError("event csv: missing 't_us,x,y,p' header");

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::array<std::string_view, 4> fields;
    std::string_view sv = line;
    size_t start = 0;
    int nf = 0;
    for (size_t i = 0; i <= sv.size(); ++i) {
      if (i == sv.size() || sv[i] == ',') {
        if (nf >= 4)
          throw InputError("event csv line " + std::to_string(lineno) + ": too many fields");
        fields[nf++] = sv.substr(start, i - start);
        start = i + 1;
      }
    }
    if (nf != 4)
      throw InputError("event csv line " + std::to_string(lineno) + ": expected 4 fields");

    const long long t = parse_int(fields[0], "t_us", lineno);
    const long long x = parse_int(fields[1], "x", lineno);
    const long long y = parse_int(fields[2], "y", lineno);
    const long long p = parse_int(fields[3], "p", lineno);
    if (p != 1 && p != -1)
      throw InputError("event csv line " + std::to_string(lineno) +
                       ": polarity must be 1 or -1");
    if (t < 0)
      throw InputError("event csv line " + std::to_string(lineno) + ": negative timestamp");
    if (x < 0 || x >= width || y < 0 || y >= height)
      throw InputError("event csv line " + std::to_string(lineno) +
                       ": pixel out of bounds for " + std::to_string(width) + "x" +
                       std::to_string(height) + " sensor");
    stream.events.push_back({t, static_cast<uint16_t>(x), static_cast<uint16_t>(y),
                             static_cast<int8_t>(p)});
  }
  return stream;
}

EventStream read_binary(std::ifstream& in, int width, int height) {
  EventStream stream;
  stream.width = width;
  stream.height = height;

  std::array<unsigned char, kRecordSize> rec{};
  size_t offset = 4;
  while (in.read(reinterpret_cast<char*>(rec.data()), kRecordSize)) {
    const uint64_t t = get_u64(rec.data());
    const uint16_t x = get_u16(rec.data() + 8);
    const uint16_t y = get_u16(rec.data() + 10);
    const int8_t p = static_cast<int8_t>(rec[12]);
    if (p != 1 && p != -1)
      throw InputError("event binary offset " + std::to_string(offset) +
                       ": polarity must be 1 or -1");
    if (rec[13] != 0 || rec[14] != 0 || rec[15] != 0)
      throw InputError("event binary offset " + std::to_string(offset) +
                       ": reserved bytes must be zero");
    if (x >= width || y >= height)
      throw InputError("event binary offset " + std::to_string(offset) +
                       ": pixel out of bounds");
    stream.events.push_back({static_cast<int64_t>(t), x, y, p});
    offset += kRecordSize;
  }
  if (in.gcount() != 0)
    throw InputError("event binary: truncated record at offset " + std::to_string(offset));
  return stream;
}

}  // namespace

EventStream read_events(const std::string& path, int width, int height,
                        int64_t duration_us) {
  if (width <= 0 || height <= 0)
    throw ConfigError("read_events: sensor dimensions must be positive");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("read_events: cannot open " + path);

  char magic[4] = {};
  in.read(magic, 4);
  EventStream stream;
  if (in.gcount() == 4 && std::memcmp(magic, kMagic, 4) == 0) {
    stream = read_binary(in, width, height);
  } else {
    in.clear();
    in.seekg(0);
    stream = read_csv(in, width, height);
  }

  std::sort(stream.events.begin(), stream.events.end(), event_less);
  stream.duration_us = duration_us >= 0
                           ? duration_us
                           : (stream.events.empty() ? 0 : stream.events.back().t_us);
  return stream;
}

}  // namespace cnt
