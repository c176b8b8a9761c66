#pragma once

#include <map>
#include <string>
#include <vector>

namespace cnt {

/// Flat key-value config file: one `key = value` pair per line, `#` comments,
/// dotted keys for grouping (e.g. scene.grain). Values are strings until a
/// typed getter is applied.
class KeyValueConfig {
public:
  static KeyValueConfig from_file(const std::string& path);
  static KeyValueConfig from_string(const std::string& text);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& def) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double def) const;
  long long get_int(const std::string& key) const;
  long long get_int(const std::string& key, long long def) const;
  bool get_bool(const std::string& key, bool def) const;

  /// Comma-separated doubles: "0.5, 1, 2".
  std::vector<double> get_double_list(const std::string& key) const;

  /// Integer range "lo..hi" or comma-separated list.
  std::vector<int> get_int_range(const std::string& key) const;

  /// Waypoints "t:x,y; t:x,y; ...".
  struct ParsedWaypoint {
    double t, x, y;
  };
  std::vector<ParsedWaypoint> get_waypoints(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const { return kv_; }
  void set(const std::string& key, const std::string& value) { kv_[key] = value; }

private:
  std::map<std::string, std::string> kv_;
};

}  // namespace cnt
