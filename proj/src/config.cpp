#include "cnt/config.hpp"

#include <fstream>
#include <sstream>

#include "cnt/error.hpp"

namespace cnt {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

KeyValueConfig KeyValueConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str());
}

KeyValueConfig KeyValueConfig::from_string(const std::string& text) {
  KeyValueConfig cfg;
  std::istringstream in(text);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    cfg.kv_[key] = value;
  }
  return cfg;
}

bool KeyValueConfig::has(const std::string& key) const { return kv_.count(key) > 0; }

std::string KeyValueConfig::get_string(const std::string& key) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) throw ConfigError("config: missing required key '" + key + "'");
  return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& def) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? def : it->second;
}

double KeyValueConfig::get_double(const std::string& key) const {
  const std::string s = get_string(key);
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' is not a number: '" + s + "'");
  }
}

double KeyValueConfig::get_double(const std::string& key, double def) const {
  return has(key) ? get_double(key) : def;
}

long long KeyValueConfig::get_int(const std::string& key) const {
  const std::string s = get_string(key);
  try {
    size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' is not an integer: '" + s + "'");
  }
}

long long KeyValueConfig::get_int(const std::string& key, long long def) const {
  return has(key) ? get_int(key) : def;
}

bool KeyValueConfig::get_bool(const std::string& key, bool def) const {
  if (!has(key)) return def;
  const std::string s = get_string(key);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError("config: key '" + key + "' is not a boolean: '" + s + "'");
}

std::vector<double> KeyValueConfig::get_double_list(const std::string& key) const {
  const std::string s = get_string(key);
  std::vector<double> out;
  std::istringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw ConfigError("config: key '" + key + "' has a bad list element: '" + tok + "'");
    }
  }
  if (out.empty()) throw ConfigError("config: key '" + key + "' is an empty list");
  return out;
}

std::vector<int> KeyValueConfig::get_int_range(const std::string& key) const {
  const std::string s = get_string(key);
  const auto dots = s.find("..");
  std::vector<int> out;
  if (dots != std::string::npos) {
    try {
      const int lo = std::stoi(trim(s.substr(0, dots)));
      const int hi = std::stoi(trim(s.substr(dots + 2)));
      if (hi < lo) throw std::invalid_argument("empty");
      for (int i = lo; i <= hi; ++i) out.push_back(i);
    } catch (const std::exception&) {
      throw ConfigError("config: key '" + key + "' is not a range 'lo..hi': '" + s + "'");
    }
    return out;
  }
  for (double v : get_double_list(key)) out.push_back(static_cast<int>(v));
  return out;
}

std::vector<KeyValueConfig::ParsedWaypoint> KeyValueConfig::get_waypoints(
    const std::string& key) const {
  const std::string s = get_string(key);
  std::vector<ParsedWaypoint> out;
  std::istringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ';')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    const auto colon = tok.find(':');
    const auto comma = tok.find(',', colon == std::string::npos ? 0 : colon);
    if (colon == std::string::npos || comma == std::string::npos)
      throw ConfigError("config: waypoint '" + tok + "' must be 't:x,y'");
    try {
      ParsedWaypoint wp{};
      wp.t = std::stod(trim(tok.substr(0, colon)));
      wp.x = std::stod(trim(tok.substr(colon + 1, comma - colon - 1)));
      wp.y = std::stod(trim(tok.substr(comma + 1)));
      out.push_back(wp);
    } catch (const std::exception&) {
      throw ConfigError("config: waypoint '" + tok + "' must be 't:x,y'");
    }
  }
  if (out.size() < 2) throw ConfigError("config: key '" + key + "' needs >= 2 waypoints");
  return out;
}

}  // namespace cnt
