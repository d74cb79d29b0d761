#pragma once

#include <charconv>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "unimod/error.hpp"

// Helpers shared by the mini-format parsers (regions, lattices, psi/rate
// functions). Every parser consumes its whole input; trailing characters are
// an argument error that names the offending token.
namespace unimod::parse {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

inline double number(std::string_view token) {
  const std::string_view t = trim(token);
  double value = 0.0;
  if (t.empty()) throw ArgumentError("expected a number, got an empty token");
  // from_chars rejects a leading '+'; accept it for convenience.
  const std::string_view body = t.front() == '+' ? t.substr(1) : t;
  const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
  if (ec != std::errc() || ptr != body.data() + body.size()) {
    throw ArgumentError("malformed number '" + std::string(token) + "'");
  }
  return value;
}

// Shortest decimal text that reads back as the same double.
inline std::string format(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

// Parses "k1=v1,k2=v2" into a map; every key must be one of `allowed`.
inline std::map<std::string, double> key_values(
    std::string_view s, const std::vector<std::string>& allowed) {
  std::map<std::string, double> out;
  if (trim(s).empty()) return out;
  for (std::string_view item : split(s, ',')) {
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw ArgumentError("expected key=value, got '" + std::string(item) + "'");
    }
    std::string key(trim(item.substr(0, eq)));
    bool known = false;
    for (const auto& a : allowed) known = known || a == key;
    if (!known) throw ArgumentError("unknown parameter '" + key + "'");
    if (out.count(key)) throw ArgumentError("duplicate parameter '" + key + "'");
    out[key] = number(item.substr(eq + 1));
  }
  return out;
}

inline double require(const std::map<std::string, double>& kv, const std::string& key,
                      std::string_view context) {
  const auto it = kv.find(key);
  if (it == kv.end()) {
    throw ArgumentError("missing parameter '" + key + "' in '" + std::string(context) + "'");
  }
  return it->second;
}

inline double value_or(const std::map<std::string, double>& kv, const std::string& key,
                       double fallback) {
  const auto it = kv.find(key);
  return it == kv.end() ? fallback : it->second;
}

}  // namespace unimod::parse
