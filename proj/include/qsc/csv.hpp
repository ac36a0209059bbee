#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace qsc {

// Shortest round-trip decimal form, so CSV output is byte-stable across
// platforms (iostream float formatting is locale- and width-sensitive).
inline std::string csv_num(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string csv_num(int v) { return std::to_string(v); }
inline std::string csv_num(long long v) { return std::to_string(v); }

}  // namespace qsc
