#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace fairex {

// Shortest decimal form that round-trips; identical output on every platform
// with a conforming to_chars, which keeps serialized reports byte-stable.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace fairex
