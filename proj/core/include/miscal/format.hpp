#pragma once

#include <charconv>
#include <string>

namespace miscal {

// Shortest round-trip decimal representation; the single double formatter
// for all CSV output so golden files are byte-stable.
inline std::string fmt_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace miscal
