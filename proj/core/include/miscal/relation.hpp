#pragma once

#include <stdexcept>
#include <string>

namespace miscal {

// Which calibration relation bounds the adversary: expected or maximum
// calibration error. Budgets are always in probability units (an alpha of
// 0.1 means ten points of probability).
enum class Relation { ece, mce };

inline std::string to_string(Relation r) { return r == Relation::ece ? "ece" : "mce"; }

inline Relation relation_from_string(const std::string& s) {
  if (s == "ece" || s == "ECE") return Relation::ece;
  if (s == "mce" || s == "MCE") return Relation::mce;
  throw std::invalid_argument("unknown relation '" + s + "' (expected ece or mce)");
}

}  // namespace miscal
