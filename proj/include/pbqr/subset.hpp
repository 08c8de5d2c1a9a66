#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

namespace pbqr {

// Bit i set <=> variable i+1 is 1 in the labeling (equivalently i+1 is in S).
using Mask = std::uint32_t;

// Exhaustive checkers refuse wider problems.
inline constexpr int kMaxEnumVars = 20;
// Width of the mask type.
inline constexpr int kMaxVars = 31;

constexpr Mask bit(int i) { return Mask{1} << i; }
constexpr Mask full_mask(int n) { return n >= 32 ? ~Mask{0} : (Mask{1} << n) - 1; }
constexpr bool contains(Mask s, int i) { return (s >> i) & 1u; }
constexpr bool is_subset(Mask a, Mask b) { return (a & ~b) == 0; }
constexpr int cardinality(Mask s) { return std::popcount(s); }

// 1-based index list, e.g. {1,3} for 0b101.
inline std::vector<int> to_indices(Mask s) {
  std::vector<int> out;
  for (int i = 0; s; ++i, s >>= 1)
    if (s & 1u) out.push_back(i + 1);
  return out;
}

inline Mask from_indices(const std::vector<int>& one_based) {
  Mask s = 0;
  for (int i : one_based) s |= bit(i - 1);
  return s;
}

inline std::string format_set(Mask s) {
  std::string out = "{";
  bool first = true;
  for (int i : to_indices(s)) {
    if (!first) out += ",";
    out += std::to_string(i);
    first = false;
  }
  return out + "}";
}

}  // namespace pbqr
