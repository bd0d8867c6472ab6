#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cdpack {

/// Subsets are 0/1 strings with item/qubit 0 leftmost, so rendered bit i
/// lives at index-bit position (n - 1 - i).

inline std::string bitstring_str(std::uint64_t bits, int n) {
  std::string s(static_cast<std::size_t>(n), '0');
  for (int i = 0; i < n; ++i)
    if ((bits >> (n - 1 - i)) & 1) s[static_cast<std::size_t>(i)] = '1';
  return s;
}

inline std::uint64_t bitstring_parse(const std::string& s) {
  std::uint64_t bits = 0;
  for (char c : s) {
    if (c != '0' && c != '1') throw std::invalid_argument("bitstring must contain only 0/1");
    bits = (bits << 1) | static_cast<std::uint64_t>(c == '1');
  }
  return bits;
}

inline bool bit_set(std::uint64_t bits, int item, int n) {
  return (bits >> (n - 1 - item)) & 1;
}

}  // namespace cdpack
