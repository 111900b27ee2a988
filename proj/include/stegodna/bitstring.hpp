#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace stegodna {

// Ordered sequence of bits; serializes to a '0'/'1' text string.
struct BitString {
  std::vector<std::uint8_t> bits;

  BitString() = default;
  explicit BitString(std::vector<std::uint8_t> b) : bits(std::move(b)) {}

  static BitString from_string(std::string_view s);

  std::string str() const;
  std::size_t size() const { return bits.size(); }
  bool empty() const { return bits.empty(); }
  void push_back(int bit) { bits.push_back(static_cast<std::uint8_t>(bit & 1)); }
  std::uint8_t operator[](std::size_t i) const { return bits[i]; }

  bool operator==(const BitString&) const = default;
};

}  // namespace stegodna
