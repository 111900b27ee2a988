#include "stegodna/bitstring.hpp"

#include <stdexcept>

namespace stegodna {

BitString BitString::from_string(std::string_view s) {
  BitString out;
  out.bits.reserve(s.size());
  for (char c : s) {
    if (c == '0') {
      out.bits.push_back(0);
    } else if (c == '1') {
      out.bits.push_back(1);
    } else {
      throw std::invalid_argument("bit string may contain only '0' and '1'");
    }
  }
  return out;
}

std::string BitString::str() const {
  std::string s;
  s.reserve(bits.size());
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

}  // namespace stegodna
