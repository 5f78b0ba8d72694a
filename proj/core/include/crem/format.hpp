#pragma once

#include <array>
#include <charconv>
#include <string>

namespace crem {

/// Shortest decimal that round-trips to the same double.
inline std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

}  // namespace crem
