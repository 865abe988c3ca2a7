#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <string>

namespace apint::detail {

// Shortest decimal that round-trips to the same double.
inline std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), result.ptr);
}

}  // namespace apint::detail
