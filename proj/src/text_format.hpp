#pragma once

#include <array>
#include <charconv>
#include <string>

namespace hetfair::detail {

/// Shortest decimal text that round-trips to the same double.
inline std::string format_double(double value) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

}  // namespace hetfair::detail
