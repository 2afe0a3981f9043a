#include "nvcache/units.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace nvcache {

std::uint64_t parse_bytes(std::string_view text) {
  const std::string original(text);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
    text.remove_prefix(1);
  }
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
    text.remove_suffix(1);
  }
  if (text.empty()) {
    throw std::invalid_argument("empty byte quantity");
  }

  std::size_t digits = 0;
  while (digits < text.size() &&
         (std::isdigit(static_cast<unsigned char>(text[digits])) || text[digits] == '.')) {
    ++digits;
  }
  if (digits == 0) {
    throw std::invalid_argument("malformed byte quantity: '" + original + "'");
  }

  double value = 0.0;
  const auto number = text.substr(0, digits);
  auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), value);
  if (ec != std::errc() || ptr != number.data() + number.size() || value < 0) {
    throw std::invalid_argument("malformed byte quantity: '" + original + "'");
  }

  std::string suffix;
  for (char c : text.substr(digits)) {
    suffix.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  std::uint64_t multiplier = 1;
  if (suffix.empty() || suffix == "b") {
    multiplier = 1;
  } else if (suffix == "k" || suffix == "kb" || suffix == "kib") {
    multiplier = KiB;
  } else if (suffix == "m" || suffix == "mb" || suffix == "mib") {
    multiplier = MiB;
  } else if (suffix == "g" || suffix == "gb" || suffix == "gib") {
    multiplier = GiB;
  } else {
    throw std::invalid_argument("unknown byte suffix in '" + original + "'");
  }

  const double bytes = std::round(value * static_cast<double>(multiplier));
  if (bytes > 1.8e19) {
    throw std::invalid_argument("byte quantity out of range: '" + original + "'");
  }
  return static_cast<std::uint64_t>(bytes);
}

std::string format_bytes(std::uint64_t bytes) {
  struct Unit {
    std::uint64_t size;
    const char* suffix;
  };
  constexpr Unit units[] = {{GiB, "G"}, {MiB, "M"}, {KiB, "k"}};
  for (const auto& u : units) {
    if (bytes >= u.size) {
      char buf[64];
      if (bytes % u.size == 0) {
        std::snprintf(buf, sizeof(buf), "%llu%s",
                      static_cast<unsigned long long>(bytes / u.size), u.suffix);
      } else {
        std::snprintf(buf, sizeof(buf), "%.1f%s",
                      static_cast<double>(bytes) / static_cast<double>(u.size), u.suffix);
      }
      return buf;
    }
  }
  return std::to_string(bytes);
}

}  // namespace nvcache
