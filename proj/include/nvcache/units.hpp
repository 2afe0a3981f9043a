#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace nvcache {

inline constexpr std::uint64_t KiB = 1024;
inline constexpr std::uint64_t MiB = 1024 * KiB;
inline constexpr std::uint64_t GiB = 1024 * MiB;

// Bandwidths are quoted in decimal gigabytes per second.
inline constexpr double kBytesPerGB = 1e9;

// Parses "4096", "16k", "120M", "1.5G" (case-insensitive, optional trailing
// "B" or "iB"). Suffixes are binary multiples. Throws std::invalid_argument
// on malformed input.
std::uint64_t parse_bytes(std::string_view text);

// Inverse of parse_bytes for display: picks the largest suffix that divides
// evenly, otherwise prints with one decimal.
std::string format_bytes(std::uint64_t bytes);

}  // namespace nvcache
