#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>

namespace nvcache {

// Identity of an on-disk block: the unit the block manager reads and writes
// and the key of the second-tier cache.
struct BlockId {
  std::uint64_t file_id = 0;
  std::uint64_t offset = 0;
  std::uint32_t size = 0;

  BlockId() = default;
  BlockId(std::uint64_t file, std::uint64_t off, std::uint32_t sz)
      : file_id(file), offset(off), size(sz) {
    if (sz == 0) {
      throw std::invalid_argument("BlockId size must be positive");
    }
  }

  friend bool operator==(const BlockId&, const BlockId&) = default;
  friend auto operator<=>(const BlockId&, const BlockId&) = default;
};

// Seeded 64-bit hash over all three fields; stable for a fixed seed.
inline std::uint64_t hash_block(const BlockId& id, std::uint64_t seed) {
  auto mix = [](std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  };
  std::uint64_t h = mix(seed);
  h = mix(h ^ id.file_id);
  h = mix(h ^ id.offset);
  h = mix(h ^ id.size);
  return h;
}

}  // namespace nvcache

template <>
struct std::hash<nvcache::BlockId> {
  std::size_t operator()(const nvcache::BlockId& id) const noexcept {
    return static_cast<std::size_t>(nvcache::hash_block(id, 0));
  }
};
