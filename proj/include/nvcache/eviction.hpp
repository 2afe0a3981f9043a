#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "nvcache/admission.hpp"
#include "nvcache/cache.hpp"

namespace nvcache {

enum class EvictionMode {
  throttled,  // evict toward the free-space target while OBP allows it
  eager,      // evict toward the free-space target unconditionally
  none,       // never evict; space is reclaimed only by invalidation
};

struct EvictionConfig {
  double scan_interval = 1.0;
  double staleness_window = 60.0;
  double target_free_fraction = 0.05;
  EvictionMode mode = EvictionMode::throttled;

  void validate() const;
};

// LFRU selection. Candidates are entries not accessed for more than
// `staleness_window`; they are ordered by access count, then by older last
// access, then by BlockId, and the shortest prefix covering `bytes_needed`
// is returned (all candidates if they do not cover it).
std::vector<CacheEntry> select_victims(std::span<const CacheEntry> entries, double now,
                                       const EvictionConfig& cfg, std::uint64_t bytes_needed);

struct EvictionPassResult {
  std::uint64_t evicted = 0;
  std::uint64_t bytes_freed = 0;
  bool throttled = false;
};

// One background scan. Bytes needed is the gap between current free space and
// target_free_fraction of capacity. In throttled mode the pass is skipped when
// OBP exceeds the target, and otherwise capped so its removals alone cannot
// push the smoothed ratio past the target.
EvictionPassResult eviction_pass(BlockCache& cache, const AdmissionConfig& admission,
                                 double now, const EvictionConfig& cfg);

std::string_view to_string(EvictionMode m);
EvictionMode parse_eviction_mode(std::string_view text);

}  // namespace nvcache
