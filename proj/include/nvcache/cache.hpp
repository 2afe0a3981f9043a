#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "nvcache/block_id.hpp"
#include "nvcache/obp.hpp"

namespace nvcache {

// Per-block metadata. Payload bytes are accounted, never stored.
struct CacheEntry {
  BlockId id;
  std::uint32_t payload_size = 0;
  double admit_time = 0.0;
  double last_access_time = 0.0;
  std::uint64_t access_count = 0;
};

struct CacheCounters {
  std::uint64_t blocks_inserted = 0;
  std::uint64_t blocks_removed = 0;
  std::uint64_t removed_invalidation = 0;
  std::uint64_t removed_eviction = 0;
  std::uint64_t blocks_looked_up = 0;
  std::uint64_t lookup_hits = 0;
  std::uint64_t bytes_written = 0;
  std::uint64_t bytes_read = 0;
};

struct CacheStats {
  CacheCounters counters;
  std::uint64_t used_bytes = 0;
  std::uint64_t resident_blocks = 0;
  double hit_ratio = 0.0;
};

// Buckets scale with capacity at 32768 per 180GB, rounded up to a power of
// two.
inline constexpr std::uint64_t kReferenceCacheBytes = 180'000'000'000ULL;
inline constexpr std::uint64_t kReferenceBucketCount = 32'768ULL;

std::uint64_t default_bucket_count(std::uint64_t capacity_bytes);

struct CacheConfig {
  std::uint64_t capacity_bytes = 0;
  // 0 selects default_bucket_count(capacity_bytes).
  std::uint64_t bucket_count = 0;
  std::uint64_t seed = 0;
  // Device bytes written when a block is freed (allocator metadata).
  std::uint32_t removal_write_bytes = 256;
  double epoch_seconds = 1.0;
  double obp_decay = 0.5;
};

enum class InsertResult { inserted, rejected_full, duplicate };
enum class RemoveCause { invalidation, eviction };
enum class RemoveResult { removed, absent };

// Hash table of cached blocks with per-bucket chaining.
//
// Thread-safety: every bucket has its own mutex; operations on different
// buckets run in parallel. Counters are atomics, so a snapshot is consistent
// per counter but not across counters while writers are active. The OBP
// window has its own short critical section.
class BlockCache {
 public:
  explicit BlockCache(const CacheConfig& config);

  BlockCache(const BlockCache&) = delete;
  BlockCache& operator=(const BlockCache&) = delete;

  std::optional<CacheEntry> lookup(const BlockId& id, double now);
  InsertResult insert(const BlockId& id, double now);
  RemoveResult remove(const BlockId& id, RemoveCause cause, double now);

  // Returns the metadata without touching counters or access statistics.
  std::optional<CacheEntry> peek(const BlockId& id) const;
  bool contains(const BlockId& id) const { return peek(id).has_value(); }

  // Smoothed counters as of `now`, rolling the epoch window if needed.
  WindowCounters window(double now);
  // Smoothed counters without rolling.
  WindowCounters window() const;
  ObpValue obp() const { return compute_obp(window()); }

  CacheStats stats_snapshot() const;

  // Visits each bucket under its lock, one bucket at a time, passing a copy
  // of the chain.
  void for_each_bucket(const std::function<void(std::span<const CacheEntry>)>& visit) const;
  std::vector<CacheEntry> resident_entries() const;

  std::size_t bucket_index(const BlockId& id) const;
  // Chain stored in bucket `index`, copied under its lock.
  std::vector<CacheEntry> bucket_contents(std::size_t index) const;

  std::uint64_t capacity_bytes() const { return config_.capacity_bytes; }
  std::uint64_t used_bytes() const { return used_bytes_.load(std::memory_order_relaxed); }
  std::uint64_t free_bytes() const;
  std::size_t bucket_count() const { return buckets_.size(); }
  const CacheConfig& config() const { return config_; }

 private:
  struct Bucket {
    mutable std::mutex mu;
    std::vector<CacheEntry> chain;
  };

  bool reserve(std::uint64_t bytes);

  CacheConfig config_;
  std::vector<Bucket> buckets_;

  std::atomic<std::uint64_t> used_bytes_{0};
  std::atomic<std::uint64_t> resident_{0};
  std::atomic<std::uint64_t> inserted_{0};
  std::atomic<std::uint64_t> removed_invalidation_{0};
  std::atomic<std::uint64_t> removed_eviction_{0};
  std::atomic<std::uint64_t> looked_up_{0};
  std::atomic<std::uint64_t> hits_{0};
  std::atomic<std::uint64_t> bytes_written_{0};
  std::atomic<std::uint64_t> bytes_read_{0};

  mutable std::mutex window_mu_;
  ObpWindow window_;
};

}  // namespace nvcache
