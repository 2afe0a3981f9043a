#include "nvcache/cache.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace nvcache {

std::uint64_t default_bucket_count(std::uint64_t capacity_bytes) {
  const auto scaled = static_cast<unsigned __int128>(capacity_bytes) * kReferenceBucketCount;
  const auto raw =
      static_cast<std::uint64_t>((scaled + kReferenceCacheBytes - 1) / kReferenceCacheBytes);
  return std::bit_ceil(std::max<std::uint64_t>(raw, 1));
}

BlockCache::BlockCache(const CacheConfig& config)
    : config_(config),
      buckets_(config.bucket_count == 0 ? default_bucket_count(config.capacity_bytes)
                                        : config.bucket_count),
      window_(config.epoch_seconds, config.obp_decay) {
  if (config_.capacity_bytes == 0) {
    throw std::invalid_argument("cache capacity must be positive");
  }
  if (config_.epoch_seconds <= 0.0) {
    throw std::invalid_argument("OBP epoch length must be positive");
  }
  if (config_.obp_decay < 0.0 || config_.obp_decay >= 1.0) {
    throw std::invalid_argument("OBP decay must be in [0, 1)");
  }
  config_.bucket_count = buckets_.size();
}

std::size_t BlockCache::bucket_index(const BlockId& id) const {
  return static_cast<std::size_t>(hash_block(id, config_.seed) % buckets_.size());
}

std::optional<CacheEntry> BlockCache::lookup(const BlockId& id, double now) {
  {
    std::lock_guard lock(window_mu_);
    window_.record_lookup(now);
  }
  looked_up_.fetch_add(1, std::memory_order_relaxed);

  auto& bucket = buckets_[bucket_index(id)];
  std::lock_guard lock(bucket.mu);
  for (auto& e : bucket.chain) {
    if (e.id == id) {
      e.last_access_time = std::max(e.last_access_time, now);
      ++e.access_count;
      hits_.fetch_add(1, std::memory_order_relaxed);
      bytes_read_.fetch_add(e.payload_size, std::memory_order_relaxed);
      return e;
    }
  }
  return std::nullopt;
}

bool BlockCache::reserve(std::uint64_t bytes) {
  std::uint64_t used = used_bytes_.load(std::memory_order_relaxed);
  do {
    if (used + bytes > config_.capacity_bytes) {
      return false;
    }
  } while (!used_bytes_.compare_exchange_weak(used, used + bytes, std::memory_order_relaxed));
  return true;
}

InsertResult BlockCache::insert(const BlockId& id, double now) {
  auto& bucket = buckets_[bucket_index(id)];
  {
    std::lock_guard lock(bucket.mu);
    const bool present = std::any_of(bucket.chain.begin(), bucket.chain.end(),
                                     [&](const CacheEntry& e) { return e.id == id; });
    if (present) {
      return InsertResult::duplicate;
    }
    if (!reserve(id.size)) {
      return InsertResult::rejected_full;
    }
    bucket.chain.push_back(CacheEntry{id, id.size, now, now, 1});
    inserted_.fetch_add(1, std::memory_order_relaxed);
    resident_.fetch_add(1, std::memory_order_relaxed);
    bytes_written_.fetch_add(id.size, std::memory_order_relaxed);
  }
  std::lock_guard lock(window_mu_);
  window_.record_insert(now);
  return InsertResult::inserted;
}

RemoveResult BlockCache::remove(const BlockId& id, RemoveCause cause, double now) {
  auto& bucket = buckets_[bucket_index(id)];
  {
    std::lock_guard lock(bucket.mu);
    auto it = std::find_if(bucket.chain.begin(), bucket.chain.end(),
                           [&](const CacheEntry& e) { return e.id == id; });
    if (it == bucket.chain.end()) {
      return RemoveResult::absent;
    }
    const std::uint64_t size = it->payload_size;
    *it = bucket.chain.back();
    bucket.chain.pop_back();
    used_bytes_.fetch_sub(size, std::memory_order_relaxed);
    resident_.fetch_sub(1, std::memory_order_relaxed);
    auto& per_cause = cause == RemoveCause::invalidation ? removed_invalidation_ : removed_eviction_;
    per_cause.fetch_add(1, std::memory_order_relaxed);
    bytes_written_.fetch_add(config_.removal_write_bytes, std::memory_order_relaxed);
  }
  std::lock_guard lock(window_mu_);
  window_.record_remove(now);
  return RemoveResult::removed;
}

std::optional<CacheEntry> BlockCache::peek(const BlockId& id) const {
  const auto& bucket = buckets_[bucket_index(id)];
  std::lock_guard lock(bucket.mu);
  for (const auto& e : bucket.chain) {
    if (e.id == id) {
      return e;
    }
  }
  return std::nullopt;
}

WindowCounters BlockCache::window(double now) {
  std::lock_guard lock(window_mu_);
  window_.advance(now);
  return window_.window();
}

WindowCounters BlockCache::window() const {
  std::lock_guard lock(window_mu_);
  return window_.window();
}

CacheStats BlockCache::stats_snapshot() const {
  CacheStats s;
  auto& c = s.counters;
  // Removals are read before insertions, and hits before lookups, so the
  // snapshot never shows removed > inserted or hits > looked_up.
  c.removed_invalidation = removed_invalidation_.load(std::memory_order_acquire);
  c.removed_eviction = removed_eviction_.load(std::memory_order_acquire);
  c.blocks_removed = c.removed_invalidation + c.removed_eviction;
  c.lookup_hits = hits_.load(std::memory_order_acquire);
  c.blocks_inserted = inserted_.load(std::memory_order_acquire);
  c.blocks_looked_up = looked_up_.load(std::memory_order_acquire);
  c.bytes_written = bytes_written_.load(std::memory_order_acquire);
  c.bytes_read = bytes_read_.load(std::memory_order_acquire);
  s.used_bytes = used_bytes_.load(std::memory_order_acquire);
  s.resident_blocks = resident_.load(std::memory_order_acquire);
  s.hit_ratio = static_cast<double>(c.lookup_hits) /
                static_cast<double>(std::max<std::uint64_t>(c.blocks_looked_up, 1));
  return s;
}

void BlockCache::for_each_bucket(
    const std::function<void(std::span<const CacheEntry>)>& visit) const {
  std::vector<CacheEntry> copy;
  for (const auto& bucket : buckets_) {
    {
      std::lock_guard lock(bucket.mu);
      copy.assign(bucket.chain.begin(), bucket.chain.end());
    }
    visit(copy);
  }
}

std::vector<CacheEntry> BlockCache::resident_entries() const {
  std::vector<CacheEntry> out;
  for_each_bucket([&](std::span<const CacheEntry> chain) {
    out.insert(out.end(), chain.begin(), chain.end());
  });
  return out;
}

std::vector<CacheEntry> BlockCache::bucket_contents(std::size_t index) const {
  const auto& bucket = buckets_.at(index);
  std::lock_guard lock(bucket.mu);
  return bucket.chain;
}

std::uint64_t BlockCache::free_bytes() const {
  const auto used = used_bytes();
  return used >= config_.capacity_bytes ? 0 : config_.capacity_bytes - used;
}

}  // namespace nvcache
