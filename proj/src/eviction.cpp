#include "nvcache/eviction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace nvcache {

void EvictionConfig::validate() const {
  if (!(scan_interval > 0.0)) {
    throw std::invalid_argument("eviction scan_interval must be positive");
  }
  if (!(staleness_window > 0.0)) {
    throw std::invalid_argument("eviction staleness_window must be positive");
  }
  if (!(target_free_fraction >= 0.0 && target_free_fraction < 1.0)) {
    throw std::invalid_argument("eviction target_free_fraction must be in [0, 1)");
  }
}

std::vector<CacheEntry> select_victims(std::span<const CacheEntry> entries, double now,
                                       const EvictionConfig& cfg, std::uint64_t bytes_needed) {
  std::vector<CacheEntry> stale;
  for (const auto& e : entries) {
    if (now - e.last_access_time > cfg.staleness_window) {
      stale.push_back(e);
    }
  }
  std::sort(stale.begin(), stale.end(), [](const CacheEntry& a, const CacheEntry& b) {
    if (a.access_count != b.access_count) {
      return a.access_count < b.access_count;
    }
    if (a.last_access_time != b.last_access_time) {
      return a.last_access_time < b.last_access_time;
    }
    return a.id < b.id;
  });

  std::uint64_t covered = 0;
  std::size_t keep = 0;
  while (keep < stale.size() && covered < bytes_needed) {
    covered += stale[keep].payload_size;
    ++keep;
  }
  stale.resize(keep);
  return stale;
}

EvictionPassResult eviction_pass(BlockCache& cache, const AdmissionConfig& admission,
                                 double now, const EvictionConfig& cfg) {
  EvictionPassResult result;
  if (cfg.mode == EvictionMode::none) {
    return result;
  }

  std::uint64_t max_victims = std::numeric_limits<std::uint64_t>::max();
  if (cfg.mode == EvictionMode::throttled) {
    const auto window = cache.window(now);
    if (should_evict_now(window, admission) == EvictionGate::throttled) {
      result.throttled = true;
      return result;
    }
    max_victims = eviction_budget(window, admission);
  }

  const auto target_free = static_cast<std::uint64_t>(
      std::ceil(cfg.target_free_fraction * static_cast<double>(cache.capacity_bytes())));
  const auto free = cache.free_bytes();
  if (free >= target_free || max_victims == 0) {
    return result;
  }

  const auto entries = cache.resident_entries();
  auto victims = select_victims(entries, now, cfg, target_free - free);
  if (victims.size() > max_victims) {
    victims.resize(max_victims);
  }
  for (const auto& v : victims) {
    if (cache.remove(v.id, RemoveCause::eviction, now) == RemoveResult::removed) {
      ++result.evicted;
      result.bytes_freed += v.payload_size;
    }
  }
  return result;
}

std::string_view to_string(EvictionMode m) {
  switch (m) {
    case EvictionMode::throttled: return "throttled";
    case EvictionMode::eager: return "eager";
    case EvictionMode::none: return "none";
  }
  return "?";
}

EvictionMode parse_eviction_mode(std::string_view text) {
  if (text == "throttled") return EvictionMode::throttled;
  if (text == "eager") return EvictionMode::eager;
  if (text == "none") return EvictionMode::none;
  throw std::invalid_argument("unknown eviction mode '" + std::string(text) + "'");
}

}  // namespace nvcache
