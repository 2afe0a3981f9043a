#include "nvcache/engine.hpp"

#include <algorithm>
#include <stdexcept>

namespace nvcache {

LogicalRecordSpace::LogicalRecordSpace(std::uint32_t block_size, std::uint64_t file_id)
    : block_size_(block_size), file_id_(file_id) {
  if (block_size == 0) {
    throw std::invalid_argument("block size must be positive");
  }
}

BlockId LogicalRecordSpace::allocate() {
  return BlockId(file_id_, next_ordinal_++ * block_size_, block_size_);
}

std::pair<BlockId, BlockId> LogicalRecordSpace::rewrite(std::uint64_t key) {
  auto& slot = record_to_block_.at(key);
  const BlockId old = slot;
  slot = allocate();
  return {old, slot};
}

std::uint64_t LogicalRecordSpace::append() {
  record_to_block_.push_back(allocate());
  return record_to_block_.size() - 1;
}

DramCacheModel::DramCacheModel(std::uint64_t capacity_bytes) : capacity_bytes_(capacity_bytes) {}

bool DramCacheModel::touch(const BlockId& id) {
  auto it = index_.find(id);
  if (it == index_.end()) {
    return false;
  }
  lru_.splice(lru_.begin(), lru_, it->second);
  return true;
}

void DramCacheModel::insert(const BlockId& id) {
  if (touch(id)) {
    return;
  }
  if (id.size > capacity_bytes_) {
    return;
  }
  while (resident_bytes_ + id.size > capacity_bytes_) {
    const BlockId victim = lru_.back();
    index_.erase(victim);
    lru_.pop_back();
    resident_bytes_ -= victim.size;
  }
  lru_.push_front(id);
  index_.emplace(id, lru_.begin());
  resident_bytes_ += id.size;
}

bool DramCacheModel::erase(const BlockId& id) {
  auto it = index_.find(id);
  if (it == index_.end()) {
    return false;
  }
  resident_bytes_ -= id.size;
  lru_.erase(it->second);
  index_.erase(it);
  return true;
}

Engine::Engine(const EngineConfig& config, BlockCache& cache, const AdmissionConfig& admission,
               DatasetTracker& tracker)
    : config_(config),
      cache_(cache),
      admission_(admission),
      tracker_(tracker),
      space_(config.block_size, config.file_id),
      dram_(config.dram_bytes) {
  admission_.validate();
}

void Engine::offer(const BlockId& id, Origin origin, double now, OpEffects& fx) {
  const auto decision = should_admit(id, origin, cache_.window(now), tracker_, admission_);
  ++counters_.decisions[static_cast<std::size_t>(decision)];
  if (decision != AdmissionDecision::admit) {
    return;
  }
  switch (cache_.insert(id, now)) {
    case InsertResult::inserted:
      fx.add(Device::nvram, AccessKind::write, id.size);
      if (populating_) {
        ++counters_.populate_blocks_admitted;
      }
      break;
    case InsertResult::rejected_full:
      ++counters_.rejected_full;
      break;
    case InsertResult::duplicate:
      break;
  }
}

ServedFrom Engine::read_record(std::uint64_t key, double now, OpEffects& fx) {
  const BlockId id = space_.block_of(key);
  if (dram_.touch(id)) {
    fx.add(Device::dram, AccessKind::read, id.size);
    ++counters_.served_dram;
    return ServedFrom::dram;
  }

  ServedFrom from;
  if (cache_.lookup(id, now)) {
    fx.add(Device::nvram, AccessKind::read, id.size);
    ++counters_.served_nvcache;
    from = ServedFrom::nvcache;
  } else {
    fx.add(Device::ssd, AccessKind::read, id.size);
    ++counters_.served_ssd;
    from = ServedFrom::ssd;
    offer(id, Origin::read_path, now, fx);
  }
  dram_.insert(id);
  return from;
}

void Engine::write_new_block(const BlockId& id, double now, OpEffects& fx) {
  fx.add(Device::ssd, AccessKind::write, id.size);
  ++counters_.ssd_blocks_written;
  counters_.ssd_bytes_written += id.size;
  tracker_.grow(id.size);
  offer(id, Origin::write_path, now, fx);
  dram_.insert(id);
}

UpdateResult Engine::update_record(std::uint64_t key, double now, OpEffects& fx) {
  read_record(key, now, fx);

  const auto [old_block, new_block] = space_.rewrite(key);
  write_new_block(new_block, now, fx);

  dram_.erase(old_block);
  tracker_.shrink(old_block.size);
  if (cache_.remove(old_block, RemoveCause::invalidation, now) == RemoveResult::removed) {
    fx.add(Device::nvram, AccessKind::write, cache_.config().removal_write_bytes);
  }
  return {old_block, new_block};
}

std::uint64_t Engine::insert_record(double now, OpEffects& fx) {
  const std::uint64_t key = space_.append();
  write_new_block(space_.block_of(key), now, fx);
  return key;
}

std::uint64_t Engine::scan(std::uint64_t start, std::uint64_t length, double now,
                           OpEffects& fx) {
  const std::uint64_t end = std::min(record_count(), start + length);
  for (std::uint64_t k = start; k < end; ++k) {
    read_record(k, now, fx);
  }
  return end > start ? end - start : 0;
}

void Engine::populate(std::uint64_t n_records, DeviceClock& clock, const DeviceSet& devices,
                      double time_scale) {
  populating_ = true;
  OpEffects fx;
  for (std::uint64_t i = 0; i < n_records; ++i) {
    fx.clear();
    insert_record(clock.now, fx);
    ++counters_.populate_blocks_written;
    clock.advance_to(clock.now + time_scale * price_sequential(fx, devices, clock));
  }
  populating_ = false;
}

void Engine::preload(std::uint64_t n_records) {
  for (std::uint64_t i = 0; i < n_records; ++i) {
    const auto key = space_.append();
    tracker_.grow(space_.block_of(key).size);
  }
}

double price_sequential(const OpEffects& fx, const DeviceSet& devices, const DeviceClock& clock) {
  double total = 0.0;
  for (const auto& a : fx.accesses) {
    const int writers = clock.writers(a.device) + (a.kind == AccessKind::write ? 1 : 0);
    total += access_cost(devices[a.device], a.kind, a.bytes, writers);
  }
  return total;
}

std::string_view to_string(ServedFrom s) {
  switch (s) {
    case ServedFrom::dram: return "dram";
    case ServedFrom::nvcache: return "nvcache";
    case ServedFrom::ssd: return "ssd";
  }
  return "?";
}

}  // namespace nvcache
