#pragma once

#include <array>
#include <cstdint>
#include <list>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nvcache/admission.hpp"
#include "nvcache/block_id.hpp"
#include "nvcache/cache.hpp"
#include "nvcache/device.hpp"

namespace nvcache {

// Maps each logical record to its current on-disk block. Blocks are never
// rewritten in place: every write allocates a fresh block at the end of the
// file and the previous one becomes garbage.
class LogicalRecordSpace {
 public:
  LogicalRecordSpace(std::uint32_t block_size, std::uint64_t file_id = 1);

  std::uint64_t record_count() const { return record_to_block_.size(); }
  std::uint32_t block_size() const { return block_size_; }
  const BlockId& block_of(std::uint64_t key) const { return record_to_block_.at(key); }

  // Points `key` at a freshly allocated block and returns {old, new}.
  std::pair<BlockId, BlockId> rewrite(std::uint64_t key);
  // Appends a record with a fresh block and returns its key.
  std::uint64_t append();
  std::uint64_t blocks_allocated() const { return next_ordinal_; }

 private:
  BlockId allocate();

  std::uint32_t block_size_;
  std::uint64_t file_id_;
  std::uint64_t next_ordinal_ = 0;
  std::vector<BlockId> record_to_block_;
};

// Strict-LRU front tier standing in for the engine's page cache and the OS
// buffer cache together.
class DramCacheModel {
 public:
  explicit DramCacheModel(std::uint64_t capacity_bytes);

  // Hit moves the block to the MRU position.
  bool touch(const BlockId& id);
  // Inserts at MRU, silently dropping LRU blocks until it fits. A block
  // larger than the whole capacity is not retained.
  void insert(const BlockId& id);
  bool erase(const BlockId& id);
  bool contains(const BlockId& id) const { return index_.count(id) != 0; }

  std::uint64_t capacity_bytes() const { return capacity_bytes_; }
  std::uint64_t resident_bytes() const { return resident_bytes_; }
  std::size_t resident_blocks() const { return lru_.size(); }
  // MRU first.
  std::vector<BlockId> lru_order() const { return {lru_.begin(), lru_.end()}; }

 private:
  std::uint64_t capacity_bytes_;
  std::uint64_t resident_bytes_ = 0;
  std::list<BlockId> lru_;
  std::unordered_map<BlockId, std::list<BlockId>::iterator> index_;
};

enum class ServedFrom { dram, nvcache, ssd };

struct DeviceAccess {
  Device device;
  AccessKind kind;
  std::uint64_t bytes;

  friend bool operator==(const DeviceAccess&, const DeviceAccess&) = default;
};

// Device traffic of one engine operation, in issue order.
struct OpEffects {
  std::vector<DeviceAccess> accesses;

  void add(Device d, AccessKind k, std::uint64_t bytes) { accesses.push_back({d, k, bytes}); }
  void clear() { accesses.clear(); }
};

struct EngineCounters {
  std::uint64_t served_dram = 0;
  std::uint64_t served_nvcache = 0;
  std::uint64_t served_ssd = 0;
  std::uint64_t ssd_blocks_written = 0;
  std::uint64_t ssd_bytes_written = 0;
  std::uint64_t populate_blocks_written = 0;
  std::uint64_t populate_blocks_admitted = 0;
  std::uint64_t rejected_full = 0;
  // Indexed by AdmissionDecision.
  std::array<std::uint64_t, 4> decisions{};

  std::uint64_t decision_count(AdmissionDecision d) const {
    return decisions[static_cast<std::size_t>(d)];
  }
};

struct EngineConfig {
  std::uint32_t block_size = 16 * 1024;
  std::uint64_t dram_bytes = 0;
  std::uint64_t file_id = 1;
};

struct UpdateResult {
  BlockId freed;
  BlockId fresh;
};

// Block manager with the two-tier read path (DRAM, then the block cache, then
// SSD) and the no-update-in-place write path. Operations mutate state at call
// time and report the device traffic they generated; pricing is the caller's
// job.
class Engine {
 public:
  Engine(const EngineConfig& config, BlockCache& cache, const AdmissionConfig& admission,
         DatasetTracker& tracker);

  ServedFrom read_record(std::uint64_t key, double now, OpEffects& fx);

  // Reads the record's current block (a leaf page must be in memory before
  // it can be modified), then writes the record to a fresh block, offers it
  // to the cache on the write path, and frees the old block, invalidating
  // any cached copy.
  UpdateResult update_record(std::uint64_t key, double now, OpEffects& fx);

  // Appends a new record written to a fresh block. Returns its key.
  std::uint64_t insert_record(double now, OpEffects& fx);

  // Reads up to `length` consecutive records starting at `start`, stopping at
  // the end of the key space. Returns the number of records read.
  std::uint64_t scan(std::uint64_t start, std::uint64_t length, double now, OpEffects& fx);

  // Writes `n_records` through the insert path one at a time on a single
  // stream, advancing `clock` by each insert's service time (scaled by
  // `time_scale`).
  void populate(std::uint64_t n_records, DeviceClock& clock, const DeviceSet& devices,
                double time_scale = 1.0);

  // Creates `n_records` records without device traffic or cache admission,
  // as if the database already existed on disk.
  void preload(std::uint64_t n_records);

  std::uint64_t record_count() const { return space_.record_count(); }
  const LogicalRecordSpace& space() const { return space_; }
  const DramCacheModel& dram() const { return dram_; }
  const EngineCounters& counters() const { return counters_; }
  const AdmissionConfig& admission() const { return admission_; }
  const DatasetTracker& tracker() const { return tracker_; }
  BlockCache& cache() { return cache_; }
  const BlockCache& cache() const { return cache_; }

 private:
  void offer(const BlockId& id, Origin origin, double now, OpEffects& fx);
  void write_new_block(const BlockId& id, double now, OpEffects& fx);

  EngineConfig config_;
  BlockCache& cache_;
  AdmissionConfig admission_;
  DatasetTracker& tracker_;
  LogicalRecordSpace space_;
  DramCacheModel dram_;
  EngineCounters counters_;
  bool populating_ = false;
};

// Sequential service time of `fx` priced at the writer counts in `clock`.
// A write is priced as if it were one more writer on its device.
double price_sequential(const OpEffects& fx, const DeviceSet& devices, const DeviceClock& clock);

std::string_view to_string(ServedFrom s);

}  // namespace nvcache
