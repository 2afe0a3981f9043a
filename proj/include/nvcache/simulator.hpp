#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nvcache/admission.hpp"
#include "nvcache/device.hpp"
#include "nvcache/eviction.hpp"
#include "nvcache/trace.hpp"
#include "nvcache/units.hpp"
#include "nvcache/workload.hpp"

namespace nvcache {

struct SimConfig {
  WorkloadSpec workload;
  std::uint64_t dram_bytes = 32 * MiB;
  std::uint64_t nvram_bytes = 180 * MiB;
  // dram_bytes above overrides admission.dram_bytes.
  AdmissionConfig admission;
  EvictionConfig eviction;
  DeviceSet devices;
  std::uint64_t seed = 1;
  // Multiplies every device service time. Shrinking the dataset by a factor
  // and slowing the devices by the same factor keeps virtual durations (epochs,
  // scan interval, staleness window) on the same footing as full-size runs.
  double time_scale = 1.0 / kDefaultScale;
  // Leading fraction of the measured duration excluded from throughput and
  // hit-ratio metrics.
  double warmup_fraction = 0.10;
  double dataset_slack = 1.0;
  std::uint64_t bucket_count = 0;
  // Stop dispatching after this many operations (0 = no limit).
  std::uint64_t max_ops = 0;
  // When set, each thread replays its recorded operations instead of drawing
  // new ones.
  std::optional<Trace> replay;
  bool record_trace = false;

  // Throws std::invalid_argument on the first invalid field.
  void validate() const;
};

enum class Phase { warmup, measure };

// One OBP epoch of the measured run. Counts are deltas within the epoch.
struct EpochSample {
  std::int64_t epoch = 0;
  double start_time = 0.0;
  Phase phase = Phase::warmup;
  // Smoothed ratio at the close of the epoch; +inf when saturated.
  double obp = 0.0;
  bool obp_saturated = false;
  std::array<std::uint64_t, kOpKindCount> ops{};
  std::uint64_t nvcache_lookups = 0;
  std::uint64_t nvcache_hits = 0;
  std::uint64_t blocks_inserted = 0;
  std::uint64_t removed_invalidation = 0;
  std::uint64_t removed_eviction = 0;
  std::uint64_t ssd_bytes_written = 0;
  std::uint64_t nvram_bytes_written = 0;

  std::uint64_t total_ops() const;
};

struct SimResult {
  std::string workload;
  std::string policy;
  std::string eviction;
  double obp_target = 0.0;
  std::uint64_t dram_bytes = 0;
  std::uint64_t nvram_bytes = 0;
  std::uint64_t seed = 0;
  std::uint64_t record_count = 0;
  std::uint32_t block_size = 0;

  // Virtual time at which the measured run began, metrics began, and
  // dispatching stopped.
  double measure_start = 0.0;
  double warmup_end = 0.0;
  double measure_end = 0.0;

  // Within the metrics window.
  std::array<std::uint64_t, kOpKindCount> ops_by_kind{};
  std::array<double, kOpKindCount> ops_per_second{};
  double total_ops_per_second = 0.0;
  double nvcache_hit_ratio = 0.0;
  double dram_hit_ratio = 0.0;
  // NVRAM read bytes / virtual time spent on NVRAM reads.
  double nvram_read_gbps = 0.0;

  std::vector<EpochSample> epochs;

  // Whole run, populate included.
  std::uint64_t total_ops = 0;
  std::array<std::uint64_t, kDeviceCount> bytes_written{};
  std::uint64_t blocks_inserted = 0;
  std::uint64_t removed_invalidation = 0;
  std::uint64_t removed_eviction = 0;
  std::uint64_t blocks_looked_up = 0;
  std::uint64_t lookup_hits = 0;
  double removed_to_inserted_ratio = 0.0;
  std::uint64_t admitted_bytes = 0;
  std::uint64_t ssd_blocks_written = 0;
  std::uint64_t populate_blocks_written = 0;
  std::uint64_t populate_blocks_admitted = 0;
  std::array<std::uint64_t, 4> admission_decisions{};
  std::uint64_t rejected_full = 0;
  std::uint64_t eviction_passes = 0;
  std::uint64_t eviction_passes_throttled = 0;

  // Bookkeeping checks.
  std::array<int, kDeviceCount> final_writers{};
  std::vector<double> thread_busy_time;
  std::vector<double> thread_service_time;

  std::optional<Trace> trace;
  double wall_runtime_seconds = 0.0;

  std::uint64_t blocks_removed() const { return removed_invalidation + removed_eviction; }
};

SimResult run(const SimConfig& config);

}  // namespace nvcache
