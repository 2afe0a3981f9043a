#pragma once

#include <atomic>
#include <cstdint>
#include <string>
#include <string_view>

#include "nvcache/block_id.hpp"
#include "nvcache/obp.hpp"

namespace nvcache {

enum class AdmissionPolicy {
  always_read_write,  // admit on every read miss and every write
  no_write_allocate,  // admit on read misses only
  obp,                // admit while the overhead-bypass ratio is within target
  disabled,           // never admit
};

enum class Origin { read_path, write_path };

enum class AdmissionDecision { admit, bypass_small, bypass_obp, bypass_policy };

enum class EvictionGate { proceed, throttled };

struct AdmissionConfig {
  AdmissionPolicy policy = AdmissionPolicy::obp;
  double obp_target = 0.10;
  std::uint64_t dram_bytes = 0;
  bool write_path_admission = true;

  void validate() const;
};

// Acceptable band for the OBP target; 0.10 is the tuned default.
inline constexpr double kObpTargetLow = 0.05;
inline constexpr double kObpTargetHigh = 0.30;

// Running size of the database files, fed by the engine on every block
// allocation and free. Reported size is live bytes scaled by `slack`, which
// stands in for freed-but-unreclaimed file space.
class DatasetTracker {
 public:
  explicit DatasetTracker(double slack = 1.0);

  void grow(std::uint64_t bytes) { live_bytes_.fetch_add(bytes, std::memory_order_relaxed); }
  void shrink(std::uint64_t bytes);

  std::uint64_t live_bytes() const { return live_bytes_.load(std::memory_order_relaxed); }
  std::uint64_t aggregate_file_bytes() const;
  double slack() const { return slack_; }

 private:
  std::atomic<std::uint64_t> live_bytes_{0};
  double slack_;
};

// Gates are checked in order: policy, small-dataset bypass, OBP throttle.
AdmissionDecision should_admit(const BlockId& id, Origin origin, const WindowCounters& window,
                               const DatasetTracker& tracker, const AdmissionConfig& cfg);

EvictionGate should_evict_now(const WindowCounters& window, const AdmissionConfig& cfg);

// Whole evictions that can be performed before the smoothed ratio would pass
// the target. Unbounded for policies other than obp.
std::uint64_t eviction_budget(const WindowCounters& window, const AdmissionConfig& cfg);

std::string_view to_string(AdmissionPolicy p);
std::string_view to_string(AdmissionDecision d);
std::string_view to_string(Origin o);
// Accepts the CLI spellings (always, nowrite, obp, disabled) and the enum
// names. Throws std::invalid_argument otherwise.
AdmissionPolicy parse_policy(std::string_view text);

}  // namespace nvcache
