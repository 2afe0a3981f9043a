#include "nvcache/admission.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace nvcache {

void AdmissionConfig::validate() const {
  if (policy == AdmissionPolicy::obp && !(obp_target > 0.0)) {
    throw std::invalid_argument("obp_target must be positive for the obp policy");
  }
}

DatasetTracker::DatasetTracker(double slack) : slack_(slack) {
  if (!(slack > 0.0)) {
    throw std::invalid_argument("dataset slack factor must be positive");
  }
}

void DatasetTracker::shrink(std::uint64_t bytes) {
  std::uint64_t cur = live_bytes_.load(std::memory_order_relaxed);
  std::uint64_t next;
  do {
    next = cur >= bytes ? cur - bytes : 0;
  } while (!live_bytes_.compare_exchange_weak(cur, next, std::memory_order_relaxed));
}

std::uint64_t DatasetTracker::aggregate_file_bytes() const {
  return static_cast<std::uint64_t>(std::llround(static_cast<double>(live_bytes()) * slack_));
}

AdmissionDecision should_admit(const BlockId& /*id*/, Origin origin, const WindowCounters& window,
                               const DatasetTracker& tracker, const AdmissionConfig& cfg) {
  if (cfg.policy == AdmissionPolicy::disabled) {
    return AdmissionDecision::bypass_policy;
  }
  if (origin == Origin::write_path &&
      (cfg.policy == AdmissionPolicy::no_write_allocate || !cfg.write_path_admission)) {
    return AdmissionDecision::bypass_policy;
  }
  if (tracker.aggregate_file_bytes() <= cfg.dram_bytes) {
    return AdmissionDecision::bypass_small;
  }
  if (cfg.policy == AdmissionPolicy::obp && compute_obp(window).exceeds(cfg.obp_target)) {
    return AdmissionDecision::bypass_obp;
  }
  return AdmissionDecision::admit;
}

EvictionGate should_evict_now(const WindowCounters& window, const AdmissionConfig& cfg) {
  if (cfg.policy == AdmissionPolicy::obp && compute_obp(window).exceeds(cfg.obp_target)) {
    return EvictionGate::throttled;
  }
  return EvictionGate::proceed;
}

std::uint64_t eviction_budget(const WindowCounters& window, const AdmissionConfig& cfg) {
  if (cfg.policy != AdmissionPolicy::obp) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  const double room = cfg.obp_target * window.looked_up - (window.inserted + window.removed);
  if (room < 1.0) {
    return 0;
  }
  return static_cast<std::uint64_t>(std::floor(room));
}

std::string_view to_string(AdmissionPolicy p) {
  switch (p) {
    case AdmissionPolicy::always_read_write: return "always";
    case AdmissionPolicy::no_write_allocate: return "nowrite";
    case AdmissionPolicy::obp: return "obp";
    case AdmissionPolicy::disabled: return "disabled";
  }
  return "?";
}

std::string_view to_string(AdmissionDecision d) {
  switch (d) {
    case AdmissionDecision::admit: return "admit";
    case AdmissionDecision::bypass_small: return "bypass_small";
    case AdmissionDecision::bypass_obp: return "bypass_obp";
    case AdmissionDecision::bypass_policy: return "bypass_policy";
  }
  return "?";
}

std::string_view to_string(Origin o) {
  return o == Origin::read_path ? "read_path" : "write_path";
}

AdmissionPolicy parse_policy(std::string_view text) {
  if (text == "always" || text == "always_read_write" || text == "alloc-read-write") {
    return AdmissionPolicy::always_read_write;
  }
  if (text == "nowrite" || text == "no_write_allocate") {
    return AdmissionPolicy::no_write_allocate;
  }
  if (text == "obp") {
    return AdmissionPolicy::obp;
  }
  if (text == "disabled" || text == "none") {
    return AdmissionPolicy::disabled;
  }
  throw std::invalid_argument("unknown admission policy '" + std::string(text) + "'");
}

}  // namespace nvcache
