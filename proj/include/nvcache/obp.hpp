#pragma once

#include <cstdint>
#include <limits>

namespace nvcache {

// Smoothed event counts the overhead-bypass ratio is computed from. Values are
// fractional because older epochs are decayed.
struct WindowCounters {
  double inserted = 0.0;
  double removed = 0.0;
  double looked_up = 0.0;
};

// (inserted + removed) / looked_up, or `saturated` when writes happened
// without any lookups. A saturated ratio exceeds every finite target.
class ObpValue {
 public:
  static ObpValue ratio(double v) { return ObpValue(v, false); }
  static ObpValue saturated() { return ObpValue(std::numeric_limits<double>::infinity(), true); }

  bool is_saturated() const { return saturated_; }
  // +inf when saturated.
  double value() const { return value_; }
  bool exceeds(double target) const { return saturated_ || value_ > target; }

  friend bool operator==(const ObpValue&, const ObpValue&) = default;

 private:
  ObpValue(double v, bool s) : value_(v), saturated_(s) {}
  double value_;
  bool saturated_;
};

inline ObpValue compute_obp(const WindowCounters& w) {
  const double writes = w.inserted + w.removed;
  if (w.looked_up <= 0.0) {
    return writes > 0.0 ? ObpValue::saturated() : ObpValue::ratio(0.0);
  }
  return ObpValue::ratio(writes / w.looked_up);
}

// Epoch-bucketed, exponentially decayed counters. Events land in the current
// epoch; when the clock crosses into a later epoch the accumulated history is
// multiplied by `decay` once per elapsed epoch. The window seen by callers is
// history plus the still-open epoch.
//
// Not synchronized; BlockCache guards it.
class ObpWindow {
 public:
  explicit ObpWindow(double epoch_seconds = 1.0, double decay = 0.5)
      : epoch_seconds_(epoch_seconds), decay_(decay) {}

  // Rolls forward to the epoch containing `now`. Time never moves backwards:
  // an older timestamp is charged to the current epoch.
  void advance(double now);

  void record_insert(double now) { advance(now); current_.inserted += 1.0; }
  void record_remove(double now) { advance(now); current_.removed += 1.0; }
  void record_lookup(double now) { advance(now); current_.looked_up += 1.0; }

  WindowCounters window() const {
    return {history_.inserted + current_.inserted, history_.removed + current_.removed,
            history_.looked_up + current_.looked_up};
  }
  const WindowCounters& current_epoch() const { return current_; }
  std::int64_t epoch() const { return epoch_; }
  double epoch_seconds() const { return epoch_seconds_; }
  double decay() const { return decay_; }

 private:
  double epoch_seconds_;
  double decay_;
  std::int64_t epoch_ = 0;
  WindowCounters history_;
  WindowCounters current_;
};

}  // namespace nvcache
