#include "nvcache/simulator.hpp"

#include <chrono>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "nvcache/cache.hpp"
#include "nvcache/engine.hpp"

namespace nvcache {

void SimConfig::validate() const {
  workload.validate();
  admission.validate();
  eviction.validate();
  if (nvram_bytes == 0 && admission.policy != AdmissionPolicy::disabled) {
    throw std::invalid_argument("nvram capacity must be positive unless the cache is disabled");
  }
  if (nvram_bytes > 0 && nvram_bytes < workload.block_size) {
    throw std::invalid_argument("nvram capacity is smaller than one block");
  }
  if (!(time_scale > 0.0)) {
    throw std::invalid_argument("time_scale must be positive");
  }
  if (!(warmup_fraction >= 0.0 && warmup_fraction < 1.0)) {
    throw std::invalid_argument("warmup_fraction must be in [0, 1)");
  }
  if (replay && replay->records.empty()) {
    throw std::invalid_argument("replay trace is empty");
  }
}

std::uint64_t EpochSample::total_ops() const {
  std::uint64_t n = 0;
  for (auto v : ops) n += v;
  return n;
}

namespace {

enum class EventType { op_done, writer_start, writer_end, tick, eviction_scan, warmup_mark };

struct Event {
  double time;
  std::uint64_t seq;
  EventType type;
  std::int64_t arg;  // thread, device, or epoch number
};

struct EventAfter {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    return a.seq > b.seq;
  }
};

class Simulation {
 public:
  explicit Simulation(const SimConfig& cfg)
      : cfg_(cfg),
        admission_(with_dram(cfg.admission, cfg.dram_bytes)),
        tracker_(cfg.dataset_slack),
        cache_(CacheConfig{std::max<std::uint64_t>(cfg.nvram_bytes, 1), cfg.bucket_count, cfg.seed,
                           cfg.devices[Device::nvram].per_removal_write_bytes, 1.0, 0.5}),
        engine_(EngineConfig{cfg.workload.block_size, cfg.dram_bytes, 1}, cache_, admission_,
                tracker_) {}

  SimResult run();

 private:
  static AdmissionConfig with_dram(AdmissionConfig a, std::uint64_t dram) {
    a.dram_bytes = dram;
    return a;
  }

  void push(double time, EventType type, std::int64_t arg) {
    events_.push(Event{time, seq_++, type, arg});
  }
  std::int64_t epoch_at(double t) const {
    const auto e = static_cast<std::int64_t>(std::floor(t - t0_));
    return std::clamp<std::int64_t>(e, 0, epoch_count_ - 1);
  }
  bool next_operation(int thread, Operation& op);
  void dispatch(int thread, double now);
  void close_epoch(std::int64_t k, double now);
  void run_eviction(double now);

  SimConfig cfg_;
  AdmissionConfig admission_;
  DatasetTracker tracker_;
  BlockCache cache_;
  Engine engine_;
  DeviceClock clock_;

  std::priority_queue<Event, std::vector<Event>, EventAfter> events_;
  std::uint64_t seq_ = 0;

  double t0_ = 0.0;
  double end_ = 0.0;
  double warm_end_ = 0.0;
  std::int64_t epoch_count_ = 0;
  std::uint64_t dispatched_ = 0;

  std::vector<WorkloadGenerator> generators_;
  std::vector<std::vector<Operation>> replay_ops_;
  std::vector<std::size_t> replay_pos_;
  std::vector<double> dispatch_time_;
  std::vector<double> busy_;
  std::vector<double> service_;

  std::vector<EpochSample> epochs_;
  CacheStats epoch_base_stats_;
  std::uint64_t epoch_base_ssd_bytes_ = 0;

  CacheStats warm_stats_;
  EngineCounters warm_engine_;
  bool warm_marked_ = false;
  std::array<std::uint64_t, kOpKindCount> window_ops_{};
  double nvram_read_bytes_ = 0.0;
  double nvram_read_time_ = 0.0;
  std::uint64_t passes_ = 0;
  std::uint64_t passes_throttled_ = 0;

  Trace trace_;
};

bool Simulation::next_operation(int thread, Operation& op) {
  const std::uint64_t n = engine_.record_count();
  if (!cfg_.replay) {
    op = generators_[thread].next_op(n);
    return true;
  }
  auto& pos = replay_pos_[thread];
  const auto& ops = replay_ops_[thread];
  if (pos >= ops.size()) {
    return false;
  }
  op = ops[pos++];
  if (op.kind != OpKind::insert) {
    if (n == 0) {
      op = {OpKind::insert, 0};
    } else if (op.key >= n) {
      op.key %= n;
    }
  }
  return true;
}

void Simulation::dispatch(int thread, double now) {
  if (now >= end_ || (cfg_.max_ops > 0 && dispatched_ >= cfg_.max_ops)) {
    return;
  }
  Operation op;
  if (!next_operation(thread, op)) {
    return;
  }
  ++dispatched_;
  if (cfg_.record_trace) {
    trace_.records.push_back(TraceRecord{now, thread, op});
  }

  OpEffects fx;
  switch (op.kind) {
    case OpKind::read:
      engine_.read_record(op.key, now, fx);
      break;
    case OpKind::update:
      engine_.update_record(op.key, now, fx);
      break;
    case OpKind::insert:
      op.key = engine_.insert_record(now, fx);
      break;
    case OpKind::scan:
      engine_.scan(op.key, cfg_.workload.scan_length, now, fx);
      break;
  }

  const bool in_window = now >= warm_end_;
  double offset = 0.0;
  for (const auto& a : fx.accesses) {
    const bool write = a.kind == AccessKind::write;
    const int writers = clock_.writers(a.device) + (write ? 1 : 0);
    const double cost = cfg_.time_scale * access_cost(cfg_.devices[a.device], a.kind, a.bytes, writers);
    if (write) {
      if (offset == 0.0) {
        clock_.begin_write(a.device);
      } else {
        push(now + offset, EventType::writer_start, static_cast<std::int64_t>(a.device));
      }
      push(now + offset + cost, EventType::writer_end, static_cast<std::int64_t>(a.device));
    } else if (a.device == Device::nvram && in_window) {
      nvram_read_bytes_ += static_cast<double>(a.bytes);
      nvram_read_time_ += cost;
    }
    offset += cost;
  }

  const auto kind = static_cast<std::size_t>(op.kind);
  ++epochs_[epoch_at(now)].ops[kind];
  if (in_window) {
    ++window_ops_[kind];
  }
  dispatch_time_[thread] = now;
  service_[thread] += offset;
  push(now + offset, EventType::op_done, thread);
}

void Simulation::close_epoch(std::int64_t k, double now) {
  auto& sample = epochs_[k];
  const auto obp = compute_obp(cache_.window(t0_ + static_cast<double>(k)));
  sample.obp = obp.value();
  sample.obp_saturated = obp.is_saturated();

  const auto stats = cache_.stats_snapshot();
  const auto& c = stats.counters;
  const auto& b = epoch_base_stats_.counters;
  sample.nvcache_lookups = c.blocks_looked_up - b.blocks_looked_up;
  sample.nvcache_hits = c.lookup_hits - b.lookup_hits;
  sample.blocks_inserted = c.blocks_inserted - b.blocks_inserted;
  sample.removed_invalidation = c.removed_invalidation - b.removed_invalidation;
  sample.removed_eviction = c.removed_eviction - b.removed_eviction;
  sample.nvram_bytes_written = c.bytes_written - b.bytes_written;
  const auto ssd = engine_.counters().ssd_bytes_written;
  sample.ssd_bytes_written = ssd - epoch_base_ssd_bytes_;
  epoch_base_stats_ = stats;
  epoch_base_ssd_bytes_ = ssd;
  (void)now;
}

void Simulation::run_eviction(double now) {
  const auto pass = eviction_pass(cache_, admission_, now, cfg_.eviction);
  ++passes_;
  if (pass.throttled) {
    ++passes_throttled_;
  }
  if (pass.evicted == 0) {
    return;
  }
  const std::uint64_t bytes = pass.evicted * cache_.config().removal_write_bytes;
  if (bytes == 0) {
    return;
  }
  const double cost =
      cfg_.time_scale * access_cost(cfg_.devices[Device::nvram], AccessKind::write, bytes,
                                    clock_.writers(Device::nvram) + 1);
  clock_.begin_write(Device::nvram);
  push(now + cost, EventType::writer_end, static_cast<std::int64_t>(Device::nvram));
}

SimResult Simulation::run() {
  const auto wall_start = std::chrono::steady_clock::now();
  const auto& w = cfg_.workload;

  if (w.populate) {
    engine_.populate(w.record_count, clock_, cfg_.devices, cfg_.time_scale);
  } else {
    engine_.preload(w.record_count);
  }
  t0_ = std::ceil(clock_.now);
  clock_.advance_to(t0_);
  end_ = t0_ + w.duration;
  warm_end_ = t0_ + cfg_.warmup_fraction * w.duration;
  epoch_count_ = static_cast<std::int64_t>(std::ceil(w.duration));
  epochs_.resize(epoch_count_);
  for (std::int64_t k = 0; k < epoch_count_; ++k) {
    epochs_[k].epoch = k;
    epochs_[k].start_time = t0_ + static_cast<double>(k);
    epochs_[k].phase = epochs_[k].start_time >= warm_end_ ? Phase::measure : Phase::warmup;
  }
  epoch_base_stats_ = cache_.stats_snapshot();
  epoch_base_ssd_bytes_ = engine_.counters().ssd_bytes_written;

  const int threads = w.thread_count;
  for (int t = 0; t < threads; ++t) {
    generators_.emplace_back(w, thread_seed(cfg_.seed, t));
  }
  if (cfg_.replay) {
    for (int t = 0; t < threads; ++t) {
      replay_ops_.push_back(cfg_.replay->thread_ops(t));
    }
    replay_pos_.assign(threads, 0);
  }
  dispatch_time_.assign(threads, t0_);
  busy_.assign(threads, 0.0);
  service_.assign(threads, 0.0);

  if (warm_end_ > t0_) {
    push(warm_end_, EventType::warmup_mark, 0);
  } else {
    warm_stats_ = cache_.stats_snapshot();
    warm_engine_ = engine_.counters();
    warm_marked_ = true;
  }
  push(t0_ + 1.0, EventType::tick, 1);
  push(t0_ + cfg_.eviction.scan_interval, EventType::eviction_scan, 1);
  for (int t = 0; t < threads; ++t) {
    dispatch(t, t0_);
  }

  while (!events_.empty()) {
    const Event ev = events_.top();
    events_.pop();
    clock_.advance_to(ev.time);
    switch (ev.type) {
      case EventType::op_done: {
        const auto t = static_cast<std::size_t>(ev.arg);
        busy_[t] += ev.time - dispatch_time_[t];
        dispatch(static_cast<int>(t), ev.time);
        break;
      }
      case EventType::writer_start:
        clock_.begin_write(static_cast<Device>(ev.arg));
        break;
      case EventType::writer_end:
        clock_.end_write(static_cast<Device>(ev.arg));
        break;
      case EventType::tick: {
        close_epoch(ev.arg - 1, ev.time);
        if (ev.arg < epoch_count_) {
          push(t0_ + static_cast<double>(ev.arg + 1), EventType::tick, ev.arg + 1);
        }
        break;
      }
      case EventType::eviction_scan: {
        if (ev.time <= end_) {
          run_eviction(ev.time);
          const double next = t0_ + static_cast<double>(ev.arg + 1) * cfg_.eviction.scan_interval;
          if (next <= end_) {
            push(next, EventType::eviction_scan, ev.arg + 1);
          }
        }
        break;
      }
      case EventType::warmup_mark:
        warm_stats_ = cache_.stats_snapshot();
        warm_engine_ = engine_.counters();
        warm_marked_ = true;
        break;
    }
  }

  SimResult r;
  r.workload = w.name;
  r.policy = std::string(to_string(admission_.policy));
  r.eviction = std::string(to_string(cfg_.eviction.mode));
  r.obp_target = admission_.obp_target;
  r.dram_bytes = cfg_.dram_bytes;
  r.nvram_bytes = cfg_.nvram_bytes;
  r.seed = cfg_.seed;
  r.record_count = engine_.record_count();
  r.block_size = w.block_size;
  r.measure_start = t0_;
  r.warmup_end = warm_end_;
  r.measure_end = end_;

  const double window = end_ - warm_end_;
  r.ops_by_kind = window_ops_;
  std::uint64_t window_total = 0;
  for (std::size_t k = 0; k < kOpKindCount; ++k) {
    r.ops_per_second[k] = static_cast<double>(window_ops_[k]) / window;
    window_total += window_ops_[k];
  }
  r.total_ops_per_second = static_cast<double>(window_total) / window;

  const auto stats = cache_.stats_snapshot();
  const auto& c = stats.counters;
  if (warm_marked_) {
    const auto& b = warm_stats_.counters;
    const auto lookups = c.blocks_looked_up - b.blocks_looked_up;
    r.nvcache_hit_ratio = lookups == 0 ? 0.0
                                       : static_cast<double>(c.lookup_hits - b.lookup_hits) /
                                             static_cast<double>(lookups);
    const auto& e = engine_.counters();
    const auto dram_hits = e.served_dram - warm_engine_.served_dram;
    const auto reads = dram_hits + (e.served_nvcache - warm_engine_.served_nvcache) +
                       (e.served_ssd - warm_engine_.served_ssd);
    r.dram_hit_ratio =
        reads == 0 ? 0.0 : static_cast<double>(dram_hits) / static_cast<double>(reads);
  }
  r.nvram_read_gbps =
      nvram_read_time_ > 0.0 ? nvram_read_bytes_ / nvram_read_time_ / kBytesPerGB * cfg_.time_scale
                             : 0.0;

  r.epochs = std::move(epochs_);
  r.total_ops = dispatched_;
  r.bytes_written[static_cast<std::size_t>(Device::nvram)] = c.bytes_written;
  r.bytes_written[static_cast<std::size_t>(Device::ssd)] = engine_.counters().ssd_bytes_written;
  r.blocks_inserted = c.blocks_inserted;
  r.removed_invalidation = c.removed_invalidation;
  r.removed_eviction = c.removed_eviction;
  r.blocks_looked_up = c.blocks_looked_up;
  r.lookup_hits = c.lookup_hits;
  r.removed_to_inserted_ratio = static_cast<double>(c.blocks_removed) /
                                static_cast<double>(std::max<std::uint64_t>(c.blocks_inserted, 1));
  r.admitted_bytes = c.blocks_inserted * w.block_size;
  r.ssd_blocks_written = engine_.counters().ssd_blocks_written;
  r.populate_blocks_written = engine_.counters().populate_blocks_written;
  r.populate_blocks_admitted = engine_.counters().populate_blocks_admitted;
  r.admission_decisions = engine_.counters().decisions;
  r.rejected_full = engine_.counters().rejected_full;
  r.eviction_passes = passes_;
  r.eviction_passes_throttled = passes_throttled_;
  r.final_writers = clock_.in_flight_writers;
  r.thread_busy_time = busy_;
  r.thread_service_time = service_;
  if (cfg_.record_trace) {
    r.trace = std::move(trace_);
  }
  r.wall_runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  return r;
}

}  // namespace

SimResult run(const SimConfig& config) {
  config.validate();
  Simulation sim(config);
  return sim.run();
}

}  // namespace nvcache
