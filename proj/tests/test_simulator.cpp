#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "nvcache/report.hpp"
#include "nvcache/simulator.hpp"

using namespace nvcache;

namespace {

SimConfig small_config(const std::string& base = "mixed-50r50u", AdmissionPolicy policy =
                                                                     AdmissionPolicy::obp) {
  SimConfig cfg;
  cfg.workload = preset(base);
  cfg.workload.record_count = 2000;
  cfg.workload.nominal_dataset_bytes = cfg.workload.dataset_bytes();
  cfg.workload.thread_count = 4;
  cfg.workload.duration = 10.0;
  cfg.dram_bytes = 4 * MiB;
  cfg.nvram_bytes = 16 * MiB;
  cfg.admission.policy = policy;
  cfg.seed = 3;
  return cfg;
}

std::string csv_of(const SimResult& r) {
  std::ostringstream out;
  write_csv(out, r);
  return out.str();
}

}  // namespace

TEST_CASE("runs are deterministic for a seed") {
  const auto cfg = small_config();
  const auto a = run(cfg);
  const auto b = run(cfg);
  CHECK(csv_of(a) == csv_of(b));
  CHECK(a.total_ops > 0);

  auto other = cfg;
  other.seed = 4;
  CHECK(csv_of(run(other)) != csv_of(a));
}

TEST_CASE("disabled cache never inserts") {
  const auto r = run(small_config("mixed-50r50u", AdmissionPolicy::disabled));
  CHECK(r.blocks_inserted == 0);
  CHECK(r.nvcache_hit_ratio == 0.0);
  CHECK(r.bytes_written[static_cast<std::size_t>(Device::nvram)] == 0);
}

TEST_CASE("bookkeeping balances at the end of a run") {
  for (auto policy : {AdmissionPolicy::obp, AdmissionPolicy::always_read_write}) {
    auto cfg = small_config("stress-multi", policy);
    cfg.eviction.mode = EvictionMode::eager;
    const auto r = run(cfg);
    for (int w : r.final_writers) CHECK(w == 0);
    REQUIRE(r.thread_busy_time.size() == r.thread_service_time.size());
    for (std::size_t t = 0; t < r.thread_busy_time.size(); ++t) {
      CHECK(r.thread_busy_time[t] == doctest::Approx(r.thread_service_time[t]));
    }
    CHECK(r.blocks_removed() <= r.blocks_inserted);
    CHECK(r.lookup_hits <= r.blocks_looked_up);
    std::uint64_t per_epoch = 0;
    for (const auto& e : r.epochs) per_epoch += e.total_ops();
    CHECK(per_epoch <= r.total_ops);
  }
}

TEST_CASE("concurrent writers slow NVRAM reads") {
  auto cfg = small_config("mixed-50r50u", AdmissionPolicy::always_read_write);
  cfg.workload.thread_count = 16;
  const auto r = run(cfg);
  REQUIRE(r.nvram_read_gbps > 0.0);
  CHECK(r.nvram_read_gbps < 12.0);
}

TEST_CASE("epochs cover the measured duration") {
  auto cfg = small_config();
  const auto r = run(cfg);
  CHECK(r.epochs.size() == 10);
  CHECK(r.epochs.front().phase == Phase::warmup);
  CHECK(r.epochs.back().phase == Phase::measure);
  CHECK(r.warmup_end == doctest::Approx(r.measure_start + 1.0));

  const auto csv = csv_of(r);
  std::istringstream in(csv);
  std::string line;
  int epochs = 0, summaries = 0, lines = 0;
  while (std::getline(in, line)) {
    ++lines;
    if (line.rfind("epoch,", 0) == 0) ++epochs;
    if (line.rfind("summary,", 0) == 0) ++summaries;
  }
  CHECK(lines == 12);
  CHECK(epochs == 10);
  CHECK(summaries == 1);
}

TEST_CASE("replaying a recorded trace") {
  auto cfg = small_config();
  cfg.record_trace = true;
  const auto original = run(cfg);
  REQUIRE(original.trace.has_value());
  CHECK(original.trace->records.size() == original.total_ops);

  auto replay = small_config();
  replay.seed = 99;  // the trace, not the seed, decides the operations
  replay.replay = original.trace;
  const auto again = run(replay);
  CHECK(again.total_ops == original.total_ops);
  CHECK(again.ops_by_kind == original.ops_by_kind);
  CHECK(again.blocks_inserted == original.blocks_inserted);
  CHECK(again.total_ops_per_second == doctest::Approx(original.total_ops_per_second));

  replay.admission.policy = AdmissionPolicy::disabled;
  const auto bypass = run(replay);
  CHECK(bypass.blocks_inserted == 0);
  CHECK(bypass.total_ops <= original.total_ops);
}

TEST_CASE("max_ops caps dispatch") {
  auto cfg = small_config();
  cfg.max_ops = 500;
  CHECK(run(cfg).total_ops == 500);
}

TEST_CASE("config validation") {
  auto cfg = small_config();
  cfg.time_scale = 0.0;
  CHECK_THROWS_AS(run(cfg), std::invalid_argument);
  cfg = small_config();
  cfg.warmup_fraction = 1.0;
  CHECK_THROWS_AS(run(cfg), std::invalid_argument);
  cfg = small_config();
  cfg.nvram_bytes = 0;
  CHECK_THROWS_AS(run(cfg), std::invalid_argument);
}
