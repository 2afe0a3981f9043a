// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "nvcache/device.hpp"
#include "nvcache/eviction.hpp"
#include "nvcache/report.hpp"
#include "nvcache/simulator.hpp"
#include "nvcache/workload.hpp"

using namespace nvcache;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

SimConfig base_config(const std::string& workload) {
  SimConfig cfg;
  cfg.workload = preset(workload);
  cfg.seed = 1;
  return cfg;
}

Outcome calibration() {
  const auto nv = default_nvram_profile();
  const auto dram = default_dram_profile();
  const auto ssd = default_ssd_profile();
  const bool nv_ok = read_bandwidth(nv, 0) == 12.0 && read_bandwidth(nv, 1) == 3.4 &&
                     read_bandwidth(nv, 8) == 0.8;
  // Loss is a derived ratio of two doubles; compare to the last few ulps.
  const bool dram_ok = std::abs(read_loss(dram, 1) - 0.18) < 1e-12 &&
                       std::abs(read_loss(dram, 8) - 0.35) < 1e-12;
  const bool ssd_ok = read_bandwidth(ssd, 0) == 2.5 && write_bandwidth(ssd, 1) == 2.2;
  return {nv_ok && dram_ok && ssd_ok,
          fmt("nvram {%g,%g,%g} dram loss {%.6f,%.6f} ssd {%g,%g}", read_bandwidth(nv, 0),
              read_bandwidth(nv, 1), read_bandwidth(nv, 8), read_loss(dram, 1),
              read_loss(dram, 8), read_bandwidth(ssd, 0), write_bandwidth(ssd, 1))};
}

Outcome relative_harm() {
  const auto nv = default_nvram_profile();
  const auto dram = default_dram_profile();
  double min_gap = 1.0;
  for (int w = 1; w <= 8; ++w) min_gap = std::min(min_gap, read_loss(nv, w) - read_loss(dram, w));
  return {min_gap > 0.0, fmt("smallest nvram-dram loss gap over w=1..8: %.4f", min_gap)};
}

Outcome obp_enforcement() {
  auto cfg = base_config("ycsb-a");
  cfg.admission.policy = AdmissionPolicy::obp;
  const auto r = run(cfg);
  const double limit = cfg.admission.obp_target + 0.02;
  std::size_t measured = 0, over = 0;
  double worst = 0.0;
  for (const auto& e : r.epochs) {
    if (e.phase != Phase::measure) continue;
    ++measured;
    if (e.obp_saturated || e.obp > limit) ++over;
    worst = std::max(worst, e.obp);
  }
  const double frac = measured ? static_cast<double>(over) / measured : 1.0;
  return {r.total_ops >= 100'000 && measured > 0 && frac <= 0.01,
          fmt("%llu ops, %zu/%zu epochs above %.2f, max obp %.4f",
              static_cast<unsigned long long>(r.total_ops), over, measured, limit, worst)};
}

Outcome small_bypass() {
  bool ok = true;
  std::string detail;
  for (const char* name : {"ycsb-a", "update-only", "ycsb-c", "stress-multi"}) {
    for (auto policy : {AdmissionPolicy::obp, AdmissionPolicy::always_read_write}) {
      auto cfg = base_config(name);
      cfg.admission.policy = policy;
      cfg.workload.record_count = 1000;  // 16MB, fits in DRAM
      cfg.workload.duration = 20;
      cfg.dram_bytes = 64 * MiB;
      const auto r = run(cfg);
      // Inserts would grow the dataset; the precondition is that it stays within DRAM.
      const auto final_bytes =
          (cfg.workload.record_count + r.ops_by_kind[2]) * cfg.workload.block_size;
      ok = ok && final_bytes <= cfg.dram_bytes && r.blocks_inserted == 0;
      detail += fmt("%s/%s inserted=%llu dataset<=%lluB; ", name,
                    std::string(to_string(policy)).c_str(),
                    static_cast<unsigned long long>(r.blocks_inserted),
                    static_cast<unsigned long long>(final_bytes));
    }
  }
  return {ok, detail};
}

Outcome table2_ordering() {
  auto cfg = base_config("read-only-large");
  cfg.admission.policy = AdmissionPolicy::always_read_write;
  cfg.nvram_bytes = 60 * MiB;  // smaller than the 120MB dataset
  cfg.eviction.staleness_window = 2.0;
  cfg.eviction.mode = EvictionMode::eager;
  const auto eager = run(cfg);
  cfg.eviction.mode = EvictionMode::none;
  const auto none = run(cfg);
  const bool ok = eager.nvcache_hit_ratio > none.nvcache_hit_ratio &&
                  eager.total_ops_per_second < none.total_ops_per_second;
  return {ok, fmt("eager %.0f ops/s hit %.3f; none %.0f ops/s hit %.3f",
                  eager.total_ops_per_second, eager.nvcache_hit_ratio,
                  none.total_ops_per_second, none.nvcache_hit_ratio)};
}

Outcome read_benefit() {
  auto cfg = base_config("read-only-large");
  cfg.admission.policy = AdmissionPolicy::obp;
  const auto obp = run(cfg);
  cfg.admission.policy = AdmissionPolicy::disabled;
  const auto off = run(cfg);
  const double ratio = obp.total_ops_per_second / off.total_ops_per_second;
  const bool sized = cfg.workload.dataset_bytes() > cfg.dram_bytes &&
                     cfg.workload.dataset_bytes() <= cfg.nvram_bytes;
  return {sized && ratio >= 2.0, fmt("obp %.0f vs disabled %.0f ops/s = %.2fx",
                                     obp.total_ops_per_second, off.total_ops_per_second, ratio)};
}

struct UpdateRuns {
  SimResult obp;
  SimResult off;
};

const UpdateRuns& update_runs() {
  static const UpdateRuns runs = [] {
    auto cfg = base_config("update-only");
    cfg.admission.policy = AdmissionPolicy::obp;
    UpdateRuns r{run(cfg), {}};
    cfg.admission.policy = AdmissionPolicy::disabled;
    r.off = run(cfg);
    return r;
  }();
  return runs;
}

Outcome write_protection() {
  const auto& r = update_runs();
  const double ratio = r.obp.total_ops_per_second / r.off.total_ops_per_second;
  const auto ssd = r.obp.bytes_written[static_cast<std::size_t>(Device::ssd)];
  const double admitted = static_cast<double>(r.obp.admitted_bytes) / static_cast<double>(ssd);
  return {std::abs(ratio - 1.0) <= 0.05 && admitted <= 0.10,
          fmt("throughput ratio %.3f, admitted %llu of %llu ssd bytes (%.1f%%)", ratio,
              static_cast<unsigned long long>(r.obp.admitted_bytes),
              static_cast<unsigned long long>(ssd), 100.0 * admitted)};
}

Outcome churn() {
  const auto& r = update_runs().obp;
  return {r.blocks_inserted > 0 && r.removed_to_inserted_ratio >= 0.9,
          fmt("removed/inserted = %llu/%llu = %.3f",
              static_cast<unsigned long long>(r.blocks_removed()),
              static_cast<unsigned long long>(r.blocks_inserted), r.removed_to_inserted_ratio)};
}

// Filter-and-sort written out independently of the library.
std::vector<BlockId> lfru_oracle(const std::vector<CacheEntry>& entries, double now,
                                 double staleness, std::uint64_t needed) {
  std::vector<CacheEntry> stale;
  std::copy_if(entries.begin(), entries.end(), std::back_inserter(stale),
               [&](const CacheEntry& e) { return now - e.last_access_time > staleness; });
  std::stable_sort(stale.begin(), stale.end(), [](const CacheEntry& a, const CacheEntry& b) {
    return std::tie(a.access_count, a.last_access_time, a.id) <
           std::tie(b.access_count, b.last_access_time, b.id);
  });
  std::vector<BlockId> out;
  std::uint64_t covered = 0;
  for (const auto& e : stale) {
    if (covered >= needed) break;
    out.push_back(e.id);
    covered += e.payload_size;
  }
  return out;
}

Outcome lfru_equivalence() {
  std::mt19937_64 rng(2024);
  int mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    EvictionConfig cfg;
    cfg.staleness_window = static_cast<double>(1 + rng() % 40);
    const double now = 50.0;
    std::vector<CacheEntry> entries;
    const auto n = 1 + rng() % 24;
    for (std::uint64_t k = 0; k < n; ++k) {
      const auto size = static_cast<std::uint32_t>(4096 << (rng() % 3));
      entries.push_back(CacheEntry{BlockId(1 + rng() % 2, (rng() % 64) * 16384, size), size,
                                   0.0, static_cast<double>(rng() % 50), rng() % 5});
    }
    const std::uint64_t needed = rng() % (n * 16384 + 1);
    std::vector<BlockId> got;
    for (const auto& e : select_victims(entries, now, cfg, needed)) got.push_back(e.id);
    if (got != lfru_oracle(entries, now, cfg.staleness_window, needed)) ++mismatches;
  }
  return {mismatches == 0, fmt("%d mismatches in 1000 instances", mismatches)};
}

Outcome populate_throttling() {
  bool ok = true;
  std::string detail;
  for (const char* name : {"read-only-large", "ycsb-a", "update-only"}) {
    auto cfg = base_config(name);
    cfg.admission.policy = AdmissionPolicy::obp;
    cfg.max_ops = 1;  // the populate phase is what is being measured
    const auto r = run(cfg);
    const double frac = static_cast<double>(r.populate_blocks_admitted) /
                        static_cast<double>(std::max<std::uint64_t>(1, r.populate_blocks_written));
    ok = ok && r.populate_blocks_written > 0 && frac <= 0.01;
    detail += fmt("%s %llu/%llu (%.2f%%); ", name,
                  static_cast<unsigned long long>(r.populate_blocks_admitted),
                  static_cast<unsigned long long>(r.populate_blocks_written), 100.0 * frac);
  }
  return {ok, detail};
}

Outcome cost_table() {
  constexpr std::uint64_t GB = 1'000'000'000ULL;
  const std::uint64_t configs[][2] = {{96, 0}, {80, 16}, {64, 32}, {48, 48}, {32, 64}};
  const char* expected[] = {"1.00", "0.90", "0.79", "0.69", "0.59"};
  std::vector<RunSummary> runs;
  for (const auto& c : configs) {
    RunSummary s;
    s.label = fmt("%lluGB+%lluGB", static_cast<unsigned long long>(c[0]),
                  static_cast<unsigned long long>(c[1]));
    s.workload = "ycsb-a";
    s.total_ops_per_second = 1.0;
    s.dram_bytes = c[0] * GB;
    s.nvram_bytes = c[1] * GB;
    runs.push_back(s);
  }
  std::ostringstream out;
  write_comparison(out, compare(runs, 0, 0.38));
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);  // header
  bool ok = true;
  std::string got;
  for (const char* want : expected) {
    if (!std::getline(in, line)) {
      ok = false;
      break;
    }
    // relative_cost is the second to last column.
    const auto last = line.rfind(',');
    const auto prev = line.rfind(',', last - 1);
    const auto cell = line.substr(prev + 1, last - prev - 1);
    got += cell + " ";
    ok = ok && cell == want;
  }
  return {ok, "cost column: " + got};
}

Outcome determinism() {
  auto cfg = base_config("ycsb-a");
  cfg.workload.duration = 60;
  std::ostringstream a, b;
  write_csv(a, run(cfg));
  write_csv(b, run(cfg));
  return {a.str() == b.str() && !a.str().empty(),
          fmt("%zu bytes, identical=%s", a.str().size(), a.str() == b.str() ? "yes" : "no")};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_seconds;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria = {
      {1, "device calibration", 1, calibration},
      {2, "relative harm", 1, relative_harm},
      {3, "obp enforcement", 30, obp_enforcement},
      {4, "small dataset bypass", 10, small_bypass},
      {5, "eager vs none ordering", 60, table2_ordering},
      {6, "read-dominant benefit", 60, read_benefit},
      {7, "write-dominant protection", 60, write_protection},
      {8, "churn signature", 60, churn},
      {9, "lfru oracle equivalence", 10, lfru_equivalence},
      {10, "populate throttling", 30, populate_throttling},
      {11, "cost table", 1, cost_table},
      {12, "determinism", 60, determinism},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.limit_seconds;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::printf("%s %2d %s: %s [%.2fs, limit %.0fs%s]\n", pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), secs, c.limit_seconds, in_time ? "" : ", too slow");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
