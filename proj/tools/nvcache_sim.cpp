// Command-line driver: run a simulated workload, compare reports, list presets.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nvcache/report.hpp"
#include "nvcache/simulator.hpp"
#include "nvcache/units.hpp"
#include "nvcache/workload.hpp"

namespace {

struct RunOptions {
  std::string workload = "ycsb-a";
  std::string policy = "obp";
  double obp_target = 0.10;
  std::string dram = "32M";
  std::string nvram = "180M";
  std::string eviction = "throttled";
  std::uint64_t seed = 1;
  double scale = nvcache::kDefaultScale;
  std::string out;
  std::string format = "csv";
  double duration = 0.0;
  double warmup = 0.10;
  double staleness = 60.0;
  bool no_write_admission = false;
  std::uint64_t max_ops = 0;
  std::string device_config;
  std::string record_trace;
  std::string replay;
};

nvcache::WorkloadSpec resolve_workload(const std::string& name, double scale) {
  if (std::filesystem::exists(name)) {
    return nvcache::load_workload(name, scale);
  }
  return nvcache::preset(name, scale);
}

int do_run(const RunOptions& o) {
  nvcache::SimConfig cfg;
  cfg.workload = resolve_workload(o.workload, o.scale);
  if (o.duration > 0.0) {
    cfg.workload.duration = o.duration;
  }
  cfg.admission.policy = nvcache::parse_policy(o.policy);
  cfg.admission.obp_target = o.obp_target;
  cfg.admission.write_path_admission = !o.no_write_admission;
  cfg.dram_bytes = nvcache::parse_bytes(o.dram);
  cfg.nvram_bytes = nvcache::parse_bytes(o.nvram);
  cfg.eviction.mode = nvcache::parse_eviction_mode(o.eviction);
  cfg.eviction.staleness_window = o.staleness;
  cfg.seed = o.seed;
  cfg.time_scale = 1.0 / o.scale;
  cfg.warmup_fraction = o.warmup;
  cfg.max_ops = o.max_ops;
  if (!o.device_config.empty()) {
    cfg.devices = nvcache::DeviceSet::load(o.device_config);
  }
  if (!o.replay.empty()) {
    cfg.replay = nvcache::load_trace(o.replay);
  }
  cfg.record_trace = !o.record_trace.empty();

  const auto result = nvcache::run(cfg);

  const auto format =
      o.format == "summary" ? nvcache::ReportFormat::summary : nvcache::ReportFormat::csv;
  if (o.out.empty() || o.out == "-") {
    if (format == nvcache::ReportFormat::csv) {
      nvcache::write_csv(std::cout, result);
    } else {
      nvcache::write_summary(std::cout, result);
    }
  } else {
    nvcache::emit(result, format, o.out);
    nvcache::write_summary(std::cerr, result);
  }
  if (result.trace) {
    nvcache::save_trace(o.record_trace, *result.trace);
  }
  return 0;
}

int do_compare(const std::string& baseline, const std::vector<std::string>& others,
               double cost_ratio) {
  std::vector<nvcache::RunSummary> runs;
  runs.push_back(nvcache::read_summary_csv(baseline));
  for (const auto& path : others) {
    runs.push_back(nvcache::read_summary_csv(path));
  }
  nvcache::write_comparison(std::cout, nvcache::compare(runs, 0, cost_ratio));
  return 0;
}

int do_presets(double scale) {
  std::cout << "name,read,update,insert,scan,threads,records,dataset,distribution\n";
  for (const auto& s : nvcache::presets(scale)) {
    std::cout << s.name << ',' << s.op_mix.read << ',' << s.op_mix.update << ','
              << s.op_mix.insert << ',' << s.op_mix.scan << ',' << s.thread_count << ','
              << s.record_count << ',' << nvcache::format_bytes(s.nominal_dataset_bytes) << ','
              << nvcache::to_string(s.key_distribution.kind) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Second-tier block cache simulator"};
  app.require_subcommand(1);

  RunOptions ro;
  auto* run = app.add_subcommand("run", "Simulate one workload and write a report");
  run->add_option("--workload", ro.workload, "Preset name or JSON workload file")
      ->capture_default_str();
  run->add_option("--policy", ro.policy, "Admission policy")
      ->check(CLI::IsMember({"always", "nowrite", "obp", "disabled"}))
      ->capture_default_str();
  run->add_option("--obp-target", ro.obp_target, "OBP target ratio")->capture_default_str();
  run->add_option("--dram", ro.dram, "DRAM bytes (k/M/G suffixes)")->capture_default_str();
  run->add_option("--nvram", ro.nvram, "NVRAM cache bytes (k/M/G suffixes)")
      ->capture_default_str();
  run->add_option("--eviction", ro.eviction, "Eviction mode")
      ->check(CLI::IsMember({"none", "eager", "throttled"}))
      ->capture_default_str();
  run->add_option("--seed", ro.seed, "RNG seed")->capture_default_str();
  run->add_option("--scale", ro.scale, "Dataset scale relative to full size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  run->add_option("--out", ro.out, "Report path (default: stdout)");
  run->add_option("--format", ro.format, "Report format")
      ->check(CLI::IsMember({"csv", "summary"}))
      ->capture_default_str();
  run->add_option("--duration", ro.duration, "Measured virtual seconds (default: preset)");
  run->add_option("--warmup", ro.warmup, "Warmup fraction excluded from metrics")
      ->capture_default_str();
  run->add_option("--staleness", ro.staleness, "Eviction staleness window (virtual s)")
      ->capture_default_str();
  run->add_flag("--no-write-admission", ro.no_write_admission,
                "Do not offer write-path blocks to the cache");
  run->add_option("--max-ops", ro.max_ops, "Stop after this many operations (0 = no limit)");
  run->add_option("--device-config", ro.device_config, "JSON device profile overrides");
  run->add_option("--record-trace", ro.record_trace, "Write the dispatched operations here");
  run->add_option("--replay", ro.replay, "Replay a recorded trace");

  std::string baseline;
  std::vector<std::string> others;
  double cost_ratio = nvcache::kNvramDramCostRatio;
  auto* cmp = app.add_subcommand("compare", "Relative throughput and perf-per-cost of reports");
  cmp->add_option("--baseline", baseline, "Baseline CSV report")->required();
  cmp->add_option("reports", others, "CSV reports to compare")->required();
  cmp->add_option("--cost-ratio", cost_ratio, "NVRAM:DRAM per-byte cost")->capture_default_str();

  double preset_scale = nvcache::kDefaultScale;
  auto* pre = app.add_subcommand("presets", "List built-in workloads");
  pre->add_option("--scale", preset_scale, "Dataset scale")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return do_run(ro);
    if (*cmp) return do_compare(baseline, others, cost_ratio);
    if (*pre) return do_presets(preset_scale);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
