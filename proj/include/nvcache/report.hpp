#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nvcache/simulator.hpp"

namespace nvcache {

enum class ReportFormat { csv, summary };

// Column order of the CSV report. The first column tells rows apart:
// "epoch" rows carry per-epoch deltas of the measured run, the single
// trailing "summary" row carries metrics-window rates and whole-run totals.
// Fields that do not apply to a row kind are left empty.
const std::vector<std::string>& csv_columns();

void write_csv(std::ostream& out, const SimResult& result);
void write_summary(std::ostream& out, const SimResult& result);
void emit(const SimResult& result, ReportFormat format, const std::filesystem::path& path);

// Mean of the finite per-epoch OBP values after warmup.
double obp_mean(const SimResult& result);

// The subset of a run that comparisons need; recoverable from a CSV report.
struct RunSummary {
  std::string label;
  std::string workload;
  std::string policy;
  std::array<double, kOpKindCount> ops_per_second{};
  double total_ops_per_second = 0.0;
  double nvcache_hit_ratio = 0.0;
  std::uint64_t dram_bytes = 0;
  std::uint64_t nvram_bytes = 0;
};

RunSummary summarize(const SimResult& result, std::string label = {});
// Reads the summary row of a CSV report. Throws std::runtime_error when the
// file is missing, has an unexpected header, or lacks a summary row.
RunSummary read_summary_csv(const std::filesystem::path& path);
RunSummary read_summary_csv(std::istream& in, std::string label);

inline constexpr double kNvramDramCostRatio = 0.38;

// Cost of (dram + nvram) memory relative to a baseline configuration, with
// NVRAM priced at `cost_ratio` of DRAM per byte.
double relative_memory_cost(std::uint64_t dram_bytes, std::uint64_t nvram_bytes,
                            std::uint64_t baseline_dram_bytes, std::uint64_t baseline_nvram_bytes,
                            double cost_ratio = kNvramDramCostRatio);

struct ComparisonRow {
  std::string label;
  std::string policy;
  // NaN where the baseline has no throughput for that kind.
  std::array<double, kOpKindCount> throughput_ratio{};
  double total_ratio = 0.0;
  double relative_cost = 1.0;
  double perf_per_cost = 0.0;
};

// Throughput of every run relative to results[baseline_index]. All runs must
// come from the same workload; otherwise throws std::invalid_argument.
std::vector<ComparisonRow> compare(const std::vector<RunSummary>& results,
                                   std::size_t baseline_index,
                                   double cost_ratio = kNvramDramCostRatio);

void write_comparison(std::ostream& out, const std::vector<ComparisonRow>& rows);

}  // namespace nvcache
