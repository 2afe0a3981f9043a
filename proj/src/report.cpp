#include "nvcache/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "nvcache/units.hpp"

namespace nvcache {

namespace {

std::string fmt_double(double v) {
  if (std::isinf(v)) return "inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string fmt_u64(std::uint64_t v) { return std::to_string(v); }

class Row {
 public:
  explicit Row(std::size_t width) : cells_(width) {}
  void set(std::string_view column, std::string value) {
    const auto& cols = csv_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (cols[i] == column) {
        cells_[i] = std::move(value);
        return;
      }
    }
    throw std::logic_error("unknown CSV column " + std::string(column));
  }
  void write(std::ostream& out) const {
    for (std::size_t i = 0; i < cells_.size(); ++i) {
      if (i) out << ',';
      out << cells_[i];
    }
    out << '\n';
  }

 private:
  std::vector<std::string> cells_;
};

constexpr const char* kKindColumns[kOpKindCount] = {"read", "update", "insert", "scan"};

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cell);
      cell.clear();
    } else if (c != '\r') {
      cell.push_back(c);
    }
  }
  out.push_back(cell);
  return out;
}

}  // namespace

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> columns = {
      "record",
      "epoch",
      "start_time",
      "phase",
      "obp",
      "obp_saturated",
      "ops",
      "read_ops",
      "update_ops",
      "insert_ops",
      "scan_ops",
      "ops_per_sec",
      "read_ops_per_sec",
      "update_ops_per_sec",
      "insert_ops_per_sec",
      "scan_ops_per_sec",
      "nvcache_lookups",
      "nvcache_hits",
      "nvcache_hit_ratio",
      "dram_hit_ratio",
      "blocks_inserted",
      "removed_invalidation",
      "removed_eviction",
      "removed_to_inserted",
      "ssd_bytes_written",
      "nvram_bytes_written",
      "admitted_bytes",
      "obp_mean",
      "workload",
      "policy",
      "eviction",
      "obp_target",
      "dram_bytes",
      "nvram_bytes",
      "seed",
  };
  return columns;
}

double obp_mean(const SimResult& result) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& e : result.epochs) {
    if (e.phase == Phase::measure && !e.obp_saturated) {
      sum += e.obp;
      ++n;
    }
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

void write_csv(std::ostream& out, const SimResult& r) {
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out << ',';
    out << cols[i];
  }
  out << '\n';

  for (const auto& e : r.epochs) {
    Row row(cols.size());
    row.set("record", "epoch");
    row.set("epoch", std::to_string(e.epoch));
    row.set("start_time", fmt_double(e.start_time));
    row.set("phase", e.phase == Phase::measure ? "measure" : "warmup");
    row.set("obp", fmt_double(e.obp));
    row.set("obp_saturated", e.obp_saturated ? "1" : "0");
    row.set("ops", fmt_u64(e.total_ops()));
    for (std::size_t k = 0; k < kOpKindCount; ++k) {
      row.set(std::string(kKindColumns[k]) + "_ops", fmt_u64(e.ops[k]));
    }
    row.set("nvcache_lookups", fmt_u64(e.nvcache_lookups));
    row.set("nvcache_hits", fmt_u64(e.nvcache_hits));
    row.set("nvcache_hit_ratio",
            fmt_double(e.nvcache_lookups == 0 ? 0.0
                                              : static_cast<double>(e.nvcache_hits) /
                                                    static_cast<double>(e.nvcache_lookups)));
    row.set("blocks_inserted", fmt_u64(e.blocks_inserted));
    row.set("removed_invalidation", fmt_u64(e.removed_invalidation));
    row.set("removed_eviction", fmt_u64(e.removed_eviction));
    row.set("ssd_bytes_written", fmt_u64(e.ssd_bytes_written));
    row.set("nvram_bytes_written", fmt_u64(e.nvram_bytes_written));
    row.write(out);
  }

  Row row(cols.size());
  row.set("record", "summary");
  row.set("start_time", fmt_double(r.warmup_end));
  row.set("phase", "measure");
  std::uint64_t total = 0;
  for (std::size_t k = 0; k < kOpKindCount; ++k) {
    row.set(std::string(kKindColumns[k]) + "_ops", fmt_u64(r.ops_by_kind[k]));
    row.set(std::string(kKindColumns[k]) + "_ops_per_sec", fmt_double(r.ops_per_second[k]));
    total += r.ops_by_kind[k];
  }
  row.set("ops", fmt_u64(total));
  row.set("ops_per_sec", fmt_double(r.total_ops_per_second));
  row.set("nvcache_lookups", fmt_u64(r.blocks_looked_up));
  row.set("nvcache_hits", fmt_u64(r.lookup_hits));
  row.set("nvcache_hit_ratio", fmt_double(r.nvcache_hit_ratio));
  row.set("dram_hit_ratio", fmt_double(r.dram_hit_ratio));
  row.set("blocks_inserted", fmt_u64(r.blocks_inserted));
  row.set("removed_invalidation", fmt_u64(r.removed_invalidation));
  row.set("removed_eviction", fmt_u64(r.removed_eviction));
  row.set("removed_to_inserted", fmt_double(r.removed_to_inserted_ratio));
  row.set("ssd_bytes_written", fmt_u64(r.bytes_written[static_cast<std::size_t>(Device::ssd)]));
  row.set("nvram_bytes_written",
          fmt_u64(r.bytes_written[static_cast<std::size_t>(Device::nvram)]));
  row.set("admitted_bytes", fmt_u64(r.admitted_bytes));
  row.set("obp_mean", fmt_double(obp_mean(r)));
  row.set("workload", r.workload);
  row.set("policy", r.policy);
  row.set("eviction", r.eviction);
  row.set("obp_target", fmt_double(r.obp_target));
  row.set("dram_bytes", fmt_u64(r.dram_bytes));
  row.set("nvram_bytes", fmt_u64(r.nvram_bytes));
  row.set("seed", fmt_u64(r.seed));
  row.write(out);
}

void write_summary(std::ostream& out, const SimResult& r) {
  char buf[256];
  auto line = [&](const char* label, const std::string& value) {
    std::snprintf(buf, sizeof(buf), "  %-26s %s\n", label, value.c_str());
    out << buf;
  };
  out << "run: " << r.workload << " (policy " << r.policy << ", eviction " << r.eviction
      << ", seed " << r.seed << ")\n";
  line("dram / nvram", format_bytes(r.dram_bytes) + " / " + format_bytes(r.nvram_bytes));
  line("dataset", format_bytes(r.record_count * r.block_size) + " in " +
                      std::to_string(r.record_count) + " blocks");
  line("metrics window (virtual s)", fmt_double(r.warmup_end) + " .. " + fmt_double(r.measure_end));
  line("throughput (ops/s)", fmt_double(r.total_ops_per_second));
  for (std::size_t k = 0; k < kOpKindCount; ++k) {
    if (r.ops_by_kind[k] > 0) {
      line(("  " + std::string(to_string(static_cast<OpKind>(k)))).c_str(),
           fmt_double(r.ops_per_second[k]));
    }
  }
  line("nvcache hit ratio", fmt_double(r.nvcache_hit_ratio));
  line("dram hit ratio", fmt_double(r.dram_hit_ratio));
  line("obp mean (after warmup)", fmt_double(obp_mean(r)));
  line("blocks inserted", fmt_u64(r.blocks_inserted));
  line("blocks removed", fmt_u64(r.blocks_removed()) + " (invalidation " +
                             fmt_u64(r.removed_invalidation) + ", eviction " +
                             fmt_u64(r.removed_eviction) + ")");
  line("removed / inserted", fmt_double(r.removed_to_inserted_ratio));
  line("data written to ssd",
       format_bytes(r.bytes_written[static_cast<std::size_t>(Device::ssd)]));
  line("data admitted to cache", format_bytes(r.admitted_bytes));
  line("nvram read GB/s", fmt_double(r.nvram_read_gbps));
  line("wall runtime (s)", fmt_double(r.wall_runtime_seconds));
}

void emit(const SimResult& result, ReportFormat format, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write report " + path.string());
  }
  if (format == ReportFormat::csv) {
    write_csv(out, result);
  } else {
    write_summary(out, result);
  }
  out.flush();
  if (!out) {
    throw std::runtime_error("error writing report " + path.string());
  }
}

RunSummary summarize(const SimResult& r, std::string label) {
  RunSummary s;
  s.label = label.empty() ? r.workload + "/" + r.policy : std::move(label);
  s.workload = r.workload;
  s.policy = r.policy;
  s.ops_per_second = r.ops_per_second;
  s.total_ops_per_second = r.total_ops_per_second;
  s.nvcache_hit_ratio = r.nvcache_hit_ratio;
  s.dram_bytes = r.dram_bytes;
  s.nvram_bytes = r.nvram_bytes;
  return s;
}

RunSummary read_summary_csv(std::istream& in, std::string label) {
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error(label + ": empty report");
  }
  const auto header = split_csv(line);
  if (header != csv_columns()) {
    throw std::runtime_error(label + ": unexpected CSV header");
  }
  auto col = [&](std::string_view name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    throw std::logic_error("missing column");
  };
  while (std::getline(in, line)) {
    auto cells = split_csv(line);
    if (cells.size() != header.size() || cells[0] != "summary") {
      continue;
    }
    try {
      RunSummary s;
      s.label = label;
      s.workload = cells[col("workload")];
      s.policy = cells[col("policy")];
      for (std::size_t k = 0; k < kOpKindCount; ++k) {
        s.ops_per_second[k] = std::stod(cells[col(std::string(kKindColumns[k]) + "_ops_per_sec")]);
      }
      s.total_ops_per_second = std::stod(cells[col("ops_per_sec")]);
      s.nvcache_hit_ratio = std::stod(cells[col("nvcache_hit_ratio")]);
      s.dram_bytes = std::stoull(cells[col("dram_bytes")]);
      s.nvram_bytes = std::stoull(cells[col("nvram_bytes")]);
      return s;
    } catch (const std::logic_error&) {
      throw std::runtime_error(label + ": malformed summary row");
    }
  }
  throw std::runtime_error(label + ": no summary row");
}

RunSummary read_summary_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open report " + path.string());
  }
  return read_summary_csv(in, path.string());
}

double relative_memory_cost(std::uint64_t dram_bytes, std::uint64_t nvram_bytes,
                            std::uint64_t baseline_dram_bytes, std::uint64_t baseline_nvram_bytes,
                            double cost_ratio) {
  const double cost = static_cast<double>(dram_bytes) + cost_ratio * static_cast<double>(nvram_bytes);
  const double base = static_cast<double>(baseline_dram_bytes) +
                      cost_ratio * static_cast<double>(baseline_nvram_bytes);
  if (!(base > 0.0)) {
    throw std::invalid_argument("baseline memory cost must be positive");
  }
  return cost / base;
}

std::vector<ComparisonRow> compare(const std::vector<RunSummary>& results,
                                   std::size_t baseline_index, double cost_ratio) {
  if (baseline_index >= results.size()) {
    throw std::invalid_argument("baseline index out of range");
  }
  const auto& base = results[baseline_index];
  for (const auto& r : results) {
    if (r.workload != base.workload) {
      throw std::invalid_argument("cannot compare runs of different workloads ('" + r.workload +
                                  "' vs baseline '" + base.workload + "')");
    }
  }
  std::vector<ComparisonRow> rows;
  for (const auto& r : results) {
    ComparisonRow row;
    row.label = r.label;
    row.policy = r.policy;
    for (std::size_t k = 0; k < kOpKindCount; ++k) {
      row.throughput_ratio[k] = base.ops_per_second[k] > 0.0
                                    ? r.ops_per_second[k] / base.ops_per_second[k]
                                    : std::numeric_limits<double>::quiet_NaN();
    }
    row.total_ratio = base.total_ops_per_second > 0.0
                          ? r.total_ops_per_second / base.total_ops_per_second
                          : std::numeric_limits<double>::quiet_NaN();
    row.relative_cost =
        relative_memory_cost(r.dram_bytes, r.nvram_bytes, base.dram_bytes, base.nvram_bytes,
                             cost_ratio);
    row.perf_per_cost = row.total_ratio / row.relative_cost;
    rows.push_back(row);
  }
  return rows;
}

void write_comparison(std::ostream& out, const std::vector<ComparisonRow>& rows) {
  out << "label,policy,read_ratio,update_ratio,insert_ratio,scan_ratio,total_ratio,"
         "relative_cost,perf_per_cost\n";
  for (const auto& r : rows) {
    out << r.label << ',' << r.policy;
    for (double v : r.throughput_ratio) {
      out << ',' << (std::isnan(v) ? std::string() : fmt_double(v));
    }
    out << ',' << fmt_double(r.total_ratio) << ',';
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", r.relative_cost);
    out << buf << ',' << fmt_double(r.perf_per_cost) << '\n';
  }
}

}  // namespace nvcache
