#include "nvcache/workload.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "nvcache/units.hpp"

namespace nvcache {

double OpMix::fraction(OpKind k) const {
  switch (k) {
    case OpKind::read: return read;
    case OpKind::update: return update;
    case OpKind::insert: return insert;
    case OpKind::scan: return scan;
  }
  return 0.0;
}

void WorkloadSpec::validate() const {
  for (double f : {op_mix.read, op_mix.update, op_mix.insert, op_mix.scan}) {
    if (f < 0.0) {
      throw std::invalid_argument("workload '" + name + "': negative op fraction");
    }
  }
  if (std::abs(op_mix.total() - 1.0) > 1e-9) {
    throw std::invalid_argument("workload '" + name + "': op fractions must sum to 1");
  }
  if (thread_count < 1) {
    throw std::invalid_argument("workload '" + name + "': thread_count must be >= 1");
  }
  if (!(duration > 0.0)) {
    throw std::invalid_argument("workload '" + name + "': duration must be positive");
  }
  if (block_size == 0) {
    throw std::invalid_argument("workload '" + name + "': block_size must be positive");
  }
  if (record_count == 0 && op_mix.insert < 1.0) {
    throw std::invalid_argument("workload '" + name + "': record_count must be positive");
  }
  if (op_mix.scan > 0.0 && scan_length == 0) {
    throw std::invalid_argument("workload '" + name + "': scan_length must be positive");
  }
  if (key_distribution.kind != KeyDistributionKind::uniform && !(key_distribution.theta > 0.0)) {
    throw std::invalid_argument("workload '" + name + "': zipfian theta must be positive");
  }
}

ZipfianSampler::ZipfianSampler(double theta) : theta_(theta) {}

void ZipfianSampler::extend(std::uint64_t n) {
  cumulative_.reserve(n);
  double sum = cumulative_.empty() ? 0.0 : cumulative_.back();
  for (std::uint64_t i = cumulative_.size(); i < n; ++i) {
    sum += 1.0 / std::pow(static_cast<double>(i + 1), theta_);
    cumulative_.push_back(sum);
  }
}

std::uint64_t ZipfianSampler::sample(std::uint64_t n, double u) {
  if (n == 0) {
    throw std::invalid_argument("cannot sample from an empty key space");
  }
  if (cumulative_.size() < n) {
    extend(n);
  }
  const double x = u * cumulative_[n - 1];
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.begin() + n, x);
  return std::min<std::uint64_t>(static_cast<std::uint64_t>(it - cumulative_.begin()), n - 1);
}

std::uint64_t thread_seed(std::uint64_t seed, int thread) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(thread)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

WorkloadGenerator::WorkloadGenerator(const WorkloadSpec& spec, std::uint64_t seed)
    : spec_(spec), rng_(seed), zipf_(spec.key_distribution.theta) {}

std::uint64_t WorkloadGenerator::draw_key(std::uint64_t n) {
  const double u = unit_draw(rng_);
  switch (spec_.key_distribution.kind) {
    case KeyDistributionKind::uniform:
      return std::min<std::uint64_t>(static_cast<std::uint64_t>(u * static_cast<double>(n)), n - 1);
    case KeyDistributionKind::zipfian:
      return zipf_.sample(n, u);
    case KeyDistributionKind::latest:
      return n - 1 - zipf_.sample(n, u);
  }
  return 0;
}

Operation WorkloadGenerator::next_op(std::uint64_t record_count) {
  const double u = unit_draw(rng_);
  const auto& mix = spec_.op_mix;
  OpKind kind;
  if (u < mix.read) {
    kind = OpKind::read;
  } else if (u < mix.read + mix.update) {
    kind = OpKind::update;
  } else if (u < mix.read + mix.update + mix.insert) {
    kind = OpKind::insert;
  } else if (mix.scan > 0.0) {
    kind = OpKind::scan;
  } else {
    // Rounding left a sliver above the listed fractions; give it to the
    // largest one.
    kind = OpKind::read;
    double best = mix.read;
    for (auto k : {OpKind::update, OpKind::insert}) {
      if (mix.fraction(k) > best) {
        best = mix.fraction(k);
        kind = k;
      }
    }
  }
  if (kind == OpKind::insert || record_count == 0) {
    return {OpKind::insert, record_count};
  }
  return {kind, draw_key(record_count)};
}

namespace {

struct PresetRow {
  const char* name;
  OpMix mix;
  int threads;
  double full_size_gb;
  KeyDistribution dist;
};

constexpr KeyDistribution kZipf{KeyDistributionKind::zipfian, 0.99};
constexpr KeyDistribution kLatest{KeyDistributionKind::latest, 0.99};
constexpr KeyDistribution kUniform{KeyDistributionKind::uniform, 0.99};

// YCSB mixes and dataset sizes as evaluated, plus in-house workloads with the
// same op mix and thread count as their large-workload counterparts.
const PresetRow kPresetRows[] = {
    {"ycsb-a", {0.5, 0.5, 0.0, 0.0}, 20, 130.0, kZipf},
    // Same mix as ycsb-a, not the stock 95/5 read/update mix.
    {"ycsb-b", {0.5, 0.5, 0.0, 0.0}, 20, 194.0, kZipf},
    {"ycsb-c", {1.0, 0.0, 0.0, 0.0}, 20, 259.0, kZipf},
    {"ycsb-d", {0.95, 0.0, 0.05, 0.0}, 100, 219.0, kLatest},
    {"ycsb-e", {0.0, 0.0, 0.05, 0.95}, 20, 210.0, kZipf},
    // evict-btree-large
    {"read-only-large", {1.0, 0.0, 0.0, 0.0}, 16, 120.0, kZipf},
    // chkpt-stress-lg
    {"update-only", {0.0, 1.0, 0.0, 0.0}, 6, 134.0, kUniform},
    // 500m-btree-50r50u
    {"mixed-50r50u", {0.5, 0.5, 0.0, 0.0}, 20, 163.0, kUniform},
    // evict-bt-stress-multi-lg
    {"stress-multi", {0.8, 0.2, 0.0, 0.0}, 100, 250.0, kUniform},
};

WorkloadSpec make_preset(const PresetRow& row, double scale) {
  WorkloadSpec s;
  s.name = row.name;
  s.op_mix = row.mix;
  s.thread_count = row.threads;
  s.key_distribution = row.dist;
  s.nominal_dataset_bytes = static_cast<std::uint64_t>(std::llround(row.full_size_gb * 1e9 * scale));
  s.record_count = std::max<std::uint64_t>(1, s.nominal_dataset_bytes / s.block_size);
  return s;
}

KeyDistributionKind parse_distribution(std::string_view text) {
  if (text == "uniform") return KeyDistributionKind::uniform;
  if (text == "zipfian" || text == "zipf") return KeyDistributionKind::zipfian;
  if (text == "latest") return KeyDistributionKind::latest;
  throw std::invalid_argument("unknown key distribution '" + std::string(text) + "'");
}

std::uint64_t json_bytes(const nlohmann::json& v) {
  if (v.is_string()) {
    return parse_bytes(v.get<std::string>());
  }
  if (v.is_number_unsigned() || v.is_number_integer()) {
    return v.get<std::uint64_t>();
  }
  throw std::invalid_argument("expected a byte quantity");
}

}  // namespace

std::vector<WorkloadSpec> presets(double scale) {
  if (!(scale > 0.0)) {
    throw std::invalid_argument("scale factor must be positive");
  }
  std::vector<WorkloadSpec> out;
  for (const auto& row : kPresetRows) {
    out.push_back(make_preset(row, scale));
  }
  return out;
}

WorkloadSpec preset(std::string_view name, double scale) {
  for (auto& s : presets(scale)) {
    if (s.name == name) {
      return s;
    }
  }
  throw std::invalid_argument("unknown workload preset '" + std::string(name) + "'");
}

WorkloadSpec workload_from_json_text(std::string_view text, double scale) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("workload config: ") + e.what());
  }
  if (!doc.is_object()) {
    throw std::invalid_argument("workload config: top level must be an object");
  }

  try {
    WorkloadSpec s;
    if (doc.contains("base")) {
      s = preset(doc.at("base").get<std::string>(), scale);
    }
    if (doc.contains("name")) s.name = doc.at("name").get<std::string>();
    if (doc.contains("op_mix")) {
      const auto& m = doc.at("op_mix");
      s.op_mix = OpMix{m.value("read", 0.0), m.value("update", 0.0), m.value("insert", 0.0),
                       m.value("scan", 0.0)};
    }
    if (doc.contains("threads")) s.thread_count = doc.at("threads").get<int>();
    if (doc.contains("block_size")) {
      s.block_size = static_cast<std::uint32_t>(json_bytes(doc.at("block_size")));
      if (s.nominal_dataset_bytes > 0 && s.block_size > 0) {
        s.record_count = std::max<std::uint64_t>(1, s.nominal_dataset_bytes / s.block_size);
      }
    }
    if (doc.contains("dataset")) {
      s.nominal_dataset_bytes = json_bytes(doc.at("dataset"));
      if (s.block_size > 0) {
        s.record_count = std::max<std::uint64_t>(1, s.nominal_dataset_bytes / s.block_size);
      }
    }
    if (doc.contains("record_count")) {
      s.record_count = doc.at("record_count").get<std::uint64_t>();
      s.nominal_dataset_bytes = s.record_count * s.block_size;
    }
    if (doc.contains("distribution")) {
      s.key_distribution.kind = parse_distribution(doc.at("distribution").get<std::string>());
    }
    if (doc.contains("theta")) s.key_distribution.theta = doc.at("theta").get<double>();
    if (doc.contains("duration")) s.duration = doc.at("duration").get<double>();
    if (doc.contains("populate")) s.populate = doc.at("populate").get<bool>();
    if (doc.contains("scan_length")) s.scan_length = doc.at("scan_length").get<std::uint64_t>();
    if (s.name.empty()) s.name = "custom";
    s.validate();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("workload config: ") + e.what());
  }
}

WorkloadSpec load_workload(const std::filesystem::path& path, double scale) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open workload config " + path.string());
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return workload_from_json_text(ss.str(), scale);
}

std::string_view to_string(OpKind k) {
  switch (k) {
    case OpKind::read: return "read";
    case OpKind::update: return "update";
    case OpKind::insert: return "insert";
    case OpKind::scan: return "scan";
  }
  return "?";
}

OpKind parse_op_kind(std::string_view text) {
  if (text == "read") return OpKind::read;
  if (text == "update") return OpKind::update;
  if (text == "insert") return OpKind::insert;
  if (text == "scan") return OpKind::scan;
  throw std::invalid_argument("unknown operation kind '" + std::string(text) + "'");
}

std::string_view to_string(KeyDistributionKind k) {
  switch (k) {
    case KeyDistributionKind::uniform: return "uniform";
    case KeyDistributionKind::zipfian: return "zipfian";
    case KeyDistributionKind::latest: return "latest";
  }
  return "?";
}

}  // namespace nvcache
