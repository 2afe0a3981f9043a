#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace nvcache {

enum class OpKind { read = 0, update = 1, insert = 2, scan = 3 };
inline constexpr std::size_t kOpKindCount = 4;

struct OpMix {
  double read = 0.0;
  double update = 0.0;
  double insert = 0.0;
  double scan = 0.0;

  double fraction(OpKind k) const;
  double total() const { return read + update + insert + scan; }
};

enum class KeyDistributionKind { uniform, zipfian, latest };

struct KeyDistribution {
  KeyDistributionKind kind = KeyDistributionKind::uniform;
  double theta = 0.99;
};

struct WorkloadSpec {
  std::string name;
  OpMix op_mix;
  int thread_count = 1;
  std::uint64_t record_count = 0;
  std::uint32_t block_size = 16 * 1024;
  KeyDistribution key_distribution;
  // Virtual seconds of measured run.
  double duration = 300.0;
  bool populate = true;
  std::uint64_t scan_length = 100;
  // Size the workload was derived from, for reporting. record_count * block_size
  // is the authoritative dataset size.
  std::uint64_t nominal_dataset_bytes = 0;

  std::uint64_t dataset_bytes() const { return record_count * block_size; }
  // Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
};

struct Operation {
  OpKind kind = OpKind::read;
  std::uint64_t key = 0;

  friend bool operator==(const Operation&, const Operation&) = default;
};

// Exact Zipf sampler over ranks [0, n) with P(rank i) proportional to
// 1 / (i + 1)^theta. The cumulative table grows as the key space grows.
class ZipfianSampler {
 public:
  explicit ZipfianSampler(double theta);

  // `u` in [0, 1).
  std::uint64_t sample(std::uint64_t n, double u);
  double theta() const { return theta_; }

 private:
  void extend(std::uint64_t n);

  double theta_;
  std::vector<double> cumulative_;
};

// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw. Used instead
// of std::uniform_real_distribution so streams are identical across standard
// library implementations.
inline double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Deterministic operation stream for one workload. Each simulated thread owns
// its own generator seeded from (seed, thread index).
class WorkloadGenerator {
 public:
  WorkloadGenerator(const WorkloadSpec& spec, std::uint64_t seed);

  // Draws the next operation against a key space of `record_count` records.
  // Insert operations carry the key the new record will receive.
  Operation next_op(std::uint64_t record_count);

  const WorkloadSpec& spec() const { return spec_; }

 private:
  std::uint64_t draw_key(std::uint64_t n);

  WorkloadSpec spec_;
  std::mt19937_64 rng_;
  ZipfianSampler zipf_;
};

std::uint64_t thread_seed(std::uint64_t seed, int thread);

inline constexpr double kDefaultScale = 1.0 / 1000.0;

// Built-in workloads with dataset sizes multiplied by `scale`.
std::vector<WorkloadSpec> presets(double scale = kDefaultScale);
// Throws std::invalid_argument for an unknown name.
WorkloadSpec preset(std::string_view name, double scale = kDefaultScale);

// Loads a JSON workload document. A "base" key names a preset to start from;
// the remaining keys override it. Byte quantities accept k/M/G suffixes.
WorkloadSpec workload_from_json_text(std::string_view text, double scale = kDefaultScale);
WorkloadSpec load_workload(const std::filesystem::path& path, double scale = kDefaultScale);

std::string_view to_string(OpKind k);
OpKind parse_op_kind(std::string_view text);
std::string_view to_string(KeyDistributionKind k);

}  // namespace nvcache
