#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nvcache {

enum class Device : std::size_t { nvram = 0, dram = 1, ssd = 2 };
inline constexpr std::size_t kDeviceCount = 3;

enum class AccessKind { read, write };

// (active writers, GB/s)
using BandwidthPoint = std::pair<int, double>;

// Bandwidth calibration for one device. Between points bandwidth is linear in
// the writer count; below the first and beyond the last point it is flat.
struct DeviceProfile {
  Device device = Device::ssd;
  std::vector<BandwidthPoint> read_points;
  std::vector<BandwidthPoint> write_points;
  // Device bytes written per cache removal (allocator metadata).
  std::uint32_t per_removal_write_bytes = 0;

  // Throws std::invalid_argument unless the points are sorted by writer
  // count, bandwidths are positive, and non-increasing.
  void validate() const;
};

double read_bandwidth(const DeviceProfile& profile, int active_writers);
double write_bandwidth(const DeviceProfile& profile, int active_writers);

// Service time in seconds for moving `bytes`, priced at the given writer
// count.
double access_cost(const DeviceProfile& profile, AccessKind kind, std::uint64_t bytes,
                   int active_writers);

// Fraction of the zero-writer read bandwidth lost with `active_writers`.
double read_loss(const DeviceProfile& profile, int active_writers);

DeviceProfile default_nvram_profile();
// `base_read_gbps` is the zero-writer DRAM read bandwidth.
DeviceProfile default_dram_profile(double base_read_gbps = 60.0);
DeviceProfile default_ssd_profile();

class DeviceSet {
 public:
  DeviceSet();
  DeviceSet(DeviceProfile nvram, DeviceProfile dram, DeviceProfile ssd);

  const DeviceProfile& operator[](Device d) const { return profiles_[static_cast<std::size_t>(d)]; }
  DeviceProfile& operator[](Device d) { return profiles_[static_cast<std::size_t>(d)]; }

  // JSON document with optional "nvram", "dram", "ssd" objects. Each may set
  // "read_points" and "write_points" as [[writers, GBps], ...] and
  // "per_removal_write_bytes"; "dram" also accepts "base_read_bandwidth",
  // which rebuilds its default curve around that bandwidth. Unset fields keep
  // their defaults.
  static DeviceSet from_json_text(std::string_view text);
  static DeviceSet load(const std::filesystem::path& path);

 private:
  std::array<DeviceProfile, kDeviceCount> profiles_;
};

// Simulated time plus the number of writers currently active on each device.
struct DeviceClock {
  double now = 0.0;
  std::array<int, kDeviceCount> in_flight_writers{};

  int writers(Device d) const { return in_flight_writers[static_cast<std::size_t>(d)]; }
  void advance_to(double t);
  void begin_write(Device d) { ++in_flight_writers[static_cast<std::size_t>(d)]; }
  void end_write(Device d);
};

std::string_view to_string(Device d);

}  // namespace nvcache
