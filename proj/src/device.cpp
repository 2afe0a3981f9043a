#include "nvcache/device.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "nvcache/units.hpp"

namespace nvcache {

namespace {

void validate_points(const std::vector<BandwidthPoint>& points, std::string_view what) {
  if (points.empty()) {
    throw std::invalid_argument(std::string(what) + ": at least one calibration point required");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].first < 0 || !(points[i].second > 0.0)) {
      throw std::invalid_argument(std::string(what) + ": writers must be >= 0 and bandwidth > 0");
    }
    if (i > 0) {
      if (points[i].first <= points[i - 1].first) {
        throw std::invalid_argument(std::string(what) + ": points must be sorted by writer count");
      }
      if (points[i].second > points[i - 1].second) {
        throw std::invalid_argument(std::string(what) + ": bandwidth must not increase with writers");
      }
    }
  }
}

double interpolate(const std::vector<BandwidthPoint>& points, int writers) {
  if (writers <= points.front().first) {
    return points.front().second;
  }
  if (writers >= points.back().first) {
    return points.back().second;
  }
  for (std::size_t i = 1; i < points.size(); ++i) {
    const auto [x1, y1] = points[i];
    if (writers == x1) {
      return y1;
    }
    if (writers < x1) {
      const auto [x0, y0] = points[i - 1];
      const double t = static_cast<double>(writers - x0) / static_cast<double>(x1 - x0);
      return y0 + (y1 - y0) * t;
    }
  }
  return points.back().second;
}

}  // namespace

void DeviceProfile::validate() const {
  validate_points(read_points, std::string(to_string(device)) + " read_points");
  validate_points(write_points, std::string(to_string(device)) + " write_points");
}

double read_bandwidth(const DeviceProfile& profile, int active_writers) {
  if (active_writers < 0) {
    throw std::invalid_argument("active_writers must be non-negative");
  }
  return interpolate(profile.read_points, active_writers);
}

double write_bandwidth(const DeviceProfile& profile, int active_writers) {
  if (active_writers < 0) {
    throw std::invalid_argument("active_writers must be non-negative");
  }
  return interpolate(profile.write_points, active_writers);
}

double access_cost(const DeviceProfile& profile, AccessKind kind, std::uint64_t bytes,
                   int active_writers) {
  const double gbps = kind == AccessKind::read ? read_bandwidth(profile, active_writers)
                                               : write_bandwidth(profile, active_writers);
  return static_cast<double>(bytes) / (gbps * kBytesPerGB);
}

double read_loss(const DeviceProfile& profile, int active_writers) {
  return 1.0 - read_bandwidth(profile, active_writers) / read_bandwidth(profile, 0);
}

DeviceProfile default_nvram_profile() {
  DeviceProfile p;
  p.device = Device::nvram;
  p.read_points = {{0, 12.0}, {1, 3.4}, {8, 0.8}};
  p.write_points = {{1, 2.0}, {8, 1.6}};
  p.per_removal_write_bytes = 256;
  return p;
}

DeviceProfile default_dram_profile(double base_read_gbps) {
  DeviceProfile p;
  p.device = Device::dram;
  p.read_points = {{0, base_read_gbps}, {1, 0.82 * base_read_gbps}, {8, 0.65 * base_read_gbps}};
  p.write_points = {{0, 0.5 * base_read_gbps}};
  return p;
}

DeviceProfile default_ssd_profile() {
  DeviceProfile p;
  p.device = Device::ssd;
  p.read_points = {{0, 2.5}};
  p.write_points = {{0, 2.2}};
  return p;
}

DeviceSet::DeviceSet()
    : DeviceSet(default_nvram_profile(), default_dram_profile(), default_ssd_profile()) {}

DeviceSet::DeviceSet(DeviceProfile nvram, DeviceProfile dram, DeviceProfile ssd) {
  nvram.device = Device::nvram;
  dram.device = Device::dram;
  ssd.device = Device::ssd;
  profiles_ = {std::move(nvram), std::move(dram), std::move(ssd)};
  for (const auto& p : profiles_) {
    p.validate();
  }
}

DeviceSet DeviceSet::from_json_text(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("device config: ") + e.what());
  }
  if (!doc.is_object()) {
    throw std::invalid_argument("device config: top level must be an object");
  }

  auto points = [](const nlohmann::json& arr, std::string_view what) {
    std::vector<BandwidthPoint> out;
    if (!arr.is_array()) {
      throw std::invalid_argument("device config: " + std::string(what) + " must be an array");
    }
    for (const auto& p : arr) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number()) {
        throw std::invalid_argument("device config: " + std::string(what) +
                                    " entries must be [writers, GBps]");
      }
      out.emplace_back(p[0].get<int>(), p[1].get<double>());
    }
    return out;
  };

  DeviceProfile nvram = default_nvram_profile();
  DeviceProfile dram = default_dram_profile();
  DeviceProfile ssd = default_ssd_profile();
  for (auto [name, profile] : {std::pair<const char*, DeviceProfile*>{"nvram", &nvram},
                               {"dram", &dram},
                               {"ssd", &ssd}}) {
    if (!doc.contains(name)) {
      continue;
    }
    const auto& obj = doc.at(name);
    if (!obj.is_object()) {
      throw std::invalid_argument(std::string("device config: '") + name + "' must be an object");
    }
    if (profile == &dram && obj.contains("base_read_bandwidth")) {
      *profile = default_dram_profile(obj.at("base_read_bandwidth").get<double>());
    }
    if (obj.contains("read_points")) {
      profile->read_points = points(obj.at("read_points"), "read_points");
    }
    if (obj.contains("write_points")) {
      profile->write_points = points(obj.at("write_points"), "write_points");
    }
    if (obj.contains("per_removal_write_bytes")) {
      const auto& v = obj.at("per_removal_write_bytes");
      profile->per_removal_write_bytes = static_cast<std::uint32_t>(
          v.is_string() ? parse_bytes(v.get<std::string>()) : v.get<std::uint64_t>());
    }
  }
  return DeviceSet(std::move(nvram), std::move(dram), std::move(ssd));
}

DeviceSet DeviceSet::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open device config " + path.string());
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

void DeviceClock::advance_to(double t) {
  if (t > now) {
    now = t;
  }
}

void DeviceClock::end_write(Device d) {
  auto& w = in_flight_writers[static_cast<std::size_t>(d)];
  if (w <= 0) {
    throw std::logic_error("device writer count underflow");
  }
  --w;
}

std::string_view to_string(Device d) {
  switch (d) {
    case Device::nvram: return "nvram";
    case Device::dram: return "dram";
    case Device::ssd: return "ssd";
  }
  return "?";
}

}  // namespace nvcache
