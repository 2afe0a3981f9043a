#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "doctest.h"
#include "nvcache/device.hpp"

using namespace nvcache;

namespace {

// Independent piecewise-linear evaluation used as the oracle.
double lerp_oracle(const std::vector<BandwidthPoint>& pts, double w) {
  if (w <= pts.front().first) return pts.front().second;
  if (w >= pts.back().first) return pts.back().second;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const auto [x1, y1] = pts[i];
    const auto [x0, y0] = pts[i - 1];
    if (w <= x1) return y0 + (y1 - y0) * (w - x0) / (x1 - x0);
  }
  return pts.back().second;
}

}  // namespace

TEST_CASE("calibration points are reproduced exactly") {
  const auto nv = default_nvram_profile();
  CHECK(read_bandwidth(nv, 0) == 12.0);
  CHECK(read_bandwidth(nv, 1) == 3.4);
  CHECK(read_bandwidth(nv, 8) == 0.8);
  CHECK(write_bandwidth(nv, 1) == 2.0);
  CHECK(write_bandwidth(nv, 8) == 1.6);
  CHECK(nv.per_removal_write_bytes == 256);

  const auto dram = default_dram_profile();
  CHECK(read_bandwidth(dram, 0) == 60.0);
  CHECK(read_bandwidth(dram, 1) == doctest::Approx(0.82 * 60.0));
  CHECK(read_bandwidth(dram, 8) == doctest::Approx(0.65 * 60.0));

  const auto ssd = default_ssd_profile();
  CHECK(read_bandwidth(ssd, 0) == 2.5);
  CHECK(read_bandwidth(ssd, 50) == 2.5);
  CHECK(write_bandwidth(ssd, 3) == 2.2);
}

TEST_CASE("interpolation between and beyond points") {
  const auto nv = default_nvram_profile();
  // 3.4 + (0.8 - 3.4) * 3 / 7
  CHECK(read_bandwidth(nv, 4) == doctest::Approx(2.2857142857142856).epsilon(1e-12));
  CHECK(read_bandwidth(nv, 20) == 0.8);
  CHECK(write_bandwidth(nv, 0) == 2.0);
  for (int w = 0; w <= 16; ++w) {
    CHECK(read_bandwidth(nv, w) == doctest::Approx(lerp_oracle(nv.read_points, w)));
    CHECK(write_bandwidth(nv, w) == doctest::Approx(lerp_oracle(nv.write_points, w)));
  }
  CHECK_THROWS_AS(read_bandwidth(nv, -1), std::invalid_argument);
}

TEST_CASE("access cost") {
  const auto ssd = default_ssd_profile();
  CHECK(access_cost(ssd, AccessKind::read, 2'500'000'000ULL, 0) == doctest::Approx(1.0));
  CHECK(access_cost(ssd, AccessKind::write, 2'200'000'000ULL, 1) == doctest::Approx(1.0));

  const auto dram = default_dram_profile();
  const auto bytes = 64ULL * 1024 * 1024;
  CHECK(access_cost(dram, AccessKind::read, bytes, 8) ==
        doctest::Approx(access_cost(dram, AccessKind::read, bytes, 0) / 0.65));

  const auto nv = default_nvram_profile();
  // Additive in bytes.
  for (int w = 0; w <= 8; ++w) {
    CHECK(access_cost(nv, AccessKind::read, 3000, w) ==
          doctest::Approx(access_cost(nv, AccessKind::read, 1000, w) +
                          access_cost(nv, AccessKind::read, 2000, w)));
  }
  CHECK(access_cost(nv, AccessKind::read, 0, 4) == 0.0);
}

TEST_CASE("bandwidth never increases with writers") {
  const DeviceSet set;
  for (auto d : {Device::nvram, Device::dram, Device::ssd}) {
    for (int w = 0; w < 32; ++w) {
      CHECK(read_bandwidth(set[d], w + 1) <= read_bandwidth(set[d], w));
      CHECK(write_bandwidth(set[d], w + 1) <= write_bandwidth(set[d], w));
    }
  }
}

TEST_CASE("writers harm NVRAM reads more than DRAM reads") {
  const auto nv = default_nvram_profile();
  const auto dram = default_dram_profile();
  CHECK(read_loss(nv, 0) == 0.0);
  for (int w = 1; w <= 8; ++w) {
    CHECK(read_loss(nv, w) > read_loss(dram, w));
  }
  CHECK(read_loss(dram, 1) == doctest::Approx(0.18));
}

TEST_CASE("profile validation") {
  DeviceProfile p;
  p.read_points = {{0, 1.0}, {4, 2.0}};
  p.write_points = {{0, 1.0}};
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.read_points = {{4, 1.0}, {0, 2.0}};
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.read_points = {{0, -1.0}};
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.read_points = {};
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.read_points = {{0, 2.0}, {4, 1.0}};
  CHECK_NOTHROW(p.validate());
}

TEST_CASE("device set from JSON") {
  const auto set = DeviceSet::from_json_text(R"({
    "nvram": {"read_points": [[0, 10], [2, 5]], "per_removal_write_bytes": 512},
    "dram": {"base_read_bandwidth": 100}
  })");
  CHECK(read_bandwidth(set[Device::nvram], 1) == doctest::Approx(7.5));
  CHECK(set[Device::nvram].per_removal_write_bytes == 512);
  CHECK(write_bandwidth(set[Device::nvram], 8) == 1.6);
  CHECK(read_bandwidth(set[Device::dram], 0) == 100.0);
  CHECK(read_bandwidth(set[Device::ssd], 0) == 2.5);

  CHECK_THROWS_AS(DeviceSet::from_json_text("{"), std::invalid_argument);
  CHECK_THROWS_AS(DeviceSet::from_json_text("[]"), std::invalid_argument);
  CHECK_THROWS_AS(DeviceSet::from_json_text(R"({"ssd": 3})"), std::invalid_argument);
  CHECK_THROWS_AS(DeviceSet::from_json_text(R"({"ssd": {"read_points": [[0, 1], [1, 2]]}})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(DeviceSet::load("/nonexistent/devices.json"), std::runtime_error);

  const auto path = std::filesystem::temp_directory_path() / "nvcache_devices_test.json";
  {
    std::ofstream out(path);
    out << R"({"ssd": {"read_points": [[0, 5]]}})";
  }
  CHECK(read_bandwidth(DeviceSet::load(path)[Device::ssd], 0) == 5.0);
  std::filesystem::remove(path);
}

TEST_CASE("device clock tracks writers") {
  DeviceClock clock;
  clock.begin_write(Device::nvram);
  clock.begin_write(Device::nvram);
  CHECK(clock.writers(Device::nvram) == 2);
  CHECK(clock.writers(Device::ssd) == 0);
  clock.end_write(Device::nvram);
  clock.end_write(Device::nvram);
  CHECK_THROWS_AS(clock.end_write(Device::nvram), std::logic_error);
  clock.advance_to(5.0);
  CHECK(clock.now == 5.0);
}
