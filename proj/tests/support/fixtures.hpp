#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "shakedrill/timeseries.hpp"

namespace fixtures {

inline std::filesystem::path dir() { return SHAKEDRILL_FIXTURE_DIR; }
inline std::filesystem::path demo_manifest() { return dir() / "shakeout_demo" / "manifest.json"; }
inline std::filesystem::path palm_manifest() { return dir() / "palm_springs" / "manifest.json"; }
inline std::filesystem::path records_manifest() { return dir() / "records_demo" / "manifest.json"; }
inline std::filesystem::path library() { return dir() / "fragility_library.json"; }

// Palm Springs site, the centre node of the palm_springs grid.
inline constexpr double kPalmLon = -116.55;
inline constexpr double kPalmLat = 33.83;
// South-west corner of the demo grid, where every IM is zero.
inline constexpr double kZeroLon = -118.95;
inline constexpr double kZeroLat = 33.05;

inline std::string read(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write(const std::filesystem::path& p, const std::string& text) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

/// Unique scratch directory under the system temp dir.
inline std::filesystem::path scratch(const std::string& name) {
  static std::mt19937_64 gen{std::random_device{}()};
  auto p = std::filesystem::temp_directory_path() / ("shakedrill_" + name + "_" + std::to_string(gen()));
  std::filesystem::create_directories(p);
  return p;
}

/// a_g(t) = amp * sin(2 pi t / period), n samples.
inline shakedrill::AccelTimeSeries sine(double amp_g, double period_s, double duration_s, double dt) {
  const auto n = static_cast<std::size_t>(std::llround(duration_s / dt)) + 1;
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = amp_g * std::sin(2.0 * std::numbers::pi * i * dt / period_s);
  return shakedrill::AccelTimeSeries(dt, std::move(s), "sine");
}

/// The resonance fixture: 0.1 g sine at T = 1 s, 40 s long, dt = 0.005 s.
inline shakedrill::AccelTimeSeries resonance(double dt = 0.005) { return sine(0.1, 1.0, 40.0, dt); }

}  // namespace fixtures
