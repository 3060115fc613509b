#pragma once

// Point-source P/S travel times and the drill countdown.

#include <string>
#include <vector>

#include "shakedrill/gm_field.hpp"

namespace shakedrill {

struct RuptureScenario {
  std::string name;
  SitePoint epicenter;
  double origin_time_s = 0.0;
  double p_speed_kms = 6.0;
  double s_speed_kms = 3.2;
  double alert_latency_s = 5.0;
};

/// Throws Error{InvalidConfig} unless p_speed > s_speed > 0 and latency >= 0.
void validate(const RuptureScenario& sc);

struct WarningEstimate {
  double distance_km = 0.0;
  double p_arrival_s = 0.0;
  double s_arrival_s = 0.0;
  /// S-wave delay after origin minus alert latency. Negative means the
  /// alert cannot arrive before strong shaking.
  double warning_time_s = 0.0;

  friend bool operator==(const WarningEstimate&, const WarningEstimate&) = default;
};

WarningEstimate arrival_times(const RuptureScenario& sc, const SitePoint& site);
WarningEstimate arrival_times_at_distance(const RuptureScenario& sc, double distance_km);

/// max(warning - k * tick, 0) for k = 0, 1, ... through the first zero.
/// Throws Error{InvalidTick} for a non-positive tick or an absurdly long track.
std::vector<double> countdown_track(const WarningEstimate& est, double tick_s);

}  // namespace shakedrill
