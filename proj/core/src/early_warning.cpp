#include "shakedrill/early_warning.hpp"

#include <cmath>

#include "shakedrill/error.hpp"

namespace shakedrill {

namespace {
constexpr std::size_t kMaxTicks = 1'000'000;
}

void validate(const RuptureScenario& sc) {
  if (!is_valid_site(sc.epicenter)) throw Error(ErrorKind::InvalidConfig, "epicenter out of range");
  if (!std::isfinite(sc.origin_time_s)) throw Error(ErrorKind::InvalidConfig, "origin time must be finite");
  if (!(std::isfinite(sc.p_speed_kms) && std::isfinite(sc.s_speed_kms) && sc.s_speed_kms > 0.0 &&
        sc.p_speed_kms > sc.s_speed_kms))
    throw Error(ErrorKind::InvalidConfig, "wave speeds must satisfy p_speed > s_speed > 0");
  if (!(std::isfinite(sc.alert_latency_s) && sc.alert_latency_s >= 0.0))
    throw Error(ErrorKind::InvalidConfig, "alert latency must be >= 0");
}

WarningEstimate arrival_times_at_distance(const RuptureScenario& sc, double distance_km) {
  WarningEstimate w;
  w.distance_km = distance_km;
  w.p_arrival_s = sc.origin_time_s + distance_km / sc.p_speed_kms;
  w.s_arrival_s = sc.origin_time_s + distance_km / sc.s_speed_kms;
  w.warning_time_s = w.s_arrival_s - sc.origin_time_s - sc.alert_latency_s;
  return w;
}

WarningEstimate arrival_times(const RuptureScenario& sc, const SitePoint& site) {
  return arrival_times_at_distance(sc, distance_km(sc.epicenter, site));
}

std::vector<double> countdown_track(const WarningEstimate& est, double tick_s) {
  if (!(std::isfinite(tick_s) && tick_s > 0.0)) throw Error(ErrorKind::InvalidTick, "tick must be > 0");
  const double w = est.warning_time_s;
  if (!(w > 0.0)) return {0.0};
  const double steps = std::ceil(w / tick_s);
  if (!(steps < static_cast<double>(kMaxTicks)))
    throw Error(ErrorKind::InvalidTick, "tick too small for a warning of " + std::to_string(w) + " s");

  std::vector<double> track;
  for (std::size_t k = 0;; ++k) {
    const double remaining = w - static_cast<double>(k) * tick_s;
    if (remaining <= 0.0) {
      track.push_back(0.0);
      break;
    }
    track.push_back(remaining);
  }
  return track;
}

}  // namespace shakedrill
