#pragma once

// Ground acceleration histories and the elastic SDOF response stage.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shakedrill/gm_field.hpp"

namespace shakedrill {

/// g to cm/s^2.
inline constexpr double kGravityCms2 = 980.665;

/// Uniformly sampled ground acceleration, in g.
class AccelTimeSeries {
 public:
  AccelTimeSeries(double dt, std::vector<double> samples, std::string label = {});

  double dt() const noexcept { return dt_; }
  std::span<const double> samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  double duration() const noexcept { return dt_ * static_cast<double>(samples_.size() - 1); }
  const std::string& label() const noexcept { return label_; }

  AccelTimeSeries scaled(double k) const;

  friend bool operator==(const AccelTimeSeries&, const AccelTimeSeries&) = default;

 private:
  double dt_;
  std::vector<double> samples_;
  std::string label_;
};

/// Reads `NPTS=<u> DT=<f>` followed by whitespace-separated samples in g.
AccelTimeSeries parse_accel(std::string_view text, std::string label = {});
std::string serialize_accel(const AccelTimeSeries& ts);

struct SDOFConfig {
  double period_s = 1.0;
  double damping_ratio = 0.05;

  friend bool operator==(const SDOFConfig&, const SDOFConfig&) = default;
};

/// Throws Error{InvalidConfig} unless period > 0 and damping in (0, 1).
void validate(const SDOFConfig& cfg);

struct ResponseResult {
  double peak_rel_disp_cm = 0.0;
  double peak_abs_accel_g = 0.0;
  double psa_g = 0.0;
  /// dt exceeded period/10; the integration is stable but less accurate.
  bool coarse_step = false;

  friend bool operator==(const ResponseResult&, const ResponseResult&) = default;
};

/// Relative displacement history (cm) and absolute acceleration history (g).
struct ResponseHistory {
  std::vector<double> rel_disp_cm;
  std::vector<double> abs_accel_g;
};

/// Linear elastic SDOF under base excitation, Newmark average acceleration
/// (gamma = 1/2, beta = 1/4), starting at rest.
ResponseResult newmark_response(const AccelTimeSeries& ts, const SDOFConfig& cfg);
ResponseHistory newmark_history(const AccelTimeSeries& ts, const SDOFConfig& cfg);

/// Pseudo-spectral acceleration at each period. Periods must be strictly
/// increasing and positive.
std::vector<double> response_spectrum(const AccelTimeSeries& ts, std::span<const double> periods, double damping);

struct PeakGroundValues {
  double pga_g = 0.0;
  double pgv_cms = 0.0;
};

/// PGV from the trapezoidal integral of the record.
PeakGroundValues peak_ground_values(const AccelTimeSeries& ts);

/// Centered, edge-truncated moving RMS normalised to a peak of 1.
struct IntensityEnvelope {
  double dt = 0.0;
  double window_s = 0.0;
  std::vector<double> values;

  friend bool operator==(const IntensityEnvelope&, const IntensityEnvelope&) = default;
};

IntensityEnvelope intensity_envelope(const AccelTimeSeries& ts, double window_s);

/// Deterministic band-limited noise under a trapezoidal envelope, rescaled
/// so that max|a| equals im.pga_g exactly. Requires duration >= 5 s and
/// 0 < dt <= 0.02 s.
AccelTimeSeries synthesize_accel(const IMRecord& im, double duration_s, double dt, std::uint64_t seed);

}  // namespace shakedrill
