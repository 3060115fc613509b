#pragma once

// Independent reference computations for tests. Nothing here calls into the
// library; each routine takes a different numerical route from the code it
// checks.

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace oracle {

/// Standard normal CDF by composite Simpson quadrature of the density from
/// 0 to |x| (no erf/erfc involved).
inline double normal_cdf(double x, int intervals = 20000) {
  const double a = 0.0;
  const double b = std::abs(x);
  if (b == 0.0) return 0.5;
  const double h = (b - a) / intervals;
  auto pdf = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi); };
  double sum = pdf(a) + pdf(b);
  for (int i = 1; i < intervals; ++i) sum += pdf(a + i * h) * (i % 2 ? 4.0 : 2.0);
  const double half = sum * h / 3.0;
  return x >= 0.0 ? 0.5 + half : 0.5 - half;
}

/// Central angle from the 3-D unit vectors of both points (atan2 of cross
/// and dot products), times the sphere radius.
inline double great_circle_km(double lat1, double lon1, double lat2, double lon2, double radius = 6371.0) {
  constexpr double deg = std::numbers::pi / 180.0;
  auto vec = [&](double lat, double lon) {
    return std::array<double, 3>{std::cos(lat * deg) * std::cos(lon * deg), std::cos(lat * deg) * std::sin(lon * deg),
                                 std::sin(lat * deg)};
  };
  const auto a = vec(lat1, lon1);
  const auto b = vec(lat2, lon2);
  const std::array<double, 3> c{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
  const double cross = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
  const double dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
  return radius * std::atan2(cross, dot);
}

/// Steady-state displacement amplitude (cm) of a damped SDOF driven at
/// resonance by a_g = amp_g * sin(omega t): amp * g / (omega^2 * 2 zeta).
inline double resonant_amplitude_cm(double amp_g, double period_s, double zeta) {
  const double omega = 2.0 * std::numbers::pi / period_s;
  return amp_g * 980.665 / (omega * omega * 2.0 * zeta);
}

/// Static displacement (cm) under a constant base acceleration amp_g.
inline double static_displacement_cm(double amp_g, double period_s) {
  const double omega = 2.0 * std::numbers::pi / period_s;
  return amp_g * 980.665 / (omega * omega);
}

/// Peak |u| (cm) and peak |u'' + a_g| (g) from classical RK4 on the state
/// (u, v), with a_g linearly interpolated between samples. `substeps`
/// RK4 steps per record step.
struct Rk4Peaks {
  double disp_cm = 0.0;
  double abs_accel_g = 0.0;
};

inline Rk4Peaks rk4_sdof(const std::vector<double>& ag_g, double dt, double period_s, double zeta, int substeps = 20) {
  const double g = 980.665;
  const double w = 2.0 * std::numbers::pi / period_s;
  const double k = w * w;
  const double c = 2.0 * zeta * w;
  auto ag_at = [&](double t) {
    const double x = t / dt;
    auto i = static_cast<std::size_t>(x);
    if (i + 1 >= ag_g.size()) return ag_g.back() * g;
    const double f = x - static_cast<double>(i);
    return ((1.0 - f) * ag_g[i] + f * ag_g[i + 1]) * g;
  };
  auto accel = [&](double t, double u, double v) { return -ag_at(t) - c * v - k * u; };
  Rk4Peaks peaks;
  double u = 0.0, v = 0.0;
  const double h = dt / substeps;
  for (std::size_t i = 0; i + 1 < ag_g.size(); ++i) {
    for (int s = 0; s < substeps; ++s) {
      const double t = i * dt + s * h;
      const double k1u = v, k1v = accel(t, u, v);
      const double k2u = v + 0.5 * h * k1v, k2v = accel(t + 0.5 * h, u + 0.5 * h * k1u, v + 0.5 * h * k1v);
      const double k3u = v + 0.5 * h * k2v, k3v = accel(t + 0.5 * h, u + 0.5 * h * k2u, v + 0.5 * h * k2v);
      const double k4u = v + h * k3v, k4v = accel(t + h, u + h * k3u, v + h * k3v);
      u += h / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u);
      v += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
    }
    peaks.disp_cm = std::max(peaks.disp_cm, std::abs(u));
    peaks.abs_accel_g = std::max(peaks.abs_accel_g, std::abs(c * v + k * u) / g);
  }
  return peaks;
}

/// Half-width of a z-sigma binomial interval for n draws at probability p.
inline double binomial_halfwidth(double p, std::size_t n, double z = 3.0) {
  return z * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

}  // namespace oracle
