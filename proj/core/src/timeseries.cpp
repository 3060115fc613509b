#include "shakedrill/timeseries.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "shakedrill/error.hpp"
#include "shakedrill/rng.hpp"
#include "text_util.hpp"

namespace shakedrill {

AccelTimeSeries::AccelTimeSeries(double dt, std::vector<double> samples, std::string label)
    : dt_(dt), samples_(std::move(samples)), label_(std::move(label)) {
  if (!(std::isfinite(dt_) && dt_ > 0.0)) throw Error(ErrorKind::InvalidConfig, "time step must be finite and > 0");
  if (samples_.size() < 2) throw Error(ErrorKind::CountMismatch, "a record needs at least 2 samples");
  for (std::size_t i = 0; i < samples_.size(); ++i)
    if (!std::isfinite(samples_[i]))
      throw Error(ErrorKind::NonFiniteSample, "sample " + std::to_string(i) + " is not finite");
}

AccelTimeSeries AccelTimeSeries::scaled(double k) const {
  std::vector<double> s(samples_.begin(), samples_.end());
  for (double& x : s) x *= k;
  return AccelTimeSeries(dt_, std::move(s), label_);
}

AccelTimeSeries parse_accel(std::string_view text, std::string label) {
  const auto lines = detail::split_lines(text);
  if (lines.empty()) throw Error(ErrorKind::MalformedHeader, "line 1: empty record");
  const auto head = detail::split_ws(lines[0]);
  std::optional<unsigned long long> npts;
  std::optional<double> dt;
  for (auto tok : head) {
    if (tok.starts_with("NPTS=")) npts = detail::parse_unsigned(tok.substr(5));
    else if (tok.starts_with("DT=")) dt = detail::parse_double(tok.substr(3));
    else throw Error(ErrorKind::MalformedHeader, "line 1: unexpected token '" + std::string(tok) + "'");
  }
  if (!npts || !dt || head.size() != 2) throw Error(ErrorKind::MalformedHeader, "line 1: expected 'NPTS=<u> DT=<f>'");
  if (!(std::isfinite(*dt) && *dt > 0.0)) throw Error(ErrorKind::MalformedHeader, "line 1: DT must be > 0");

  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(*npts));
  for (std::size_t li = 1; li < lines.size(); ++li) {
    for (auto tok : detail::split_ws(lines[li])) {
      auto v = detail::parse_double(tok);
      if (!v)
        throw Error(ErrorKind::MalformedHeader,
                    "line " + std::to_string(li + 1) + ": bad number '" + std::string(tok) + "'");
      if (!std::isfinite(*v))
        throw Error(ErrorKind::NonFiniteSample,
                    "line " + std::to_string(li + 1) + ": non-finite sample '" + std::string(tok) + "'");
      samples.push_back(*v);
    }
  }
  if (samples.size() != *npts)
    throw Error(ErrorKind::CountMismatch,
                "NPTS=" + std::to_string(*npts) + " but found " + std::to_string(samples.size()) + " samples");
  return AccelTimeSeries(*dt, std::move(samples), std::move(label));
}

std::string serialize_accel(const AccelTimeSeries& ts) {
  std::string out = "NPTS=" + std::to_string(ts.size()) + " DT=" + detail::format_double(ts.dt()) + "\n";
  for (double s : ts.samples()) {
    out += detail::format_double(s);
    out += '\n';
  }
  return out;
}

void validate(const SDOFConfig& cfg) {
  if (!(std::isfinite(cfg.period_s) && cfg.period_s > 0.0))
    throw Error(ErrorKind::InvalidConfig, "SDOF period must be > 0");
  if (!(cfg.damping_ratio > 0.0 && cfg.damping_ratio < 1.0))
    throw Error(ErrorKind::InvalidConfig, "damping ratio must lie in (0, 1)");
}

namespace {

// Newmark average acceleration on a unit-mass oscillator. `visit(i, u, a_abs)`
// receives relative displacement (cm) and absolute acceleration (g).
template <typename Visit>
void integrate(const AccelTimeSeries& ts, const SDOFConfig& cfg, Visit&& visit) {
  validate(cfg);
  constexpr double gamma = 0.5;
  constexpr double beta = 0.25;
  const double dt = ts.dt();
  const double omega = 2.0 * std::numbers::pi / cfg.period_s;
  const double k = omega * omega;
  const double c = 2.0 * cfg.damping_ratio * omega;

  const double a1 = 1.0 / (beta * dt * dt) + gamma / (beta * dt) * c;
  const double a2 = 1.0 / (beta * dt) + (gamma / beta - 1.0) * c;
  const double a3 = (1.0 / (2.0 * beta) - 1.0) + dt * (gamma / (2.0 * beta) - 1.0) * c;
  const double k_eff = k + a1;

  const auto ag = ts.samples();
  double u = 0.0;
  double v = 0.0;
  double a = -ag[0] * kGravityCms2;
  visit(std::size_t{0}, u, a / kGravityCms2 + ag[0]);
  for (std::size_t i = 1; i < ag.size(); ++i) {
    const double p = -ag[i] * kGravityCms2;
    const double u_next = (p + a1 * u + a2 * v + a3 * a) / k_eff;
    const double du = u_next - u;
    const double v_next = gamma / (beta * dt) * du + (1.0 - gamma / beta) * v + dt * (1.0 - gamma / (2.0 * beta)) * a;
    const double a_next = du / (beta * dt * dt) - v / (beta * dt) - (1.0 / (2.0 * beta) - 1.0) * a;
    u = u_next;
    v = v_next;
    a = a_next;
    visit(i, u, a / kGravityCms2 + ag[i]);
  }
}

}  // namespace

ResponseResult newmark_response(const AccelTimeSeries& ts, const SDOFConfig& cfg) {
  ResponseResult r;
  integrate(ts, cfg, [&](std::size_t, double u, double acc) {
    r.peak_rel_disp_cm = std::max(r.peak_rel_disp_cm, std::abs(u));
    r.peak_abs_accel_g = std::max(r.peak_abs_accel_g, std::abs(acc));
  });
  const double omega = 2.0 * std::numbers::pi / cfg.period_s;
  r.psa_g = omega * omega * r.peak_rel_disp_cm / kGravityCms2;
  r.coarse_step = ts.dt() > cfg.period_s / 10.0;
  return r;
}

ResponseHistory newmark_history(const AccelTimeSeries& ts, const SDOFConfig& cfg) {
  ResponseHistory h;
  h.rel_disp_cm.resize(ts.size());
  h.abs_accel_g.resize(ts.size());
  integrate(ts, cfg, [&](std::size_t i, double u, double acc) {
    h.rel_disp_cm[i] = u;
    h.abs_accel_g[i] = acc;
  });
  return h;
}

std::vector<double> response_spectrum(const AccelTimeSeries& ts, std::span<const double> periods, double damping) {
  if (periods.empty()) throw Error(ErrorKind::InvalidConfig, "period list is empty");
  for (std::size_t i = 0; i < periods.size(); ++i) {
    if (!(std::isfinite(periods[i]) && periods[i] > 0.0))
      throw Error(ErrorKind::InvalidConfig, "periods must be > 0");
    if (i > 0 && !(periods[i] > periods[i - 1]))
      throw Error(ErrorKind::InvalidConfig, "periods must be strictly increasing");
  }
  validate(SDOFConfig{periods.front(), damping});
  std::vector<double> psa;
  psa.reserve(periods.size());
  for (double t : periods) psa.push_back(newmark_response(ts, {t, damping}).psa_g);
  return psa;
}

PeakGroundValues peak_ground_values(const AccelTimeSeries& ts) {
  PeakGroundValues out;
  const auto s = ts.samples();
  double vel = 0.0;
  out.pga_g = std::abs(s[0]);
  for (std::size_t i = 1; i < s.size(); ++i) {
    out.pga_g = std::max(out.pga_g, std::abs(s[i]));
    vel += 0.5 * (s[i - 1] + s[i]) * kGravityCms2 * ts.dt();
    out.pgv_cms = std::max(out.pgv_cms, std::abs(vel));
  }
  return out;
}

IntensityEnvelope intensity_envelope(const AccelTimeSeries& ts, double window_s) {
  if (!(std::isfinite(window_s) && window_s >= ts.dt()))
    throw Error(ErrorKind::InvalidWindow, "window must be >= dt (" + detail::format_double(ts.dt()) + " s)");
  const auto s = ts.samples();
  const std::size_t n = s.size();
  const auto w = static_cast<std::size_t>(std::ceil(window_s / ts.dt() - 1e-9));
  const std::size_t before = (w - 1) / 2;
  const std::size_t after = w - 1 - before;

  IntensityEnvelope env{ts.dt(), window_s, std::vector<double>(n, 0.0)};
  double peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= before ? i - before : 0;
    const std::size_t hi = std::min(n - 1, i + after);
    double sum = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) sum += s[j] * s[j];
    env.values[i] = std::sqrt(sum / static_cast<double>(hi - lo + 1));
    peak = std::max(peak, env.values[i]);
  }
  if (peak > 0.0)
    for (double& v : env.values) v /= peak;
  return env;
}

namespace {

// Band-pass corner of the synthetic motion and trapezoid breakpoints as
// fractions of the duration.
constexpr double kSynthCenterHz = 2.5;
constexpr double kSynthQ = 0.6;
constexpr double kRiseEnd = 0.15;
constexpr double kHoldEnd = 0.55;

}  // namespace

AccelTimeSeries synthesize_accel(const IMRecord& im, double duration_s, double dt, std::uint64_t seed) {
  if (!(std::isfinite(duration_s) && duration_s >= 5.0))
    throw Error(ErrorKind::InvalidConfig, "synthetic duration must be >= 5 s");
  if (!(std::isfinite(dt) && dt > 0.0 && dt <= 0.02))
    throw Error(ErrorKind::InvalidConfig, "synthetic time step must lie in (0, 0.02] s");
  if (!(std::isfinite(im.pga_g) && im.pga_g >= 0.0)) throw Error(ErrorKind::InvalidConfig, "pga must be >= 0");

  const auto n = static_cast<std::size_t>(std::floor(duration_s / dt + 1e-9)) + 1;
  const std::string label = "synthetic seed=" + std::to_string(seed);
  std::vector<double> out(n, 0.0);
  if (im.pga_g == 0.0) return AccelTimeSeries(dt, std::move(out), label);

  // RBJ band-pass biquad (0 dB peak) over white Gaussian noise.
  const double w0 = 2.0 * std::numbers::pi * kSynthCenterHz * dt;
  const double alpha = std::sin(w0) / (2.0 * kSynthQ);
  const double a0 = 1.0 + alpha;
  const double b0 = alpha / a0;
  const double b2 = -alpha / a0;
  const double a1 = -2.0 * std::cos(w0) / a0;
  const double a2 = (1.0 - alpha) / a0;

  Rng rng(seed);
  double x1 = 0.0, x2 = 0.0, y1 = 0.0, y2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = rng.normal();
    const double y = b0 * x + b2 * x2 - a1 * y1 - a2 * y2;
    x2 = x1;
    x1 = x;
    y2 = y1;
    y1 = y;
    const double frac = static_cast<double>(i) / static_cast<double>(n - 1);
    double shape = 1.0;
    if (frac < kRiseEnd) shape = frac / kRiseEnd;
    else if (frac > kHoldEnd) shape = (1.0 - frac) / (1.0 - kHoldEnd);
    out[i] = y * shape;
  }

  std::size_t argmax = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(out[i]) > std::abs(out[argmax])) argmax = i;
  const double scale = im.pga_g / std::abs(out[argmax]);
  for (double& v : out) v = std::clamp(v * scale, -im.pga_g, im.pga_g);
  out[argmax] = std::copysign(im.pga_g, out[argmax]);
  return AccelTimeSeries(dt, std::move(out), label);
}

}  // namespace shakedrill
