#include "shakedrill/gm_field.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "shakedrill/error.hpp"
#include "text_util.hpp"

namespace shakedrill {

namespace {

// Fractional grid coordinates within this distance of an integer are snapped
// so that lookups at nodes reproduce the node values exactly.
constexpr double kSnap = 1e-9;

// Tolerance on the lon/lat columns of data lines versus the header lattice.
constexpr double kCoordTolDeg = 1e-6;

std::string at_line(std::size_t line) { return "line " + std::to_string(line) + ": "; }

bool all_finite_nonneg(const IMRecord& r) {
  auto ok = [](double v) { return std::isfinite(v) && v >= 0.0; };
  return ok(r.pga_g) && ok(r.pgv_cms) && std::all_of(r.psa_g.begin(), r.psa_g.end(), ok);
}

void check_periods(const std::vector<double>& periods, ErrorKind kind, const std::string& where) {
  for (std::size_t i = 0; i < periods.size(); ++i) {
    if (!std::isfinite(periods[i]) || periods[i] <= 0.0)
      throw Error(kind, where + "periods must be finite and > 0");
    if (i > 0 && periods[i] <= periods[i - 1])
      throw Error(kind, where + "periods must be strictly increasing");
  }
}

}  // namespace

bool is_valid_site(const SitePoint& s) noexcept {
  return std::isfinite(s.lon) && std::isfinite(s.lat) && s.lon > -180.0 && s.lon <= 180.0 &&
         s.lat >= -90.0 && s.lat <= 90.0;
}

SitePoint make_site(double lon, double lat) {
  SitePoint s{lon, lat};
  if (!is_valid_site(s)) {
    std::ostringstream os;
    os << "site (lon=" << lon << ", lat=" << lat << ") outside valid coordinate ranges";
    throw Error(ErrorKind::InvalidSite, os.str());
  }
  return s;
}

GroundMotionField::GroundMotionField(std::string scenario_name, SitePoint origin, double dlon,
                                     double dlat, std::size_t ncols, std::size_t nrows,
                                     std::vector<double> periods, std::vector<IMRecord> cells)
    : scenario_name_(std::move(scenario_name)),
      origin_(origin),
      dlon_(dlon),
      dlat_(dlat),
      ncols_(ncols),
      nrows_(nrows),
      periods_(std::move(periods)),
      cells_(std::move(cells)) {
  if (!is_valid_site(origin_)) throw Error(ErrorKind::InvalidSite, "grid origin out of range");
  if (!(std::isfinite(dlon_) && dlon_ > 0.0 && std::isfinite(dlat_) && dlat_ > 0.0))
    throw Error(ErrorKind::MalformedHeader, "dlon and dlat must be > 0");
  if (ncols_ < 2 || nrows_ < 2) throw Error(ErrorKind::MalformedHeader, "ncols and nrows must be >= 2");
  if (!is_valid_site({max_lon(), max_lat()}))
    throw Error(ErrorKind::MalformedHeader, "grid extent leaves the valid coordinate range");
  check_periods(periods_, ErrorKind::MalformedHeader, "");
  if (cells_.size() != ncols_ * nrows_)
    throw Error(ErrorKind::RowCountMismatch, "expected " + std::to_string(ncols_ * nrows_) +
                                                 " cells, got " + std::to_string(cells_.size()));
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    if (cells_[i].psa_g.size() != periods_.size())
      throw Error(ErrorKind::InconsistentPeriodSet, "cell " + std::to_string(i) + " psa count differs from period set");
    if (!all_finite_nonneg(cells_[i]))
      throw Error(ErrorKind::NegativeIM, "cell " + std::to_string(i) + " has a negative or non-finite IM");
  }
}

SitePoint GroundMotionField::node(std::size_t col, std::size_t row) const {
  return {origin_.lon + static_cast<double>(col) * dlon_, origin_.lat + static_cast<double>(row) * dlat_};
}

double GroundMotionField::max_lon() const noexcept {
  return origin_.lon + static_cast<double>(ncols_ - 1) * dlon_;
}

double GroundMotionField::max_lat() const noexcept {
  return origin_.lat + static_cast<double>(nrows_ - 1) * dlat_;
}

bool GroundMotionField::contains(const SitePoint& s) const noexcept {
  const double eps_lon = kSnap * dlon_;
  const double eps_lat = kSnap * dlat_;
  return s.lon >= origin_.lon - eps_lon && s.lon <= max_lon() + eps_lon &&
         s.lat >= origin_.lat - eps_lat && s.lat <= max_lat() + eps_lat;
}

GroundMotionField parse_gm_grid(std::string_view text) {
  const auto lines = detail::split_lines(text);
  if (lines.empty()) throw Error(ErrorKind::MalformedHeader, at_line(1) + "empty grid file");

  // Header: `#GMGRID key=value ...`. Bare words extend the previous value so
  // scenario names may contain spaces.
  const auto head = detail::split_ws(lines[0]);
  if (head.empty() || head[0] != "#GMGRID")
    throw Error(ErrorKind::MalformedHeader, at_line(1) + "expected '#GMGRID' header");
  std::map<std::string, std::string, std::less<>> kv;
  std::string last_key;
  for (std::size_t i = 1; i < head.size(); ++i) {
    auto tok = head[i];
    auto eq = tok.find('=');
    if (eq == std::string_view::npos) {
      if (last_key.empty()) throw Error(ErrorKind::MalformedHeader, at_line(1) + "stray token '" + std::string(tok) + "'");
      kv[last_key] += " " + std::string(tok);
      continue;
    }
    last_key = std::string(tok.substr(0, eq));
    if (kv.count(last_key)) throw Error(ErrorKind::MalformedHeader, at_line(1) + "duplicate key '" + last_key + "'");
    kv[last_key] = std::string(tok.substr(eq + 1));
  }
  auto require = [&](std::string_view key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw Error(ErrorKind::MalformedHeader, at_line(1) + "missing key '" + std::string(key) + "'");
    return it->second;
  };
  auto num = [&](std::string_view key) {
    auto v = detail::parse_double(require(key));
    if (!v || !std::isfinite(*v))
      throw Error(ErrorKind::MalformedHeader, at_line(1) + "key '" + std::string(key) + "' is not a number");
    return *v;
  };
  auto count = [&](std::string_view key) {
    auto v = detail::parse_unsigned(require(key));
    if (!v) throw Error(ErrorKind::MalformedHeader, at_line(1) + "key '" + std::string(key) + "' is not a count");
    return static_cast<std::size_t>(*v);
  };

  const std::string name = require("name");
  const SitePoint origin{num("lon0"), num("lat0")};
  const double dlon = num("dlon");
  const double dlat = num("dlat");
  const std::size_t ncols = count("ncols");
  const std::size_t nrows = count("nrows");
  std::vector<double> periods;
  {
    std::string_view p = require("periods");
    while (!p.empty()) {
      auto comma = p.find(',');
      auto tok = p.substr(0, comma);
      auto v = detail::parse_double(tok);
      if (!v) throw Error(ErrorKind::MalformedHeader, at_line(1) + "bad period '" + std::string(tok) + "'");
      periods.push_back(*v);
      if (comma == std::string_view::npos) break;
      p.remove_prefix(comma + 1);
    }
  }
  if (!is_valid_site(origin)) throw Error(ErrorKind::MalformedHeader, at_line(1) + "origin out of range");
  if (!(dlon > 0.0 && dlat > 0.0)) throw Error(ErrorKind::MalformedHeader, at_line(1) + "dlon and dlat must be > 0");
  if (ncols < 2 || nrows < 2) throw Error(ErrorKind::MalformedHeader, at_line(1) + "ncols and nrows must be >= 2");
  check_periods(periods, ErrorKind::MalformedHeader, at_line(1));

  const std::size_t expected = ncols * nrows;
  const std::size_t ncolumns = 4 + periods.size();
  std::vector<IMRecord> cells;
  cells.reserve(expected);
  std::size_t lineno = 1;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    lineno = li + 1;
    if (detail::is_blank(lines[li])) continue;
    if (cells.size() == expected)
      throw Error(ErrorKind::RowCountMismatch, at_line(lineno) + "more data rows than the " +
                                                   std::to_string(expected) + " declared");
    const auto tok = detail::split_ws(lines[li]);
    if (tok.size() != ncolumns)
      throw Error(ErrorKind::InconsistentPeriodSet, at_line(lineno) + "expected " + std::to_string(ncolumns) +
                                                        " columns, got " + std::to_string(tok.size()));
    std::vector<double> v(tok.size());
    for (std::size_t k = 0; k < tok.size(); ++k) {
      auto d = detail::parse_double(tok[k]);
      if (!d || !std::isfinite(*d))
        throw Error(ErrorKind::MalformedRow, at_line(lineno) + "bad number '" + std::string(tok[k]) + "'");
      v[k] = *d;
    }
    const std::size_t idx = cells.size();
    const double want_lon = origin.lon + static_cast<double>(idx % ncols) * dlon;
    const double want_lat = origin.lat + static_cast<double>(idx / ncols) * dlat;
    if (std::abs(v[0] - want_lon) > kCoordTolDeg || std::abs(v[1] - want_lat) > kCoordTolDeg)
      throw Error(ErrorKind::MalformedRow, at_line(lineno) + "coordinates do not match the header lattice");
    for (std::size_t k = 2; k < v.size(); ++k)
      if (v[k] < 0.0) throw Error(ErrorKind::NegativeIM, at_line(lineno) + "negative intensity measure");
    cells.push_back(IMRecord{v[2], v[3], std::vector<double>(v.begin() + 4, v.end())});
  }
  if (cells.size() != expected)
    throw Error(ErrorKind::RowCountMismatch, at_line(lineno + 1) + "header declares " + std::to_string(expected) +
                                                 " rows, found " + std::to_string(cells.size()));

  return GroundMotionField(name, origin, dlon, dlat, ncols, nrows, std::move(periods), std::move(cells));
}

std::string serialize_gm_grid(const GroundMotionField& f) {
  using detail::format_double;
  std::string out = "#GMGRID name=" + f.scenario_name() + " lon0=" + format_double(f.origin().lon) +
                    " lat0=" + format_double(f.origin().lat) + " dlon=" + format_double(f.dlon()) +
                    " dlat=" + format_double(f.dlat()) + " ncols=" + std::to_string(f.ncols()) +
                    " nrows=" + std::to_string(f.nrows()) + " periods=";
  for (std::size_t i = 0; i < f.periods().size(); ++i) {
    if (i) out += ',';
    out += format_double(f.periods()[i]);
  }
  out += '\n';
  for (std::size_t row = 0; row < f.nrows(); ++row) {
    for (std::size_t col = 0; col < f.ncols(); ++col) {
      const auto p = f.node(col, row);
      const auto& r = f.at(col, row);
      out += format_double(p.lon) + ' ' + format_double(p.lat) + ' ' + format_double(r.pga_g) + ' ' +
             format_double(r.pgv_cms);
      for (double s : r.psa_g) out += ' ' + format_double(s);
      out += '\n';
    }
  }
  return out;
}

namespace {

// Splits a grid coordinate into (cell index, fraction) with the fraction in
// [0, 1] and the index in [0, n-2].
std::pair<std::size_t, double> locate(double x, std::size_t n) {
  const double rounded = std::round(x);
  if (std::abs(x - rounded) <= kSnap) x = rounded;
  x = std::clamp(x, 0.0, static_cast<double>(n - 1));
  auto i = static_cast<std::size_t>(std::floor(x));
  if (i >= n - 1) i = n - 2;
  return {i, x - static_cast<double>(i)};
}

double blend(double v00, double v10, double v01, double v11, double tx, double ty) {
  const double south = (1.0 - tx) * v00 + tx * v10;
  const double north = (1.0 - tx) * v01 + tx * v11;
  return (1.0 - ty) * south + ty * north;
}

}  // namespace

IMRecord lookup_im(const GroundMotionField& f, const SitePoint& site) {
  if (!is_valid_site(site) || !f.contains(site)) {
    std::ostringstream os;
    os.precision(10);
    os << "site (lon=" << site.lon << ", lat=" << site.lat << ") is out of bounds of grid [" << f.origin().lon
       << ", " << f.max_lon() << "] x [" << f.origin().lat << ", " << f.max_lat() << "]";
    throw Error(ErrorKind::OutOfBounds, os.str());
  }
  const auto [ix, tx] = locate((site.lon - f.origin().lon) / f.dlon(), f.ncols());
  const auto [iy, ty] = locate((site.lat - f.origin().lat) / f.dlat(), f.nrows());
  const IMRecord& a = f.at(ix, iy);
  const IMRecord& b = f.at(ix + 1, iy);
  const IMRecord& c = f.at(ix, iy + 1);
  const IMRecord& d = f.at(ix + 1, iy + 1);

  IMRecord out;
  out.pga_g = blend(a.pga_g, b.pga_g, c.pga_g, d.pga_g, tx, ty);
  out.pgv_cms = blend(a.pgv_cms, b.pgv_cms, c.pgv_cms, d.pgv_cms, tx, ty);
  out.psa_g.resize(a.psa_g.size());
  for (std::size_t k = 0; k < out.psa_g.size(); ++k)
    out.psa_g[k] = blend(a.psa_g[k], b.psa_g[k], c.psa_g[k], d.psa_g[k], tx, ty);
  return out;
}

double distance_km(const SitePoint& a, const SitePoint& b) noexcept {
  constexpr double deg = std::numbers::pi / 180.0;
  const double phi1 = a.lat * deg;
  const double phi2 = b.lat * deg;
  const double dphi = (b.lat - a.lat) * deg;
  const double dlambda = (b.lon - a.lon) * deg;
  const double s1 = std::sin(dphi / 2.0);
  const double s2 = std::sin(dlambda / 2.0);
  const double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(std::min(1.0, h)));
}

}  // namespace shakedrill
