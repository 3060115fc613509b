#pragma once

// Scenario ground-motion grid: parsing, bilinear lookup, and great-circle
// distance between sites.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace shakedrill {

/// Geographic point in degrees. lon in (-180, 180], lat in [-90, 90].
struct SitePoint {
  double lon = 0.0;
  double lat = 0.0;

  friend bool operator==(const SitePoint&, const SitePoint&) = default;
};

/// Throws Error{InvalidSite} when the point is NaN or out of range.
SitePoint make_site(double lon, double lat);
bool is_valid_site(const SitePoint& site) noexcept;

/// Intensity measures at one location. `psa` values are paired with the
/// period list owned by the enclosing field (or report).
struct IMRecord {
  double pga_g = 0.0;
  double pgv_cms = 0.0;
  std::vector<double> psa_g;

  friend bool operator==(const IMRecord&, const IMRecord&) = default;
};

class GroundMotionField {
 public:
  GroundMotionField(std::string scenario_name, SitePoint origin, double dlon, double dlat,
                    std::size_t ncols, std::size_t nrows, std::vector<double> periods,
                    std::vector<IMRecord> cells);

  const std::string& scenario_name() const noexcept { return scenario_name_; }
  const SitePoint& origin() const noexcept { return origin_; }
  double dlon() const noexcept { return dlon_; }
  double dlat() const noexcept { return dlat_; }
  std::size_t ncols() const noexcept { return ncols_; }
  std::size_t nrows() const noexcept { return nrows_; }
  const std::vector<double>& periods() const noexcept { return periods_; }
  const std::vector<IMRecord>& cells() const noexcept { return cells_; }

  /// Row-major, rows south to north, columns west to east.
  const IMRecord& at(std::size_t col, std::size_t row) const { return cells_.at(row * ncols_ + col); }
  SitePoint node(std::size_t col, std::size_t row) const;

  double max_lon() const noexcept;
  double max_lat() const noexcept;
  /// Closed bounding box.
  bool contains(const SitePoint& site) const noexcept;

  friend bool operator==(const GroundMotionField&, const GroundMotionField&) = default;

 private:
  std::string scenario_name_;
  SitePoint origin_;
  double dlon_;
  double dlat_;
  std::size_t ncols_;
  std::size_t nrows_;
  std::vector<double> periods_;
  std::vector<IMRecord> cells_;
};

GroundMotionField parse_gm_grid(std::string_view text);
std::string serialize_gm_grid(const GroundMotionField& field);

/// Bilinear blend of the four nodes enclosing `site`. Exact at nodes.
/// Throws Error{OutOfBounds} outside the closed bounding box.
IMRecord lookup_im(const GroundMotionField& field, const SitePoint& site);

inline constexpr double kEarthRadiusKm = 6371.0;

/// Haversine great-circle distance on a sphere of radius kEarthRadiusKm.
double distance_km(const SitePoint& a, const SitePoint& b) noexcept;

}  // namespace shakedrill
