#pragma once

// End-to-end drill: site -> intensity -> SDOF response -> damage states ->
// tags, loss and warning time, plus Monte Carlo loss aggregation.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "shakedrill/early_warning.hpp"
#include "shakedrill/fragility.hpp"
#include "shakedrill/gm_field.hpp"
#include "shakedrill/timeseries.hpp"

namespace shakedrill {

enum class RoomType { Residence, Hospital };

std::string_view to_string(RoomType r) noexcept;
std::optional<RoomType> room_type_from_string(std::string_view s) noexcept;

struct RoomInventory {
  RoomType type = RoomType::Residence;
  std::vector<std::string> component_ids;
  SDOFConfig sdof;
};

struct SynthesizeSource {
  double duration_s = 40.0;
  double dt_s = 0.01;
};

/// A recorded motion tied to a location. In files mode the record of the
/// station nearest the site drives the structure.
struct Station {
  SitePoint site;
  std::string file;
  AccelTimeSeries record;
};

struct FilesSource {
  std::filesystem::path dir;
  std::vector<Station> stations;
};

using AccelSource = std::variant<SynthesizeSource, FilesSource>;

struct ScenarioBundle {
  std::string name;
  GroundMotionField field;
  RuptureScenario rupture;
  std::vector<ComponentSpec> library;
  std::map<RoomType, RoomInventory> rooms;
  AccelSource accel_source;
  /// Non-fatal findings from loading (e.g. a distant epicenter).
  std::vector<std::string> warnings;

  const ComponentSpec* find_component(std::string_view id) const;
};

/// Distance beyond which an epicenter is flagged as unrelated to the grid.
inline constexpr double kEpicenterWarnKm = 500.0;

/// Reads a JSON manifest; relative paths resolve against its directory.
ScenarioBundle load_bundle(const std::filesystem::path& manifest_path);

/// Problems that would make a drill fail for in-bounds sites, such as a
/// room component demanding an EDP the pipeline cannot produce.
std::vector<std::string> bundle_issues(const ScenarioBundle& bundle);

struct DrillOptions {
  double envelope_window_s = 1.0;
};

struct ComponentOutcome {
  std::string id;
  std::string name;
  EdpType edp_type = EdpType::PFA_g;
  double edp = 0.0;
  DamagePMF pmf;
  std::size_t sampled_ds = 0;
  TagColor tag = TagColor::Green;
  double expected_loss = 0.0;

  friend bool operator==(const ComponentOutcome&, const ComponentOutcome&) = default;
};

struct SimulationReport {
  std::string scenario;
  RoomType room = RoomType::Residence;
  SitePoint site;
  std::uint64_t seed = 0;
  std::vector<double> periods;
  IMRecord im;
  SDOFConfig sdof;
  ResponseResult response;
  std::map<EdpType, double> edp;
  std::vector<ComponentOutcome> components;
  double total_expected_loss = 0.0;
  WarningEstimate warning;
  IntensityEnvelope envelope;
  std::vector<std::string> warnings;

  friend bool operator==(const SimulationReport&, const SimulationReport&) = default;
};

/// Throws Error{OutOfBounds, UnknownRoom, MissingEDP}. Deterministic in
/// (bundle, site, room, seed, options).
SimulationReport run_drill(const ScenarioBundle& bundle, const SitePoint& site, RoomType room, std::uint64_t seed,
                           const DrillOptions& options = {});

/// The acceleration record the drill would use at `site` for `seed`.
AccelTimeSeries drill_motion(const ScenarioBundle& bundle, const SitePoint& site, std::uint64_t seed);

struct LossSummary {
  std::size_t draws = 0;
  double mean = 0.0;
  double std = 0.0;
  double p50 = 0.0;
  double p90 = 0.0;
};

/// `draws` realizations of Σ repair_cost[sampled DS]. Realization r uses
/// its own generator derived from (seed, r), so results do not depend on
/// evaluation order.
LossSummary monte_carlo_loss(const ScenarioBundle& bundle, const SitePoint& site, RoomType room, std::size_t draws,
                             std::uint64_t seed);

/// Compact JSON with a fixed key order; see docs/formats.md.
std::string report_to_text(const SimulationReport& report);
SimulationReport parse_report(std::string_view text);

}  // namespace shakedrill
