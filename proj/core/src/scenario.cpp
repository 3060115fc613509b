#include "shakedrill/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "shakedrill/error.hpp"

namespace shakedrill {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(RoomType r) noexcept {
  switch (r) {
    case RoomType::Residence: return "residence";
    case RoomType::Hospital: return "hospital";
  }
  return "?";
}

std::optional<RoomType> room_type_from_string(std::string_view s) noexcept {
  if (s == "residence") return RoomType::Residence;
  if (s == "hospital") return RoomType::Hospital;
  return std::nullopt;
}

const ComponentSpec* ScenarioBundle::find_component(std::string_view id) const {
  for (const auto& c : library)
    if (c.id == id) return &c;
  return nullptr;
}

namespace {

[[noreturn]] void manifest_error(const fs::path& manifest, const std::string& msg) {
  throw Error(ErrorKind::ManifestError, manifest.string() + ": " + msg);
}

std::string read_file(const fs::path& manifest, const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) manifest_error(manifest, "cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Re-raises a sub-parser error with the offending file prepended.
template <typename F>
auto with_file(const fs::path& path, F&& parse) {
  try {
    return parse();
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.detail());
  }
}

double number_or(const fs::path& manifest, const json& obj, const char* key, std::optional<double> fallback) {
  if (!obj.contains(key)) {
    if (!fallback) manifest_error(manifest, std::string("missing number '") + key + "'");
    return *fallback;
  }
  if (!obj[key].is_number()) manifest_error(manifest, std::string("'") + key + "' must be a number");
  return obj[key].get<double>();
}

// Great-circle distance from a point to the closest point of the grid box,
// measured along the clamped lon/lat.
double distance_to_field(const GroundMotionField& f, const SitePoint& p) {
  SitePoint q{std::clamp(p.lon, f.origin().lon, f.max_lon()), std::clamp(p.lat, f.origin().lat, f.max_lat())};
  return distance_km(p, q);
}

std::optional<double> produce_edp(EdpType type, const IMRecord& im, const ResponseResult& response) {
  switch (type) {
    case EdpType::PFA_g: return response.peak_abs_accel_g;
    case EdpType::PGA_g: return im.pga_g;
    case EdpType::PGV_cms: return im.pgv_cms;
    case EdpType::PFV_cms:
    case EdpType::SDR: return std::nullopt;
  }
  return std::nullopt;
}

bool can_produce(EdpType type) { return produce_edp(type, IMRecord{}, ResponseResult{}).has_value(); }

}  // namespace

ScenarioBundle load_bundle(const fs::path& manifest_path) {
  const fs::path& mp = manifest_path;
  if (!fs::exists(mp)) manifest_error(mp, "manifest not found");
  const fs::path base = mp.parent_path();
  json doc;
  try {
    doc = json::parse(read_file(mp, mp));
  } catch (const json::parse_error& e) {
    manifest_error(mp, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) manifest_error(mp, "manifest must be a JSON object");
  auto need_string = [&](const json& obj, const char* key) {
    if (!obj.contains(key) || !obj[key].is_string()) manifest_error(mp, std::string("missing string '") + key + "'");
    return obj[key].get<std::string>();
  };

  const fs::path grid_path = base / need_string(doc, "grid_file");
  if (!fs::exists(grid_path)) manifest_error(mp, "grid file '" + grid_path.string() + "' does not exist");
  GroundMotionField field = with_file(grid_path, [&] { return parse_gm_grid(read_file(mp, grid_path)); });

  const fs::path lib_path = base / need_string(doc, "fragility_library");
  if (!fs::exists(lib_path)) manifest_error(mp, "fragility library '" + lib_path.string() + "' does not exist");
  auto library = with_file(lib_path, [&] { return parse_fragility_library(read_file(mp, lib_path)); });

  if (!doc.contains("rupture") || !doc["rupture"].is_object()) manifest_error(mp, "missing object 'rupture'");
  const json& rj = doc["rupture"];
  RuptureScenario rupture;
  rupture.name = rj.contains("name") && rj["name"].is_string() ? rj["name"].get<std::string>() : field.scenario_name();
  rupture.epicenter = {number_or(mp, rj, "epicenter_lon", std::nullopt), number_or(mp, rj, "epicenter_lat", std::nullopt)};
  rupture.origin_time_s = number_or(mp, rj, "origin_time_s", 0.0);
  rupture.p_speed_kms = number_or(mp, rj, "p_speed_kms", 6.0);
  rupture.s_speed_kms = number_or(mp, rj, "s_speed_kms", 3.2);
  rupture.alert_latency_s = number_or(mp, rj, "alert_latency_s", 5.0);
  try {
    validate(rupture);
  } catch (const Error& e) {
    manifest_error(mp, "rupture: " + e.detail());
  }

  std::map<RoomType, RoomInventory> rooms;
  if (!doc.contains("rooms") || !doc["rooms"].is_object() || doc["rooms"].empty())
    manifest_error(mp, "missing non-empty object 'rooms'");
  for (const auto& [key, rj2] : doc["rooms"].items()) {
    auto type = room_type_from_string(key);
    if (!type) manifest_error(mp, "unknown room type '" + key + "'");
    if (!rj2.is_object() || !rj2.contains("components") || !rj2["components"].is_array() || rj2["components"].empty())
      manifest_error(mp, "room '" + key + "' needs a non-empty 'components' list");
    RoomInventory room;
    room.type = *type;
    for (const auto& id : rj2["components"]) {
      if (!id.is_string()) manifest_error(mp, "room '" + key + "' component ids must be strings");
      const auto sid = id.get<std::string>();
      if (std::none_of(library.begin(), library.end(), [&](const ComponentSpec& c) { return c.id == sid; }))
        manifest_error(mp, "room '" + key + "' references unknown component id '" + sid + "'");
      room.component_ids.push_back(sid);
    }
    room.sdof = {number_or(mp, rj2, "period_s", std::nullopt), number_or(mp, rj2, "damping", 0.05)};
    try {
      validate(room.sdof);
    } catch (const Error& e) {
      manifest_error(mp, "room '" + key + "': " + e.detail());
    }
    rooms[*type] = std::move(room);
  }

  if (!doc.contains("accel_source") || !doc["accel_source"].is_object()) manifest_error(mp, "missing object 'accel_source'");
  const json& aj = doc["accel_source"];
  const std::string mode = need_string(aj, "mode");
  AccelSource source;
  if (mode == "synthesize") {
    SynthesizeSource s{number_or(mp, aj, "duration_s", 40.0), number_or(mp, aj, "dt_s", 0.01)};
    if (!(s.duration_s >= 5.0 && s.dt_s > 0.0 && s.dt_s <= 0.02))
      manifest_error(mp, "accel_source: synthesize needs duration_s >= 5 and dt_s in (0, 0.02]");
    source = s;
  } else if (mode == "files") {
    FilesSource files;
    files.dir = base / need_string(aj, "dir");
    if (!aj.contains("stations") || !aj["stations"].is_array() || aj["stations"].empty())
      manifest_error(mp, "accel_source: files mode needs a non-empty 'stations' list");
    for (const auto& sj : aj["stations"]) {
      if (!sj.is_object()) manifest_error(mp, "accel_source: station entries must be objects");
      SitePoint site{number_or(mp, sj, "lon", std::nullopt), number_or(mp, sj, "lat", std::nullopt)};
      if (!is_valid_site(site)) manifest_error(mp, "accel_source: station coordinates out of range");
      const std::string file = need_string(sj, "file");
      const fs::path path = files.dir / file;
      if (!fs::exists(path)) manifest_error(mp, "record file '" + path.string() + "' does not exist");
      auto record = with_file(path, [&] { return parse_accel(read_file(mp, path), file); });
      files.stations.push_back(Station{site, file, std::move(record)});
    }
    source = std::move(files);
  } else {
    manifest_error(mp, "accel_source: unknown mode '" + mode + "' (expected synthesize or files)");
  }

  ScenarioBundle bundle{doc.contains("name") && doc["name"].is_string() ? doc["name"].get<std::string>()
                                                                         : field.scenario_name(),
                        std::move(field),
                        std::move(rupture),
                        std::move(library),
                        std::move(rooms),
                        std::move(source),
                        {}};
  const double epi_km = distance_to_field(bundle.field, bundle.rupture.epicenter);
  if (epi_km > kEpicenterWarnKm) {
    std::ostringstream os;
    os << "epicenter lies " << epi_km << " km outside the ground-motion grid";
    bundle.warnings.push_back(os.str());
  }
  return bundle;
}

std::vector<std::string> bundle_issues(const ScenarioBundle& bundle) {
  std::vector<std::string> issues;
  for (const auto& [type, room] : bundle.rooms) {
    for (const auto& id : room.component_ids) {
      const ComponentSpec* c = bundle.find_component(id);
      if (!c) {
        issues.push_back("room '" + std::string(to_string(type)) + "' references unknown component '" + id + "'");
      } else if (!can_produce(c->edp_type())) {
        issues.push_back("component '" + id + "' demands " + std::string(to_string(c->edp_type())) +
                         ", which the elastic SDOF stage does not produce");
      }
    }
  }
  return issues;
}

AccelTimeSeries drill_motion(const ScenarioBundle& bundle, const SitePoint& site, std::uint64_t seed) {
  const IMRecord im = lookup_im(bundle.field, site);
  if (const auto* synth = std::get_if<SynthesizeSource>(&bundle.accel_source))
    return synthesize_accel(im, synth->duration_s, synth->dt_s, seed);
  const auto& files = std::get<FilesSource>(bundle.accel_source);
  const Station* nearest = &files.stations.front();
  double best = distance_km(site, nearest->site);
  for (const auto& st : files.stations) {
    const double d = distance_km(site, st.site);
    if (d < best) {
      best = d;
      nearest = &st;
    }
  }
  return nearest->record;
}

namespace {

// Everything in a drill that does not depend on damage-state sampling.
struct PreparedDrill {
  IMRecord im;
  AccelTimeSeries motion;
  const RoomInventory* room;
  ResponseResult response;
  std::map<EdpType, double> edp;
  std::vector<const ComponentSpec*> components;
  std::vector<double> component_edp;
  std::vector<DamagePMF> pmfs;
};

PreparedDrill prepare(const ScenarioBundle& bundle, const SitePoint& site, RoomType room, std::uint64_t seed) {
  auto it = bundle.rooms.find(room);
  if (it == bundle.rooms.end())
    throw Error(ErrorKind::UnknownRoom, "room '" + std::string(to_string(room)) + "' is not defined in this bundle");
  IMRecord im = lookup_im(bundle.field, site);
  AccelTimeSeries motion = drill_motion(bundle, site, seed);
  const ResponseResult response = newmark_response(motion, it->second.sdof);

  PreparedDrill p{std::move(im), std::move(motion), &it->second, response, {}, {}, {}, {}};
  for (auto type : {EdpType::PFA_g, EdpType::PGA_g, EdpType::PGV_cms})
    p.edp[type] = *produce_edp(type, p.im, response);
  for (const auto& id : p.room->component_ids) {
    const ComponentSpec* c = bundle.find_component(id);
    if (!c) throw Error(ErrorKind::ManifestError, "unknown component id '" + id + "'");
    auto edp = p.edp.find(c->edp_type());
    if (edp == p.edp.end())
      throw Error(ErrorKind::MissingEDP, "component '" + id + "' demands " + std::string(to_string(c->edp_type())) +
                                             ", which the pipeline does not produce");
    p.components.push_back(c);
    p.component_edp.push_back(edp->second);
    p.pmfs.push_back(ds_pmf(*c, edp->second));
  }
  return p;
}

}  // namespace

SimulationReport run_drill(const ScenarioBundle& bundle, const SitePoint& site, RoomType room, std::uint64_t seed,
                           const DrillOptions& options) {
  PreparedDrill p = prepare(bundle, site, room, seed);

  SimulationReport r;
  r.scenario = bundle.name;
  r.room = room;
  r.site = site;
  r.seed = seed;
  r.periods = bundle.field.periods();
  r.im = p.im;
  r.sdof = p.room->sdof;
  r.response = p.response;
  r.edp = p.edp;

  Rng rng = Rng::for_stream(seed, 0);
  for (std::size_t i = 0; i < p.components.size(); ++i) {
    const ComponentSpec& c = *p.components[i];
    ComponentOutcome out;
    out.id = c.id;
    out.name = c.name;
    out.edp_type = c.edp_type();
    out.edp = p.component_edp[i];
    out.pmf = p.pmfs[i];
    out.sampled_ds = sample_ds(out.pmf, rng);
    out.tag = tag_for(c, out.sampled_ds);
    out.expected_loss = expected_loss(c, out.pmf);
    r.total_expected_loss += out.expected_loss;
    r.components.push_back(std::move(out));
  }

  r.warning = arrival_times(bundle.rupture, site);
  r.envelope = intensity_envelope(p.motion, options.envelope_window_s);
  r.warnings = bundle.warnings;
  if (p.response.coarse_step) {
    std::ostringstream os;
    os << "time step " << p.motion.dt() << " s exceeds period/10 for the " << to_string(room)
       << " structure; response accuracy is reduced";
    r.warnings.push_back(os.str());
  }
  return r;
}

LossSummary monte_carlo_loss(const ScenarioBundle& bundle, const SitePoint& site, RoomType room, std::size_t draws,
                             std::uint64_t seed) {
  if (draws == 0) throw Error(ErrorKind::InvalidConfig, "Monte Carlo needs at least one draw");
  const PreparedDrill p = prepare(bundle, site, room, seed);

  std::vector<double> losses(draws, 0.0);
  for (std::size_t r = 0; r < draws; ++r) {
    Rng rng = Rng::for_stream(seed, r + 1);
    double loss = 0.0;
    for (std::size_t i = 0; i < p.components.size(); ++i)
      loss += p.components[i]->repair_cost[sample_ds(p.pmfs[i], rng)];
    losses[r] = loss;
  }

  LossSummary s;
  s.draws = draws;
  double sum = 0.0;
  for (double x : losses) sum += x;
  s.mean = sum / static_cast<double>(draws);
  double ss = 0.0;
  for (double x : losses) ss += (x - s.mean) * (x - s.mean);
  s.std = draws > 1 ? std::sqrt(ss / static_cast<double>(draws - 1)) : 0.0;

  std::sort(losses.begin(), losses.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(draws - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, draws - 1);
    const double frac = pos - static_cast<double>(lo);
    return losses[lo] + frac * (losses[hi] - losses[lo]);
  };
  s.p50 = quantile(0.5);
  s.p90 = quantile(0.9);
  return s;
}

}  // namespace shakedrill
