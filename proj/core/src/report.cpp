#include <nlohmann/json.hpp>

#include "shakedrill/error.hpp"
#include "shakedrill/scenario.hpp"

namespace shakedrill {

using nlohmann::ordered_json;

namespace {

constexpr const char* kSchema = "shakedrill.report/1";

[[noreturn]] void bad_report(const std::string& msg) { throw Error(ErrorKind::SchemaError, "report: " + msg); }

template <typename T>
T get(const ordered_json& j, const char* key) {
  if (!j.contains(key)) bad_report(std::string("missing key '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const ordered_json::exception& e) {
    bad_report(std::string("key '") + key + "': " + e.what());
  }
}

}  // namespace

std::string report_to_text(const SimulationReport& r) {
  ordered_json j;
  j["schema"] = kSchema;
  j["scenario"] = r.scenario;
  j["room"] = to_string(r.room);
  j["seed"] = r.seed;
  j["site"] = {{"lon", r.site.lon}, {"lat", r.site.lat}};

  ordered_json psa = ordered_json::array();
  for (std::size_t i = 0; i < r.periods.size(); ++i)
    psa.push_back({{"period_s", r.periods[i]}, {"psa_g", r.im.psa_g.at(i)}});
  j["im"] = {{"pga_g", r.im.pga_g}, {"pgv_cms", r.im.pgv_cms}, {"psa", std::move(psa)}};

  j["structure"] = {{"period_s", r.sdof.period_s},
                    {"damping_ratio", r.sdof.damping_ratio},
                    {"peak_rel_disp_cm", r.response.peak_rel_disp_cm},
                    {"peak_abs_accel_g", r.response.peak_abs_accel_g},
                    {"psa_g", r.response.psa_g},
                    {"coarse_step", r.response.coarse_step}};

  ordered_json edp = ordered_json::object();
  for (const auto& [type, value] : r.edp) edp[std::string(to_string(type))] = value;
  j["edp"] = std::move(edp);

  ordered_json comps = ordered_json::array();
  for (const auto& c : r.components) {
    comps.push_back({{"id", c.id},
                     {"name", c.name},
                     {"edp_type", to_string(c.edp_type)},
                     {"edp", c.edp},
                     {"pmf", c.pmf},
                     {"sampled_ds", c.sampled_ds},
                     {"tag", to_string(c.tag)},
                     {"expected_loss", c.expected_loss}});
  }
  j["components"] = std::move(comps);
  j["total_expected_loss"] = r.total_expected_loss;
  j["warning"] = {{"distance_km", r.warning.distance_km},
                  {"p_arrival_s", r.warning.p_arrival_s},
                  {"s_arrival_s", r.warning.s_arrival_s},
                  {"warning_time_s", r.warning.warning_time_s}};
  j["envelope"] = {{"dt", r.envelope.dt}, {"window_s", r.envelope.window_s}, {"values", r.envelope.values}};
  j["warnings"] = r.warnings;
  return j.dump() + "\n";
}

namespace {

SimulationReport parse_report_json(const ordered_json& j);

}  // namespace

SimulationReport parse_report(std::string_view text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    bad_report(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) bad_report("top level must be an object");
  try {
    return parse_report_json(j);
  } catch (const ordered_json::exception& e) {
    bad_report(e.what());
  }
}

namespace {

SimulationReport parse_report_json(const ordered_json& j) {
  if (get<std::string>(j, "schema") != kSchema) bad_report("unsupported schema");

  SimulationReport r;
  r.scenario = get<std::string>(j, "scenario");
  const auto room = room_type_from_string(get<std::string>(j, "room"));
  if (!room) bad_report("unknown room");
  r.room = *room;
  r.seed = get<std::uint64_t>(j, "seed");
  const auto& site = j.at("site");
  r.site = {get<double>(site, "lon"), get<double>(site, "lat")};

  const auto& im = j.at("im");
  r.im.pga_g = get<double>(im, "pga_g");
  r.im.pgv_cms = get<double>(im, "pgv_cms");
  for (const auto& p : im.at("psa")) {
    r.periods.push_back(get<double>(p, "period_s"));
    r.im.psa_g.push_back(get<double>(p, "psa_g"));
  }

  const auto& st = j.at("structure");
  r.sdof = {get<double>(st, "period_s"), get<double>(st, "damping_ratio")};
  r.response = {get<double>(st, "peak_rel_disp_cm"), get<double>(st, "peak_abs_accel_g"), get<double>(st, "psa_g"),
                get<bool>(st, "coarse_step")};

  for (const auto& [key, value] : j.at("edp").items()) {
    const auto type = edp_type_from_string(key);
    if (!type) bad_report("unknown edp type '" + key + "'");
    r.edp[*type] = value.get<double>();
  }

  for (const auto& cj : j.at("components")) {
    ComponentOutcome c;
    c.id = get<std::string>(cj, "id");
    c.name = get<std::string>(cj, "name");
    const auto type = edp_type_from_string(get<std::string>(cj, "edp_type"));
    if (!type) bad_report("component '" + c.id + "': unknown edp type");
    c.edp_type = *type;
    c.edp = get<double>(cj, "edp");
    c.pmf = get<std::vector<double>>(cj, "pmf");
    c.sampled_ds = get<std::size_t>(cj, "sampled_ds");
    const auto tag = tag_from_string(get<std::string>(cj, "tag"));
    if (!tag) bad_report("component '" + c.id + "': unknown tag");
    c.tag = *tag;
    c.expected_loss = get<double>(cj, "expected_loss");
    r.components.push_back(std::move(c));
  }
  r.total_expected_loss = get<double>(j, "total_expected_loss");

  const auto& w = j.at("warning");
  r.warning = {get<double>(w, "distance_km"), get<double>(w, "p_arrival_s"), get<double>(w, "s_arrival_s"),
               get<double>(w, "warning_time_s")};
  const auto& env = j.at("envelope");
  r.envelope = {get<double>(env, "dt"), get<double>(env, "window_s"), get<std::vector<double>>(env, "values")};
  r.warnings = get<std::vector<std::string>>(j, "warnings");
  return r;
}

}  // namespace

}  // namespace shakedrill
