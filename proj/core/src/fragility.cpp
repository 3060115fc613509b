#include "shakedrill/fragility.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include <nlohmann/json.hpp>

#include "shakedrill/error.hpp"

namespace shakedrill {

namespace {

constexpr std::size_t kProbeCount = 50;

std::string in_component(const std::string& id) { return "component '" + id + "': "; }

}  // namespace

std::string_view to_string(EdpType t) noexcept {
  switch (t) {
    case EdpType::PFA_g: return "PFA_g";
    case EdpType::PFV_cms: return "PFV_cms";
    case EdpType::PGA_g: return "PGA_g";
    case EdpType::PGV_cms: return "PGV_cms";
    case EdpType::SDR: return "SDR";
  }
  return "?";
}

std::optional<EdpType> edp_type_from_string(std::string_view s) noexcept {
  for (auto t : {EdpType::PFA_g, EdpType::PFV_cms, EdpType::PGA_g, EdpType::PGV_cms, EdpType::SDR})
    if (to_string(t) == s) return t;
  return std::nullopt;
}

std::string_view to_string(TagColor t) noexcept {
  switch (t) {
    case TagColor::Green: return "Green";
    case TagColor::Yellow: return "Yellow";
    case TagColor::Red: return "Red";
  }
  return "?";
}

std::optional<TagColor> tag_from_string(std::string_view s) noexcept {
  for (auto t : {TagColor::Green, TagColor::Yellow, TagColor::Red})
    if (to_string(t) == s) return t;
  return std::nullopt;
}

double standard_normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double p_exceed(const FragilityCurve& curve, double edp) {
  if (std::isnan(edp) || edp < 0.0) throw Error(ErrorKind::NegativeEDP, "EDP must be >= 0");
  if (edp == 0.0) return 0.0;
  return standard_normal_cdf(std::log(edp / curve.median) / curve.dispersion);
}

DamagePMF ds_pmf(const ComponentSpec& component, double edp) {
  const std::size_t n = component.num_damage_states();
  DamagePMF pmf(n + 1, 0.0);
  double upper = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double next = p_exceed(component.curves[i], edp);
    pmf[i] = upper - next;
    if (pmf[i] < 0.0)
      throw Error(ErrorKind::OrderingViolation,
                  in_component(component.id) + "DS" + std::to_string(i + 1) + " exceeds DS" + std::to_string(i) +
                      " at edp " + std::to_string(edp));
    upper = next;
  }
  pmf[n] = upper;
  return pmf;
}

std::size_t sample_ds(const DamagePMF& pmf, Rng& rng) {
  const double u = rng.uniform();
  double cumulative = 0.0;
  std::size_t last_nonzero = 0;
  for (std::size_t i = 0; i < pmf.size(); ++i) {
    cumulative += pmf[i];
    if (pmf[i] > 0.0) last_nonzero = i;
    if (cumulative > u) return i;
  }
  // Rounding left the cumulative sum just below u.
  return last_nonzero;
}

TagColor tag_for(const ComponentSpec& component, std::size_t ds) {
  const std::size_t n = component.num_damage_states();
  if (ds > n)
    throw Error(ErrorKind::UnknownDamageState,
                in_component(component.id) + "DS" + std::to_string(ds) + " (component has DS0..DS" + std::to_string(n) + ")");
  if (ds < component.tags.size() && component.tags[ds]) return *component.tags[ds];
  if (ds == 0) return TagColor::Green;
  if (ds == n) return TagColor::Red;
  return TagColor::Yellow;
}

double expected_loss(const ComponentSpec& component, const DamagePMF& pmf) {
  double loss = 0.0;
  for (std::size_t i = 0; i < pmf.size() && i < component.repair_cost.size(); ++i)
    loss += pmf[i] * component.repair_cost[i];
  return loss;
}

void validate(const ComponentSpec& c) {
  const auto where = in_component(c.id);
  if (c.id.empty()) throw Error(ErrorKind::SchemaError, "component with empty id");
  if (c.curves.empty()) throw Error(ErrorKind::SchemaError, where + "needs at least one damage state");
  const std::size_t n = c.curves.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& curve = c.curves[i];
    if (!(std::isfinite(curve.median) && curve.median > 0.0))
      throw Error(ErrorKind::SchemaError, where + "DS" + std::to_string(i + 1) + " median must be > 0");
    if (!(std::isfinite(curve.dispersion) && curve.dispersion > 0.0))
      throw Error(ErrorKind::SchemaError, where + "DS" + std::to_string(i + 1) + " dispersion must be > 0");
    if (curve.edp_type != c.curves.front().edp_type)
      throw Error(ErrorKind::SchemaError, where + "all damage states must share one edp_type");
  }
  if (c.repair_cost.size() != n + 1) throw Error(ErrorKind::SchemaError, where + "repair_cost must cover DS0..DSn");
  if (c.repair_cost[0] != 0.0) throw Error(ErrorKind::SchemaError, where + "DS0 repair cost must be 0");
  for (std::size_t i = 0; i <= n; ++i)
    if (!std::isfinite(c.repair_cost[i]) || c.repair_cost[i] < 0.0)
      throw Error(ErrorKind::NegativeCost, where + "DS" + std::to_string(i) + " repair cost is negative");
  if (c.tags.size() > n + 1) throw Error(ErrorKind::SchemaError, where + "more tags than damage states");

  const double lo = std::log(0.01 * c.curves.front().median);
  const double hi = std::log(100.0 * c.curves.back().median);
  for (std::size_t k = 0; k < kProbeCount; ++k) {
    const double edp = std::exp(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(kProbeCount - 1));
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (p_exceed(c.curves[i], edp) < p_exceed(c.curves[i + 1], edp))
        throw Error(ErrorKind::OrderingViolation, where + "DS" + std::to_string(i + 2) + " is more likely than DS" +
                                                      std::to_string(i + 1) + " at edp " + std::to_string(edp));
    }
  }
}

std::vector<ComponentSpec> parse_fragility_library(std::string_view text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::SchemaError, std::string("library is not valid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw Error(ErrorKind::SchemaError, "library must be a JSON list of components");

  std::vector<ComponentSpec> out;
  std::set<std::string> seen;
  for (std::size_t idx = 0; idx < doc.size(); ++idx) {
    const json& j = doc[idx];
    std::string id = "#" + std::to_string(idx);
    if (j.is_object() && j.contains("id") && j["id"].is_string()) id = j["id"].get<std::string>();
    const auto where = in_component(id);
    auto fail = [&](const std::string& msg) { throw Error(ErrorKind::SchemaError, where + msg); };
    if (!j.is_object()) fail("entry must be an object");
    if (!j.contains("id") || !j["id"].is_string()) fail("missing string 'id'");
    if (!seen.insert(id).second) fail("duplicate id");
    if (!j.contains("name") || !j["name"].is_string()) fail("missing string 'name'");
    if (!j.contains("edp_type") || !j["edp_type"].is_string()) fail("missing string 'edp_type'");
    const auto edp = edp_type_from_string(j["edp_type"].get<std::string>());
    if (!edp) fail("unknown edp_type '" + j["edp_type"].get<std::string>() + "'");
    if (!j.contains("damage_states") || !j["damage_states"].is_array() || j["damage_states"].empty())
      fail("'damage_states' must be a non-empty list");

    ComponentSpec c;
    c.id = id;
    c.name = j["name"].get<std::string>();
    c.repair_cost.push_back(0.0);
    c.tags.push_back(std::nullopt);
    if (j.contains("ds0_tag")) {
      const auto& t = j["ds0_tag"];
      if (!t.is_string() || !tag_from_string(t.get<std::string>())) fail("bad ds0_tag");
      c.tags[0] = tag_from_string(t.get<std::string>());
    }
    for (std::size_t k = 0; k < j["damage_states"].size(); ++k) {
      const json& ds = j["damage_states"][k];
      const std::string dsn = "DS" + std::to_string(k + 1) + " ";
      if (!ds.is_object()) fail(dsn + "must be an object");
      for (const char* key : {"median", "dispersion", "repair_cost"})
        if (!ds.contains(key) || !ds[key].is_number()) fail(dsn + "missing number '" + key + "'");
      c.curves.push_back(FragilityCurve{*edp, ds["median"].get<double>(), ds["dispersion"].get<double>()});
      c.repair_cost.push_back(ds["repair_cost"].get<double>());
      std::optional<TagColor> tag;
      if (ds.contains("tag")) {
        if (!ds["tag"].is_string() || !tag_from_string(ds["tag"].get<std::string>()))
          fail(dsn + "tag must be one of Green, Yellow, Red");
        tag = tag_from_string(ds["tag"].get<std::string>());
      }
      c.tags.push_back(tag);
    }
    validate(c);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace shakedrill
