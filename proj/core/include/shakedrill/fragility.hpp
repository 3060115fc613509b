#pragma once

// Lognormal fragility curves, damage-state probabilities, tags and loss.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shakedrill/rng.hpp"

namespace shakedrill {

enum class EdpType { PFA_g, PFV_cms, PGA_g, PGV_cms, SDR };

std::string_view to_string(EdpType t) noexcept;
std::optional<EdpType> edp_type_from_string(std::string_view s) noexcept;

enum class TagColor { Green, Yellow, Red };

std::string_view to_string(TagColor t) noexcept;
std::optional<TagColor> tag_from_string(std::string_view s) noexcept;

struct FragilityCurve {
  EdpType edp_type = EdpType::PFA_g;
  double median = 1.0;
  double dispersion = 0.5;
};

/// A component with damage states DS1..DSn. Index 0 throughout refers to
/// the undamaged state DS0.
struct ComponentSpec {
  std::string id;
  std::string name;
  std::vector<FragilityCurve> curves;
  /// Per-state tags, size n + 1. Missing entries take the default map.
  std::vector<std::optional<TagColor>> tags;
  /// Per-state repair cost, size n + 1, with repair_cost[0] == 0.
  std::vector<double> repair_cost;

  std::size_t num_damage_states() const noexcept { return curves.size(); }
  EdpType edp_type() const { return curves.front().edp_type; }
};

/// Standard normal CDF via erfc.
double standard_normal_cdf(double x) noexcept;

/// P(DS >= ds | edp) for one curve. Throws Error{NegativeEDP}.
double p_exceed(const FragilityCurve& curve, double edp);

/// Probability mass over DS0..DSn.
using DamagePMF = std::vector<double>;

/// Throws Error{OrderingViolation} if any mass would be negative.
DamagePMF ds_pmf(const ComponentSpec& component, double edp);

/// Inverse-CDF draw; consumes exactly one uniform from `rng`.
std::size_t sample_ds(const DamagePMF& pmf, Rng& rng);

/// DS0 is Green, DSn is Red and intermediate states are Yellow unless the
/// component overrides them. Throws Error{UnknownDamageState}.
TagColor tag_for(const ComponentSpec& component, std::size_t ds);

double expected_loss(const ComponentSpec& component, const DamagePMF& pmf);

/// Checks every ComponentSpec invariant, including exceedance ordering over
/// 50 log-spaced probe EDPs from 0.01 * median(DS1) to 100 * median(DSn).
void validate(const ComponentSpec& component);

/// JSON list of components; see docs/formats.md.
std::vector<ComponentSpec> parse_fragility_library(std::string_view text);

}  // namespace shakedrill
