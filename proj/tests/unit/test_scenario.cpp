#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "shakedrill/error.hpp"
#include "shakedrill/scenario.hpp"

using namespace shakedrill;

namespace {

const ScenarioBundle& demo() {
  static const ScenarioBundle b = load_bundle(fixtures::demo_manifest());
  return b;
}

const ScenarioBundle& palm() {
  static const ScenarioBundle b = load_bundle(fixtures::palm_manifest());
  return b;
}

const SitePoint kPalm{fixtures::kPalmLon, fixtures::kPalmLat};
const SitePoint kZero{fixtures::kZeroLon, fixtures::kZeroLat};

ErrorKind drill_error(const ScenarioBundle& b, const SitePoint& s, RoomType room) {
  try {
    run_drill(b, s, room, 1);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected a drill error");
  return ErrorKind::InvalidConfig;
}

std::string load_message(const std::filesystem::path& p) {
  try {
    load_bundle(p);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ManifestError);
    return e.what();
  }
  FAIL("expected a manifest error");
  return {};
}

GroundMotionField scaled_field(const GroundMotionField& f, double k) {
  auto cells = f.cells();
  for (auto& c : cells) {
    c.pga_g *= k;
    c.pgv_cms *= k;
    for (auto& v : c.psa_g) v *= k;
  }
  return GroundMotionField(f.scenario_name(), f.origin(), f.dlon(), f.dlat(), f.ncols(), f.nrows(), f.periods(),
                           cells);
}

/// P(DS >= i) for i = 1..n from a pmf.
std::vector<double> exceedance(const DamagePMF& pmf) {
  std::vector<double> out;
  double tail = 0.0;
  for (std::size_t i = pmf.size(); i-- > 1;) {
    tail += pmf[i];
    out.insert(out.begin(), tail);
  }
  return out;
}

}  // namespace

TEST_CASE("load_bundle reads the demo manifest") {
  const auto& b = demo();
  CHECK(b.rooms.size() == 2);
  CHECK(b.library.size() >= 6);
  CHECK(b.rooms.at(RoomType::Residence).component_ids.size() == 3);
  CHECK(b.rooms.at(RoomType::Hospital).sdof.period_s == 0.5);
  CHECK(b.rupture.p_speed_kms == 6.0);
  CHECK(std::holds_alternative<SynthesizeSource>(b.accel_source));
  CHECK(b.warnings.empty());
  CHECK(bundle_issues(b).empty());
  CHECK(b.find_component("kitchen_cabinet") != nullptr);
  CHECK(b.find_component("nope") == nullptr);
}

TEST_CASE("load_bundle error paths") {
  const auto dir = fixtures::scratch("bundle");
  const std::string manifest = fixtures::read(fixtures::demo_manifest());

  SUBCASE("missing manifest") {
    CHECK(load_message(dir / "absent.json").find("absent.json") != std::string::npos);
  }
  SUBCASE("missing grid file names the path") {
    std::string text = manifest;
    text.replace(text.find("\"grid.gmgrid\""), 13, "\"nowhere.gmgrid\"");
    fixtures::write(dir / "m.json", text);
    CHECK(load_message(dir / "m.json").find("nowhere.gmgrid") != std::string::npos);
  }
  SUBCASE("unknown component id names the id") {
    std::filesystem::copy_file(fixtures::dir() / "shakeout_demo" / "grid.gmgrid", dir / "grid.gmgrid");
    std::filesystem::copy_file(fixtures::library(), dir / "lib.json");
    std::string text = manifest;
    text.replace(text.find("../fragility_library.json"), 25, "lib.json");
    text.replace(text.find("\"kitchen_cabinet\""), 17, "\"gas_heater\"");
    fixtures::write(dir / "m.json", text);
    CHECK(load_message(dir / "m.json").find("gas_heater") != std::string::npos);
  }
  SUBCASE("malformed json") {
    fixtures::write(dir / "m.json", "{\"name\": ");
    load_message(dir / "m.json");
  }
  SUBCASE("grid errors carry the grid path") {
    fixtures::write(dir / "grid.gmgrid", "#GMGRID name=x\n");
    std::filesystem::copy_file(fixtures::library(), dir / "lib.json");
    std::string text = manifest;
    text.replace(text.find("../fragility_library.json"), 25, "lib.json");
    fixtures::write(dir / "m.json", text);
    try {
      load_bundle(dir / "m.json");
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::MalformedHeader);
      CHECK(std::string(e.what()).find("grid.gmgrid") != std::string::npos);
    }
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("zero-intensity site yields an all-green, zero-loss report") {
  for (RoomType room : {RoomType::Residence, RoomType::Hospital}) {
    const auto r = run_drill(demo(), kZero, room, 12345);
    CHECK(r.im.pga_g == 0.0);
    CHECK(r.response.peak_rel_disp_cm == 0.0);
    CHECK(r.response.peak_abs_accel_g == 0.0);
    REQUIRE(!r.components.empty());
    for (const auto& c : r.components) {
      CHECK(c.edp == 0.0);
      CHECK(c.pmf[0] == 1.0);
      CHECK(c.sampled_ds == 0);
      CHECK(c.tag == TagColor::Green);
      CHECK(c.expected_loss == 0.0);
    }
    CHECK(r.total_expected_loss == 0.0);
    for (double v : r.envelope.values) CHECK(v == 0.0);
  }
}

TEST_CASE("identical inputs give identical reports") {
  const SitePoint site{-116.4, 33.9};
  const auto a = run_drill(demo(), site, RoomType::Hospital, 777);
  const auto b = run_drill(demo(), site, RoomType::Hospital, 777);
  CHECK(a == b);
  CHECK(report_to_text(a) == report_to_text(b));
  const auto c = run_drill(demo(), site, RoomType::Hospital, 778);
  CHECK(c.im == a.im);
  CHECK(!(c.response == a.response));
}

TEST_CASE("Palm Springs bookcase is red-tagged in nearly every seed") {
  int red = 0;
  double last_ds3 = 0.0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto r = run_drill(palm(), kPalm, RoomType::Residence, seed);
    const auto& bookcase = r.components.front();
    REQUIRE(bookcase.id == "bookcase_4shelf_unanchored");
    red += bookcase.tag == TagColor::Red;
    CHECK(bookcase.pmf[3] > 0.8);
    last_ds3 = bookcase.pmf[3];
    CHECK(r.warning.warning_time_s <= 0.0);
  }
  CHECK(red >= 95);
  CHECK(last_ds3 > 0.8);
}

TEST_CASE("Palm Springs warning time is about -4.1 s") {
  const auto r = run_drill(palm(), kPalm, RoomType::Residence, 1);
  CHECK(std::abs(r.warning.distance_km - 2.80) <= 0.01);
  CHECK(std::abs(r.warning.warning_time_s - (-4.125)) <= 1e-9);
}

TEST_CASE("drill error kinds") {
  CHECK(drill_error(palm(), kPalm, RoomType::Hospital) == ErrorKind::UnknownRoom);
  CHECK(drill_error(demo(), {-100.0, 33.5}, RoomType::Residence) == ErrorKind::OutOfBounds);

  ScenarioBundle b = demo();
  for (auto& c : b.library)
    if (c.id == "kitchen_cabinet")
      for (auto& curve : c.curves) curve.edp_type = EdpType::SDR;
  CHECK(drill_error(b, {-116.4, 33.9}, RoomType::Residence) == ErrorKind::MissingEDP);
  CHECK(!bundle_issues(b).empty());
}

TEST_CASE("Monte Carlo on a certain outcome is a point mass") {
  ScenarioBundle b = palm();
  ComponentSpec c;
  c.id = "fragile";
  c.name = "Always breaks";
  c.curves = {{EdpType::PFA_g, 1e-6, 0.1}};
  c.tags.assign(2, std::nullopt);
  c.repair_cost = {0.0, 500.0};
  b.library = {c};
  b.rooms.at(RoomType::Residence).component_ids = {"fragile"};
  const auto s = monte_carlo_loss(b, kPalm, RoomType::Residence, 1000, 9);
  CHECK(s.draws == 1000);
  CHECK(s.mean == 500.0);
  CHECK(s.std == 0.0);
  CHECK(s.p50 == 500.0);
  CHECK(s.p90 == 500.0);
  CHECK_THROWS_AS(monte_carlo_loss(b, kPalm, RoomType::Residence, 0, 9), Error);
}

TEST_CASE("Monte Carlo mean agrees with the expected loss within a CLT bound") {
  const std::size_t n = 20000;
  for (const auto* bundle : {&demo(), &palm()}) {
    for (const auto& [room, inv] : bundle->rooms) {
      for (const SitePoint site : {SitePoint{-116.4, 33.9}, SitePoint{-116.55, 33.83}}) {
        if (!bundle->field.contains(site)) continue;
        const auto r = run_drill(*bundle, site, room, 5);
        // Analytic variance of a sum of independent per-component losses.
        double var = 0.0;
        for (const auto& out : r.components) {
          const auto* spec = bundle->find_component(out.id);
          double m2 = 0.0;
          for (std::size_t i = 0; i < out.pmf.size(); ++i) m2 += out.pmf[i] * spec->repair_cost[i] * spec->repair_cost[i];
          var += m2 - out.expected_loss * out.expected_loss;
        }
        const auto s = monte_carlo_loss(*bundle, site, room, n, 5);
        const double bound = 4.0 * std::sqrt(std::max(var, 0.0) / n) + 1e-9;
        CHECK(std::abs(s.mean - r.total_expected_loss) <= bound);
        CHECK(s.p50 <= s.p90);
        if (var > 0.0) CHECK(std::abs(s.std - std::sqrt(var)) <= 0.05 * std::sqrt(var));
      }
    }
  }
}

TEST_CASE("Monte Carlo is reproducible for a fixed seed") {
  const SitePoint site{-116.4, 33.9};
  const auto a = monte_carlo_loss(demo(), site, RoomType::Hospital, 2000, 11);
  const auto b = monte_carlo_loss(demo(), site, RoomType::Hospital, 2000, 11);
  CHECK(a.mean == b.mean);
  CHECK(a.std == b.std);
  CHECK(a.p90 == b.p90);
}

TEST_CASE("scaling the field up never lowers exceedance probabilities (fuzzed)") {
  std::mt19937_64 gen(53);
  const auto& base = demo();
  std::uniform_real_distribution<double> ulon(base.field.origin().lon, base.field.max_lon());
  std::uniform_real_distribution<double> ulat(base.field.origin().lat, base.field.max_lat());
  std::uniform_real_distribution<double> uk(1.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    ScenarioBundle scaled = base;
    const double k = uk(gen);
    scaled.field = scaled_field(base.field, k);
    const SitePoint site{ulon(gen), ulat(gen)};
    const std::uint64_t seed = gen();
    for (RoomType room : {RoomType::Residence, RoomType::Hospital}) {
      const auto lo = run_drill(base, site, room, seed);
      const auto hi = run_drill(scaled, site, room, seed);
      for (std::size_t i = 0; i < lo.components.size(); ++i) {
        REQUIRE(hi.components[i].edp >= lo.components[i].edp);
        const auto a = exceedance(lo.components[i].pmf), b = exceedance(hi.components[i].pmf);
        for (std::size_t j = 0; j < a.size(); ++j) REQUIRE(b[j] >= a[j] - 1e-12);
        REQUIRE(hi.components[i].expected_loss >= lo.components[i].expected_loss - 1e-9);
      }
    }
  }
}

TEST_CASE("report fields are mutually consistent") {
  const auto r = run_drill(demo(), {-116.2, 34.0}, RoomType::Hospital, 4242);
  double total = 0.0;
  for (const auto& c : r.components) {
    double sum = 0.0;
    for (double p : c.pmf) sum += p;
    CHECK(std::abs(sum - 1.0) <= 1e-12);
    CHECK(c.sampled_ds < c.pmf.size());
    CHECK(c.pmf[c.sampled_ds] > 0.0);
    CHECK(c.edp == r.edp.at(c.edp_type));
    const auto* spec = demo().find_component(c.id);
    CHECK(c.tag == tag_for(*spec, c.sampled_ds));
    CHECK(c.expected_loss == expected_loss(*spec, c.pmf));
    total += c.expected_loss;
  }
  CHECK(r.total_expected_loss == total);
  CHECK(r.edp.at(EdpType::PFA_g) == r.response.peak_abs_accel_g);
  CHECK(r.edp.at(EdpType::PGA_g) == r.im.pga_g);
  CHECK(r.warning == arrival_times(demo().rupture, r.site));
  CHECK(r.envelope.values.size() == 4001);
  CHECK(*std::max_element(r.envelope.values.begin(), r.envelope.values.end()) == 1.0);
}

TEST_CASE("report text round-trips and is byte-stable") {
  std::mt19937_64 gen(59);
  std::uniform_real_distribution<double> ulon(-119.0, -115.5), ulat(33.0, 35.0);
  for (int k = 0; k < 10; ++k) {
    const auto room = k % 2 ? RoomType::Hospital : RoomType::Residence;
    const auto r = run_drill(demo(), {ulon(gen), ulat(gen)}, room, gen());
    const auto text = report_to_text(r);
    const auto back = parse_report(text);
    CHECK(back == r);
    CHECK(report_to_text(back) == text);
  }
  CHECK_THROWS_AS(parse_report("{}"), Error);
  CHECK_THROWS_AS(parse_report("not json"), Error);
}

TEST_CASE("files mode drives the structure with the nearest station record") {
  const auto b = load_bundle(fixtures::records_manifest());
  REQUIRE(std::holds_alternative<FilesSource>(b.accel_source));
  const auto& src = std::get<FilesSource>(b.accel_source);
  REQUIRE(src.stations.size() == 2);
  const SitePoint near_north{-116.7, 34.35}, near_south{-116.8, 34.05};
  CHECK(drill_motion(b, near_north, 1) == src.stations[0].record);
  CHECK(drill_motion(b, near_north, 2) == src.stations[0].record);
  CHECK(drill_motion(b, near_south, 1) == src.stations[1].record);
  const auto r = run_drill(b, near_north, RoomType::Residence, 3);
  CHECK(r.response == newmark_response(src.stations[0].record, b.rooms.at(RoomType::Residence).sdof));
}
