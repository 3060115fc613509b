#include "commands.hpp"

#include <csignal>
#include <pthread.h>

#include <charconv>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "service.hpp"
#include "shakedrill/error.hpp"
#include "shakedrill/scenario.hpp"

namespace shakedrill::app {

namespace {

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

// Writes to `path`, or to `out` when the path is empty.
bool emit(const std::string& path, const std::string& text, std::ostream& out, std::ostream& err) {
  if (path.empty()) {
    out << text;
    return static_cast<bool>(out);
  }
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) {
    err << "error: cannot write '" << path << "'\n";
    return false;
  }
  return true;
}

int exit_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::OutOfBounds:
    case ErrorKind::InvalidSite:
      return kExitOutOfBounds;
    case ErrorKind::UnknownRoom:
    case ErrorKind::InvalidWindow:
    case ErrorKind::InvalidConfig:
      return kExitUsage;
    default:
      return kExitBundle;
  }
}

std::optional<std::vector<double>> parse_csv_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    while (!tok.empty() && tok.front() == ' ') tok.erase(tok.begin());
    while (!tok.empty() && tok.back() == ' ') tok.pop_back();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size()) return std::nullopt;
    out.push_back(v);
  }
  if (out.empty()) return std::nullopt;
  return out;
}

struct SiteArgs {
  double lat = 0.0;
  double lon = 0.0;
  std::string room;
  std::uint64_t seed = 0;
  std::string bundle;
  std::string out;
  double window = 1.0;
};

void add_site_options(CLI::App* cmd, SiteArgs& a) {
  cmd->add_option("--lat", a.lat, "Site latitude, degrees north")->required();
  cmd->add_option("--lon", a.lon, "Site longitude, degrees east")->required();
  cmd->add_option("--room", a.room, "Room archetype")->required()->check(CLI::IsMember({"residence", "hospital"}));
  cmd->add_option("--seed", a.seed, "Seed for motion synthesis and damage sampling")->required();
  cmd->add_option("--bundle", a.bundle, "Scenario bundle manifest (JSON)")->required();
  cmd->add_option("--out", a.out, "Output path (default: stdout)");
}

int cmd_simulate(const SiteArgs& a, std::ostream& out, std::ostream& err) {
  ScenarioBundle bundle = load_bundle(a.bundle);
  const auto room = room_type_from_string(a.room);
  const SitePoint site{a.lon, a.lat};
  const auto report = run_drill(bundle, site, *room, a.seed, DrillOptions{a.window});
  return emit(a.out, report_to_text(report), out, err) ? kExitOk : kExitBundle;
}

int cmd_loss(const SiteArgs& a, std::size_t draws, std::ostream& out, std::ostream& err) {
  ScenarioBundle bundle = load_bundle(a.bundle);
  const auto room = room_type_from_string(a.room);
  const auto s = monte_carlo_loss(bundle, SitePoint{a.lon, a.lat}, *room, draws, a.seed);
  nlohmann::ordered_json j;
  j["draws"] = s.draws;
  j["seed"] = a.seed;
  j["mean"] = s.mean;
  j["std"] = s.std;
  j["p50"] = s.p50;
  j["p90"] = s.p90;
  return emit(a.out, j.dump() + "\n", out, err) ? kExitOk : kExitBundle;
}

int cmd_spectrum(const std::string& input, const std::string& periods_csv, double damping, const std::string& out_path,
                 std::ostream& out, std::ostream& err) {
  const auto periods = parse_csv_doubles(periods_csv);
  if (!periods) {
    err << "error: --periods must be a comma-separated list of numbers\n";
    return kExitUsage;
  }
  for (std::size_t i = 0; i < periods->size(); ++i) {
    if (!((*periods)[i] > 0.0) || (i > 0 && !((*periods)[i] > (*periods)[i - 1]))) {
      err << "error: --periods must be positive and strictly increasing\n";
      return kExitUsage;
    }
  }
  if (!(damping > 0.0 && damping < 1.0)) {
    err << "error: --damping must lie in (0, 1)\n";
    return kExitUsage;
  }
  std::ifstream in(input, std::ios::binary);
  if (!in) {
    err << "error: cannot read '" << input << "'\n";
    return kExitBundle;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  AccelTimeSeries ts = [&] {
    try {
      return parse_accel(ss.str(), input);
    } catch (const Error& e) {
      throw Error(e.kind(), input + ": " + e.detail());
    }
  }();
  const auto psa = response_spectrum(ts, *periods, damping);
  std::string csv = "period_s,psa_g\n";
  for (std::size_t i = 0; i < psa.size(); ++i) csv += format_double((*periods)[i]) + "," + format_double(psa[i]) + "\n";
  return emit(out_path, csv, out, err) ? kExitOk : kExitBundle;
}

int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err) {
  ScenarioBundle bundle = load_bundle(path);
  auto issues = bundle_issues(bundle);
  // Smoke-run every room at the grid centre.
  const auto& f = bundle.field;
  const SitePoint centre{0.5 * (f.origin().lon + f.max_lon()), 0.5 * (f.origin().lat + f.max_lat())};
  for (const auto& [type, room] : bundle.rooms) {
    try {
      run_drill(bundle, centre, type, 0);
    } catch (const Error& e) {
      issues.push_back(std::string(to_string(type)) + ": " + e.what());
    }
  }
  if (!issues.empty()) {
    for (const auto& i : issues) err << "error: " << i << "\n";
    return kExitBundle;
  }
  for (const auto& w : bundle.warnings) err << "warning: " << w << "\n";
  out << "ok: '" << bundle.name << "' with " << bundle.library.size() << " components, " << bundle.rooms.size()
      << " rooms, " << f.ncols() << "x" << f.nrows() << " grid\n";
  return kExitOk;
}

int cmd_serve(const ServiceConfig& cfg, std::ostream& out, std::ostream& err) {
  validate(cfg);
  auto service = std::make_shared<const DrillService>(load_bundle(cfg.bundle_path), cfg.drill);
  auto server = std::make_shared<HttpServer>(service, cfg.cors_allowed, cfg.static_dir);

  // SIGINT/SIGTERM are handled synchronously on a watcher thread; worker
  // threads inherit the blocked mask.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  if (server->bind(cfg.host, cfg.port) < 0) {
    err << "error: cannot bind " << cfg.host << ":" << cfg.port << "\n";
    return kExitBundle;
  }
  std::thread([server, signals] {
    int sig = 0;
    sigwait(&signals, &sig);
    server->stop();
  }).detach();

  out << "serving '" << service->bundle().name << "' on http://" << cfg.host << ":" << cfg.port << "\n" << std::flush;
  server->listen_after_bind();
  out << "shut down\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Seismic scenario drill engine"};
  app.require_subcommand(1);

  SiteArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run one drill and write its JSON report");
  add_site_options(simulate, sim);
  simulate->add_option("--window", sim.window, "Intensity envelope window, seconds")->capture_default_str();

  SiteArgs mc;
  std::size_t draws = 10000;
  auto* loss = app.add_subcommand("loss", "Monte Carlo loss summary for one site and room");
  add_site_options(loss, mc);
  loss->add_option("--draws", draws, "Number of realizations")->capture_default_str()->check(CLI::PositiveNumber);

  std::string spec_input, spec_periods, spec_out;
  double spec_damping = 0.05;
  auto* spectrum = app.add_subcommand("spectrum", "Pseudo-acceleration response spectrum of a record as CSV");
  spectrum->add_option("--input", spec_input, "Acceleration record (NPTS=/DT= format)")->required();
  spectrum->add_option("--periods", spec_periods, "Comma-separated periods, strictly increasing")->required();
  spectrum->add_option("--damping", spec_damping, "Damping ratio")->capture_default_str();
  spectrum->add_option("--out", spec_out, "CSV output path (default: stdout)");

  ServiceConfig serve_cfg;
  std::string serve_bundle, serve_static;
  auto* serve = app.add_subcommand("serve", "Serve the HTTP API for one bundle");
  serve->add_option("--bundle", serve_bundle, "Scenario bundle manifest (JSON)")->required();
  serve->add_option("--port", serve_cfg.port, "TCP port")->capture_default_str();
  serve->add_option("--host", serve_cfg.host, "Listen address")->capture_default_str();
  serve->add_flag("--cors", serve_cfg.cors_allowed, "Allow cross-origin requests");
  serve->add_option("--static", serve_static, "Directory of static UI assets to serve at /");
  serve->add_option("--window", serve_cfg.drill.envelope_window_s, "Intensity envelope window, seconds")
      ->capture_default_str();

  std::string validate_bundle;
  auto* validate_cmd = app.add_subcommand("validate", "Load a bundle and check every invariant");
  validate_cmd->add_option("--bundle", validate_bundle, "Scenario bundle manifest (JSON)")->required();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*simulate) return cmd_simulate(sim, out, err);
    if (*loss) return cmd_loss(mc, draws, out, err);
    if (*spectrum) return cmd_spectrum(spec_input, spec_periods, spec_damping, spec_out, out, err);
    if (*validate_cmd) return cmd_validate(validate_bundle, out, err);
    if (*serve) {
      serve_cfg.bundle_path = serve_bundle;
      if (!serve_static.empty()) serve_cfg.static_dir = serve_static;
      return cmd_serve(serve_cfg, out, err);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitBundle;
  }
  return kExitUsage;
}

}  // namespace shakedrill::app
