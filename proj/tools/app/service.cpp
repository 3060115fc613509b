#include "service.hpp"

#include <charconv>
#include <cmath>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "shakedrill/error.hpp"

namespace shakedrill::app {

using nlohmann::ordered_json;

namespace {

// Keep-alive connections are closed within this bound so shutdown drains
// in-flight work in at most a few seconds.
constexpr time_t kKeepAliveSeconds = 5;

HttpResponse json_response(int status, const ordered_json& j) { return {status, j.dump() + "\n"}; }

HttpResponse error_response(int status, std::string_view kind, const std::string& message) {
  ordered_json j;
  j["error"] = kind;
  j["message"] = message;
  return json_response(status, j);
}

// A malformed query parameter; mapped to 400.
struct BadQuery {
  std::string message;
};

const std::string* find_param(const QueryParams& q, const std::string& key) {
  auto it = q.find(key);
  return it == q.end() ? nullptr : &it->second;
}

double require_double(const QueryParams& q, const std::string& key) {
  const std::string* v = find_param(q, key);
  if (!v) throw BadQuery{"missing query parameter '" + key + "'"};
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc{} || ptr != v->data() + v->size() || !std::isfinite(out))
    throw BadQuery{"query parameter '" + key + "' is not a finite number"};
  return out;
}

double optional_double(const QueryParams& q, const std::string& key, double fallback) {
  return find_param(q, key) ? require_double(q, key) : fallback;
}

std::uint64_t require_seed(const QueryParams& q) {
  const std::string* v = find_param(q, "seed");
  if (!v) throw BadQuery{"missing query parameter 'seed'"};
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc{} || ptr != v->data() + v->size() || v->empty())
    throw BadQuery{"query parameter 'seed' must be an unsigned integer"};
  return out;
}

SitePoint require_site(const QueryParams& q) { return {require_double(q, "lon"), require_double(q, "lat")}; }

int status_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::OutOfBounds:
    case ErrorKind::InvalidSite:
    case ErrorKind::UnknownRoom:
    case ErrorKind::InvalidWindow:
    case ErrorKind::InvalidTick:
      return 422;
    default:
      return 500;
  }
}

template <typename F>
HttpResponse guarded(F&& body) {
  try {
    return body();
  } catch (const BadQuery& e) {
    return error_response(400, "BadQuery", e.message);
  } catch (const Error& e) {
    return error_response(status_for(e.kind()), to_string(e.kind()), e.detail());
  } catch (const std::exception& e) {
    return error_response(500, "Internal", e.what());
  }
}

void check_in_bounds(const GroundMotionField& field, const SitePoint& site) {
  if (!is_valid_site(site) || !field.contains(site)) lookup_im(field, site);  // throws OutOfBounds
}

ordered_json warning_json(const WarningEstimate& w) {
  return {{"distance_km", w.distance_km},
          {"p_arrival_s", w.p_arrival_s},
          {"s_arrival_s", w.s_arrival_s},
          {"warning_time_s", w.warning_time_s}};
}

}  // namespace

void validate(const ServiceConfig& cfg) {
  if (cfg.port < 1 || cfg.port > 65535) throw Error(ErrorKind::InvalidConfig, "port must be in 1..65535");
}

DrillService::DrillService(ScenarioBundle bundle, DrillOptions options)
    : bundle_(std::move(bundle)), options_(options) {}

HttpResponse DrillService::health() const {
  ordered_json j;
  j["status"] = "ok";
  j["scenario"] = bundle_.name;
  return json_response(200, j);
}

HttpResponse DrillService::field(const QueryParams& q) const {
  return guarded([&] {
    const std::string* full = find_param(q, "full");
    if (full && *full != "true" && *full != "false") throw BadQuery{"'full' must be true or false"};
    const auto& f = bundle_.field;

    std::size_t stride = 1;
    if (!(full && *full == "true")) {
      auto points = [&](std::size_t s) { return ((f.ncols() + s - 1) / s) * ((f.nrows() + s - 1) / s); };
      while (points(stride) > kFieldPointBudget) ++stride;
    }

    ordered_json j;
    j["scenario"] = bundle_.name;
    j["grid"] = {{"lon0", f.origin().lon}, {"lat0", f.origin().lat}, {"dlon", f.dlon()},   {"dlat", f.dlat()},
                 {"ncols", f.ncols()},     {"nrows", f.nrows()},     {"periods", f.periods()}};
    const auto& r = bundle_.rupture;
    j["rupture"] = {{"name", r.name},
                    {"epicenter_lon", r.epicenter.lon},
                    {"epicenter_lat", r.epicenter.lat},
                    {"origin_time_s", r.origin_time_s},
                    {"p_speed_kms", r.p_speed_kms},
                    {"s_speed_kms", r.s_speed_kms},
                    {"alert_latency_s", r.alert_latency_s}};
    ordered_json rooms = ordered_json::array();
    for (const auto& [type, room] : bundle_.rooms) rooms.push_back(to_string(type));
    j["rooms"] = rooms;

    ordered_json pts = ordered_json::array();
    std::size_t lat_cols = 0, lat_rows = 0;
    for (std::size_t row = 0; row < f.nrows(); row += stride) {
      ++lat_rows;
      lat_cols = 0;
      for (std::size_t col = 0; col < f.ncols(); col += stride) {
        ++lat_cols;
        const auto node = f.node(col, row);
        const auto& im = f.at(col, row);
        pts.push_back({{"lon", node.lon},
                       {"lat", node.lat},
                       {"pga_g", im.pga_g},
                       {"pgv_cms", im.pgv_cms},
                       {"psa_g", im.psa_g}});
      }
    }
    j["lattice"] = {{"stride", stride}, {"ncols", lat_cols}, {"nrows", lat_rows}, {"points", std::move(pts)}};
    return json_response(200, j);
  });
}

HttpResponse DrillService::report(const QueryParams& q) const {
  return guarded([&] {
    const SitePoint site = require_site(q);
    const std::string* room_name = find_param(q, "room");
    if (!room_name) throw BadQuery{"missing query parameter 'room'"};
    const std::uint64_t seed = require_seed(q);
    const auto room = room_type_from_string(*room_name);
    if (!room) throw Error(ErrorKind::UnknownRoom, "unknown room '" + *room_name + "'");
    return HttpResponse{200, report_to_text(run_drill(bundle_, site, *room, seed, options_))};
  });
}

HttpResponse DrillService::warning(const QueryParams& q) const {
  return guarded([&] {
    const SitePoint site = require_site(q);
    const double tick = optional_double(q, "tick", 1.0);
    check_in_bounds(bundle_.field, site);
    const auto est = arrival_times(bundle_.rupture, site);
    ordered_json j = warning_json(est);
    j["tick_s"] = tick;
    j["countdown"] = countdown_track(est, tick);
    return json_response(200, j);
  });
}

HttpResponse DrillService::envelope(const QueryParams& q) const {
  return guarded([&] {
    const SitePoint site = require_site(q);
    const std::uint64_t seed = require_seed(q);
    const double window = optional_double(q, "window", options_.envelope_window_s);
    check_in_bounds(bundle_.field, site);
    const auto env = intensity_envelope(drill_motion(bundle_, site, seed), window);
    ordered_json j;
    j["dt"] = env.dt;
    j["window_s"] = env.window_s;
    j["values"] = env.values;
    return json_response(200, j);
  });
}

HttpResponse DrillService::handle(std::string_view path, const QueryParams& q) const {
  if (path == "/api/health") return health();
  if (path == "/api/field") return field(q);
  if (path == "/api/report") return report(q);
  if (path == "/api/warning") return warning(q);
  if (path == "/api/envelope") return envelope(q);
  return error_response(404, "NotFound", "no endpoint at '" + std::string(path) + "'");
}

HttpServer::HttpServer(std::shared_ptr<const DrillService> service, bool cors_allowed,
                       const std::optional<std::filesystem::path>& static_dir)
    : service_(std::move(service)), server_(std::make_unique<httplib::Server>()) {
  server_->set_keep_alive_timeout(kKeepAliveSeconds);
  if (cors_allowed) {
    server_->set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                  {"Access-Control-Allow-Methods", "GET, OPTIONS"},
                                  {"Access-Control-Allow-Headers", "Content-Type"}});
    server_->Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  }
  if (static_dir) server_->set_mount_point("/", static_dir->string());

  auto svc = service_;
  for (const char* path : {"/api/health", "/api/field", "/api/report", "/api/warning", "/api/envelope"}) {
    server_->Get(path, [svc](const httplib::Request& req, httplib::Response& res) {
      QueryParams q(req.params.begin(), req.params.end());
      HttpResponse out = svc->handle(req.path, q);
      res.status = out.status;
      res.set_content(out.body, out.content_type);
    });
  }
}

HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return server_->bind_to_any_port(host);
  return server_->bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen_after_bind() { return server_->listen_after_bind(); }

void HttpServer::wait_until_ready() const { server_->wait_until_ready(); }

void HttpServer::stop() { server_->stop(); }

}  // namespace shakedrill::app
