#pragma once

// HTTP surface of the drill engine. DrillService maps (path, query) to a
// response without touching sockets so it can be tested directly;
// HttpServer binds it to cpp-httplib.

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "shakedrill/scenario.hpp"

namespace httplib {
class Server;
}

namespace shakedrill::app {

struct ServiceConfig {
  int port = 8080;
  std::filesystem::path bundle_path;
  bool cors_allowed = false;
  std::string host = "0.0.0.0";
  std::optional<std::filesystem::path> static_dir;
  DrillOptions drill;
};

/// Throws Error{InvalidConfig} unless port is in 1..65535.
void validate(const ServiceConfig& cfg);

using QueryParams = std::multimap<std::string, std::string>;

struct HttpResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

/// Lattice point budget for the default /api/field payload.
inline constexpr std::size_t kFieldPointBudget = 10'000;

class DrillService {
 public:
  explicit DrillService(ScenarioBundle bundle, DrillOptions options = {});

  const ScenarioBundle& bundle() const noexcept { return bundle_; }

  HttpResponse health() const;
  HttpResponse field(const QueryParams& q) const;
  HttpResponse report(const QueryParams& q) const;
  HttpResponse warning(const QueryParams& q) const;
  HttpResponse envelope(const QueryParams& q) const;

  /// Dispatches on the request path; 404 for anything unknown.
  HttpResponse handle(std::string_view path, const QueryParams& q) const;

 private:
  ScenarioBundle bundle_;
  DrillOptions options_;
};

class HttpServer {
 public:
  HttpServer(std::shared_ptr<const DrillService> service, bool cors_allowed,
             const std::optional<std::filesystem::path>& static_dir = std::nullopt);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds `port`, or any free port when `port` is 0. Returns the bound port
  /// or -1.
  int bind(const std::string& host, int port);
  /// Blocks serving requests until stop().
  bool listen_after_bind();
  void wait_until_ready() const;
  /// Stops accepting; in-flight requests finish before listen returns.
  void stop();

 private:
  std::shared_ptr<const DrillService> service_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace shakedrill::app
