#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "relaxform/bundle.hpp"

namespace httplib {
class Server;
}

namespace relaxform {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path bundle_path;
  /// When set, every (re)loaded bundle must have been trained on this schema.
  std::optional<std::filesystem::path> schema_path;
  std::chrono::milliseconds timeout{5000};
  std::string log_level = "info";
  /// Origins echoed in Access-Control-Allow-Origin; "*" allows any.
  std::vector<std::string> cors_origins;

  void validate() const;  // throws InvalidArgument
};

struct Reply {
  int status = 200;
  nlohmann::json body;
};

/// Transport-independent request handling. The bundle is immutable once
/// loaded; reload swaps the pointer, so a request works on one bundle from
/// start to finish.
class Service {
 public:
  explicit Service(ServiceConfig cfg);

  /// Loads the configured bundle. Returns false and logs when it cannot, the
  /// service then answers 503 until a reload succeeds.
  bool load_initial();
  /// Installs a bundle directly (tests, embedding).
  void install(std::shared_ptr<const ModelBundle> bundle);

  Reply schema() const;
  Reply health() const;
  Reply predict(const std::string& body) const;
  Reply reload();

  const ServiceConfig& config() const { return cfg_; }

 private:
  struct Snapshot {
    std::shared_ptr<const ModelBundle> bundle;
    std::uint64_t version = 0;
  };
  Snapshot current() const;

  ServiceConfig cfg_;
  mutable std::mutex mutex_;
  Snapshot snapshot_;
  std::mutex reload_mutex_;
};

/// HTTP front end on cpp-httplib.
class HttpServer {
 public:
  HttpServer(Service& service);
  ~HttpServer();

  /// Binds the configured host and port (0 picks a free port); returns the port.
  int bind();
  /// Serves until stop(); call after bind().
  void run();
  void stop();

 private:
  Service& service_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace relaxform
