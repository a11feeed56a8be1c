#include "relaxform/service.hpp"

#include <algorithm>

#include <spdlog/spdlog.h>

#include "httplib.h"
#include "relaxform/error.hpp"
#include "relaxform/relax.hpp"

namespace relaxform {

namespace {

Reply error_reply(int status, const std::string& message) { return {status, {{"error", message}}}; }

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownTarget: return 404;
    case ErrorCode::SchemaMismatch: return 409;
    case ErrorCode::IoError: return 500;
    default: return 400;
  }
}

nlohmann::json decision_json(const Decision& d) {
  return {{"target", d.target},
          {"class", to_string(d.predicted_class)},
          {"probability", d.probability},
          {"p_optional", d.p_optional},
          {"theta", d.theta_used},
          {"endorsed", d.endorsed},
          {"final_required", d.final_required},
          {"no_model", d.no_model},
          {"latency_ms", std::chrono::duration<double, std::milli>(d.latency).count()}};
}

}  // namespace

void ServiceConfig::validate() const {
  if (timeout.count() <= 0) throw Error(ErrorCode::InvalidArgument, "timeout must be positive");
  if (port < 0 || port > 65535) throw Error(ErrorCode::InvalidArgument, "port out of range");
}

Service::Service(ServiceConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

Service::Snapshot Service::current() const {
  std::lock_guard lock(mutex_);
  return snapshot_;
}

void Service::install(std::shared_ptr<const ModelBundle> bundle) {
  std::lock_guard lock(mutex_);
  snapshot_.bundle = std::move(bundle);
  ++snapshot_.version;
}

bool Service::load_initial() {
  const auto r = reload();
  if (r.status != 200) spdlog::warn("no bundle loaded: {}", r.body.value("error", std::string()));
  return r.status == 200;
}

Reply Service::schema() const {
  const auto snap = current();
  if (!snap.bundle) return error_reply(503, "no bundle loaded");
  return {200, {{"bundle_version", snap.version}, {"schema", to_json(snap.bundle->schema)}}};
}

Reply Service::health() const {
  const auto snap = current();
  nlohmann::json body{{"status", snap.bundle ? "ok" : "no_bundle"}, {"bundle_version", snap.version}};
  if (snap.bundle) {
    body["schema_hash"] = snap.bundle->schema_hash();
    body["models"] = snap.bundle->models.size();
    body["created_at"] = snap.bundle->created_at;
  }
  return {snap.bundle ? 200 : 503, body};
}

Reply Service::predict(const std::string& body) const {
  const auto snap = current();
  if (!snap.bundle) return error_reply(503, "no bundle loaded");

  PartialForm form;
  std::optional<std::vector<std::string>> targets;
  try {
    const auto doc = nlohmann::json::parse(body);
    if (!doc.is_object()) return error_reply(400, "request body must be a JSON object");
    if (doc.contains("filled")) {
      if (!doc["filled"].is_object()) return error_reply(400, "'filled' must be an object");
      for (const auto& [k, v] : doc["filled"].items()) {
        if (!v.is_string()) return error_reply(400, "value of '" + k + "' must be a string");
        form.filled[k] = v.get<std::string>();
      }
    }
    if (doc.contains("targets")) {
      if (!doc["targets"].is_array()) return error_reply(400, "'targets' must be an array");
      targets.emplace();
      for (const auto& t : doc["targets"]) {
        if (!t.is_string()) return error_reply(400, "'targets' entries must be strings");
        targets->push_back(t.get<std::string>());
      }
    }
  } catch (const nlohmann::json::exception& e) {
    return error_reply(400, std::string("malformed JSON: ") + e.what());
  }

  const auto& bundle = *snap.bundle;
  for (const auto& [name, value] : form.filled)
    if (!bundle.schema.contains(name)) return error_reply(400, "unknown field '" + name + "'");

  nlohmann::json decisions = nlohmann::json::array();
  try {
    if (targets) {
      for (const auto& t : *targets) decisions.push_back(decision_json(predict_requirement(bundle, form, t)));
    } else {
      for (const auto& d : predict_all(bundle, form)) decisions.push_back(decision_json(d));
    }
  } catch (const Error& e) {
    return error_reply(status_for(e.code()), e.what());
  }
  return {200, {{"bundle_version", snap.version}, {"decisions", std::move(decisions)}}};
}

Reply Service::reload() {
  std::lock_guard serial(reload_mutex_);
  try {
    std::optional<FormSchema> expected;
    if (cfg_.schema_path) expected = load_schema(*cfg_.schema_path);
    auto fresh = std::make_shared<const ModelBundle>(load_bundle(cfg_.bundle_path, expected));
    const auto snap = current();
    if (snap.bundle && snap.bundle->schema_hash() != fresh->schema_hash())
      return error_reply(409, "bundle schema differs from the serving schema");
    install(fresh);
    const auto version = current().version;
    spdlog::info("bundle {} loaded as version {}", cfg_.bundle_path.string(), version);
    return {200, {{"bundle_version", version}, {"models", fresh->models.size()}}};
  } catch (const Error& e) {
    spdlog::error("reload failed: {}", e.what());
    return error_reply(status_for(e.code()), e.what());
  }
}

HttpServer::HttpServer(Service& service) : service_(service), server_(std::make_unique<httplib::Server>()) {
  const auto& cfg = service_.config();
  const auto secs = cfg.timeout.count() / 1000;
  const auto usecs = (cfg.timeout.count() % 1000) * 1000;
  server_->set_read_timeout(secs, usecs);
  server_->set_write_timeout(secs, usecs);

  const auto send = [](httplib::Response& res, const Reply& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  server_->Get("/schema", [this, send](const httplib::Request&, httplib::Response& res) { send(res, service_.schema()); });
  server_->Get("/health", [this, send](const httplib::Request&, httplib::Response& res) { send(res, service_.health()); });
  server_->Post("/predict",
                [this, send](const httplib::Request& req, httplib::Response& res) { send(res, service_.predict(req.body)); });
  server_->Post("/reload", [this, send](const httplib::Request&, httplib::Response& res) { send(res, service_.reload()); });
  server_->Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  server_->set_post_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
    const auto& allowed = service_.config().cors_origins;
    const auto origin = req.get_header_value("Origin");
    if (origin.empty() || allowed.empty()) return;
    const bool any = std::find(allowed.begin(), allowed.end(), "*") != allowed.end();
    if (!any && std::find(allowed.begin(), allowed.end(), origin) == allowed.end()) return;
    res.set_header("Access-Control-Allow-Origin", any ? "*" : origin);
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
  });
  server_->set_logger([](const httplib::Request& req, const httplib::Response& res) {
    spdlog::debug("{} {} -> {}", req.method, req.path, res.status);
  });
}

HttpServer::~HttpServer() = default;

int HttpServer::bind() {
  const auto& cfg = service_.config();
  const int port = cfg.port == 0 ? server_->bind_to_any_port(cfg.host) : (server_->bind_to_port(cfg.host, cfg.port) ? cfg.port : -1);
  if (port < 0) throw Error(ErrorCode::IoError, "cannot bind " + cfg.host + ":" + std::to_string(cfg.port));
  return port;
}

void HttpServer::run() { server_->listen_after_bind(); }

void HttpServer::stop() { server_->stop(); }

}  // namespace relaxform
