#include <chrono>
#include <csignal>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "relaxform/bundle.hpp"
#include "relaxform/dataset.hpp"
#include "relaxform/error.hpp"
#include "relaxform/eval.hpp"
#include "relaxform/pipeline.hpp"
#include "relaxform/relax.hpp"
#include "relaxform/service.hpp"

namespace rf = relaxform;

namespace {

rf::HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

int train(const std::string& data, const std::string& schema_path, const std::optional<std::string>& dict_path,
          const std::string& out, bool no_smote, bool no_endorser, std::uint64_t seed, const std::string& ts_column) {
  const auto schema = rf::load_schema(schema_path);
  const auto dataset = rf::load_instances(data, schema, {ts_column});
  const auto dict = dict_path ? rf::MeaninglessDictionary::load(*dict_path) : rf::MeaninglessDictionary{};

  rf::TrainConfig cfg;
  cfg.enable_smote = !no_smote;
  cfg.enable_endorser = !no_endorser;
  cfg.seed = seed;
  const auto split = rf::temporal_split(dataset, cfg.split);
  const auto bundle = rf::train_bundle(split.train, split.tune, dict, cfg);
  rf::save_bundle(bundle, out);

  std::printf("variant: %s\n", cfg.variant().c_str());
  std::printf("rows: train %zu, tune %zu, test %zu\n", split.train.size(), split.tune.size(), split.test.size());
  for (const auto& [target, m] : bundle.models)
    std::printf("model %s: theta %.2f%s, rows %zu required / %zu optional, %zu synthetic\n", target.c_str(), m.theta,
                m.theta_defaulted ? " (default)" : "", m.required_rows, m.optional_rows, m.synthetic_rows);
  for (const auto& [target, why] : bundle.skipped_targets) std::printf("skipped %s: %s\n", target.c_str(), why.c_str());
  std::printf("train duration: %.3f s\n", bundle.train_seconds);
  return 0;
}

int evaluate(const std::string& bundle_path, const std::string& data, const std::optional<std::string>& schema_path,
             const std::string& scenario, std::uint64_t seed, bool whole, bool json_only, const std::string& ts_column) {
  const auto mode = rf::parse_fill_mode(scenario);
  std::optional<rf::FormSchema> expected;
  if (schema_path) expected = rf::load_schema(*schema_path);
  const auto bundle = rf::load_bundle(bundle_path, expected);
  const auto dataset = rf::load_instances(data, bundle.schema, {ts_column});
  const auto test = whole ? dataset : rf::temporal_split(dataset, bundle.config.split).test;
  if (test.empty()) throw rf::Error(rf::ErrorCode::EmptyDataset, "evaluation set is empty");

  const auto report = rf::run_experiment(bundle, test, {mode, seed});
  if (!json_only) std::cout << rf::format_table(report) << "\n";
  std::cout << rf::to_json(report).dump(2) << "\n";
  return 0;
}

int predict(const std::string& bundle_path, const std::string& filled, const std::optional<std::string>& target) {
  const auto bundle = rf::load_bundle(bundle_path);
  rf::PartialForm form;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(filled);
    form.filled = doc.get<std::map<std::string, std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw rf::Error(rf::ErrorCode::ParseError, std::string("--filled must be a JSON object of strings: ") + e.what());
  }
  std::vector<rf::Decision> decisions;
  if (target) decisions.push_back(rf::predict_requirement(bundle, form, *target));
  else decisions = rf::predict_all(bundle, form);

  nlohmann::json out = nlohmann::json::array();
  for (const auto& d : decisions)
    out.push_back({{"target", d.target},
                   {"class", rf::to_string(d.predicted_class)},
                   {"probability", d.probability},
                   {"theta", d.theta_used},
                   {"endorsed", d.endorsed},
                   {"final_required", d.final_required},
                   {"no_model", d.no_model},
                   {"latency_ms", std::chrono::duration<double, std::milli>(d.latency).count()}});
  std::cout << out.dump(2) << "\n";
  return 0;
}

int serve(rf::ServiceConfig cfg) {
  spdlog::set_level(spdlog::level::from_str(cfg.log_level));
  rf::Service service(std::move(cfg));
  service.load_initial();
  rf::HttpServer server(service);
  const int port = server.bind();
  spdlog::info("listening on {}:{}", service.config().host, port);
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  server.run();
  g_server = nullptr;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learns when required form fields can be relaxed to optional"};
  app.require_subcommand(1);

  std::string data, schema, out, bundle_path, ts_column = "submitted_at";
  std::optional<std::string> dict, schema_opt, target;
  bool no_smote = false, no_endorser = false, whole = false, json_only = false;
  std::uint64_t seed = 0;

  auto* train_cmd = app.add_subcommand("train", "Split, build per-target models, tune thresholds, write a bundle");
  train_cmd->add_option("--data", data, "Historical submissions (CSV)")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--schema", schema, "Form schema (JSON)")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--dict", dict, "Meaningless-value dictionary, one entry per line")->check(CLI::ExistingFile);
  train_cmd->add_option("--out", out, "Bundle output path")->required();
  train_cmd->add_flag("--no-smote", no_smote, "Train on the unbalanced data");
  train_cmd->add_flag("--no-endorser", no_endorser, "Disable the threshold endorser");
  train_cmd->add_option("--seed", seed, "Global seed");
  train_cmd->add_option("--timestamp-column", ts_column, "Submission time column");

  std::string scenario = "sequential";
  auto* eval_cmd = app.add_subcommand("evaluate", "Simulate form filling on the test split and report metrics");
  eval_cmd->add_option("--bundle", bundle_path, "Bundle file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--data", data, "Submissions (CSV)")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--schema", schema_opt, "Check the bundle against this schema")->check(CLI::ExistingFile);
  eval_cmd->add_option("--scenario", scenario, "sequential or partial-random")
      ->check(CLI::IsMember({"sequential", "partial-random"}));
  eval_cmd->add_option("--seed", seed, "Seed for partial-random orders");
  eval_cmd->add_flag("--whole", whole, "Evaluate every row instead of the test split");
  eval_cmd->add_flag("--json", json_only, "Print only the JSON report");
  eval_cmd->add_option("--timestamp-column", ts_column, "Submission time column");

  std::string filled = "{}";
  auto* predict_cmd = app.add_subcommand("predict", "Decide which unfilled required fields may stay empty");
  predict_cmd->add_option("--bundle", bundle_path, "Bundle file")->required()->check(CLI::ExistingFile);
  predict_cmd->add_option("--filled", filled, "JSON object of filled field values");
  predict_cmd->add_option("--target", target, "Single target field");

  rf::ServiceConfig svc;
  std::string svc_bundle;
  std::optional<std::string> svc_schema;
  int timeout_ms = 5000;
  auto* serve_cmd = app.add_subcommand("serve", "Serve predictions over HTTP");
  serve_cmd->add_option("--bundle", svc_bundle, "Bundle file")->required();
  serve_cmd->add_option("--schema", svc_schema, "Serving schema; reloads must match it");
  serve_cmd->add_option("--host", svc.host, "Bind address");
  serve_cmd->add_option("--port", svc.port, "Port (0 picks a free one)");
  serve_cmd->add_option("--timeout-ms", timeout_ms, "Read/write timeout")->check(CLI::PositiveNumber);
  serve_cmd->add_option("--log-level", svc.log_level, "trace, debug, info, warn, error");
  serve_cmd->add_option("--cors", svc.cors_origins, "Allowed origins");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*train_cmd) return train(data, schema, dict, out, no_smote, no_endorser, seed, ts_column);
    if (*eval_cmd) return evaluate(bundle_path, data, schema_opt, scenario, seed, whole, json_only, ts_column);
    if (*predict_cmd) return predict(bundle_path, filled, target);
    if (*serve_cmd) {
      svc.bundle_path = svc_bundle;
      if (svc_schema) svc.schema_path = *svc_schema;
      svc.timeout = std::chrono::milliseconds(timeout_ms);
      return serve(std::move(svc));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
