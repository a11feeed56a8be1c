#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "relaxform/bn/network.hpp"
#include "relaxform/config.hpp"
#include "relaxform/dataset.hpp"
#include "relaxform/preprocess.hpp"

namespace relaxform {

inline constexpr int kBundleVersion = 1;

struct TargetModel {
  std::string target;
  bn::BayesNet net;  // target node states are {"Required", "Optional"}
  double theta = 0.0;
  /// Tuning set was empty, theta fell back to 0.5.
  bool theta_defaulted = false;
  /// Cut points of each numeric feature, fitted for this target.
  std::map<std::string, std::vector<double>> bins;
  std::size_t required_rows = 0;  // training rows per class, before oversampling
  std::size_t optional_rows = 0;
  std::size_t synthetic_rows = 0;
};

struct ModelBundle {
  FormSchema schema;
  PreprocessorModel preprocessor;
  std::map<std::string, TargetModel> models;
  /// Required fields that had no model: dropped as constant or one-class.
  std::map<std::string, std::string> skipped_targets;
  TrainConfig config;
  double train_seconds = 0.0;
  std::string created_at;

  std::string schema_hash() const { return schema.hash(); }
  const TargetModel* model(std::string_view target) const;
};

nlohmann::json to_json(const ModelBundle& bundle);
/// Throws SchemaMismatch when `expected` is given and its hash differs.
ModelBundle bundle_from_json(const nlohmann::json& doc, const std::optional<FormSchema>& expected = std::nullopt);

/// Canonical text: sorted keys, two-space indent, trailing newline.
std::string serialize_bundle(const ModelBundle& bundle);
void save_bundle(const ModelBundle& bundle, const std::filesystem::path& path);
ModelBundle load_bundle(const std::filesystem::path& path, const std::optional<FormSchema>& expected = std::nullopt);

}  // namespace relaxform
