#include "relaxform/bundle.hpp"

#include <fstream>
#include <sstream>

#include "relaxform/error.hpp"

namespace relaxform {

const TargetModel* ModelBundle::model(std::string_view target) const {
  const auto it = models.find(std::string(target));
  return it == models.end() ? nullptr : &it->second;
}

nlohmann::json to_json(const ModelBundle& bundle) {
  nlohmann::json models = nlohmann::json::object();
  for (const auto& [name, m] : bundle.models) {
    models[name] = {{"theta", m.theta},
                    {"theta_defaulted", m.theta_defaulted},
                    {"required_rows", m.required_rows},
                    {"optional_rows", m.optional_rows},
                    {"synthetic_rows", m.synthetic_rows},
                    {"net", bn::to_json(m.net)}};
  }
  return {{"bundle_version", kBundleVersion},
          {"schema_hash", bundle.schema_hash()},
          {"schema", to_json(bundle.schema)},
          {"preprocessor", to_json(bundle.preprocessor)},
          {"models", std::move(models)},
          {"skipped_targets", bundle.skipped_targets},
          {"train_config", to_json(bundle.config)},
          {"train_seconds", bundle.train_seconds},
          {"created_at", bundle.created_at}};
}

ModelBundle bundle_from_json(const nlohmann::json& doc, const std::optional<FormSchema>& expected) {
  try {
    const int version = doc.at("bundle_version").get<int>();
    if (version != kBundleVersion)
      throw Error(ErrorCode::ParseError, "unsupported bundle_version " + std::to_string(version));
    ModelBundle b;
    b.schema = schema_from_json(doc.at("schema"));
    const auto stored_hash = doc.at("schema_hash").get<std::string>();
    if (stored_hash != b.schema_hash())
      throw Error(ErrorCode::ParseError, "bundle schema_hash does not match its embedded schema");
    if (expected && expected->hash() != stored_hash)
      throw Error(ErrorCode::SchemaMismatch,
                  "bundle was trained for schema " + stored_hash + ", serving schema is " + expected->hash());
    b.preprocessor = preprocessor_from_json(doc.at("preprocessor"), b.schema);
    for (const auto& [name, jm] : doc.at("models").items()) {
      TargetModel m;
      m.target = name;
      m.theta = jm.at("theta").get<double>();
      m.theta_defaulted = jm.at("theta_defaulted").get<bool>();
      m.required_rows = jm.at("required_rows").get<std::size_t>();
      m.optional_rows = jm.at("optional_rows").get<std::size_t>();
      m.synthetic_rows = jm.at("synthetic_rows").get<std::size_t>();
      m.net = bn::bayes_net_from_json(jm.at("net"));
      for (const auto& [key, cuts] : b.preprocessor.bins)
        if (key.second == name) m.bins[key.first] = cuts;
      b.models.emplace(name, std::move(m));
    }
    b.skipped_targets = doc.at("skipped_targets").get<std::map<std::string, std::string>>();
    b.config = train_config_from_json(doc.at("train_config"));
    b.train_seconds = doc.at("train_seconds").get<double>();
    b.created_at = doc.at("created_at").get<std::string>();
    return b;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("bundle: ") + e.what());
  }
}

std::string serialize_bundle(const ModelBundle& bundle) { return to_json(bundle).dump(2) + "\n"; }

void save_bundle(const ModelBundle& bundle, const std::filesystem::path& path) {
  const auto text = serialize_bundle(bundle);
  // Write-then-rename so a concurrent reader never sees a partial file.
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write bundle to " + tmp.string());
    out << text;
    if (!out) throw Error(ErrorCode::IoError, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot move bundle into place at " + path.string() + ": " + ec.message());
}

ModelBundle load_bundle(const std::filesystem::path& path, const std::optional<FormSchema>& expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open bundle " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, "bundle " + path.string() + ": " + e.what());
  }
  return bundle_from_json(doc, expected);
}

}  // namespace relaxform
