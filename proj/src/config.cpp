#include "relaxform/config.hpp"

#include "relaxform/error.hpp"

namespace relaxform {

std::string TrainConfig::variant() const {
  if (enable_smote && enable_endorser) return "full";
  if (enable_endorser) return "no-smote";
  if (enable_smote) return "no-endorser";
  return "plain-bn";
}

nlohmann::json to_json(const TrainConfig& cfg) {
  return {
      {"variant", cfg.variant()},
      {"enable_smote", cfg.enable_smote},
      {"enable_endorser", cfg.enable_endorser},
      {"seed", cfg.seed},
      {"laplace_alpha", cfg.laplace_alpha},
      {"discretizer", cfg.discretizer == DiscretizerMode::Mdlp ? "mdlp" : "equal-frequency"},
      {"equal_frequency_bins", cfg.equal_frequency_bins},
      {"smote", {{"k", cfg.smote.k}, {"target_ratio", cfg.smote.target_ratio}}},
      {"structure",
       {{"max_parents", cfg.structure.max_parents},
        {"max_iterations", cfg.structure.max_iterations},
        {"restarts", cfg.structure.restarts},
        {"score_epsilon", cfg.structure.score_epsilon},
        {"allow_reversal", cfg.structure.allow_reversal}}},
      {"split", {{"train", cfg.split.train}, {"tune", cfg.split.tune}, {"test", cfg.split.test}}},
  };
}

TrainConfig train_config_from_json(const nlohmann::json& doc) {
  try {
    TrainConfig cfg;
    cfg.enable_smote = doc.at("enable_smote").get<bool>();
    cfg.enable_endorser = doc.at("enable_endorser").get<bool>();
    cfg.seed = doc.at("seed").get<std::uint64_t>();
    cfg.laplace_alpha = doc.at("laplace_alpha").get<double>();
    const auto disc = doc.at("discretizer").get<std::string>();
    if (disc == "mdlp") cfg.discretizer = DiscretizerMode::Mdlp;
    else if (disc == "equal-frequency") cfg.discretizer = DiscretizerMode::EqualFrequency;
    else throw Error(ErrorCode::ParseError, "unknown discretizer '" + disc + "'");
    cfg.equal_frequency_bins = doc.at("equal_frequency_bins").get<std::size_t>();
    const auto& s = doc.at("smote");
    cfg.smote.k = s.at("k").get<std::size_t>();
    cfg.smote.target_ratio = s.at("target_ratio").get<double>();
    const auto& st = doc.at("structure");
    cfg.structure.max_parents = st.at("max_parents").get<std::size_t>();
    cfg.structure.max_iterations = st.at("max_iterations").get<std::size_t>();
    cfg.structure.restarts = st.at("restarts").get<std::size_t>();
    cfg.structure.score_epsilon = st.at("score_epsilon").get<double>();
    cfg.structure.allow_reversal = st.at("allow_reversal").get<bool>();
    const auto& sp = doc.at("split");
    cfg.split = {sp.at("train").get<double>(), sp.at("tune").get<double>(), sp.at("test").get<double>()};
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("train config: ") + e.what());
  }
}

}  // namespace relaxform
