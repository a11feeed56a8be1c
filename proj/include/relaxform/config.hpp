#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "json.hpp"
#include "relaxform/bn/structure.hpp"
#include "relaxform/dataset.hpp"
#include "relaxform/smote.hpp"

namespace relaxform {

enum class DiscretizerMode { Mdlp, EqualFrequency };

struct TrainConfig {
  SmoteConfig smote;
  bn::StructureSearchConfig structure;
  double laplace_alpha = 1.0;
  DiscretizerMode discretizer = DiscretizerMode::Mdlp;
  std::size_t equal_frequency_bins = 10;
  bool enable_smote = true;
  bool enable_endorser = true;
  /// Global seed; SMOTE and structure seeds are derived from it per target.
  std::uint64_t seed = 0;
  SplitRatios split;

  /// "full", "no-smote", "no-endorser" or "plain-bn".
  std::string variant() const;
};

nlohmann::json to_json(const TrainConfig& cfg);
TrainConfig train_config_from_json(const nlohmann::json& doc);

}  // namespace relaxform
