#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "relaxform/bn/data.hpp"
#include "relaxform/bn/inference.hpp"
#include "relaxform/bundle.hpp"
#include "relaxform/config.hpp"
#include "relaxform/preprocess.hpp"
#include "relaxform/smote.hpp"

namespace relaxform {

// --- state encoding shared by training, tuning and prediction ------------

/// Node states of `field` in the network of `target`:
///   textual      {Required, Optional}
///   categorical  {Optional, vocab...}
///   numerical    {Optional, one interval per (field, target) bin}
/// The target itself always has {Required, Optional}.
std::vector<std::string> state_labels(const PreprocessorModel& model, const std::string& field,
                                      const std::string& target);

/// State index of an abstract cell, or nullopt when it carries no evidence
/// (unseen category).
std::optional<std::size_t> encode_cell(const PreprocessorModel& model, const std::string& field,
                                       const std::string& target, const CellValue& cell);

BinaryClass class_of(const CellValue& cell);

// --- per-target training data --------------------------------------------

/// Temporary training set for one target: the target collapsed to its
/// binary class, every other retained field as a feature.
struct LabeledDataset {
  std::string target;
  std::vector<std::string> features;  // tab order
  std::vector<FieldKind> kinds;
  std::vector<std::vector<std::string>> feature_states;
  std::map<std::string, std::vector<double>> bins;
  std::vector<std::vector<std::int32_t>> rows;  // per instance, one state code per feature
  std::vector<BinaryClass> labels;

  std::size_t count(BinaryClass c) const;
};

/// Fits the per-target bins of each numeric feature (supervised by the
/// target class) and encodes every row. Throws TargetConstant when only one
/// class is present.
LabeledDataset make_target_dataset(const PreprocessorModel& model, const std::vector<PreprocessedInstance>& train,
                                   const std::string& target, const TrainConfig& cfg);

/// SMOTE view: numeric features are ordinal bin indices (NaN when
/// Optional), textual and categorical features are categorical codes.
std::vector<EncodedInstance> encode_for_smote(const LabeledDataset& data);
LabeledDataset decode_from_smote(const LabeledDataset& layout, const std::vector<EncodedInstance>& rows);

/// Network training table: the target plus the features, in tab order.
bn::DiscreteData to_discrete(const LabeledDataset& data, const FormSchema& schema);

// --- model building and threshold tuning ---------------------------------

/// Required fields that survived preprocessing, in tab order.
std::vector<std::string> eligible_targets(const PreprocessorModel& model);

struct BuildResult {
  std::map<std::string, TargetModel> models;
  std::map<std::string, std::string> skipped;  // target -> reason
  /// Training table handed to the structure learner, for inspection.
  std::map<std::string, LabeledDataset> training_sets;
};

/// One network per eligible target. Fitted bins are written back into
/// `model.bins`. Seeds are derived per target name.
BuildResult build_models(PreprocessorModel& model, const std::vector<PreprocessedInstance>& train,
                         const TrainConfig& cfg, bool keep_training_sets = false);

/// P(target = Optional | cells) where `cells` has been transformed for the target.
bn::Posterior target_posterior(const PreprocessorModel& model, const TargetModel& target_model,
                               const PreprocessedInstance& cells);

struct ThresholdSweep {
  double theta = 0.5;
  bool defaulted = false;
  std::array<double, 21> accuracy{};  // per grid point, NaN when defaulted
  std::size_t instances = 0;
};

/// Every tuning row predicts its target from all other retained fields; the
/// grid value with the highest accuracy wins, ties to the smallest theta.
/// With the endorser disabled every theta is 0.
std::map<std::string, ThresholdSweep> tune_thresholds(const PreprocessorModel& model,
                                                      const std::map<std::string, TargetModel>& models,
                                                      const std::vector<PreprocessedInstance>& tune,
                                                      bool enable_endorser);

/// Preprocess, build, tune, and package. `train` and `tune` are the first
/// two parts of a temporal split.
ModelBundle train_bundle(const Dataset& train, const Dataset& tune, const MeaninglessDictionary& dict,
                         const TrainConfig& cfg);

}  // namespace relaxform
