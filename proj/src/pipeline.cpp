#include "relaxform/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>

#include "relaxform/bn/structure.hpp"
#include "relaxform/discretize.hpp"
#include "relaxform/endorser.hpp"
#include "relaxform/error.hpp"
#include "relaxform/rng.hpp"

namespace relaxform {

namespace {

std::vector<std::string> labels_for(FieldKind kind, const std::vector<std::string>* vocab,
                                    const std::vector<double>& cuts) {
  switch (kind) {
    case FieldKind::Textual: return {"Required", "Optional"};
    case FieldKind::Categorical: {
      std::vector<std::string> out{"Optional"};
      if (vocab) out.insert(out.end(), vocab->begin(), vocab->end());
      return out;
    }
    case FieldKind::Numerical: {
      std::vector<std::string> out{"Optional"};
      for (std::size_t b = 0; b <= cuts.size(); ++b) out.push_back(interval_label(cuts, b));
      return out;
    }
  }
  return {};
}

std::optional<std::size_t> encode_with(FieldKind kind, const std::vector<std::string>* vocab,
                                       const std::vector<double>& cuts, const CellValue& cell) {
  if (cell.tag == CellTag::Optional) return kind == FieldKind::Textual ? 1 : 0;
  switch (kind) {
    case FieldKind::Textual:
      return cell.tag == CellTag::Required ? std::optional<std::size_t>(0) : std::nullopt;
    case FieldKind::Categorical: {
      if (cell.tag != CellTag::Category || !vocab) return std::nullopt;
      const auto it = std::find(vocab->begin(), vocab->end(), cell.label);
      if (it == vocab->end()) return std::nullopt;
      return 1 + static_cast<std::size_t>(it - vocab->begin());
    }
    case FieldKind::Numerical: {
      const std::size_t bins = cuts.size() + 1;
      if (cell.tag == CellTag::Numeric) return 1 + bin_index(cuts, cell.number);
      if (cell.tag == CellTag::Interval) return 1 + std::min(cell.bin, bins - 1);
      return std::nullopt;
    }
  }
  return std::nullopt;
}

const std::vector<std::string>* vocab_of(const PreprocessorModel& model, const std::string& field) {
  const auto it = model.category_vocab.find(field);
  return it == model.category_vocab.end() ? nullptr : &it->second;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::vector<std::string> state_labels(const PreprocessorModel& model, const std::string& field,
                                      const std::string& target) {
  if (field == target) return {"Required", "Optional"};
  return labels_for(model.schema.field(field).kind, vocab_of(model, field), model.cuts(field, target));
}

std::optional<std::size_t> encode_cell(const PreprocessorModel& model, const std::string& field,
                                       const std::string& target, const CellValue& cell) {
  if (field == target) return static_cast<std::size_t>(class_of(cell));
  return encode_with(model.schema.field(field).kind, vocab_of(model, field), model.cuts(field, target), cell);
}

BinaryClass class_of(const CellValue& cell) {
  return cell.is_optional() ? BinaryClass::Optional : BinaryClass::Required;
}

std::size_t LabeledDataset::count(BinaryClass c) const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), c));
}

LabeledDataset make_target_dataset(const PreprocessorModel& model, const std::vector<PreprocessedInstance>& train,
                                   const std::string& target, const TrainConfig& cfg) {
  if (!model.retained(target))
    throw Error(ErrorCode::InvalidArgument, "target '" + target + "' is not a retained field");
  LabeledDataset ds;
  ds.target = target;
  for (const auto& inst : train) ds.labels.push_back(class_of(inst.at(target)));
  if (ds.count(BinaryClass::Optional) == 0 || ds.count(BinaryClass::Required) == 0)
    throw Error(ErrorCode::TargetConstant, "target '" + target + "' has a single class in training data");

  for (const auto& name : model.retained_fields()) {
    if (name == target) continue;
    const auto kind = model.schema.field(name).kind;
    ds.features.push_back(name);
    ds.kinds.push_back(kind);
    std::vector<double> cuts;
    if (kind == FieldKind::Numerical) {
      if (cfg.discretizer == DiscretizerMode::Mdlp) {
        std::vector<LabeledValue> values;
        for (std::size_t i = 0; i < train.size(); ++i) {
          const auto& cell = train[i].at(name);
          if (cell.tag == CellTag::Numeric) values.push_back({cell.number, ds.labels[i]});
        }
        cuts = fit_mdlp_cuts(values);
      } else {
        std::vector<double> values;
        for (const auto& inst : train)
          if (inst.at(name).tag == CellTag::Numeric) values.push_back(inst.at(name).number);
        cuts = fit_equal_frequency_cuts(values, cfg.equal_frequency_bins);
      }
      ds.bins[name] = cuts;
    }
    ds.feature_states.push_back(labels_for(kind, vocab_of(model, name), cuts));
  }

  ds.rows.reserve(train.size());
  for (const auto& inst : train) {
    std::vector<std::int32_t> row;
    row.reserve(ds.features.size());
    for (std::size_t f = 0; f < ds.features.size(); ++f) {
      const auto it = ds.bins.find(ds.features[f]);
      static const std::vector<double> kNoCuts;
      const auto code = encode_with(ds.kinds[f], vocab_of(model, ds.features[f]),
                                    it == ds.bins.end() ? kNoCuts : it->second, inst.at(ds.features[f]));
      if (!code) throw Error(ErrorCode::InvalidArgument, "training cell of '" + ds.features[f] + "' cannot be encoded");
      row.push_back(static_cast<std::int32_t>(*code));
    }
    ds.rows.push_back(std::move(row));
  }
  return ds;
}

std::vector<EncodedInstance> encode_for_smote(const LabeledDataset& data) {
  std::vector<EncodedInstance> out;
  out.reserve(data.rows.size());
  for (std::size_t i = 0; i < data.rows.size(); ++i) {
    EncodedInstance e;
    e.cls = data.labels[i];
    for (std::size_t f = 0; f < data.features.size(); ++f) {
      const auto code = data.rows[i][f];
      if (data.kinds[f] == FieldKind::Numerical)
        e.ordinal.push_back(code == 0 ? std::numeric_limits<double>::quiet_NaN() : static_cast<double>(code - 1));
      else
        e.categorical.push_back(code);
    }
    out.push_back(std::move(e));
  }
  return out;
}

LabeledDataset decode_from_smote(const LabeledDataset& layout, const std::vector<EncodedInstance>& rows) {
  LabeledDataset out = layout;
  out.rows.clear();
  out.labels.clear();
  for (const auto& e : rows) {
    std::vector<std::int32_t> row;
    std::size_t o = 0, c = 0;
    for (std::size_t f = 0; f < layout.features.size(); ++f) {
      if (layout.kinds[f] == FieldKind::Numerical) {
        const double v = e.ordinal.at(o++);
        const auto bins = static_cast<std::int32_t>(layout.feature_states[f].size()) - 1;
        row.push_back(std::isnan(v) ? 0 : 1 + std::clamp(static_cast<std::int32_t>(v), 0, bins - 1));
      } else {
        row.push_back(e.categorical.at(c++));
      }
    }
    out.rows.push_back(std::move(row));
    out.labels.push_back(e.cls);
  }
  return out;
}

bn::DiscreteData to_discrete(const LabeledDataset& data, const FormSchema& schema) {
  bn::DiscreteData out;
  // Position of each field in the feature list; the target maps to npos.
  std::vector<std::pair<std::size_t, std::size_t>> order;  // (tab position, feature index)
  const auto npos = static_cast<std::size_t>(-1);
  order.emplace_back(*schema.index_of(data.target), npos);
  for (std::size_t f = 0; f < data.features.size(); ++f) order.emplace_back(*schema.index_of(data.features[f]), f);
  std::sort(order.begin(), order.end());

  for (const auto& [tab, f] : order) {
    std::vector<std::int32_t> column;
    column.reserve(data.rows.size());
    if (f == npos) {
      out.names.push_back(data.target);
      out.states.push_back({"Required", "Optional"});
      for (auto label : data.labels) column.push_back(static_cast<std::int32_t>(label));
    } else {
      out.names.push_back(data.features[f]);
      out.states.push_back(data.feature_states[f]);
      for (const auto& row : data.rows) column.push_back(row[f]);
    }
    out.columns.push_back(std::move(column));
  }
  return out;
}

std::vector<std::string> eligible_targets(const PreprocessorModel& model) {
  std::vector<std::string> out;
  for (const auto& f : model.schema.fields())
    if (f.required && model.retained(f.name)) out.push_back(f.name);
  return out;
}

BuildResult build_models(PreprocessorModel& model, const std::vector<PreprocessedInstance>& train,
                         const TrainConfig& cfg, bool keep_training_sets) {
  if (train.empty()) throw Error(ErrorCode::EmptyData, "no training instances");
  BuildResult result;
  for (const auto& f : model.schema.fields())
    if (f.required && !model.retained(f.name)) result.skipped[f.name] = "constant after preprocessing";

  for (const auto& target : eligible_targets(model)) {
    LabeledDataset ds;
    try {
      ds = make_target_dataset(model, train, target, cfg);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::TargetConstant) throw;
      result.skipped[target] = "single class in training data";
      continue;
    }
    const auto target_seed = derive_seed(cfg.seed, target);

    TargetModel tm;
    tm.target = target;
    tm.bins = ds.bins;
    tm.required_rows = ds.count(BinaryClass::Required);
    tm.optional_rows = ds.count(BinaryClass::Optional);

    LabeledDataset training = ds;
    if (cfg.enable_smote) {
      SmoteConfig smote = cfg.smote;
      smote.seed = splitmix64(target_seed ^ 0x5307e);
      const auto encoded = encode_for_smote(ds);
      const auto balanced = oversample(encoded, smote);
      tm.synthetic_rows = balanced.origins.size();
      training = decode_from_smote(ds, balanced.instances);
    }

    const auto table = to_discrete(training, model.schema);
    auto search = cfg.structure;
    search.seed = splitmix64(target_seed ^ 0x57c);
    const auto dag = bn::learn_structure(table, search);
    tm.net = bn::fit_cpts(dag, table, cfg.laplace_alpha);

    for (const auto& [field, cuts] : ds.bins) model.bins[{field, target}] = cuts;
    if (keep_training_sets) result.training_sets.emplace(target, std::move(training));
    result.models.emplace(target, std::move(tm));
  }
  return result;
}

bn::Posterior target_posterior(const PreprocessorModel& model, const TargetModel& target_model,
                               const PreprocessedInstance& cells) {
  const auto& net = target_model.net;
  const auto query = net.node(target_model.target);
  bn::Evidence evidence;
  for (const auto& [field, cell] : cells) {
    if (field == target_model.target) continue;
    const auto node = net.dag().index_of(field);
    if (!node) continue;
    const auto code = encode_cell(model, field, target_model.target, cell);
    if (code && *code < net.cardinality(*node)) evidence[*node] = *code;
  }
  return bn::infer(net, evidence, query);
}

std::map<std::string, ThresholdSweep> tune_thresholds(const PreprocessorModel& model,
                                                      const std::map<std::string, TargetModel>& models,
                                                      const std::vector<PreprocessedInstance>& tune,
                                                      bool enable_endorser) {
  std::map<std::string, ThresholdSweep> out;
  const auto grid = threshold_grid();
  for (const auto& [target, tm] : models) {
    ThresholdSweep sweep;
    if (!enable_endorser) {
      sweep.theta = 0.0;
      sweep.accuracy.fill(std::numeric_limits<double>::quiet_NaN());
      out.emplace(target, sweep);
      continue;
    }
    std::vector<double> p_optional;
    std::vector<BinaryClass> truth;
    for (const auto& inst : tune) {
      auto cells = transform(model, inst, target);
      const auto it = cells.find(target);
      if (it == cells.end()) continue;
      truth.push_back(class_of(it->second));
      cells.erase(it);
      p_optional.push_back(target_posterior(model, tm, cells).probabilities[1]);
    }
    sweep.instances = truth.size();
    if (truth.empty()) {
      sweep.theta = 0.5;
      sweep.defaulted = true;
      sweep.accuracy.fill(std::numeric_limits<double>::quiet_NaN());
      out.emplace(target, sweep);
      continue;
    }
    double best = -1.0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      std::size_t correct = 0;
      for (std::size_t i = 0; i < truth.size(); ++i)
        correct += endorse(p_optional[i], grid[g]).final_required == (truth[i] == BinaryClass::Required);
      sweep.accuracy[g] = static_cast<double>(correct) / static_cast<double>(truth.size());
      if (sweep.accuracy[g] > best) {
        best = sweep.accuracy[g];
        sweep.theta = grid[g];
      }
    }
    out.emplace(target, sweep);
  }
  return out;
}

ModelBundle train_bundle(const Dataset& train, const Dataset& tune, const MeaninglessDictionary& dict,
                         const TrainConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  ModelBundle bundle;
  bundle.schema = train.schema;
  bundle.config = cfg;
  bundle.preprocessor = fit_preprocessor(train, dict);

  const auto train_cells = preprocess(bundle.preprocessor, train);
  auto built = build_models(bundle.preprocessor, train_cells, cfg);
  const auto tune_cells = preprocess(bundle.preprocessor, tune);
  const auto thetas = tune_thresholds(bundle.preprocessor, built.models, tune_cells, cfg.enable_endorser);
  for (auto& [target, tm] : built.models) {
    tm.theta = thetas.at(target).theta;
    tm.theta_defaulted = thetas.at(target).defaulted;
  }
  bundle.models = std::move(built.models);
  bundle.skipped_targets = std::move(built.skipped);
  bundle.train_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  bundle.created_at = utc_now();
  return bundle;
}

}  // namespace relaxform
