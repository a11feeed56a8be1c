#include "relaxform/preprocess.hpp"

#include <algorithm>
#include <fstream>

#include "relaxform/discretize.hpp"
#include "relaxform/error.hpp"
#include "relaxform/util.hpp"

namespace relaxform {

std::string CellValue::to_string() const {
  switch (tag) {
    case CellTag::Required: return "Required";
    case CellTag::Optional: return "Optional";
    case CellTag::Category: return label;
    case CellTag::Interval: return "bin:" + std::to_string(bin);
    case CellTag::Numeric: return "num:" + std::to_string(number);
  }
  return {};
}

MeaninglessDictionary::MeaninglessDictionary(std::initializer_list<std::string_view> entries) {
  for (auto e : entries) add(e);
}

void MeaninglessDictionary::add(std::string_view value) {
  auto key = fold_case(trim(value));
  if (!key.empty()) entries_.insert(std::move(key));
}

bool MeaninglessDictionary::contains(std::string_view raw) const {
  return entries_.count(fold_case(trim(raw))) > 0;
}

MeaninglessDictionary MeaninglessDictionary::parse(std::istream& in) {
  MeaninglessDictionary dict;
  std::string line;
  while (std::getline(in, line)) {
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    dict.add(t);
  }
  return dict;
}

MeaninglessDictionary MeaninglessDictionary::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open dictionary file " + path.string());
  return parse(in);
}

CellValue classify_cell(const std::optional<std::string>& raw, FieldKind kind, const MeaninglessDictionary& dict) {
  if (!raw) return CellValue::optional();
  const auto value = trim(*raw);
  if (value.empty() || dict.contains(value)) return CellValue::optional();
  switch (kind) {
    case FieldKind::Textual: return CellValue::required();
    case FieldKind::Categorical: return CellValue::category(std::string(value));
    case FieldKind::Numerical: {
      const auto number = parse_number(value);
      return number ? CellValue::numeric(*number) : CellValue::optional();
    }
  }
  return CellValue::optional();
}

// --- model ---------------------------------------------------------------

bool PreprocessorModel::retained(std::string_view field) const {
  return schema.contains(field) && dropped_fields.count(std::string(field)) == 0;
}

std::vector<std::string> PreprocessorModel::retained_fields() const {
  std::vector<std::string> out;
  for (const auto& f : schema.fields())
    if (!dropped_fields.count(f.name)) out.push_back(f.name);
  return out;
}

const std::vector<double>& PreprocessorModel::cuts(std::string_view field, std::string_view target) const {
  static const std::vector<double> kNone;
  const auto it = bins.find({std::string(field), std::string(target)});
  return it == bins.end() ? kNone : it->second;
}

namespace {

std::string column_key(const CellValue& v) {
  switch (v.tag) {
    case CellTag::Required: return "R";
    case CellTag::Optional: return "O";
    case CellTag::Category: return "c:" + v.label;
    case CellTag::Interval: return "i:" + std::to_string(v.bin);
    case CellTag::Numeric: return "n:" + std::to_string(v.number);
  }
  return {};
}

}  // namespace

PreprocessorModel fit_preprocessor(const Dataset& train, const MeaninglessDictionary& dict) {
  if (train.empty()) throw Error(ErrorCode::EmptyDataset, "cannot fit a preprocessor on no data");
  PreprocessorModel model;
  model.schema = train.schema;
  model.meaningless = dict;

  const auto& fields = train.schema.fields();
  for (std::size_t f = 0; f < fields.size(); ++f) {
    const auto& spec = fields[f];
    std::set<std::string> distinct;
    std::vector<std::string> vocab = spec.categories;
    std::vector<std::string> unknown;
    for (const auto& inst : train.instances) {
      const auto cell = classify_cell(inst.values[f], spec.kind, dict);
      if (distinct.size() < 2) distinct.insert(column_key(cell));
      if (cell.tag == CellTag::Category && std::find(vocab.begin(), vocab.end(), cell.label) == vocab.end()) {
        vocab.push_back(cell.label);
        unknown.push_back(cell.label);
      }
    }
    if (distinct.size() < 2) model.dropped_fields.insert(spec.name);
    if (spec.kind == FieldKind::Categorical) {
      model.category_vocab[spec.name] = std::move(vocab);
      if (!unknown.empty()) model.unknown_categories[spec.name] = std::move(unknown);
    }
  }
  return model;
}

PreprocessedInstance preprocess(const PreprocessorModel& model, const RawInstance& instance) {
  PreprocessedInstance out;
  const auto& fields = model.schema.fields();
  for (std::size_t f = 0; f < fields.size(); ++f) {
    if (model.dropped_fields.count(fields[f].name)) continue;
    out.emplace(fields[f].name, classify_cell(instance.values.at(f), fields[f].kind, model.meaningless));
  }
  return out;
}

std::vector<PreprocessedInstance> preprocess(const PreprocessorModel& model, const Dataset& data) {
  std::vector<PreprocessedInstance> out;
  out.reserve(data.size());
  for (const auto& inst : data.instances) out.push_back(preprocess(model, inst));
  return out;
}

PreprocessedInstance transform(const PreprocessorModel& model, const PreprocessedInstance& cells,
                               std::string_view target) {
  PreprocessedInstance out;
  for (const auto& [name, cell] : cells) {
    if (!model.retained(name)) continue;
    CellValue v = cell;
    if (v.tag == CellTag::Numeric) {
      v = CellValue::interval(bin_index(model.cuts(name, target), v.number));
    } else if (v.tag == CellTag::Category) {
      const auto it = model.category_vocab.find(name);
      if (it != model.category_vocab.end() &&
          std::find(it->second.begin(), it->second.end(), v.label) == it->second.end())
        v.label = std::string(kUnseenCategory);
    }
    out.emplace(name, std::move(v));
  }
  return out;
}

PreprocessedInstance transform_partial(const PreprocessorModel& model,
                                       const std::map<std::string, std::string>& filled, std::string_view target) {
  if (filled.count(std::string(target)))
    throw Error(ErrorCode::InvalidArgument, "target '" + std::string(target) + "' is already filled");
  PreprocessedInstance cells;
  for (const auto& [name, raw] : filled) {
    const auto idx = model.schema.index_of(name);
    if (!idx) throw Error(ErrorCode::UnknownColumn, "filled field '" + name + "' is not in the schema");
    if (!model.retained(name)) continue;
    cells.emplace(name, classify_cell(raw, model.schema.fields()[*idx].kind, model.meaningless));
  }
  return transform(model, cells, target);
}

// --- serialization -------------------------------------------------------

nlohmann::json to_json(const PreprocessorModel& model) {
  nlohmann::json bins = nlohmann::json::array();
  for (const auto& [key, cuts] : model.bins)
    bins.push_back({{"field", key.first}, {"target", key.second}, {"cuts", cuts}});
  return {{"meaningless", model.meaningless.entries()},
          {"dropped_fields", model.dropped_fields},
          {"category_vocab", model.category_vocab},
          {"unknown_categories", model.unknown_categories},
          {"bins", std::move(bins)}};
}

PreprocessorModel preprocessor_from_json(const nlohmann::json& doc, const FormSchema& schema) {
  try {
    PreprocessorModel model;
    model.schema = schema;
    for (const auto& e : doc.at("meaningless")) model.meaningless.add(e.get<std::string>());
    model.dropped_fields = doc.at("dropped_fields").get<std::set<std::string>>();
    model.category_vocab = doc.at("category_vocab").get<std::map<std::string, std::vector<std::string>>>();
    model.unknown_categories =
        doc.value("unknown_categories", std::map<std::string, std::vector<std::string>>{});
    for (const auto& b : doc.at("bins"))
      model.bins[{b.at("field").get<std::string>(), b.at("target").get<std::string>()}] =
          b.at("cuts").get<std::vector<double>>();
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("preprocessor: ") + e.what());
  }
}

}  // namespace relaxform
