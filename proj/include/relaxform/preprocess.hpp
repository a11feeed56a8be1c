#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "relaxform/dataset.hpp"

namespace relaxform {

/// Reserved category for labels that never occurred in training data. It is
/// never used as evidence, which amounts to a uniform likelihood.
inline constexpr std::string_view kUnseenCategory = "__unseen__";

enum class CellTag { Required, Optional, Category, Interval, Numeric };

/// Abstract value of one cell. `Numeric` is the intermediate state of a valid
/// number before it is binned for a particular target.
struct CellValue {
  CellTag tag = CellTag::Optional;
  std::string label;
  std::size_t bin = 0;
  double number = 0.0;

  static CellValue required() { return {CellTag::Required, {}, 0, 0.0}; }
  static CellValue optional() { return {CellTag::Optional, {}, 0, 0.0}; }
  static CellValue category(std::string l) { return {CellTag::Category, std::move(l), 0, 0.0}; }
  static CellValue interval(std::size_t b) { return {CellTag::Interval, {}, b, 0.0}; }
  static CellValue numeric(double v) { return {CellTag::Numeric, {}, 0, v}; }

  bool is_optional() const { return tag == CellTag::Optional; }
  std::string to_string() const;

  bool operator==(const CellValue&) const = default;
};

/// Exact-match set of placeholder strings; comparison is on the trimmed,
/// case-folded value.
class MeaninglessDictionary {
 public:
  MeaninglessDictionary() = default;
  MeaninglessDictionary(std::initializer_list<std::string_view> entries);

  void add(std::string_view value);
  bool contains(std::string_view raw) const;
  const std::set<std::string>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  /// One value per line; blank lines and lines starting with '#' are skipped.
  static MeaninglessDictionary parse(std::istream& in);
  static MeaninglessDictionary load(const std::filesystem::path& path);

 private:
  std::set<std::string> entries_;
};

/// Missing, meaningless and unparseable-numeric values all become Optional.
CellValue classify_cell(const std::optional<std::string>& raw, FieldKind kind, const MeaninglessDictionary& dict);

using BinKey = std::pair<std::string, std::string>;  // (numeric field, target)

struct PreprocessorModel {
  FormSchema schema;
  MeaninglessDictionary meaningless;
  std::set<std::string> dropped_fields;
  /// Schema categories followed by labels first seen in training data.
  std::map<std::string, std::vector<std::string>> category_vocab;
  /// Labels observed in training that the schema does not list.
  std::map<std::string, std::vector<std::string>> unknown_categories;
  std::map<BinKey, std::vector<double>> bins;

  bool retained(std::string_view field) const;
  std::vector<std::string> retained_fields() const;  // tab order
  const std::vector<double>& cuts(std::string_view field, std::string_view target) const;
};

using PreprocessedInstance = std::map<std::string, CellValue>;

PreprocessorModel fit_preprocessor(const Dataset& train, const MeaninglessDictionary& dict);

/// Full instance with numerics left pending; dropped fields are omitted.
PreprocessedInstance preprocess(const PreprocessorModel& model, const RawInstance& instance);
std::vector<PreprocessedInstance> preprocess(const PreprocessorModel& model, const Dataset& data);

/// Bins pending numerics with the (field, target) cut points, maps labels
/// outside the vocabulary to the unseen category and removes dropped fields.
/// Already-abstract cells pass through unchanged.
PreprocessedInstance transform(const PreprocessorModel& model, const PreprocessedInstance& cells,
                               std::string_view target);

/// Runtime preprocessing of a partially filled form for one target. An
/// empty string is a field the user passed without filling.
PreprocessedInstance transform_partial(const PreprocessorModel& model,
                                       const std::map<std::string, std::string>& filled, std::string_view target);

nlohmann::json to_json(const PreprocessorModel& model);
PreprocessorModel preprocessor_from_json(const nlohmann::json& doc, const FormSchema& schema);

}  // namespace relaxform
