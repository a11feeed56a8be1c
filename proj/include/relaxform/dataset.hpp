#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace relaxform {

enum class FieldKind { Textual, Numerical, Categorical };

std::string_view to_string(FieldKind kind);
FieldKind parse_field_kind(std::string_view text);

struct FieldSpec {
  std::string name;
  FieldKind kind = FieldKind::Textual;
  bool required = false;
  bool conditionally_required = false;
  int tab_index = 0;
  std::optional<std::string> group;
  std::vector<std::string> categories;

  bool operator==(const FieldSpec&) const = default;
};

struct FieldGroup {
  std::string id;
  std::vector<std::string> members;

  bool operator==(const FieldGroup&) const = default;
};

/// A validated form description. Fields are kept sorted by tab index, so
/// `fields()` is also the sequential filling order.
class FormSchema {
 public:
  FormSchema() = default;
  /// Validates and sorts; throws Error{SchemaInvalid} on any violation.
  FormSchema(std::vector<FieldSpec> fields, std::vector<FieldGroup> groups);

  const std::vector<FieldSpec>& fields() const { return fields_; }
  const std::vector<FieldGroup>& groups() const { return groups_; }
  std::size_t size() const { return fields_.size(); }

  std::optional<std::size_t> index_of(std::string_view name) const;
  const FieldSpec& field(std::string_view name) const;
  bool contains(std::string_view name) const { return index_of(name).has_value(); }

  std::size_t required_count() const;

  /// FNV-1a over the canonical JSON form, hex encoded.
  std::string hash() const;

  bool operator==(const FormSchema&) const = default;

 private:
  std::vector<FieldSpec> fields_;
  std::vector<FieldGroup> groups_;
};

nlohmann::json to_json(const FormSchema& schema);
FormSchema schema_from_json(const nlohmann::json& doc);
FormSchema parse_schema(std::string_view text);
FormSchema load_schema(const std::filesystem::path& path);

/// Submission time as written in the data file. Purely numeric stamps
/// (e.g. 20180101194321 or epoch seconds) compare numerically, anything
/// else (ISO-8601) compares lexicographically.
class Timestamp {
 public:
  Timestamp() = default;
  explicit Timestamp(std::string text);

  const std::string& text() const { return text_; }

  friend bool operator<(const Timestamp& a, const Timestamp& b);
  friend bool operator==(const Timestamp& a, const Timestamp& b) { return a.key_ == b.key_; }

 private:
  std::string text_;
  std::string key_;
};

/// One historical submission. `values` is aligned with the schema field
/// order; an empty optional is a missing cell.
struct RawInstance {
  std::vector<std::optional<std::string>> values;
  Timestamp submitted_at;
};

struct Dataset {
  FormSchema schema;
  std::vector<RawInstance> instances;

  std::size_t size() const { return instances.size(); }
  bool empty() const { return instances.empty(); }
  const std::optional<std::string>& value(std::size_t row, std::string_view field) const;
};

struct CsvOptions {
  std::string timestamp_column = "submitted_at";
};

Dataset parse_instances(std::istream& in, const FormSchema& schema, const CsvOptions& options = {});
Dataset load_instances(const std::filesystem::path& path, const FormSchema& schema,
                       const CsvOptions& options = {});

struct SplitRatios {
  double train = 0.8;
  double tune = 0.1;
  double test = 0.1;
};

struct DatasetSplit {
  Dataset train;
  Dataset tune;
  Dataset test;
};

/// Stable sort by submission time, then cut by cumulative count. The first
/// two parts get floor(n * ratio) rows; the remainder goes to test.
DatasetSplit temporal_split(const Dataset& dataset, const SplitRatios& ratios = {});

std::array<std::size_t, 3> split_sizes(std::size_t n, const SplitRatios& ratios);

}  // namespace relaxform
