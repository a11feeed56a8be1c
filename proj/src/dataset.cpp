#include "relaxform/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "relaxform/error.hpp"
#include "relaxform/util.hpp"

namespace relaxform {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaInvalid: return "SchemaInvalid";
    case ErrorCode::UnknownColumn: return "UnknownColumn";
    case ErrorCode::MissingTimestamp: return "MissingTimestamp";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::LayoutMismatch: return "LayoutMismatch";
    case ErrorCode::EmptyData: return "EmptyData";
    case ErrorCode::JointTooLarge: return "JointTooLarge";
    case ErrorCode::TargetConstant: return "TargetConstant";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::UnknownTarget: return "UnknownTarget";
    case ErrorCode::IoError: return "IoError";
  }
  return "Error";
}

std::string_view to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::Textual: return "textual";
    case FieldKind::Numerical: return "numerical";
    case FieldKind::Categorical: return "categorical";
  }
  return "textual";
}

FieldKind parse_field_kind(std::string_view text) {
  const auto folded = fold_case(trim(text));
  if (folded == "textual" || folded == "text") return FieldKind::Textual;
  if (folded == "numerical" || folded == "numeric") return FieldKind::Numerical;
  if (folded == "categorical") return FieldKind::Categorical;
  throw Error(ErrorCode::SchemaInvalid, "unknown field kind '" + std::string(text) + "'");
}

namespace {

[[noreturn]] void invalid(const std::string& reason) { throw Error(ErrorCode::SchemaInvalid, reason); }

}  // namespace

FormSchema::FormSchema(std::vector<FieldSpec> fields, std::vector<FieldGroup> groups)
    : fields_(std::move(fields)), groups_(std::move(groups)) {
  if (fields_.empty()) invalid("schema has no fields");
  std::stable_sort(fields_.begin(), fields_.end(),
                   [](const FieldSpec& a, const FieldSpec& b) { return a.tab_index < b.tab_index; });

  std::set<std::string> names;
  for (std::size_t i = 0; i < fields_.size(); ++i) {
    const auto& f = fields_[i];
    if (f.name.empty()) invalid("field with empty name");
    if (!names.insert(f.name).second) invalid("duplicate field name '" + f.name + "'");
    if (i > 0 && fields_[i - 1].tab_index == f.tab_index)
      invalid("duplicate tab_index " + std::to_string(f.tab_index));
    if (f.conditionally_required && !f.required)
      invalid("field '" + f.name + "' is conditionally required but not required");
    const bool categorical = f.kind == FieldKind::Categorical;
    if (categorical && f.categories.empty()) invalid("categorical field '" + f.name + "' has no categories");
    if (!categorical && !f.categories.empty()) invalid("non-categorical field '" + f.name + "' lists categories");
    std::set<std::string> labels(f.categories.begin(), f.categories.end());
    if (labels.size() != f.categories.size()) invalid("field '" + f.name + "' repeats a category");
  }

  // Groups declared only through the per-field attribute are collected in tab order.
  if (groups_.empty()) {
    std::map<std::string, std::size_t> slot;
    for (const auto& f : fields_) {
      if (!f.group) continue;
      auto [it, fresh] = slot.try_emplace(*f.group, groups_.size());
      if (fresh) groups_.push_back({*f.group, {}});
      groups_[it->second].members.push_back(f.name);
    }
  }

  std::set<std::string> group_ids;
  std::set<std::string> grouped;
  for (auto& g : groups_) {
    if (!group_ids.insert(g.id).second) invalid("duplicate group id '" + g.id + "'");
    if (g.members.empty()) invalid("group '" + g.id + "' is empty");
    std::vector<std::size_t> positions;
    for (const auto& m : g.members) {
      const auto idx = index_of(m);
      if (!idx) invalid("group '" + g.id + "' references unknown field '" + m + "'");
      if (!grouped.insert(m).second) invalid("field '" + m + "' belongs to more than one group");
      if (fields_[*idx].group && *fields_[*idx].group != g.id)
        invalid("field '" + m + "' declares group '" + *fields_[*idx].group + "' but is listed in '" + g.id + "'");
      positions.push_back(*idx);
    }
    std::sort(positions.begin(), positions.end());
    if (positions.back() - positions.front() + 1 != positions.size())
      invalid("group '" + g.id + "' members are not contiguous in tab order");
    // Members are stored in tab order.
    g.members.clear();
    for (auto p : positions) g.members.push_back(fields_[p].name);
  }
  for (auto& f : fields_) {
    if (f.group && !group_ids.count(*f.group)) invalid("field '" + f.name + "' names unknown group '" + *f.group + "'");
  }
  for (const auto& g : groups_)
    for (const auto& m : g.members) fields_[*index_of(m)].group = g.id;
}

std::optional<std::size_t> FormSchema::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < fields_.size(); ++i)
    if (fields_[i].name == name) return i;
  return std::nullopt;
}

const FieldSpec& FormSchema::field(std::string_view name) const {
  const auto idx = index_of(name);
  if (!idx) throw Error(ErrorCode::UnknownTarget, "no field named '" + std::string(name) + "'");
  return fields_[*idx];
}

std::size_t FormSchema::required_count() const {
  return static_cast<std::size_t>(
      std::count_if(fields_.begin(), fields_.end(), [](const FieldSpec& f) { return f.required; }));
}

std::string FormSchema::hash() const { return to_hex(fnv1a64(to_json(*this).dump())); }

nlohmann::json to_json(const FormSchema& schema) {
  nlohmann::json fields = nlohmann::json::array();
  for (const auto& f : schema.fields()) {
    nlohmann::json j{{"name", f.name},
                     {"kind", to_string(f.kind)},
                     {"required", f.required},
                     {"conditionally_required", f.conditionally_required},
                     {"tab_index", f.tab_index}};
    if (f.group) j["group"] = *f.group;
    if (!f.categories.empty()) j["categories"] = f.categories;
    fields.push_back(std::move(j));
  }
  nlohmann::json groups = nlohmann::json::array();
  for (const auto& g : schema.groups()) groups.push_back({{"id", g.id}, {"members", g.members}});
  return {{"fields", std::move(fields)}, {"groups", std::move(groups)}};
}

FormSchema schema_from_json(const nlohmann::json& doc) {
  try {
    if (!doc.is_object() || !doc.contains("fields") || !doc.at("fields").is_array())
      throw Error(ErrorCode::ParseError, "schema must be an object with a 'fields' array");
    std::vector<FieldSpec> fields;
    int next_tab = 0;
    for (const auto& jf : doc.at("fields")) {
      FieldSpec f;
      f.name = jf.at("name").get<std::string>();
      f.kind = parse_field_kind(jf.at("kind").get<std::string>());
      f.required = jf.value("required", false);
      f.conditionally_required = jf.value("conditionally_required", false);
      f.tab_index = jf.contains("tab_index") ? jf.at("tab_index").get<int>() : next_tab;
      next_tab = f.tab_index + 1;
      if (jf.contains("group") && !jf.at("group").is_null()) f.group = jf.at("group").get<std::string>();
      if (jf.contains("categories")) f.categories = jf.at("categories").get<std::vector<std::string>>();
      fields.push_back(std::move(f));
    }
    std::vector<FieldGroup> groups;
    if (doc.contains("groups")) {
      for (const auto& jg : doc.at("groups"))
        groups.push_back({jg.at("id").get<std::string>(), jg.at("members").get<std::vector<std::string>>()});
    }
    return FormSchema(std::move(fields), std::move(groups));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("schema: ") + e.what());
  }
}

FormSchema parse_schema(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("schema: ") + e.what());
  }
  return schema_from_json(doc);
}

FormSchema load_schema(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open schema file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_schema(buf.str());
}

// --- timestamps ----------------------------------------------------------

Timestamp::Timestamp(std::string text) : text_(std::move(text)) {
  const auto t = trim(text_);
  const bool numeric = !t.empty() && std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; });
  if (numeric) {
    // Zero-padded to a fixed width so string order equals numeric order,
    // prefixed so numeric stamps sort ahead of textual ones.
    auto digits = std::string(t.substr(std::min(t.find_first_not_of('0'), t.size())));
    key_ = "0" + std::string(std::max<std::size_t>(32, digits.size()) - digits.size(), '0') + digits;
  } else {
    key_ = "1" + std::string(t);
  }
}

bool operator<(const Timestamp& a, const Timestamp& b) { return a.key_ < b.key_; }

// --- CSV ingest ----------------------------------------------------------

namespace {

// RFC 4180 records; quoted fields may contain separators, quotes ("") and newlines.
bool read_record(std::istream& in, std::vector<std::string>& out, std::size_t& line) {
  out.clear();
  std::string cell;
  bool quoted = false;
  bool any = false;
  char c;
  while (in.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          cell.push_back('"');
          in.get();
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        cell.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cell));
      cell.clear();
    } else if (c == '\n') {
      ++line;
      out.push_back(std::move(cell));
      return true;
    } else if (c != '\r') {
      cell.push_back(c);
    }
  }
  if (quoted) throw Error(ErrorCode::ParseError, "unterminated quoted field near line " + std::to_string(line));
  if (!any) return false;
  out.push_back(std::move(cell));
  return true;
}

bool blank(const std::vector<std::string>& record) {
  return std::all_of(record.begin(), record.end(), [](const std::string& s) { return trim(s).empty(); });
}

}  // namespace

const std::optional<std::string>& Dataset::value(std::size_t row, std::string_view field) const {
  const auto idx = schema.index_of(field);
  if (!idx) throw Error(ErrorCode::UnknownColumn, std::string(field));
  return instances.at(row).values[*idx];
}

Dataset parse_instances(std::istream& in, const FormSchema& schema, const CsvOptions& options) {
  Dataset ds{schema, {}};
  std::vector<std::string> record;
  std::size_t line = 1;
  if (!read_record(in, record, line)) throw Error(ErrorCode::ParseError, "CSV has no header row");
  if (!record.empty() && record[0].rfind("\xEF\xBB\xBF", 0) == 0) record[0].erase(0, 3);

  std::vector<std::optional<std::size_t>> column_field;
  std::optional<std::size_t> ts_column;
  std::set<std::string> seen;
  for (std::size_t c = 0; c < record.size(); ++c) {
    const std::string name(trim(record[c]));
    if (!seen.insert(name).second) throw Error(ErrorCode::ParseError, "duplicate CSV column '" + name + "'");
    if (name == options.timestamp_column) {
      ts_column = c;
      column_field.emplace_back();
      continue;
    }
    const auto idx = schema.index_of(name);
    if (!idx) throw Error(ErrorCode::UnknownColumn, "CSV column '" + name + "' is not a schema field");
    column_field.push_back(idx);
  }
  if (!ts_column) throw Error(ErrorCode::MissingTimestamp, "CSV has no '" + options.timestamp_column + "' column");

  while (true) {
    const auto record_line = line + 1;
    if (!read_record(in, record, line)) break;
    if (blank(record)) continue;
    if (record.size() != column_field.size())
      throw Error(ErrorCode::ParseError, "line " + std::to_string(record_line) + ": expected " +
                                             std::to_string(column_field.size()) + " cells, got " +
                                             std::to_string(record.size()));
    RawInstance inst;
    inst.values.resize(schema.size());
    for (std::size_t c = 0; c < record.size(); ++c) {
      if (c == *ts_column) continue;
      if (!record[c].empty()) inst.values[*column_field[c]] = std::move(record[c]);
    }
    const auto stamp = trim(record[*ts_column]);
    if (stamp.empty())
      throw Error(ErrorCode::MissingTimestamp, "line " + std::to_string(record_line) + " has no timestamp");
    inst.submitted_at = Timestamp(std::string(stamp));
    ds.instances.push_back(std::move(inst));
  }
  return ds;
}

Dataset load_instances(const std::filesystem::path& path, const FormSchema& schema, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open data file " + path.string());
  return parse_instances(in, schema, options);
}

// --- split ---------------------------------------------------------------

std::array<std::size_t, 3> split_sizes(std::size_t n, const SplitRatios& r) {
  if (r.train <= 0 || r.tune <= 0 || r.test <= 0 || std::abs(r.train + r.tune + r.test - 1.0) > 1e-9)
    throw Error(ErrorCode::InvalidArgument, "split ratios must be positive and sum to 1");
  // The epsilon absorbs representation error such as 0.1 * 10 = 0.99999...
  const auto part = [n](double ratio) {
    return static_cast<std::size_t>(std::floor(static_cast<double>(n) * ratio + 1e-9));
  };
  const auto train = std::min(part(r.train), n);
  const auto tune = std::min(part(r.tune), n - train);
  return {train, tune, n - train - tune};
}

DatasetSplit temporal_split(const Dataset& dataset, const SplitRatios& ratios) {
  if (dataset.empty()) throw Error(ErrorCode::EmptyDataset, "cannot split an empty dataset");
  const auto sizes = split_sizes(dataset.size(), ratios);

  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dataset.instances[a].submitted_at < dataset.instances[b].submitted_at;
  });

  DatasetSplit split{{dataset.schema, {}}, {dataset.schema, {}}, {dataset.schema, {}}};
  for (std::size_t i = 0; i < order.size(); ++i) {
    auto& part = i < sizes[0] ? split.train : (i < sizes[0] + sizes[1] ? split.tune : split.test);
    part.instances.push_back(dataset.instances[order[i]]);
  }
  return split;
}

}  // namespace relaxform
