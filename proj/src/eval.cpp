#include "relaxform/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <sstream>

#include "relaxform/error.hpp"
#include "relaxform/rng.hpp"

namespace relaxform {

std::string_view to_string(FillMode mode) {
  return mode == FillMode::Sequential ? "sequential" : "partial-random";
}

FillMode parse_fill_mode(std::string_view text) {
  if (text == "sequential") return FillMode::Sequential;
  if (text == "partial-random") return FillMode::PartialRandom;
  throw Error(ErrorCode::InvalidArgument, "unknown scenario '" + std::string(text) + "'");
}

std::vector<std::string> fill_order(const FormSchema& schema, FillMode mode, RandomSource& rng) {
  std::vector<std::string> order;
  for (const auto& f : schema.fields()) order.push_back(f.name);
  if (mode == FillMode::Sequential) return order;

  // Units: each group is one block (members are contiguous in tab order),
  // every ungrouped field is its own unit.
  std::vector<std::vector<std::string>> units;
  for (const auto& f : schema.fields()) {
    if (f.group && !units.empty()) {
      const auto& prev = schema.field(units.back().front()).group;
      if (prev && *prev == *f.group) {
        units.back().push_back(f.name);
        continue;
      }
    }
    units.push_back({f.name});
  }
  for (std::size_t i = units.size(); i > 1; --i) std::swap(units[i - 1], units[rng.index(i)]);
  order.clear();
  for (const auto& u : units) order.insert(order.end(), u.begin(), u.end());
  return order;
}

std::vector<TestCase> generate_cases(const Dataset& test, const ScenarioConfig& scenario,
                                     const std::vector<std::string>& targets, const MeaninglessDictionary& dict) {
  std::vector<TestCase> cases;
  Mt64Source rng(scenario.seed);
  const auto& schema = test.schema;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const auto order = fill_order(schema, scenario.mode, rng);
    const auto& inst = test.instances[i];
    std::map<std::string, std::string> prefix;
    for (const auto& name : order) {
      const auto idx = *schema.index_of(name);
      const auto& raw = inst.values[idx];
      if (std::find(targets.begin(), targets.end(), name) != targets.end()) {
        const auto cell = classify_cell(raw, schema.fields()[idx].kind, dict);
        cases.push_back({i, prefix, name, cell.is_optional() ? BinaryClass::Optional : BinaryClass::Required});
      }
      prefix[name] = raw.value_or("");
    }
  }
  return cases;
}

void ConfusionMatrix::add(bool predicted_required, BinaryClass truth) {
  const bool truly_required = truth == BinaryClass::Required;
  if (predicted_required) ++(truly_required ? tp : fp);
  else ++(truly_required ? fn : tn);
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& o) {
  tp += o.tp;
  fp += o.fp;
  tn += o.tn;
  fn += o.fn;
  return *this;
}

namespace {

std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

nlohmann::json opt(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

std::string cell(const std::optional<double>& v) {
  if (!v) return "-";
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.3f", *v);
  return buf;
}

}  // namespace

Metrics metrics_from(const ConfusionMatrix& cm) {
  Metrics m;
  m.counts = cm;
  m.precision = ratio(cm.tp, cm.tp + cm.fp);
  m.recall = ratio(cm.tp, cm.tp + cm.fn);
  m.npv = ratio(cm.tn, cm.tn + cm.fn);
  m.specificity = ratio(cm.tn, cm.tn + cm.fp);
  m.accuracy = ratio(cm.tp + cm.tn, cm.total());
  return m;
}

MetricsReport score(const std::vector<Outcome>& outcomes) {
  MetricsReport report;
  ConfusionMatrix all;
  std::map<std::string, ConfusionMatrix> by_target;
  double sum = 0.0, lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& o : outcomes) {
    all.add(o.final_required, o.truth);
    by_target[o.target].add(o.final_required, o.truth);
    const double ms = std::chrono::duration<double, std::milli>(o.latency).count();
    sum += ms;
    lo = std::min(lo, ms);
    hi = std::max(hi, ms);
  }
  report.aggregate = metrics_from(all);
  for (const auto& [t, cm] : by_target) report.per_target[t] = metrics_from(cm);
  report.latency.samples = outcomes.size();
  if (!outcomes.empty()) report.latency = {sum / static_cast<double>(outcomes.size()), lo, hi, outcomes.size()};
  return report;
}

MetricsReport run_experiment(const ModelBundle& bundle, const Dataset& test, const ScenarioConfig& scenario) {
  std::vector<std::string> targets;
  for (const auto& f : bundle.schema.fields())
    if (bundle.model(f.name)) targets.push_back(f.name);
  const auto cases = generate_cases(test, scenario, targets, bundle.preprocessor.meaningless);

  std::vector<Outcome> outcomes;
  outcomes.reserve(cases.size());
  for (const auto& c : cases) {
    const auto d = predict_requirement(bundle, PartialForm{c.prefix, {}}, c.target);
    outcomes.push_back({c.target, d.final_required, c.truth, d.latency});
  }
  auto report = score(outcomes);
  report.scenario = std::string(to_string(scenario.mode));
  report.variant = bundle.config.variant();
  report.train_seconds = bundle.train_seconds;
  return report;
}

nlohmann::json to_json(const Metrics& m) {
  return {{"tp", m.counts.tp},        {"fp", m.counts.fp},          {"tn", m.counts.tn},
          {"fn", m.counts.fn},        {"precision", opt(m.precision)}, {"recall", opt(m.recall)},
          {"npv", opt(m.npv)},        {"specificity", opt(m.specificity)}, {"accuracy", opt(m.accuracy)}};
}

nlohmann::json to_json(const MetricsReport& report) {
  nlohmann::json per = nlohmann::json::object();
  for (const auto& [t, m] : report.per_target) per[t] = to_json(m);
  return {{"scenario", report.scenario},
          {"variant", report.variant},
          {"aggregate", to_json(report.aggregate)},
          {"per_target", std::move(per)},
          {"latency_ms",
           {{"mean", report.latency.mean_ms},
            {"min", report.latency.min_ms},
            {"max", report.latency.max_ms},
            {"samples", report.latency.samples}}},
          {"train_seconds", report.train_seconds}};
}

std::string format_table(const MetricsReport& report) {
  std::size_t width = 9;  // "aggregate"
  for (const auto& [t, m] : report.per_target) width = std::max(width, t.size());
  std::ostringstream out;
  char line[256];
  const auto row = [&](const std::string& name, const Metrics& m) {
    std::snprintf(line, sizeof line, "%-*s  %6s  %6s  %6s  %6s  %6s  %8zu\n", static_cast<int>(width), name.c_str(),
                  cell(m.precision).c_str(), cell(m.recall).c_str(), cell(m.npv).c_str(),
                  cell(m.specificity).c_str(), cell(m.accuracy).c_str(), m.counts.total());
    out << line;
  };
  out << "scenario: " << report.scenario << "  variant: " << report.variant << "\n";
  std::snprintf(line, sizeof line, "%-*s  %6s  %6s  %6s  %6s  %6s  %8s\n", static_cast<int>(width), "target", "Prec",
                "Rec", "NPV", "Spec", "Acc", "cases");
  out << line;
  for (const auto& [t, m] : report.per_target) row(t, m);
  row("aggregate", report.aggregate);
  std::snprintf(line, sizeof line, "train s: %.3f  predict ms: %.3f avg (%.3f-%.3f)\n", report.train_seconds,
                report.latency.mean_ms, report.latency.min_ms, report.latency.max_ms);
  out << line;
  return out.str();
}

}  // namespace relaxform
