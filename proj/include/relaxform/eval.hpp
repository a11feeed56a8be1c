#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "relaxform/binary_class.hpp"
#include "relaxform/bundle.hpp"
#include "relaxform/relax.hpp"

namespace relaxform {

enum class FillMode { Sequential, PartialRandom };

std::string_view to_string(FillMode mode);
/// "sequential" or "partial-random"; throws InvalidArgument otherwise.
FillMode parse_fill_mode(std::string_view text);

struct ScenarioConfig {
  FillMode mode = FillMode::Sequential;
  std::uint64_t seed = 0;
};

struct TestCase {
  std::size_t instance = 0;
  /// Fields filled before the target. Missing cells appear as "" since the
  /// user has already passed them.
  std::map<std::string, std::string> prefix;
  std::string target;
  BinaryClass truth = BinaryClass::Required;
};

/// Fill order of one instance: tab order, or a random permutation of units
/// where each group is a block kept in schema order.
std::vector<std::string> fill_order(const FormSchema& schema, FillMode mode, RandomSource& rng);

/// One case per (instance, target) with the target's preceding fields as prefix.
std::vector<TestCase> generate_cases(const Dataset& test, const ScenarioConfig& scenario,
                                     const std::vector<std::string>& targets, const MeaninglessDictionary& dict);

/// Positive class is Required.
struct ConfusionMatrix {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;

  void add(bool predicted_required, BinaryClass truth);
  std::size_t total() const { return tp + fp + tn + fn; }
  ConfusionMatrix& operator+=(const ConfusionMatrix& o);
  bool operator==(const ConfusionMatrix&) const = default;
};

/// Ratios are empty when their denominator is zero.
struct Metrics {
  ConfusionMatrix counts;
  std::optional<double> precision, recall, npv, specificity, accuracy;
};

Metrics metrics_from(const ConfusionMatrix& cm);

struct Outcome {
  std::string target;
  bool final_required = true;
  BinaryClass truth = BinaryClass::Required;
  std::chrono::nanoseconds latency{0};
};

struct LatencyStats {
  double mean_ms = 0.0, min_ms = 0.0, max_ms = 0.0;
  std::size_t samples = 0;
};

struct MetricsReport {
  std::string scenario;
  std::string variant;
  Metrics aggregate;
  std::map<std::string, Metrics> per_target;
  LatencyStats latency;
  double train_seconds = 0.0;
};

MetricsReport score(const std::vector<Outcome>& outcomes);

/// Generates cases, predicts each one and scores the decisions.
MetricsReport run_experiment(const ModelBundle& bundle, const Dataset& test, const ScenarioConfig& scenario);

nlohmann::json to_json(const Metrics& m);
nlohmann::json to_json(const MetricsReport& report);
std::string format_table(const MetricsReport& report);

}  // namespace relaxform
