#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "relaxform/bn/inference.hpp"
#include "relaxform/bn/network.hpp"
#include "relaxform/dataset.hpp"
#include "relaxform/discretize.hpp"
#include "relaxform/preprocess.hpp"
#include "relaxform/rng.hpp"

namespace fixtures {

using namespace relaxform;

/// Company name, Monthly revenue, Company type, Field of activity, Tax ID; all
/// required, the two categorical fields form the group "profile".
FormSchema company_schema();
MeaninglessDictionary company_dictionary();

/// Six submissions: the four training rows of the running example followed
/// by JBL and MBC.
Dataset toy_dataset();

/// Three Boolean nodes Company type -> Revenue -> Tax ID (plus Company type ->
/// Tax ID) with state 0 = required.
bn::BayesNet textbook_net();

/// Counts that reproduce textbook_net() exactly with alpha = 0.
bn::DiscreteData textbook_counts();

/// Replays fixed draws; throws when it runs out.
class ScriptedRandom final : public RandomSource {
 public:
  ScriptedRandom(std::vector<std::size_t> indices, std::vector<double> uniforms)
      : indices_(indices.begin(), indices.end()), uniforms_(uniforms.begin(), uniforms.end()) {}
  double uniform01() override;
  std::size_t index(std::size_t n) override;

 private:
  std::deque<std::size_t> indices_;
  std::deque<double> uniforms_;
};

struct PlantedOptions {
  std::size_t rows = 10000;
  double noise = 0.05;  // fraction of rows whose Tax ID label is redrawn uniformly
  std::uint64_t seed = 1;
};

/// Company-schema submissions where Tax ID is meaningless exactly when the
/// company is an NPO working in charity or education, up to label noise.
Dataset planted_dataset(const PlantedOptions& opt = {});
bool planted_rule(const RawInstance& inst);

/// Wide schema with `fields` fields of mixed kinds; every third field is
/// sometimes left empty depending on an earlier categorical field.
Dataset wide_dataset(std::size_t fields, std::size_t rows, std::uint64_t seed);

/// Random network with up to `max_nodes` nodes of 2..max_states states,
/// random structure (at most 3 parents) and random CPTs, some with zeros.
bn::BayesNet random_net(std::uint64_t seed, std::size_t max_nodes = 6, std::size_t max_states = 4);
bn::Evidence random_evidence(const bn::BayesNet& net, std::size_t query, Mt64Source& rng);

/// Exhaustive MDLP: recursive, trying every midpoint and recomputing
/// entropies from scratch.
std::vector<double> mdlp_oracle(std::vector<LabeledValue> values);

std::string to_csv(const Dataset& data, const std::string& timestamp_column = "submitted_at");

}  // namespace fixtures
