#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "relaxform/bn/dag.hpp"
#include "relaxform/bn/data.hpp"

namespace relaxform::bn {

struct StructureSearchConfig {
  std::size_t max_parents = 4;
  std::size_t max_iterations = 1000;
  std::size_t restarts = 3;
  std::uint64_t seed = 0;
  double score_epsilon = 1e-9;
  bool allow_reversal = true;
};

/// Score of the incumbent after every accepted move (index 0 = start).
struct SearchTrace {
  std::vector<std::vector<double>> restarts;
  std::size_t best_restart = 0;
};

/// Greedy BIC hill climbing over edge additions, deletions and (optionally)
/// reversals. Restart 0 starts from the empty graph, later restarts from a
/// random DAG. Returns the best DAG over all restarts; nodes follow the data
/// column order. Throws std::logic_error if an accepted move ever lowers the
/// incumbent score.
Dag learn_structure(const DiscreteData& data, const StructureSearchConfig& cfg, SearchTrace* trace = nullptr);

}  // namespace relaxform::bn
