#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "relaxform/bn/network.hpp"

namespace relaxform::bn {

/// node index -> observed state index
using Evidence = std::map<std::size_t, std::size_t>;

struct Posterior {
  std::vector<double> probabilities;
  /// Evidence has probability zero under the network; probabilities are uniform.
  bool zero_evidence = false;
};

/// Exact P(query | evidence) by variable elimination over the ancestors of
/// the query and evidence nodes, eliminating hidden variables in min-degree
/// order.
Posterior infer(const BayesNet& net, const Evidence& evidence, std::size_t query);

/// Same quantity by summing the full joint; limited to 2^20 joint states.
Posterior enumerate_joint(const BayesNet& net, const Evidence& evidence, std::size_t query);

}  // namespace relaxform::bn
