#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "relaxform/bn/dag.hpp"
#include "relaxform/bn/data.hpp"

namespace relaxform::bn {

/// Maximum-likelihood log-likelihood (natural log) of `node` given `parents`.
double family_log_likelihood(const DiscreteData& data, std::size_t node, const std::vector<std::size_t>& parents);

/// (|states(node)| - 1) * prod |states(parent)|.
double family_parameter_count(const DiscreteData& data, std::size_t node, const std::vector<std::size_t>& parents);

/// LL - (ln N / 2) * K for one family; higher is better.
double family_bic(const DiscreteData& data, std::size_t node, const std::vector<std::size_t>& parents);

/// Sum of family scores. `dag` nodes are matched to data columns by position.
double bic_score(const Dag& dag, const DiscreteData& data);

/// Memoizing family scorer used by the structure search. Parent lists must
/// be sorted, which Dag guarantees.
class BicCache {
 public:
  explicit BicCache(const DiscreteData& data);

  double family(std::size_t node, const std::vector<std::size_t>& parents);
  double total(const Dag& dag);
  std::size_t evaluations() const { return evaluations_; }

 private:
  const DiscreteData& data_;
  std::vector<std::map<std::vector<std::size_t>, double>> cache_;
  std::size_t evaluations_ = 0;
};

}  // namespace relaxform::bn
