#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "relaxform/bn/dag.hpp"
#include "relaxform/bn/data.hpp"

namespace relaxform::bn {

/// Conditional probability table of one node. Rows are parent
/// configurations in row-major order over the DAG parent list (last parent
/// varies fastest); each row is a distribution over the node's states.
struct Cpt {
  std::size_t states = 0;
  std::vector<double> table;  // rows * states

  std::size_t rows() const { return states ? table.size() / states : 0; }
  double at(std::size_t row, std::size_t state) const { return table[row * states + state]; }
};

class BayesNet {
 public:
  BayesNet() = default;
  /// Validates shapes and normalization (1e-9); throws InvalidArgument.
  BayesNet(Dag dag, std::vector<std::vector<std::string>> states, std::vector<Cpt> cpts);

  const Dag& dag() const { return dag_; }
  std::size_t size() const { return dag_.size(); }
  const std::vector<std::string>& states(std::size_t node) const { return states_.at(node); }
  std::size_t cardinality(std::size_t node) const { return states_.at(node).size(); }
  const Cpt& cpt(std::size_t node) const { return cpts_.at(node); }

  std::size_t node(std::string_view name) const;  // throws InvalidArgument
  std::size_t state(std::size_t node, std::string_view label) const;

  /// Row of `node`'s CPT selected by a full assignment.
  std::size_t cpt_row(std::size_t node, const std::vector<std::size_t>& assignment) const;

 private:
  Dag dag_;
  std::vector<std::vector<std::string>> states_;
  std::vector<Cpt> cpts_;
};

/// (count + alpha) / (row count + alpha * states); rows with no mass are uniform.
BayesNet fit_cpts(const Dag& dag, const DiscreteData& data, double laplace_alpha = 1.0);

nlohmann::json to_json(const BayesNet& net);
BayesNet bayes_net_from_json(const nlohmann::json& doc);

}  // namespace relaxform::bn
