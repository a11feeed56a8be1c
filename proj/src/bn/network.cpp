#include "relaxform/bn/network.hpp"

#include <algorithm>
#include <cmath>

#include "relaxform/error.hpp"

namespace relaxform::bn {

BayesNet::BayesNet(Dag dag, std::vector<std::vector<std::string>> states, std::vector<Cpt> cpts)
    : dag_(std::move(dag)), states_(std::move(states)), cpts_(std::move(cpts)) {
  if (states_.size() != dag_.size() || cpts_.size() != dag_.size())
    throw Error(ErrorCode::InvalidArgument, "network: one state list and one CPT per node required");
  if (!dag_.is_acyclic()) throw Error(ErrorCode::InvalidArgument, "network graph is cyclic");
  for (std::size_t v = 0; v < size(); ++v) {
    const auto& cpt = cpts_[v];
    if (states_[v].empty()) throw Error(ErrorCode::InvalidArgument, "node '" + dag_.name(v) + "' has no states");
    std::size_t rows = 1;
    for (auto p : dag_.parents(v)) rows *= states_[p].size();
    if (cpt.states != states_[v].size() || cpt.table.size() != rows * cpt.states)
      throw Error(ErrorCode::InvalidArgument, "CPT of '" + dag_.name(v) + "' has the wrong shape");
    for (std::size_t r = 0; r < rows; ++r) {
      double sum = 0.0;
      for (std::size_t k = 0; k < cpt.states; ++k) {
        const double p = cpt.at(r, k);
        if (!(p >= 0.0)) throw Error(ErrorCode::InvalidArgument, "negative probability in '" + dag_.name(v) + "'");
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-9)
        throw Error(ErrorCode::InvalidArgument, "CPT row of '" + dag_.name(v) + "' does not sum to 1");
    }
  }
}

std::size_t BayesNet::node(std::string_view name) const {
  const auto idx = dag_.index_of(name);
  if (!idx) throw Error(ErrorCode::InvalidArgument, "network has no node '" + std::string(name) + "'");
  return *idx;
}

std::size_t BayesNet::state(std::size_t node, std::string_view label) const {
  const auto& s = states_.at(node);
  const auto it = std::find(s.begin(), s.end(), label);
  if (it == s.end())
    throw Error(ErrorCode::InvalidArgument, "node '" + dag_.name(node) + "' has no state '" + std::string(label) + "'");
  return static_cast<std::size_t>(it - s.begin());
}

std::size_t BayesNet::cpt_row(std::size_t node, const std::vector<std::size_t>& assignment) const {
  std::size_t row = 0;
  for (auto p : dag_.parents(node)) row = row * states_[p].size() + assignment[p];
  return row;
}

BayesNet fit_cpts(const Dag& dag, const DiscreteData& data, double laplace_alpha) {
  if (laplace_alpha < 0) throw Error(ErrorCode::InvalidArgument, "Laplace alpha must be non-negative");
  std::vector<std::size_t> column(dag.size());
  std::vector<std::vector<std::string>> states(dag.size());
  for (std::size_t v = 0; v < dag.size(); ++v) {
    const auto idx = data.index_of(dag.name(v));
    if (!idx) throw Error(ErrorCode::InvalidArgument, "data has no column for node '" + dag.name(v) + "'");
    column[v] = *idx;
    states[v] = data.states[*idx];
  }

  std::vector<Cpt> cpts(dag.size());
  for (std::size_t v = 0; v < dag.size(); ++v) {
    const std::size_t r = states[v].size();
    std::size_t rows = 1;
    for (auto p : dag.parents(v)) rows *= states[p].size();
    std::vector<double> counts(rows * r, 0.0);
    for (std::size_t i = 0; i < data.rows(); ++i) {
      std::size_t row = 0;
      for (auto p : dag.parents(v))
        row = row * states[p].size() + static_cast<std::size_t>(data.columns[column[p]][i]);
      counts[row * r + static_cast<std::size_t>(data.columns[column[v]][i])] += 1.0;
    }
    Cpt& cpt = cpts[v];
    cpt.states = r;
    cpt.table.resize(rows * r);
    for (std::size_t row = 0; row < rows; ++row) {
      double total = 0.0;
      for (std::size_t k = 0; k < r; ++k) total += counts[row * r + k];
      const double denom = total + laplace_alpha * static_cast<double>(r);
      for (std::size_t k = 0; k < r; ++k)
        cpt.table[row * r + k] = denom > 0 ? (counts[row * r + k] + laplace_alpha) / denom : 1.0 / static_cast<double>(r);
    }
  }
  return BayesNet(dag, std::move(states), std::move(cpts));
}

nlohmann::json to_json(const BayesNet& net) {
  nlohmann::json nodes = nlohmann::json::array();
  for (std::size_t v = 0; v < net.size(); ++v) {
    std::vector<std::string> parents;
    for (auto p : net.dag().parents(v)) parents.push_back(net.dag().name(p));
    nlohmann::json rows = nlohmann::json::array();
    const auto& cpt = net.cpt(v);
    for (std::size_t r = 0; r < cpt.rows(); ++r)
      rows.push_back(std::vector<double>(cpt.table.begin() + static_cast<std::ptrdiff_t>(r * cpt.states),
                                         cpt.table.begin() + static_cast<std::ptrdiff_t>((r + 1) * cpt.states)));
    nodes.push_back({{"name", net.dag().name(v)}, {"states", net.states(v)}, {"parents", parents}, {"cpt", rows}});
  }
  return {{"nodes", std::move(nodes)}};
}

BayesNet bayes_net_from_json(const nlohmann::json& doc) {
  try {
    std::vector<std::string> names;
    for (const auto& n : doc.at("nodes")) names.push_back(n.at("name").get<std::string>());
    Dag dag(names);
    std::vector<std::vector<std::string>> states;
    std::vector<Cpt> cpts;
    for (const auto& n : doc.at("nodes")) {
      states.push_back(n.at("states").get<std::vector<std::string>>());
      Cpt cpt;
      cpt.states = states.back().size();
      for (const auto& row : n.at("cpt")) {
        const auto probs = row.get<std::vector<double>>();
        if (probs.size() != cpt.states) throw Error(ErrorCode::ParseError, "CPT row length mismatch");
        cpt.table.insert(cpt.table.end(), probs.begin(), probs.end());
      }
      cpts.push_back(std::move(cpt));
    }
    for (std::size_t v = 0; v < names.size(); ++v) {
      // Parents are serialized in DAG order, which is ascending node index.
      std::vector<std::size_t> parents;
      for (const auto& p : doc.at("nodes")[v].at("parents")) {
        const auto idx = dag.index_of(p.get<std::string>());
        if (!idx) throw Error(ErrorCode::ParseError, "unknown parent '" + p.get<std::string>() + "'");
        parents.push_back(*idx);
      }
      if (!std::is_sorted(parents.begin(), parents.end()))
        throw Error(ErrorCode::ParseError, "parents of '" + names[v] + "' are not in node order");
      for (auto p : parents) dag.add_edge(p, v);
    }
    return BayesNet(std::move(dag), std::move(states), std::move(cpts));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("network: ") + e.what());
  }
}

}  // namespace relaxform::bn
