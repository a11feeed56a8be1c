#include "relaxform/bn/inference.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>

#include "relaxform/error.hpp"

namespace relaxform::bn {

namespace {

// Table over `vars` (ascending), row-major with the last variable fastest.
struct Factor {
  std::vector<std::size_t> vars;
  std::vector<std::size_t> cards;
  std::vector<double> values;

  std::size_t stride_of(std::size_t var) const {
    std::size_t stride = 1;
    for (std::size_t i = vars.size(); i-- > 0;) {
      if (vars[i] == var) return stride;
      stride *= cards[i];
    }
    return 0;  // absent variables do not move the index
  }
};

// Walks every assignment of `vars`, keeping per-operand flat indices in sync.
template <typename Visit>
void for_each_assignment(const std::vector<std::size_t>& cards, const std::vector<std::vector<std::size_t>>& strides,
                         Visit&& visit) {
  const std::size_t k = cards.size();
  std::vector<std::size_t> digit(k, 0);
  std::vector<std::size_t> index(strides.size(), 0);
  std::size_t total = 1;
  for (auto c : cards) total *= c;
  for (std::size_t step = 0; step < total; ++step) {
    visit(index);
    for (std::size_t d = k; d-- > 0;) {
      if (++digit[d] < cards[d]) {
        for (std::size_t o = 0; o < strides.size(); ++o) index[o] += strides[o][d];
        break;
      }
      for (std::size_t o = 0; o < strides.size(); ++o) index[o] -= strides[o][d] * (cards[d] - 1);
      digit[d] = 0;
    }
  }
}

Factor multiply(const Factor& a, const Factor& b) {
  Factor out;
  std::set_union(a.vars.begin(), a.vars.end(), b.vars.begin(), b.vars.end(), std::back_inserter(out.vars));
  std::vector<std::vector<std::size_t>> strides(3);
  std::size_t size = 1;
  for (auto v : out.vars) {
    const auto in_a = std::lower_bound(a.vars.begin(), a.vars.end(), v);
    const std::size_t card = (in_a != a.vars.end() && *in_a == v)
                                 ? a.cards[static_cast<std::size_t>(in_a - a.vars.begin())]
                                 : b.cards[static_cast<std::size_t>(std::lower_bound(b.vars.begin(), b.vars.end(), v) - b.vars.begin())];
    out.cards.push_back(card);
    size *= card;
  }
  out.values.resize(size);
  for (auto v : out.vars) {
    strides[0].push_back(out.stride_of(v));
    strides[1].push_back(a.stride_of(v));
    strides[2].push_back(b.stride_of(v));
  }
  for_each_assignment(out.cards, strides, [&](const std::vector<std::size_t>& idx) {
    out.values[idx[0]] = a.values[idx[1]] * b.values[idx[2]];
  });
  return out;
}

Factor sum_out(const Factor& f, std::size_t var) {
  Factor out;
  for (std::size_t i = 0; i < f.vars.size(); ++i) {
    if (f.vars[i] == var) continue;
    out.vars.push_back(f.vars[i]);
    out.cards.push_back(f.cards[i]);
  }
  std::size_t size = 1;
  for (auto c : out.cards) size *= c;
  out.values.assign(size, 0.0);
  std::vector<std::vector<std::size_t>> strides(2);
  for (auto v : f.vars) {
    strides[0].push_back(f.stride_of(v));
    strides[1].push_back(out.stride_of(v));
  }
  for_each_assignment(f.cards, strides, [&](const std::vector<std::size_t>& idx) {
    out.values[idx[1]] += f.values[idx[0]];
  });
  return out;
}

// CPT of `node` as a factor, with evidence variables fixed and dropped.
Factor cpt_factor(const BayesNet& net, std::size_t node, const Evidence& evidence) {
  std::vector<std::size_t> family = net.dag().parents(node);
  family.insert(std::upper_bound(family.begin(), family.end(), node), node);

  Factor out;
  for (auto v : family)
    if (!evidence.count(v)) {
      out.vars.push_back(v);
      out.cards.push_back(net.cardinality(v));
    }
  std::size_t size = 1;
  for (auto c : out.cards) size *= c;
  out.values.resize(size);

  std::vector<std::size_t> assignment(net.size(), 0);
  for (const auto& [v, s] : evidence) assignment[v] = s;
  const auto& cpt = net.cpt(node);
  for (std::size_t flat = 0; flat < size; ++flat) {
    std::size_t rem = flat;
    for (std::size_t i = out.vars.size(); i-- > 0;) {
      assignment[out.vars[i]] = rem % out.cards[i];
      rem /= out.cards[i];
    }
    out.values[flat] = cpt.at(net.cpt_row(node, assignment), assignment[node]);
  }
  return out;
}

void check_request(const BayesNet& net, const Evidence& evidence, std::size_t query) {
  if (query >= net.size()) throw Error(ErrorCode::InvalidArgument, "query node out of range");
  if (evidence.count(query)) throw Error(ErrorCode::InvalidArgument, "query node is part of the evidence");
  for (const auto& [v, s] : evidence)
    if (v >= net.size() || s >= net.cardinality(v))
      throw Error(ErrorCode::InvalidArgument, "evidence refers to an unknown node or state");
}

Posterior normalized(std::vector<double> mass) {
  const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
  Posterior p;
  if (!(total > 0.0)) {
    p.zero_evidence = true;
    p.probabilities.assign(mass.size(), 1.0 / static_cast<double>(mass.size()));
    return p;
  }
  for (auto& m : mass) m /= total;
  p.probabilities = std::move(mass);
  return p;
}

}  // namespace

Posterior infer(const BayesNet& net, const Evidence& evidence, std::size_t query) {
  check_request(net, evidence, query);
  const auto& dag = net.dag();

  // Nodes outside the ancestral set of query and evidence sum to one.
  std::vector<char> relevant(net.size(), 0);
  std::vector<std::size_t> stack{query};
  for (const auto& [v, s] : evidence) stack.push_back(v);
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    if (relevant[v]) continue;
    relevant[v] = 1;
    for (auto p : dag.parents(v)) stack.push_back(p);
  }

  std::vector<Factor> factors;
  std::set<std::size_t> hidden;
  for (std::size_t v = 0; v < net.size(); ++v) {
    if (!relevant[v]) continue;
    factors.push_back(cpt_factor(net, v, evidence));
    if (v != query && !evidence.count(v)) hidden.insert(v);
  }

  while (!hidden.empty()) {
    // Min-degree: fewest distinct neighbours in the current interaction graph.
    std::size_t pick = *hidden.begin();
    std::size_t pick_degree = SIZE_MAX;
    for (auto h : hidden) {
      std::set<std::size_t> neighbours;
      for (const auto& f : factors)
        if (std::binary_search(f.vars.begin(), f.vars.end(), h)) neighbours.insert(f.vars.begin(), f.vars.end());
      const std::size_t degree = neighbours.empty() ? 0 : neighbours.size() - 1;
      if (degree < pick_degree) {
        pick_degree = degree;
        pick = h;
      }
    }
    hidden.erase(pick);

    std::vector<Factor> keep;
    std::optional<Factor> bucket;
    for (auto& f : factors) {
      if (std::binary_search(f.vars.begin(), f.vars.end(), pick))
        bucket = bucket ? multiply(*bucket, f) : std::move(f);
      else
        keep.push_back(std::move(f));
    }
    if (bucket) keep.push_back(sum_out(*bucket, pick));
    factors = std::move(keep);
  }

  Factor result{{query}, {net.cardinality(query)}, std::vector<double>(net.cardinality(query), 1.0)};
  for (const auto& f : factors) result = multiply(result, f);
  return normalized(std::move(result.values));
}

Posterior enumerate_joint(const BayesNet& net, const Evidence& evidence, std::size_t query) {
  check_request(net, evidence, query);
  double joint = 1.0;
  for (std::size_t v = 0; v < net.size(); ++v) joint *= static_cast<double>(net.cardinality(v));
  if (joint > static_cast<double>(std::size_t{1} << 20))
    throw Error(ErrorCode::JointTooLarge, "joint state space exceeds 2^20");

  std::vector<double> mass(net.cardinality(query), 0.0);
  std::vector<std::size_t> assignment(net.size(), 0);
  const auto total = static_cast<std::size_t>(joint);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    for (std::size_t v = net.size(); v-- > 0;) {
      assignment[v] = rem % net.cardinality(v);
      rem /= net.cardinality(v);
    }
    bool consistent = true;
    for (const auto& [v, s] : evidence)
      if (assignment[v] != s) {
        consistent = false;
        break;
      }
    if (!consistent) continue;
    double p = 1.0;
    for (std::size_t v = 0; v < net.size(); ++v) p *= net.cpt(v).at(net.cpt_row(v, assignment), assignment[v]);
    mass[assignment[query]] += p;
  }
  return normalized(std::move(mass));
}

}  // namespace relaxform::bn
