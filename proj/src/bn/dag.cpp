#include "relaxform/bn/dag.hpp"

#include <algorithm>
#include <set>

#include "relaxform/error.hpp"

namespace relaxform::bn {

Dag::Dag(std::vector<std::string> nodes)
    : nodes_(std::move(nodes)), parents_(nodes_.size()), children_(nodes_.size()) {
  std::set<std::string> seen(nodes_.begin(), nodes_.end());
  if (seen.size() != nodes_.size()) throw Error(ErrorCode::InvalidArgument, "duplicate node names in DAG");
}

std::optional<std::size_t> Dag::index_of(std::string_view name) const {
  const auto it = std::find(nodes_.begin(), nodes_.end(), name);
  if (it == nodes_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - nodes_.begin());
}

bool Dag::has_edge(std::size_t from, std::size_t to) const {
  const auto& p = parents_.at(to);
  return std::binary_search(p.begin(), p.end(), from);
}

bool Dag::path_exists(std::size_t from, std::size_t to) const {
  if (from == to) return true;
  std::vector<char> seen(size(), 0);
  std::vector<std::size_t> stack{from};
  seen[from] = 1;
  while (!stack.empty()) {
    const auto n = stack.back();
    stack.pop_back();
    for (auto c : children_[n]) {
      if (c == to) return true;
      if (!seen[c]) {
        seen[c] = 1;
        stack.push_back(c);
      }
    }
  }
  return false;
}

void Dag::add_edge(std::size_t from, std::size_t to) {
  if (from >= size() || to >= size()) throw Error(ErrorCode::InvalidArgument, "edge endpoint out of range");
  if (from == to) throw Error(ErrorCode::InvalidArgument, "self loop on '" + nodes_[from] + "'");
  if (has_edge(from, to)) throw Error(ErrorCode::InvalidArgument, "duplicate edge");
  if (path_exists(to, from))
    throw Error(ErrorCode::InvalidArgument, "edge " + nodes_[from] + " -> " + nodes_[to] + " would create a cycle");
  auto& p = parents_[to];
  p.insert(std::upper_bound(p.begin(), p.end(), from), from);
  auto& c = children_[from];
  c.insert(std::upper_bound(c.begin(), c.end(), to), to);
}

void Dag::remove_edge(std::size_t from, std::size_t to) {
  if (!has_edge(from, to)) throw Error(ErrorCode::InvalidArgument, "no such edge");
  auto& p = parents_[to];
  p.erase(std::lower_bound(p.begin(), p.end(), from));
  auto& c = children_[from];
  c.erase(std::lower_bound(c.begin(), c.end(), to));
}

void Dag::reverse_edge(std::size_t from, std::size_t to) {
  remove_edge(from, to);
  try {
    add_edge(to, from);
  } catch (...) {
    add_edge(from, to);
    throw;
  }
}

std::size_t Dag::edge_count() const {
  std::size_t n = 0;
  for (const auto& p : parents_) n += p.size();
  return n;
}

std::vector<std::pair<std::size_t, std::size_t>> Dag::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t v = 0; v < size(); ++v)
    for (auto u : parents_[v]) out.emplace_back(u, v);
  return out;
}

std::vector<std::size_t> Dag::topological_order() const {
  std::vector<std::size_t> indegree(size());
  for (std::size_t v = 0; v < size(); ++v) indegree[v] = parents_[v].size();
  std::vector<std::size_t> ready, order;
  for (std::size_t v = size(); v-- > 0;)
    if (indegree[v] == 0) ready.push_back(v);
  while (!ready.empty()) {
    const auto n = ready.back();
    ready.pop_back();
    order.push_back(n);
    for (auto it = children_[n].rbegin(); it != children_[n].rend(); ++it)
      if (--indegree[*it] == 0) ready.push_back(*it);
  }
  if (order.size() != size()) throw Error(ErrorCode::InvalidArgument, "graph contains a cycle");
  return order;
}

bool Dag::is_acyclic() const {
  try {
    topological_order();
    return true;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace relaxform::bn
