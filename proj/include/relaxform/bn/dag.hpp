#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace relaxform::bn {

/// Directed acyclic graph over named nodes. Parent lists are kept sorted by
/// node index, which is the parent order used by CPTs.
class Dag {
 public:
  Dag() = default;
  explicit Dag(std::vector<std::string> nodes);

  std::size_t size() const { return nodes_.size(); }
  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::string& name(std::size_t node) const { return nodes_.at(node); }
  std::optional<std::size_t> index_of(std::string_view name) const;

  const std::vector<std::size_t>& parents(std::size_t node) const { return parents_.at(node); }
  const std::vector<std::size_t>& children(std::size_t node) const { return children_.at(node); }

  bool has_edge(std::size_t from, std::size_t to) const;
  /// True if a directed path from -> ... -> to exists (from == to counts).
  bool path_exists(std::size_t from, std::size_t to) const;

  /// Throws InvalidArgument for self loops, duplicates or cycles.
  void add_edge(std::size_t from, std::size_t to);
  void remove_edge(std::size_t from, std::size_t to);
  void reverse_edge(std::size_t from, std::size_t to);

  std::size_t edge_count() const;
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;
  bool is_acyclic() const;
  std::vector<std::size_t> topological_order() const;

  bool operator==(const Dag& other) const { return nodes_ == other.nodes_ && parents_ == other.parents_; }

 private:
  std::vector<std::string> nodes_;
  std::vector<std::vector<std::size_t>> parents_;
  std::vector<std::vector<std::size_t>> children_;
};

}  // namespace relaxform::bn
