#include "relaxform/bn/score.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "relaxform/error.hpp"

namespace relaxform::bn {

std::optional<std::size_t> DiscreteData::index_of(std::string_view name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names.begin());
}

void DiscreteData::validate() const {
  if (states.size() != names.size() || columns.size() != names.size())
    throw Error(ErrorCode::InvalidArgument, "discrete data: names, states and columns disagree");
  for (std::size_t v = 0; v < columns.size(); ++v) {
    if (columns[v].size() != rows()) throw Error(ErrorCode::InvalidArgument, "discrete data: ragged columns");
    if (states[v].empty()) throw Error(ErrorCode::InvalidArgument, "discrete data: variable without states");
    const auto card = static_cast<std::int32_t>(states[v].size());
    for (auto x : columns[v])
      if (x < 0 || x >= card)
        throw Error(ErrorCode::InvalidArgument, "discrete data: code out of range for '" + names[v] + "'");
  }
}

namespace {

constexpr std::size_t kDenseLimit = std::size_t{1} << 22;

double xlogx_ratio(double n, double total) { return n > 0 ? n * std::log(n / total) : 0.0; }

}  // namespace

double family_log_likelihood(const DiscreteData& data, std::size_t node, const std::vector<std::size_t>& parents) {
  const std::size_t n = data.rows();
  const std::size_t r = data.cardinality(node);
  double configs = 1.0;
  for (auto p : parents) configs *= static_cast<double>(data.cardinality(p));

  // Row-major parent configuration index, last parent fastest.
  std::vector<std::uint64_t> config(n, 0);
  for (auto p : parents) {
    const auto card = data.cardinality(p);
    const auto& col = data.columns[p];
    for (std::size_t i = 0; i < n; ++i) config[i] = config[i] * card + static_cast<std::uint64_t>(col[i]);
  }
  const auto& x = data.columns[node];

  double ll = 0.0;
  if (configs * static_cast<double>(r) <= static_cast<double>(kDenseLimit)) {
    const auto q = static_cast<std::size_t>(configs);
    std::vector<std::uint32_t> counts(q * r, 0);
    for (std::size_t i = 0; i < n; ++i) ++counts[config[i] * r + static_cast<std::size_t>(x[i])];
    for (std::size_t j = 0; j < q; ++j) {
      std::uint64_t nj = 0;
      for (std::size_t k = 0; k < r; ++k) nj += counts[j * r + k];
      if (nj == 0) continue;
      for (std::size_t k = 0; k < r; ++k) ll += xlogx_ratio(counts[j * r + k], static_cast<double>(nj));
    }
    return ll;
  }
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> sparse;
  for (std::size_t i = 0; i < n; ++i) {
    auto& row = sparse[config[i]];
    if (row.empty()) row.assign(r, 0);
    ++row[static_cast<std::size_t>(x[i])];
  }
  for (const auto& [cfg, row] : sparse) {
    std::uint64_t nj = 0;
    for (auto c : row) nj += c;
    for (auto c : row) ll += xlogx_ratio(c, static_cast<double>(nj));
  }
  return ll;
}

double family_parameter_count(const DiscreteData& data, std::size_t node, const std::vector<std::size_t>& parents) {
  double q = 1.0;
  for (auto p : parents) q *= static_cast<double>(data.cardinality(p));
  return (static_cast<double>(data.cardinality(node)) - 1.0) * q;
}

double family_bic(const DiscreteData& data, std::size_t node, const std::vector<std::size_t>& parents) {
  const double n = static_cast<double>(data.rows());
  return family_log_likelihood(data, node, parents) - 0.5 * std::log(n) * family_parameter_count(data, node, parents);
}

double bic_score(const Dag& dag, const DiscreteData& data) {
  if (data.rows() == 0) throw Error(ErrorCode::EmptyData, "BIC needs at least one row");
  if (dag.size() != data.variables()) throw Error(ErrorCode::InvalidArgument, "DAG and data disagree on variables");
  double total = 0.0;
  for (std::size_t v = 0; v < dag.size(); ++v) total += family_bic(data, v, dag.parents(v));
  return total;
}

BicCache::BicCache(const DiscreteData& data) : data_(data), cache_(data.variables()) {
  if (data.rows() == 0) throw Error(ErrorCode::EmptyData, "BIC needs at least one row");
}

double BicCache::family(std::size_t node, const std::vector<std::size_t>& parents) {
  auto& slot = cache_[node];
  const auto it = slot.find(parents);
  if (it != slot.end()) return it->second;
  ++evaluations_;
  const double s = family_bic(data_, node, parents);
  slot.emplace(parents, s);
  return s;
}

double BicCache::total(const Dag& dag) {
  double t = 0.0;
  for (std::size_t v = 0; v < dag.size(); ++v) t += family(v, dag.parents(v));
  return t;
}

}  // namespace relaxform::bn
