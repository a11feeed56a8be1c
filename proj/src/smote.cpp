#include "relaxform/smote.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "relaxform/error.hpp"
#include "relaxform/kernels/distance.hpp"

namespace relaxform {

bool EncodedInstance::operator==(const EncodedInstance& other) const {
  if (cls != other.cls || categorical != other.categorical || ordinal.size() != other.ordinal.size()) return false;
  for (std::size_t j = 0; j < ordinal.size(); ++j) {
    const bool an = std::isnan(ordinal[j]), bn = std::isnan(other.ordinal[j]);
    if (an != bn || (!an && ordinal[j] != other.ordinal[j])) return false;
  }
  return true;
}

double distance(const EncodedInstance& a, const EncodedInstance& b, double mismatch_penalty) {
  if (a.ordinal.size() != b.ordinal.size() || a.categorical.size() != b.categorical.size())
    throw Error(ErrorCode::LayoutMismatch, "instances have different feature layouts");
  double out = 0.0;
  const kernels::MixedRows rows{1, b.ordinal.size(), b.categorical.size(), b.ordinal, b.categorical};
  kernels::squared_distances(rows, {a.ordinal, a.categorical}, mismatch_penalty * mismatch_penalty, {&out, 1});
  return std::sqrt(out);
}

double mismatch_penalty(std::span<const EncodedInstance> rows) {
  if (rows.empty() || rows.front().ordinal.empty()) return 1.0;
  std::vector<double> stds;
  for (std::size_t j = 0; j < rows.front().ordinal.size(); ++j) {
    double sum = 0.0, sum_sq = 0.0;
    std::size_t n = 0;
    for (const auto& r : rows) {
      const double v = r.ordinal[j];
      if (std::isnan(v)) continue;
      sum += v;
      sum_sq += v * v;
      ++n;
    }
    if (n == 0) continue;
    const double mean = sum / static_cast<double>(n);
    stds.push_back(std::sqrt(std::max(0.0, sum_sq / static_cast<double>(n) - mean * mean)));
  }
  if (stds.empty()) return 1.0;
  std::sort(stds.begin(), stds.end());
  const auto mid = stds.size() / 2;
  const double median = stds.size() % 2 ? stds[mid] : (stds[mid - 1] + stds[mid]) / 2.0;
  return median > 0.0 ? median : 1.0;
}

namespace {

// Minority rows in the column-major layout the distance kernel expects.
struct MinorityBlock {
  std::size_t rows = 0, n_ord = 0, n_cat = 0;
  std::vector<double> ordinal;
  std::vector<std::int32_t> categorical;

  MinorityBlock(std::span<const EncodedInstance> data, const std::vector<std::size_t>& members)
      : rows(members.size()), n_ord(data[members.front()].ordinal.size()),
        n_cat(data[members.front()].categorical.size()), ordinal(rows * n_ord), categorical(rows * n_cat) {
    for (std::size_t i = 0; i < rows; ++i) {
      const auto& inst = data[members[i]];
      for (std::size_t j = 0; j < n_ord; ++j) ordinal[j * rows + i] = inst.ordinal[j];
      for (std::size_t k = 0; k < n_cat; ++k) categorical[k * rows + i] = inst.categorical[k];
    }
  }

  kernels::MixedRows view() const { return {rows, n_ord, n_cat, ordinal, categorical}; }
};

}  // namespace

SmoteResult oversample(std::span<const EncodedInstance> data, const SmoteConfig& cfg, RandomSource& rng) {
  if (cfg.k < 1) throw Error(ErrorCode::InvalidArgument, "SMOTE k must be at least 1");
  if (!(cfg.target_ratio > 0.0 && cfg.target_ratio <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "SMOTE target_ratio must lie in (0, 1]");

  SmoteResult result;
  result.instances.assign(data.begin(), data.end());
  result.original_count = data.size();
  if (data.empty()) {
    result.single_class = true;
    return result;
  }
  for (const auto& d : data)
    if (d.ordinal.size() != data[0].ordinal.size() || d.categorical.size() != data[0].categorical.size())
      throw Error(ErrorCode::LayoutMismatch, "SMOTE input rows have different feature layouts");

  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < data.size(); ++i) by_class[static_cast<int>(data[i].cls)].push_back(i);
  if (by_class[0].empty() || by_class[1].empty()) {
    result.single_class = true;
    result.minority = by_class[0].empty() ? BinaryClass::Required : BinaryClass::Optional;
    return result;
  }
  const int minority = by_class[1].size() <= by_class[0].size() ? 1 : 0;
  result.minority = static_cast<BinaryClass>(minority);
  const auto& members = by_class[minority];
  const std::size_t m = members.size();
  const std::size_t majority = by_class[1 - minority].size();
  const auto wanted = static_cast<std::size_t>(std::floor(cfg.target_ratio * static_cast<double>(majority) + 1e-9));
  const std::size_t synthetic = std::max(m, wanted) - m;
  if (synthetic == 0) return result;

  std::vector<EncodedInstance> minority_rows;
  minority_rows.reserve(m);
  for (auto idx : members) minority_rows.push_back(data[idx]);
  const double penalty = mismatch_penalty(minority_rows);
  const double penalty_sq = penalty * penalty;
  const MinorityBlock block(data, members);
  const std::size_t k = m == 1 ? 0 : std::min(cfg.k, m - 1);

  std::vector<std::optional<std::vector<std::size_t>>> neighbor_cache(m);
  std::vector<double> dist(m);
  std::vector<std::size_t> order(m);
  const auto neighbors_of = [&](std::size_t pos) -> const std::vector<std::size_t>& {
    auto& slot = neighbor_cache[pos];
    if (slot) return *slot;
    const auto& q = data[members[pos]];
    kernels::squared_distances(block.view(), {q.ordinal, q.categorical}, penalty_sq, dist);
    std::iota(order.begin(), order.end(), 0);
    order.erase(order.begin() + static_cast<std::ptrdiff_t>(pos));
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                      [&](std::size_t a, std::size_t b) { return dist[a] < dist[b] || (dist[a] == dist[b] && a < b); });
    slot.emplace(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
    order.resize(m);
    return *slot;
  };

  result.instances.reserve(data.size() + synthetic);
  result.origins.reserve(synthetic);
  for (std::size_t s = 0; s < synthetic; ++s) {
    const std::size_t seed_pos = rng.index(m);
    const auto& seed = data[members[seed_pos]];
    if (k == 0) {
      result.instances.push_back(seed);
      result.origins.push_back({members[seed_pos], members[seed_pos], 0.0, seed.ordinal});
      continue;
    }
    const auto& nbrs = neighbors_of(seed_pos);
    const std::size_t nb_pos = nbrs[rng.index(k)];
    const auto& nb = data[members[nb_pos]];
    const double lambda = rng.uniform01();

    EncodedInstance out;
    out.cls = seed.cls;
    SyntheticOrigin origin{members[seed_pos], members[nb_pos], lambda, {}};
    for (std::size_t j = 0; j < seed.ordinal.size(); ++j) {
      const double a = seed.ordinal[j], b = nb.ordinal[j];
      if (std::isnan(a) || std::isnan(b)) {
        origin.interpolated.push_back(a);
        out.ordinal.push_back(a);
      } else {
        const double u = a + lambda * (b - a);
        origin.interpolated.push_back(u);
        out.ordinal.push_back(std::floor(u + 0.5));
      }
    }
    for (std::size_t c = 0; c < seed.categorical.size(); ++c) {
      // Votes in neighbour order so the nearer row wins remaining ties.
      std::vector<std::pair<std::int32_t, std::size_t>> votes{{seed.categorical[c], 1}};
      for (auto pos : nbrs) {
        const auto v = data[members[pos]].categorical[c];
        auto it = std::find_if(votes.begin(), votes.end(), [v](const auto& p) { return p.first == v; });
        if (it == votes.end()) votes.emplace_back(v, 1); else ++it->second;
      }
      auto best = votes.begin();
      for (auto it = votes.begin() + 1; it != votes.end(); ++it)
        if (it->second > best->second) best = it;
      out.categorical.push_back(best->first);
    }
    result.instances.push_back(std::move(out));
    result.origins.push_back(std::move(origin));
  }
  return result;
}

SmoteResult oversample(std::span<const EncodedInstance> data, const SmoteConfig& cfg) {
  Mt64Source rng(cfg.seed);
  return oversample(data, cfg, rng);
}

}  // namespace relaxform
