#include "relaxform/bn/structure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "relaxform/bn/score.hpp"
#include "relaxform/error.hpp"
#include "relaxform/rng.hpp"

namespace relaxform::bn {

namespace {

enum class MoveKind { Add, Remove, Reverse };

struct Move {
  MoveKind kind;
  std::size_t from, to;
  double delta;
};

std::vector<std::size_t> with(std::vector<std::size_t> set, std::size_t x) {
  set.insert(std::upper_bound(set.begin(), set.end(), x), x);
  return set;
}

std::vector<std::size_t> without(std::vector<std::size_t> set, std::size_t x) {
  set.erase(std::lower_bound(set.begin(), set.end(), x));
  return set;
}

Dag random_dag(const DiscreteData& data, std::size_t max_parents, RandomSource& rng) {
  Dag dag(data.names);
  const std::size_t n = dag.size();
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.index(i)]);
  const double p = n > 1 ? 1.0 / static_cast<double>(n - 1) : 0.0;
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t i = 0; i < j; ++i)
      if (dag.parents(perm[j]).size() < max_parents && rng.uniform01() < p) dag.add_edge(perm[i], perm[j]);
  return dag;
}

bool best_move(const Dag& dag, BicCache& scores, const StructureSearchConfig& cfg, Move& out) {
  const std::size_t n = dag.size();
  bool found = false;
  const auto consider = [&](MoveKind kind, std::size_t u, std::size_t v, double delta) {
    if (!found || delta > out.delta) {
      out = {kind, u, v, delta};
      found = true;
    }
  };
  for (std::size_t v = 0; v < n; ++v) {
    const auto& pv = dag.parents(v);
    const double current_v = scores.family(v, pv);
    for (std::size_t u = 0; u < n; ++u) {
      if (u == v) continue;
      if (dag.has_edge(u, v)) {
        const auto reduced = without(pv, u);
        const double remove_delta = scores.family(v, reduced) - current_v;
        consider(MoveKind::Remove, u, v, remove_delta);
        if (cfg.allow_reversal && dag.parents(u).size() < cfg.max_parents) {
          // Reversal is legal iff u -> v is the only path from u to v.
          Dag probe = dag;
          probe.remove_edge(u, v);
          if (!probe.path_exists(u, v)) {
            const auto& pu = dag.parents(u);
            consider(MoveKind::Reverse, u, v,
                     remove_delta + scores.family(u, with(pu, v)) - scores.family(u, pu));
          }
        }
      } else if (!dag.has_edge(v, u) && pv.size() < cfg.max_parents && !dag.path_exists(v, u)) {
        consider(MoveKind::Add, u, v, scores.family(v, with(pv, u)) - current_v);
      }
    }
  }
  return found;
}

}  // namespace

Dag learn_structure(const DiscreteData& data, const StructureSearchConfig& cfg, SearchTrace* trace) {
  if (data.rows() == 0) throw Error(ErrorCode::EmptyData, "structure learning needs at least one row");
  if (cfg.max_parents == 0 || cfg.max_iterations == 0 || cfg.restarts == 0 || !(cfg.score_epsilon > 0))
    throw Error(ErrorCode::InvalidArgument, "structure search settings must be positive");
  data.validate();

  BicCache scores(data);
  Dag best;
  double best_score = -INFINITY;
  if (trace) trace->restarts.clear();

  for (std::size_t r = 0; r < cfg.restarts; ++r) {
    Mt64Source rng(splitmix64(cfg.seed + r));
    Dag dag = r == 0 ? Dag(data.names) : random_dag(data, cfg.max_parents, rng);
    double score = scores.total(dag);
    std::vector<double> history{score};

    for (std::size_t it = 0; it < cfg.max_iterations; ++it) {
      Move move{};
      if (!best_move(dag, scores, cfg, move) || !(move.delta > cfg.score_epsilon)) break;
      switch (move.kind) {
        case MoveKind::Add: dag.add_edge(move.from, move.to); break;
        case MoveKind::Remove: dag.remove_edge(move.from, move.to); break;
        case MoveKind::Reverse: dag.reverse_edge(move.from, move.to); break;
      }
      const double next = scores.total(dag);
      if (next < score - 1e-9 * std::max(1.0, std::abs(score)))
        throw std::logic_error("hill climbing accepted a move that lowered the BIC score");
      score = next;
      history.push_back(score);
    }

    if (score > best_score) {
      best_score = score;
      best = dag;
      if (trace) trace->best_restart = r;
    }
    if (trace) trace->restarts.push_back(std::move(history));
  }
  return best;
}

}  // namespace relaxform::bn
