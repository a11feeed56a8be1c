#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "relaxform/binary_class.hpp"
#include "relaxform/rng.hpp"

namespace relaxform {

/// One row in SMOTE feature space. Ordinal features are bin indices (or any
/// real value) with NaN for a missing cell; categorical features are codes.
struct EncodedInstance {
  std::vector<double> ordinal;
  std::vector<std::int32_t> categorical;
  BinaryClass cls = BinaryClass::Required;

  bool operator==(const EncodedInstance& other) const;
};

/// Euclidean distance over ordinals plus `mismatch_penalty`^2 per categorical
/// mismatch (and per ordinal present on one side only), under the root.
double distance(const EncodedInstance& a, const EncodedInstance& b, double mismatch_penalty = 1.0);

/// Median of per-column standard deviations of the present ordinal values;
/// 1.0 when there are no ordinal columns or the median is zero.
double mismatch_penalty(std::span<const EncodedInstance> rows);

struct SmoteConfig {
  std::size_t k = 5;
  double target_ratio = 1.0;
  std::uint64_t seed = 0;
};

struct SyntheticOrigin {
  std::size_t seed;      // index into the input
  std::size_t neighbor;  // index into the input; equals seed for duplicates
  double lambda = 0.0;
  std::vector<double> interpolated;  // ordinal values before rounding
};

struct SmoteResult {
  /// Originals first, in input order, then synthetic rows.
  std::vector<EncodedInstance> instances;
  /// origins[i] describes instances[original_count + i].
  std::vector<SyntheticOrigin> origins;
  std::size_t original_count = 0;
  BinaryClass minority = BinaryClass::Optional;
  bool single_class = false;
};

/// Synthesizes minority rows until minority = max(m, floor(target_ratio * M)).
/// Per synthetic row the RNG is drawn as: seed position (index(m)), neighbour
/// rank (index(k)), then lambda (uniform01). Interpolated ordinals are
/// rounded to the nearest integer, ties up; a missing ordinal on either side
/// keeps the seed's value. Categorical features take the mode over the seed
/// and its k neighbours, ties to the seed's value, then to the nearer row.
/// With m <= k the neighbourhood shrinks to m - 1; m = 1 duplicates.
SmoteResult oversample(std::span<const EncodedInstance> data, const SmoteConfig& cfg, RandomSource& rng);
SmoteResult oversample(std::span<const EncodedInstance> data, const SmoteConfig& cfg);

}  // namespace relaxform
