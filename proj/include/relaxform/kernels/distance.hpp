#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

// Batched mixed-type distance kernels used by the SMOTE neighbour search.
// The scalar path is the reference; SIMD variants must be bit-identical to it
// (no FMA, same per-row accumulation order) and are picked at runtime.
namespace relaxform::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

/// Column-major rows: ordinal column j occupies ordinal[j*rows, (j+1)*rows).
/// NaN marks a missing ordinal value.
struct MixedRows {
  std::size_t rows = 0;
  std::size_t ordinal_columns = 0;
  std::size_t categorical_columns = 0;
  std::span<const double> ordinal;
  std::span<const std::int32_t> categorical;
};

struct MixedQuery {
  std::span<const double> ordinal;
  std::span<const std::int32_t> categorical;
};

/// out[i] = sum_j c(q_j, r_ij) + mismatch_sq * #{k : q_k != r_ik}, where
/// c is the squared difference when both ordinals are present, mismatch_sq
/// when exactly one is missing and 0 when both are.
void squared_distances(const MixedRows& rows, const MixedQuery& query, double mismatch_sq, std::span<double> out);

namespace scalar {
void squared_distances(const MixedRows& rows, const MixedQuery& query, double mismatch_sq, std::span<double> out);
}

namespace avx2 {
bool compiled();
void squared_distances(const MixedRows& rows, const MixedQuery& query, double mismatch_sq, std::span<double> out);
}

/// Best ISA supported by both the build and the running CPU.
Isa detected_isa();
/// ISA the dispatcher currently uses (detected unless overridden).
Isa active_isa();
/// Test hook; nullopt restores detection. Requests for an unsupported ISA fall back to scalar.
void set_isa_override(std::optional<Isa> isa);

}  // namespace relaxform::kernels
