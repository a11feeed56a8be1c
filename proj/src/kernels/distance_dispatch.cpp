#include <atomic>

#include "relaxform/error.hpp"
#include "relaxform/kernels/distance.hpp"

namespace relaxform::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

// -1 = no override, otherwise the Isa value.
std::atomic<int> g_override{-1};

}  // namespace

std::string_view to_string(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

Isa detected_isa() {
  static const Isa isa = (avx2::compiled() && cpu_has_avx2()) ? Isa::Avx2 : Isa::Scalar;
  return isa;
}

Isa active_isa() {
  const int o = g_override.load(std::memory_order_relaxed);
  if (o < 0) return detected_isa();
  const auto requested = static_cast<Isa>(o);
  return requested == Isa::Avx2 && detected_isa() != Isa::Avx2 ? Isa::Scalar : requested;
}

void set_isa_override(std::optional<Isa> isa) {
  g_override.store(isa ? static_cast<int>(*isa) : -1, std::memory_order_relaxed);
}

void squared_distances(const MixedRows& rows, const MixedQuery& query, double mismatch_sq, std::span<double> out) {
  if (query.ordinal.size() != rows.ordinal_columns || query.categorical.size() != rows.categorical_columns ||
      rows.ordinal.size() != rows.rows * rows.ordinal_columns ||
      rows.categorical.size() != rows.rows * rows.categorical_columns || out.size() < rows.rows)
    throw Error(ErrorCode::LayoutMismatch, "distance kernel operands disagree on layout");
  if (active_isa() == Isa::Avx2)
    avx2::squared_distances(rows, query, mismatch_sq, out);
  else
    scalar::squared_distances(rows, query, mismatch_sq, out);
}

}  // namespace relaxform::kernels
