#include <cmath>

#include "relaxform/kernels/distance.hpp"

#if defined(__AVX2__)
#include <immintrin.h>
#endif

namespace relaxform::kernels::avx2 {

#if defined(__AVX2__)

bool compiled() { return true; }

void squared_distances(const MixedRows& rows, const MixedQuery& query, double mismatch_sq, std::span<double> out) {
  const std::size_t n = rows.rows;
  const std::size_t blocked = n & ~std::size_t{3};
  const __m256d penalty = _mm256_set1_pd(mismatch_sq);
  const __m256d zero = _mm256_setzero_pd();

  for (std::size_t i = 0; i < blocked; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t j = 0; j < rows.ordinal_columns; ++j) {
      const double q = query.ordinal[j];
      const __m256d r = _mm256_loadu_pd(rows.ordinal.data() + j * n + i);
      const __m256d r_missing = _mm256_cmp_pd(r, r, _CMP_UNORD_Q);
      __m256d c;
      if (std::isnan(q)) {
        c = _mm256_blendv_pd(penalty, zero, r_missing);
      } else {
        const __m256d d = _mm256_sub_pd(_mm256_set1_pd(q), r);
        c = _mm256_blendv_pd(_mm256_mul_pd(d, d), penalty, r_missing);
      }
      acc = _mm256_add_pd(acc, c);
    }
    __m128i mismatches = _mm_setzero_si128();
    for (std::size_t k = 0; k < rows.categorical_columns; ++k) {
      const __m128i r = _mm_loadu_si128(reinterpret_cast<const __m128i*>(rows.categorical.data() + k * n + i));
      const __m128i eq = _mm_cmpeq_epi32(r, _mm_set1_epi32(query.categorical[k]));
      // eq lanes are -1 on match; add 1 + eq => 1 on mismatch, 0 on match.
      mismatches = _mm_add_epi32(mismatches, _mm_add_epi32(_mm_set1_epi32(1), eq));
    }
    const __m256d extra = _mm256_mul_pd(_mm256_cvtepi32_pd(mismatches), penalty);
    _mm256_storeu_pd(out.data() + i, _mm256_add_pd(acc, extra));
  }

  if (blocked < n) {
    // Tail rows use the reference arithmetic.
    const std::size_t tail = n - blocked;
    for (std::size_t t = 0; t < tail; ++t) {
      const std::size_t i = blocked + t;
      double acc = 0.0;
      for (std::size_t j = 0; j < rows.ordinal_columns; ++j) {
        const double q = query.ordinal[j];
        const double r = rows.ordinal[j * n + i];
        const bool qn = std::isnan(q), rn = std::isnan(r);
        double c;
        if (qn && rn) c = 0.0;
        else if (qn || rn) c = mismatch_sq;
        else {
          const double d = q - r;
          c = d * d;
        }
        acc += c;
      }
      std::int32_t mismatches = 0;
      for (std::size_t k = 0; k < rows.categorical_columns; ++k)
        mismatches += query.categorical[k] != rows.categorical[k * n + i];
      out[i] = acc + static_cast<double>(mismatches) * mismatch_sq;
    }
  }
}

#else

bool compiled() { return false; }

void squared_distances(const MixedRows& rows, const MixedQuery& query, double mismatch_sq, std::span<double> out) {
  scalar::squared_distances(rows, query, mismatch_sq, out);
}

#endif

}  // namespace relaxform::kernels::avx2
