#include <cmath>

#include "relaxform/kernels/distance.hpp"

namespace relaxform::kernels::scalar {

void squared_distances(const MixedRows& rows, const MixedQuery& query, double mismatch_sq, std::span<double> out) {
  for (std::size_t i = 0; i < rows.rows; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < rows.ordinal_columns; ++j) {
      const double q = query.ordinal[j];
      const double r = rows.ordinal[j * rows.rows + i];
      const bool qn = std::isnan(q);
      const bool rn = std::isnan(r);
      double c;
      if (qn && rn) {
        c = 0.0;
      } else if (qn || rn) {
        c = mismatch_sq;
      } else {
        const double d = q - r;
        c = d * d;
      }
      acc += c;
    }
    std::int32_t mismatches = 0;
    for (std::size_t k = 0; k < rows.categorical_columns; ++k)
      mismatches += query.categorical[k] != rows.categorical[k * rows.rows + i];
    out[i] = acc + static_cast<double>(mismatches) * mismatch_sq;
  }
}

}  // namespace relaxform::kernels::scalar
