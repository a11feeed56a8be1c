#include "relaxform/endorser.hpp"

namespace relaxform {

std::array<double, 21> threshold_grid() {
  std::array<double, 21> grid{};
  for (int i = 0; i <= 20; ++i) grid[static_cast<std::size_t>(i)] = i / 20.0;
  return grid;
}

Verdict endorse(double p_optional, double theta) {
  Verdict v;
  if (p_optional > 0.5) {
    v.predicted = BinaryClass::Optional;
    v.probability = p_optional;
    v.endorsed = !(p_optional < theta);
  } else {
    v.predicted = BinaryClass::Required;
    v.probability = 1.0 - p_optional;
  }
  v.final_required = !v.endorsed;
  return v;
}

}  // namespace relaxform
