#pragma once

#include <array>

#include "relaxform/binary_class.hpp"

namespace relaxform {

/// The 21 candidate thresholds 0.00, 0.05, ..., 1.00.
std::array<double, 21> threshold_grid();

struct Verdict {
  BinaryClass predicted = BinaryClass::Required;
  double probability = 1.0;  // of the predicted class
  bool endorsed = false;     // an Optional prediction that cleared the threshold
  bool final_required = true;
};

/// Top class wins, 0.5/0.5 goes to Required. An Optional prediction whose
/// probability is strictly below `theta` reverts to Required.
Verdict endorse(double p_optional, double theta);

}  // namespace relaxform
