#pragma once

#include <chrono>
#include <map>
#include <string>
#include <vector>

#include "relaxform/binary_class.hpp"
#include "relaxform/bundle.hpp"

namespace relaxform {

struct PartialForm {
  std::map<std::string, std::string> filled;
  std::string timestamp;
};

struct Decision {
  std::string target;
  BinaryClass predicted_class = BinaryClass::Required;
  double probability = 1.0;  // of the predicted class
  double p_optional = 0.0;
  double theta_used = 0.0;
  bool endorsed = false;
  bool final_required = true;
  /// The target has no model (constant or one-class in training).
  bool no_model = false;
  /// Evidence had zero probability; the posterior fell back to uniform.
  bool zero_evidence = false;
  std::chrono::nanoseconds latency{0};
};

/// Throws UnknownTarget for names outside the schema and InvalidArgument
/// when the target is already filled. A target without a model is Required.
Decision predict_requirement(const ModelBundle& bundle, const PartialForm& form, const std::string& target);

/// One decision per modeled, unfilled target, in tab order.
std::vector<Decision> predict_all(const ModelBundle& bundle, const PartialForm& form);

}  // namespace relaxform
