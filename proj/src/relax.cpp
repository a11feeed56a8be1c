#include "relaxform/relax.hpp"

#include "relaxform/endorser.hpp"
#include "relaxform/error.hpp"
#include "relaxform/pipeline.hpp"

namespace relaxform {

Decision predict_requirement(const ModelBundle& bundle, const PartialForm& form, const std::string& target) {
  const auto start = std::chrono::steady_clock::now();
  if (!bundle.schema.contains(target)) throw Error(ErrorCode::UnknownTarget, "no field named '" + target + "'");
  if (form.filled.count(target)) throw Error(ErrorCode::InvalidArgument, "target '" + target + "' is already filled");

  Decision d;
  d.target = target;
  const auto* model = bundle.model(target);
  if (!model) {
    d.no_model = true;
  } else {
    const auto cells = transform_partial(bundle.preprocessor, form.filled, target);
    const auto posterior = target_posterior(bundle.preprocessor, *model, cells);
    const auto verdict = endorse(posterior.probabilities[1], model->theta);
    d.predicted_class = verdict.predicted;
    d.probability = verdict.probability;
    d.p_optional = posterior.probabilities[1];
    d.theta_used = model->theta;
    d.endorsed = verdict.endorsed;
    d.final_required = verdict.final_required;
    d.zero_evidence = posterior.zero_evidence;
  }
  d.latency = std::chrono::steady_clock::now() - start;
  return d;
}

std::vector<Decision> predict_all(const ModelBundle& bundle, const PartialForm& form) {
  std::vector<Decision> out;
  for (const auto& f : bundle.schema.fields())
    if (bundle.model(f.name) && !form.filled.count(f.name)) out.push_back(predict_requirement(bundle, form, f.name));
  return out;
}

}  // namespace relaxform
