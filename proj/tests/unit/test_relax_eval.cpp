#include <algorithm>

#include "doctest.h"
#include "fixtures.hpp"
#include "relaxform/bn/inference.hpp"
#include "relaxform/endorser.hpp"
#include "relaxform/error.hpp"
#include "relaxform/eval.hpp"
#include "relaxform/pipeline.hpp"
#include "relaxform/relax.hpp"

using namespace relaxform;

namespace {

const ModelBundle& planted_bundle() {
  static const ModelBundle bundle = [] {
    const auto split = temporal_split(fixtures::planted_dataset({2000, 0.05, 5}));
    TrainConfig cfg;
    cfg.structure.restarts = 2;
    return train_bundle(split.train, split.tune, fixtures::company_dictionary(), cfg);
  }();
  return bundle;
}

RawInstance sample_row() {
  RawInstance r;
  r.values = {"MBC", "39", "NPO", "Education", "t200"};
  r.submitted_at = Timestamp("20180106160000");
  return r;
}

}  // namespace

TEST_CASE("endorser rule") {
  auto v = endorse(0.80, 0.70);
  CHECK(v.predicted == BinaryClass::Optional);
  CHECK(v.probability == 0.80);
  CHECK(v.endorsed);
  CHECK_FALSE(v.final_required);

  v = endorse(0.9, 1.0);
  CHECK(v.predicted == BinaryClass::Optional);
  CHECK(v.final_required);

  v = endorse(0.5, 0.0);
  CHECK(v.predicted == BinaryClass::Required);
  CHECK(v.probability == 0.5);
  CHECK(v.final_required);

  v = endorse(0.7, 0.7);
  CHECK(v.endorsed);
  v = endorse(0.2, 0.0);
  CHECK(v.predicted == BinaryClass::Required);
  CHECK(v.probability == doctest::Approx(0.8));
  CHECK_FALSE(v.endorsed);
}

TEST_CASE("running example: NPO in education relaxes Tax ID") {
  const auto& b = planted_bundle();
  REQUIRE(b.model("Tax ID"));
  const PartialForm form{{{"Company name", "Wish"}, {"Monthly revenue", "20"}, {"Company type", "NPO"},
                          {"Field of activity", "Education"}},
                         {}};
  const auto d = predict_requirement(b, form, "Tax ID");
  CHECK(d.predicted_class == BinaryClass::Optional);
  CHECK_FALSE(d.final_required);
  CHECK(d.probability >= d.theta_used);
  CHECK(d.latency.count() >= 0);

  const PartialForm other{{{"Company type", "SME"}, {"Field of activity", "Retail"}}, {}};
  CHECK(predict_requirement(b, other, "Tax ID").final_required);
}

TEST_CASE("empty form predicts from the prior") {
  const auto check_prior = [](const ModelBundle& b) {
    const auto* m = b.model("Tax ID");
    const auto d = predict_requirement(b, {}, "Tax ID");
    const auto prior = bn::enumerate_joint(m->net, {}, m->net.node("Tax ID"));
    CHECK(d.p_optional == doctest::Approx(prior.probabilities[1]).epsilon(1e-12));
    const auto top = prior.probabilities[1] > 0.5 ? BinaryClass::Optional : BinaryClass::Required;
    CHECK(d.predicted_class == top);
    return d;
  };
  check_prior(planted_bundle());

  // Without oversampling the prior keeps the Required majority of the data.
  const auto split = temporal_split(fixtures::planted_dataset({2000, 0.05, 5}));
  TrainConfig cfg;
  cfg.structure.restarts = 2;
  cfg.enable_smote = false;
  const auto plain = train_bundle(split.train, split.tune, fixtures::company_dictionary(), cfg);
  const auto d = check_prior(plain);
  CHECK(d.predicted_class == BinaryClass::Required);
  CHECK(d.probability == doctest::Approx(1.0 - d.p_optional));
  CHECK(d.final_required);
}

TEST_CASE("prediction errors and targets without a model") {
  const auto& b = planted_bundle();
  CHECK_THROWS_AS(predict_requirement(b, {}, "Nope"), Error);
  try {
    predict_requirement(b, {}, "Nope");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownTarget);
  }
  CHECK_THROWS_AS(predict_requirement(b, {{{"Tax ID", "x"}}, {}}, "Tax ID"), Error);
  // Company type is always filled in the planted data, so it has no model.
  REQUIRE_FALSE(b.model("Company type"));
  const auto d = predict_requirement(b, {}, "Company type");
  CHECK(d.no_model);
  CHECK(d.final_required);
  CHECK_FALSE(d.endorsed);
  CHECK(d.probability == 1.0);
}

TEST_CASE("predict_all") {
  const auto& b = planted_bundle();
  PartialForm full;
  for (const auto& f : b.schema.fields()) full.filled[f.name] = "x";
  CHECK(predict_all(b, full).empty());

  const PartialForm partial{{{"Company type", "NPO"}}, {}};
  const auto all = predict_all(b, partial);
  std::vector<std::string> expected;
  for (const auto& f : b.schema.fields())
    if (b.model(f.name) && !partial.filled.count(f.name)) expected.push_back(f.name);
  REQUIRE(all.size() == expected.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    CHECK(all[i].target == expected[i]);
    const auto one = predict_requirement(b, partial, expected[i]);
    CHECK(one.probability == all[i].probability);
    CHECK(one.final_required == all[i].final_required);
  }
}

TEST_CASE("every decision satisfies the conservatism invariant") {
  const auto& b = planted_bundle();
  const auto test = temporal_split(fixtures::planted_dataset({500, 0.05, 77})).test;
  for (auto mode : {FillMode::Sequential, FillMode::PartialRandom})
    for (const auto& c : generate_cases(test, {mode, 3}, {"Tax ID"}, b.preprocessor.meaningless)) {
      const auto d = predict_requirement(b, {c.prefix, {}}, c.target);
      CHECK(d.probability >= 0.0);
      CHECK(d.probability <= 1.0);
      CHECK(d.final_required == !(d.predicted_class == BinaryClass::Optional && d.probability >= d.theta_used));
    }
}

TEST_CASE("sequential cases for a partially filled company row") {
  Dataset test{fixtures::company_schema(), {sample_row()}};
  const auto cases = generate_cases(test, {}, {"Monthly revenue", "Tax ID"}, fixtures::company_dictionary());
  REQUIRE(cases.size() == 2);
  CHECK(cases[0].target == "Monthly revenue");
  CHECK(cases[0].prefix == std::map<std::string, std::string>{{"Company name", "MBC"}});
  CHECK(cases[0].truth == BinaryClass::Required);
  CHECK(cases[1].target == "Tax ID");
  CHECK(cases[1].prefix.size() == 4);
  CHECK(cases[1].prefix.count("Tax ID") == 0);

  Dataset one_field{FormSchema({{"f", FieldKind::Textual, true, false, 1, {}, {}}}, {}), {}};
  RawInstance r;
  r.values = {"v"};
  one_field.instances.push_back(r);
  CHECK(generate_cases(one_field, {}, {}, {}).empty());
}

TEST_CASE("partial random orders keep groups as ordered blocks") {
  const auto schema = fixtures::company_schema();
  Mt64Source rng(1);
  std::set<std::vector<std::string>> seen;
  for (int i = 0; i < 200; ++i) {
    const auto order = fill_order(schema, FillMode::PartialRandom, rng);
    CHECK(order.size() == 5);
    const auto t = std::find(order.begin(), order.end(), "Company type");
    REQUIRE(t + 1 != order.end());
    CHECK(*(t + 1) == "Field of activity");
    seen.insert(order);
  }
  CHECK(seen.size() == 24);  // 4 units, 4! orders

  Dataset test{schema, {sample_row(), sample_row(), sample_row()}};
  const std::vector<std::string> targets{"Company type", "Field of activity", "Tax ID"};
  const auto a = generate_cases(test, {FillMode::PartialRandom, 9}, targets, {});
  const auto b = generate_cases(test, {FillMode::PartialRandom, 9}, targets, {});
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].prefix == b[i].prefix);
  for (const auto& c : a)
    if (c.target == "Company type") CHECK(c.prefix.count("Field of activity") == 0);

  // Without groups every field is its own unit.
  std::vector<FieldSpec> flat = schema.fields();
  for (auto& f : flat) f.group.reset();
  std::set<std::vector<std::string>> flat_seen;
  for (int i = 0; i < 2000; ++i) flat_seen.insert(fill_order(FormSchema(flat, {}), FillMode::PartialRandom, rng));
  CHECK(flat_seen.size() == 120);
}

TEST_CASE("case count for the sequential scenario") {
  const auto test = fixtures::planted_dataset({37, 0.05, 2});
  CHECK(generate_cases(test, {}, {"Monthly revenue", "Tax ID"}, {}).size() == 74);
}

TEST_CASE("metrics arithmetic") {
  ConfusionMatrix cm{2, 1, 3, 4};
  const auto m = metrics_from(cm);
  CHECK(*m.precision == doctest::Approx(2.0 / 3.0));
  CHECK(*m.recall == doctest::Approx(1.0 / 3.0));
  CHECK(*m.npv == doctest::Approx(3.0 / 7.0));
  CHECK(*m.specificity == doctest::Approx(3.0 / 4.0));
  CHECK(*m.accuracy == doctest::Approx(0.5));

  std::vector<Outcome> perfect{{"a", true, BinaryClass::Required, {}}, {"a", false, BinaryClass::Optional, {}}};
  const auto r = score(perfect);
  CHECK(*r.aggregate.precision == 1.0);
  CHECK(*r.aggregate.recall == 1.0);
  CHECK(*r.aggregate.npv == 1.0);
  CHECK(*r.aggregate.specificity == 1.0);

  std::vector<Outcome> all_required{{"a", true, BinaryClass::Required, {}}, {"a", true, BinaryClass::Optional, {}}};
  CHECK_FALSE(score(all_required).aggregate.npv.has_value());
  CHECK(to_json(score(all_required))["aggregate"]["npv"].is_null());
}

TEST_CASE("experiment report is deterministic and consistent") {
  const auto& b = planted_bundle();
  const auto test = temporal_split(fixtures::planted_dataset({800, 0.05, 40})).test;
  const auto r1 = run_experiment(b, test, {FillMode::PartialRandom, 4});
  const auto r2 = run_experiment(b, test, {FillMode::PartialRandom, 4});
  CHECK(r1.aggregate.counts == r2.aggregate.counts);
  CHECK(r1.latency.min_ms <= r1.latency.mean_ms);
  CHECK(r1.latency.mean_ms <= r1.latency.max_ms);

  // Aggregate counts equal the sum of per-target counts.
  ConfusionMatrix sum;
  for (const auto& [t, m] : r1.per_target) sum += m.counts;
  CHECK(sum == r1.aggregate.counts);
  CHECK(r1.aggregate.counts.total() == test.size() * b.models.size());

  const auto table = format_table(r1);
  for (const char* col : {"Prec", "Rec", "NPV", "Spec"}) CHECK(table.find(col) != std::string::npos);
  CHECK(to_json(r1)["scenario"] == "partial-random");
  CHECK(parse_fill_mode("sequential") == FillMode::Sequential);
  CHECK_THROWS_AS(parse_fill_mode("random"), Error);
}
