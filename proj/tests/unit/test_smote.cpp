#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "doctest.h"
#include "fixtures.hpp"
#include "relaxform/error.hpp"
#include "relaxform/kernels/distance.hpp"
#include "relaxform/smote.hpp"

using namespace relaxform;

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

EncodedInstance num(double v, BinaryClass c) { return {{v}, {}, c}; }

std::vector<EncodedInstance> revenue_sample() {
  return {num(39, BinaryClass::Optional), num(42, BinaryClass::Optional), num(25, BinaryClass::Optional),
          num(100, BinaryClass::Required), num(150, BinaryClass::Required), num(200, BinaryClass::Required),
          num(400, BinaryClass::Required)};
}

std::size_t count(const std::vector<EncodedInstance>& v, BinaryClass c) {
  return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [c](const auto& e) { return e.cls == c; }));
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("distance") {
  CHECK(distance(num(39, BinaryClass::Optional), num(42, BinaryClass::Optional)) == 3.0);
  const EncodedInstance a{{1, 2}, {3, 4}, BinaryClass::Required};
  CHECK(distance(a, a) == 0.0);
  const EncodedInstance x{{}, {1}, BinaryClass::Required}, y{{}, {2}, BinaryClass::Required};
  CHECK(mismatch_penalty(std::vector<EncodedInstance>{x, y}) == 1.0);
  CHECK(distance(x, y, mismatch_penalty(std::vector<EncodedInstance>{x, y})) == 1.0);
  // A value missing on one side costs one penalty, missing on both costs nothing.
  CHECK(distance({{kNaN}, {}, {}}, {{5}, {}, {}}, 2.0) == 2.0);
  CHECK(distance({{kNaN}, {}, {}}, {{kNaN}, {}, {}}, 2.0) == 0.0);
  CHECK_THROWS_AS(distance(a, x), Error);
}

TEST_CASE("mismatch penalty is the median ordinal spread") {
  const std::vector<EncodedInstance> rows{{{0, 0, 0}, {}, {}}, {{2, 4, 6}, {}, {}}};
  CHECK(mismatch_penalty(rows) == doctest::Approx(2.0));
  const std::vector<EncodedInstance> flat{{{1}, {}, {}}, {{1}, {}, {}}};
  CHECK(mismatch_penalty(flat) == 1.0);
}

TEST_CASE("scripted draw reproduces the revenue interpolation 42 + (39 - 42) * 0.7") {
  const auto data = revenue_sample();
  // Seed position 1 (42), nearest neighbour rank 0 (39), lambda 0.7; one more
  // synthetic row is needed to reach 4/4.
  fixtures::ScriptedRandom rng({1, 0}, {0.7});
  SmoteConfig cfg;
  cfg.k = 1;
  cfg.target_ratio = 0.5;  // floor(0.5 * 4) = 2 < 3, nothing to do
  CHECK(oversample(data, cfg, rng).origins.empty());

  cfg.target_ratio = 1.0;
  std::vector<EncodedInstance> small{data[0], data[1], data[3], data[4], data[5]};
  fixtures::ScriptedRandom one({1, 0}, {0.7});
  const auto r = oversample(small, cfg, one);
  REQUIRE(r.origins.size() == 1);
  CHECK(r.origins[0].seed == 1);
  CHECK(r.origins[0].neighbor == 0);
  CHECK(r.origins[0].interpolated[0] == doctest::Approx(39.9).epsilon(1e-12));
  CHECK(r.instances.back().ordinal[0] == 40.0);
  CHECK(r.instances.back().cls == BinaryClass::Optional);
}

TEST_CASE("SMOTE counts") {
  SmoteConfig cfg;
  std::vector<EncodedInstance> v;
  for (int i = 0; i < 3; ++i) v.push_back(num(i, BinaryClass::Optional));
  for (int i = 0; i < 9; ++i) v.push_back(num(10 + i, BinaryClass::Required));
  const auto r = oversample(v, cfg);
  CHECK(r.origins.size() == 6);
  CHECK(count(r.instances, BinaryClass::Optional) == 9);
  CHECK(count(r.instances, BinaryClass::Required) == 9);
  CHECK(std::equal(v.begin(), v.end(), r.instances.begin()));

  std::vector<EncodedInstance> balanced{num(1, BinaryClass::Optional), num(2, BinaryClass::Required)};
  CHECK(oversample(balanced, cfg).instances == balanced);

  std::vector<EncodedInstance> single{num(7, BinaryClass::Optional), num(1, BinaryClass::Required),
                                      num(2, BinaryClass::Required), num(3, BinaryClass::Required)};
  const auto dup = oversample(single, cfg);
  CHECK(dup.origins.size() == 2);
  for (std::size_t i = dup.original_count; i < dup.instances.size(); ++i) CHECK(dup.instances[i] == single[0]);

  std::vector<EncodedInstance> one_class{num(1, BinaryClass::Required), num(2, BinaryClass::Required)};
  CHECK(oversample(one_class, cfg).single_class);

  cfg.k = 0;
  CHECK_THROWS_AS(oversample(v, cfg), Error);
  cfg.k = 5;
  cfg.target_ratio = 1.5;
  CHECK_THROWS_AS(oversample(v, cfg), Error);
}

TEST_CASE("SMOTE is deterministic, balanced and convex on mixed data") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Mt64Source gen(seed);
    std::vector<EncodedInstance> v;
    const std::size_t minority = 2 + gen.index(10), majority = minority + 1 + gen.index(40);
    for (std::size_t i = 0; i < minority + majority; ++i) {
      EncodedInstance e;
      e.cls = i < minority ? BinaryClass::Optional : BinaryClass::Required;
      for (int j = 0; j < 3; ++j) e.ordinal.push_back(gen.uniform01() < 0.2 ? kNaN : static_cast<double>(gen.index(6)));
      for (int j = 0; j < 2; ++j) e.categorical.push_back(static_cast<std::int32_t>(gen.index(3)));
      v.push_back(std::move(e));
    }
    SmoteConfig cfg;
    cfg.seed = seed;
    const auto a = oversample(v, cfg), b = oversample(v, cfg);
    CHECK(a.instances == b.instances);
    CHECK(count(a.instances, BinaryClass::Optional) == count(a.instances, BinaryClass::Required));
    for (std::size_t s = 0; s < a.origins.size(); ++s) {
      const auto& o = a.origins[s];
      const auto& out = a.instances[a.original_count + s];
      for (std::size_t j = 0; j < 3; ++j) {
        const double lo = v[o.seed].ordinal[j], hi = v[o.neighbor].ordinal[j];
        if (std::isnan(lo) || std::isnan(hi)) {
          CHECK(same_bits(out.ordinal[j], lo));
          continue;
        }
        CHECK(o.interpolated[j] >= std::min(lo, hi));
        CHECK(o.interpolated[j] <= std::max(lo, hi));
        CHECK(out.ordinal[j] == std::floor(o.interpolated[j] + 0.5));
      }
    }
  }
}

TEST_CASE("categorical features take the neighbourhood mode") {
  // Seed category 0 is outvoted by three neighbours sharing category 1.
  std::vector<EncodedInstance> v{{{0}, {0}, BinaryClass::Optional}, {{1}, {1}, BinaryClass::Optional},
                                 {{1}, {1}, BinaryClass::Optional}, {{1}, {1}, BinaryClass::Optional}};
  for (int i = 0; i < 8; ++i) v.push_back({{50}, {2}, BinaryClass::Required});
  fixtures::ScriptedRandom rng({0, 0, 0, 0, 0, 0, 0, 0}, {0.5, 0.5, 0.5, 0.5});
  SmoteConfig cfg;
  cfg.k = 3;
  const auto r = oversample(v, cfg, rng);
  REQUIRE(r.origins.size() == 4);
  for (std::size_t i = r.original_count; i < r.instances.size(); ++i) CHECK(r.instances[i].categorical[0] == 1);

  // A 1-1 tie between seed and its only neighbour keeps the seed's value.
  std::vector<EncodedInstance> tie{{{0}, {4}, BinaryClass::Optional}, {{0}, {5}, BinaryClass::Optional},
                                   {{0}, {0}, BinaryClass::Required}, {{0}, {0}, BinaryClass::Required},
                                   {{0}, {0}, BinaryClass::Required}};
  fixtures::ScriptedRandom rng2({0, 0}, {0.5});
  cfg.k = 1;
  const auto t = oversample(tie, cfg, rng2);
  REQUIRE(t.origins.size() == 1);
  CHECK(t.instances.back().categorical[0] == 4);
}

TEST_CASE("SIMD distance kernel is bit-identical to the scalar reference") {
  Mt64Source rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t rows = rng.index(23), n_ord = rng.index(5), n_cat = rng.index(4);
    std::vector<double> ord(rows * n_ord);
    std::vector<std::int32_t> cat(rows * n_cat);
    for (auto& x : ord) x = rng.uniform01() < 0.15 ? kNaN : (rng.uniform01() - 0.5) * 1e3;
    for (auto& x : cat) x = static_cast<std::int32_t>(rng.index(3));
    std::vector<double> q_ord(n_ord);
    std::vector<std::int32_t> q_cat(n_cat);
    for (auto& x : q_ord) x = rng.uniform01() < 0.15 ? kNaN : (rng.uniform01() - 0.5) * 1e3;
    for (auto& x : q_cat) x = static_cast<std::int32_t>(rng.index(3));
    const kernels::MixedRows block{rows, n_ord, n_cat, ord, cat};
    const double pen = rng.uniform01() * 3;

    std::vector<double> ref(rows), simd(rows, -1), dispatched(rows, -1);
    kernels::scalar::squared_distances(block, {q_ord, q_cat}, pen, ref);
    kernels::squared_distances(block, {q_ord, q_cat}, pen, dispatched);
    for (std::size_t i = 0; i < rows; ++i) CHECK(same_bits(ref[i], dispatched[i]));
    if (kernels::detected_isa() == kernels::Isa::Avx2) {
      kernels::avx2::squared_distances(block, {q_ord, q_cat}, pen, simd);
      for (std::size_t i = 0; i < rows; ++i) CHECK(same_bits(ref[i], simd[i]));
    }
  }
}

TEST_CASE("ISA override and layout checks") {
  kernels::set_isa_override(kernels::Isa::Scalar);
  CHECK(kernels::active_isa() == kernels::Isa::Scalar);
  kernels::set_isa_override(std::nullopt);
  CHECK(kernels::active_isa() == kernels::detected_isa());

  std::vector<double> ord(3);
  std::vector<double> out(2);
  const kernels::MixedRows bad{2, 2, 0, ord, {}};
  CHECK_THROWS_AS(kernels::squared_distances(bad, {std::vector<double>(2), {}}, 1.0, out), Error);
}

TEST_CASE("SMOTE output does not depend on the selected kernel") {
  Mt64Source gen(5);
  std::vector<EncodedInstance> v;
  for (int i = 0; i < 60; ++i)
    v.push_back({{static_cast<double>(gen.index(9)), gen.uniform01() < 0.1 ? kNaN : static_cast<double>(gen.index(4))},
                 {static_cast<std::int32_t>(gen.index(3))},
                 i < 12 ? BinaryClass::Optional : BinaryClass::Required});
  kernels::set_isa_override(kernels::Isa::Scalar);
  const auto scalar = oversample(v, {});
  kernels::set_isa_override(std::nullopt);
  const auto fast = oversample(v, {});
  CHECK(scalar.instances == fast.instances);
}
