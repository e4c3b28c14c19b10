#include <doctest.h>

#include <cmath>
#include <random>

#include "support/oracles.hpp"
#include "tacdss/error.hpp"
#include "tacdss/fuzzy.hpp"

using namespace tacdss;

namespace {

LinguisticVariable var3(std::vector<double> centers = {0.0, 0.5, 1.0}) {
  return LinguisticVariable("v", 0.0, 1.0, std::move(centers), {"low", "mid", "high"});
}

// One input with the given centers, output [0, 0.5, 1], every MF of the
// input mapped to the given consequents.
FuzzySystem one_input_system(std::vector<std::size_t> consequents, InferenceConfig cfg,
                             std::vector<double> weights = {}) {
  std::vector<FuzzyRule> rules;
  for (std::size_t i = 0; i < consequents.size(); ++i) {
    rules.push_back({{i}, consequents[i], weights.empty() ? 1.0 : weights[i]});
  }
  return FuzzySystem({var3()}, var3(), std::move(rules), cfg);
}

}  // namespace

TEST_CASE("membership of a three-MF partition") {
  const auto v = var3();
  CHECK(membership(v, 1, 0.5) == 1.0);
  CHECK(membership(v, 1, 0.25) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(membership(v, 0, 0.25) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(membership(v, 0, 0.0) == 1.0);
  CHECK(membership(v, 2, 1.0) == 1.0);
  CHECK(membership(v, 2, 0.25) == 0.0);
}

TEST_CASE("shoulders saturate toward the domain edge") {
  const LinguisticVariable v("v", 0.0, 10.0, {2.0, 5.0, 8.0});
  CHECK(membership(v, 0, 0.0) == 1.0);
  CHECK(membership(v, 0, 1.9) == 1.0);
  CHECK(membership(v, 2, 9.5) == 1.0);
  CHECK(membership(v, 1, 1.0) == 0.0);
}

TEST_CASE("membership errors") {
  const auto v = var3();
  CHECK_THROWS_AS(membership(v, 3, 0.5), IndexError);
  CHECK_THROWS_AS(membership(v, 0, -0.01), DomainError);
  CHECK_THROWS_AS(membership(v, 0, 1.01), DomainError);
}

TEST_CASE("linguistic variable invariants") {
  CHECK_THROWS_AS(LinguisticVariable("v", 0, 1, {0.5}), ValidationError);
  CHECK_THROWS_AS(LinguisticVariable("v", 0, 1, {0.5, 0.5}), ValidationError);
  CHECK_THROWS_AS(LinguisticVariable("v", 0, 1, {0.6, 0.4}), ValidationError);
  CHECK_THROWS_AS(LinguisticVariable("v", 0, 1, {0.0, 1.5}), ValidationError);
  CHECK_THROWS_AS(LinguisticVariable("v", 0, 1, {0.0, 1.0}, {"a"}), ValidationError);
  CHECK_THROWS_AS(LinguisticVariable("v", 1, 0, {0.0, 1.0}), ValidationError);
  const LinguisticVariable unlabeled("v", 0, 1, {0.0, 1.0});
  CHECK(unlabeled.labels() == std::vector<std::string>{"mf0", "mf1"});
}

TEST_CASE("fuzzify") {
  const FuzzySystem s = one_input_system({0, 1, 2}, InferenceConfig::trainable());
  const double a[] = {0.5};
  CHECK(fuzzify(s, a)[0] == std::vector<double>{0.0, 1.0, 0.0});
  const double b[] = {0.75};
  const auto mb = fuzzify(s, b)[0];
  CHECK(mb[0] == 0.0);
  CHECK(mb[1] == doctest::Approx(0.5));
  CHECK(mb[2] == doctest::Approx(0.5));

  // (1 - 0.7) / (1 - 0.4) = 0.5 on the falling edge of MF 1
  const FuzzySystem skew({var3({0.0, 0.4, 1.0})}, var3(), {{{0}, 0, 1.0}});
  const double c[] = {0.7};
  const auto mc = fuzzify(skew, c)[0];
  CHECK(mc[0] == 0.0);
  CHECK(mc[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(mc[2] == doctest::Approx(0.5).epsilon(1e-12));

  const double two[] = {0.1, 0.2};
  CHECK_THROWS_AS(fuzzify(s, two), DataError);
  const double out[] = {1.5};
  CHECK_THROWS_AS(fuzzify(s, out), DomainError);
}

TEST_CASE("fire_rule") {
  const Memberships mu{{0.8, 0.2}, {0.3, 0.2}};
  FuzzyRule rule{{0, 1}, 0, 1.0};
  InferenceConfig cfg = InferenceConfig::trainable();
  cfg.weight_mode = WeightMode::ignore;
  CHECK(fire_rule(rule, mu, cfg) == doctest::Approx(0.16).epsilon(1e-15));
  cfg.tnorm = TNorm::min;
  CHECK(fire_rule(rule, mu, cfg) == 0.2);
  cfg.tnorm = TNorm::product;
  cfg.weight_mode = WeightMode::scale_firing;
  rule.weight = 0.5;
  CHECK(fire_rule(rule, mu, cfg) == doctest::Approx(0.08).epsilon(1e-15));

  const FuzzyRule bad{{0, 5}, 0, 1.0};
  CHECK_THROWS_AS(fire_rule(bad, mu, cfg), IndexError);
}

TEST_CASE("infer: single rule into a symmetric interior consequent") {
  // x = 0.5 fires only the middle MF, mapped to the middle output MF.
  const FuzzySystem s = one_input_system({0, 1, 2}, InferenceConfig::classic());
  const double x[] = {0.5};
  const auto r = infer(s, x);
  CHECK(r.crisp == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_FALSE(r.trace.fallback);
  CHECK(r.trace.aggregate_curve.size() == 201);
}

TEST_CASE("infer: center-average is the firing-weighted mean of consequent centers") {
  // Output centers 0.2 and 0.6; x = 0.375 gives input degrees (0.25, 0.75).
  const LinguisticVariable in("in", 0.0, 1.0, {0.25, 0.5});
  const LinguisticVariable out("out", 0.0, 1.0, {0.2, 0.6});
  const FuzzySystem s({in}, out, {{{0}, 0, 1.0}, {{1}, 1, 1.0}},
                      InferenceConfig::trainable());
  const double x[] = {0.4375};
  const auto r = infer(s, x);
  REQUIRE(r.trace.firings[0] == doctest::Approx(0.25));
  REQUIRE(r.trace.firings[1] == doctest::Approx(0.75));
  CHECK(r.crisp == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.trace.center_terms.size() == 2);
}

TEST_CASE("infer: two-rule centroid matches the dense trapezoidal oracle") {
  InferenceConfig cfg = InferenceConfig::classic();
  cfg.centroid_resolution = 1001;
  const FuzzySystem s = one_input_system({0, 2, 1}, cfg);
  for (double xv : {0.1, 0.3, 0.62, 0.9}) {
    const double x[] = {xv};
    const auto r = infer(s, x);
    const double oracle = testing::centroid_oracle(s, r.trace.firings);
    CHECK(std::abs(r.crisp - oracle) <= 1e-3);
  }
}

TEST_CASE("infer: no rule fired falls back to the output midpoint") {
  const FuzzySystem s({var3()}, LinguisticVariable("y", 2.0, 4.0, {2.0, 3.0, 4.0}),
                      {{{0}, 2, 1.0}}, InferenceConfig::trainable());
  const double x[] = {0.9};
  const auto r = infer(s, x);
  CHECK(r.trace.fallback);
  CHECK(r.crisp == 3.0);
  CHECK(r.trace.firings == std::vector<double>{0.0});
}

TEST_CASE("rmse") {
  const FuzzySystem s = one_input_system({0, 1, 2}, InferenceConfig::trainable());
  // Identity-like map at the centers.
  std::vector<TrainingSample> exact{{{0.0}, 0.0}, {{0.5}, 0.5}, {{1.0}, 1.0}};
  CHECK(rmse(s, exact) == 0.0);
  std::vector<TrainingSample> one{{{0.0}, 1.0}};
  CHECK(rmse(s, one) == 1.0);
  std::vector<TrainingSample> two{{{0.0}, 0.3}, {{1.0}, 0.6}};
  CHECK(rmse(s, two) == doctest::Approx(std::sqrt((0.09 + 0.16) / 2)).epsilon(1e-12));
  CHECK_THROWS_AS(rmse(s, std::vector<TrainingSample>{}), DataError);
}

TEST_CASE("system invariants") {
  const auto v = var3();
  CHECK_THROWS_AS(FuzzySystem({v}, v, {}), ValidationError);
  CHECK_THROWS_AS(FuzzySystem({v}, v, {{{0}, 0, 1.0}, {{0}, 1, 0.5}}), ValidationError);
  CHECK_THROWS_AS(FuzzySystem({v}, v, {{{3}, 0, 1.0}}), ValidationError);
  CHECK_THROWS_AS(FuzzySystem({v}, v, {{{0}, 3, 1.0}}), ValidationError);
  CHECK_THROWS_AS(FuzzySystem({v}, v, {{{0}, 0, 0.0}}), ValidationError);
  CHECK_THROWS_AS(FuzzySystem({v}, v, {{{0}, 0, 1.5}}), ValidationError);
  CHECK_THROWS_AS(FuzzySystem({v}, v, {{{0, 1}, 0, 1.0}}), ValidationError);
  InferenceConfig low = InferenceConfig::classic();
  low.centroid_resolution = 10;
  CHECK_THROWS_AS(FuzzySystem({v}, v, {{{0}, 0, 1.0}}, low), ConfigError);
}

TEST_CASE("property: partition of unity against the ramp oracle") {
  testing::Rng rng(11);
  std::uniform_int_distribution<std::size_t> count(2, 7);
  std::uniform_real_distribution<double> lo_dist(-5.0, 5.0);
  std::uniform_real_distribution<double> width_dist(0.1, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double lo = lo_dist(rng);
    const double hi = lo + width_dist(rng);
    const LinguisticVariable v("v", lo, hi, testing::random_centers(rng, count(rng), lo, hi));
    std::uniform_real_distribution<double> xs(lo, hi);
    for (int k = 0; k < 100; ++k) {
      const double x = k == 0 ? lo : (k == 1 ? hi : xs(rng));
      double sum = 0.0;
      for (std::size_t m = 0; m < v.size(); ++m) {
        const double mu = membership(v, m, x);
        CHECK(mu >= 0.0);
        CHECK(mu <= 1.0);
        CHECK(mu == doctest::Approx(testing::ramp_degree(v.centers(), m, x)).epsilon(1e-12));
        sum += mu;
      }
      CHECK(std::abs(sum - 1.0) <= 1e-9);
    }
  }
}

TEST_CASE("property: boundedness, trace consistency and monotone firing") {
  testing::Rng rng(12);
  const std::size_t mfs[] = {3, 4};
  std::vector<InferenceConfig> configs{InferenceConfig::classic(), InferenceConfig::trainable()};
  InferenceConfig mixed = InferenceConfig::classic();
  mixed.aggregation = Aggregation::weighted_sum;
  mixed.implication = Implication::product;
  mixed.weight_mode = WeightMode::ignore;
  configs.push_back(mixed);
  for (const auto& cfg : configs) {
    for (int trial = 0; trial < 30; ++trial) {
      const FuzzySystem s = testing::random_system(rng, mfs, 4, 8, cfg);
      for (const auto& sample : testing::random_samples(rng, 2, 10)) {
        const auto r = infer(s, sample.inputs);
        CHECK(r.crisp >= s.output().domain_min());
        CHECK(r.crisp <= s.output().domain_max());
        REQUIRE(r.trace.firings.size() == s.rules().size());
        for (double f : r.trace.firings) {
          CHECK(f >= 0.0);
          CHECK(f <= 1.0);
        }
        CHECK(defuzzify(s, r.trace.firings).crisp == r.crisp);
        const auto oracle = testing::firings_oracle(s, sample.inputs);
        for (std::size_t i = 0; i < oracle.size(); ++i) {
          CHECK(r.trace.firings[i] == doctest::Approx(oracle[i]).epsilon(1e-12));
        }
      }
    }
  }

  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (TNorm t : {TNorm::min, TNorm::product}) {
    InferenceConfig cfg = InferenceConfig::trainable();
    cfg.tnorm = t;
    const FuzzyRule rule{{0, 0, 0}, 0, 0.7};
    for (int trial = 0; trial < 500; ++trial) {
      Memberships mu{{u(rng)}, {u(rng)}, {u(rng)}};
      const double before = fire_rule(rule, mu, cfg);
      const std::size_t j = static_cast<std::size_t>(trial % 3);
      mu[j][0] = mu[j][0] + (1.0 - mu[j][0]) * u(rng);
      CHECK(fire_rule(rule, mu, cfg) >= before);
    }
  }
}

TEST_CASE("property: centroid and center-average agree on one symmetric rule") {
  testing::Rng rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int resolution : {51, 201, 1001}) {
    for (int trial = 0; trial < 50; ++trial) {
      // Output MF 1 is symmetric: neighbours equidistant from its center.
      const double c = 0.3 + 0.4 * u(rng);
      const double half = 0.05 + 0.2 * u(rng);
      const LinguisticVariable out("y", 0.0, 1.0, {c - half, c, c + half});
      InferenceConfig cfg = InferenceConfig::classic();
      cfg.centroid_resolution = resolution;
      const FuzzySystem centroid({var3()}, out, {{{1}, 1, 1.0}}, cfg);
      const FuzzySystem average = centroid.with_config(InferenceConfig::trainable());
      const double x[] = {0.25 + 0.5 * u(rng)};
      const double a = infer(centroid, x).crisp;
      const double b = infer(average, x).crisp;
      CHECK(std::abs(a - b) <= 2.0 / resolution);
    }
  }
}
