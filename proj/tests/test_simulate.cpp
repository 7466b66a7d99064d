// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>

#include "fairassign/simulate.hpp"
#include "test_util.hpp"

using namespace fairassign;
using Catch::Approx;

TEST_CASE("generate_round draws from the stated distributions") {
  SyntheticConfig config;
  config.cases_per_round = 100000;
  Rng rng = make_rng(1, 50);
  const auto cases = generate_round(config, rng);

  double sum0 = 0.0;
  int n0 = 0, n1 = 0;
  for (const auto& dc : cases) {
    if (dc.z == 0) {
      sum0 += dc.p;
      ++n0;
    } else {
      ++n1;
    }
    REQUIRE(dc.y_true.has_value());
  }
  // Mean of Beta(3, 5) is 3/8.
  const double sd0 = std::sqrt(15.0 / (64.0 * 9.0));
  CHECK(sum0 / n0 == Approx(3.0 / 8.0).margin(3 * sd0 / std::sqrt(n0)));
  // z ~ Bernoulli(0.5).
  const double frac1 = static_cast<double>(n1) / cases.size();
  CHECK(frac1 == Approx(0.5).margin(3 * 0.5 / std::sqrt(cases.size())));

  SyntheticConfig empty;
  empty.cases_per_round = 0;
  Rng rng2 = make_rng(1, 51);
  CHECK(generate_round(empty, rng2).empty());
}

TEST_CASE("generate_experts draws the stated threshold distributions") {
  SyntheticConfig config;
  config.num_experts = 100000;
  Rng rng = make_rng(2, 52);
  const auto experts = generate_experts(config, rng);

  double sum1 = 0.0, sumsq1 = 0.0;
  int mid0 = 0, low0 = 0;
  for (const auto& e : experts) {
    sum1 += e.theta[1];
    sumsq1 += e.theta[1] * e.theta[1];
    if (e.theta[0] >= 0.4 && e.theta[0] <= 0.6) ++mid0;
    if (e.theta[0] <= 0.2) ++low0;
  }
  const double n = static_cast<double>(experts.size());
  const double mean1 = sum1 / n;
  const double sd_beta55 = std::sqrt(25.0 / (100.0 * 11.0));
  CHECK(mean1 == Approx(0.5).margin(3 * sd_beta55 / std::sqrt(n)));
  CHECK(std::sqrt(sumsq1 / n - mean1 * mean1) == Approx(sd_beta55).margin(0.005));
  // Beta(0.5, 0.5) is U-shaped: tails outweigh the middle.
  CHECK(low0 > mid0);

  // n = 3m default.
  SyntheticConfig def;
  CHECK(def.num_experts == 3 * def.cases_per_round);
}

TEST_CASE("random policy assigns experts uniformly") {
  const int m = 2, n = 6, trials = 10000;
  Rng gen_rng = make_rng(3, 53);
  const auto experts = testutil::random_experts(gen_rng, n);
  const auto cases = testutil::random_cases(gen_rng, m);
  Rng rng = make_rng(3, 54);
  std::vector<int> hits(n, 0);
  const Policy random{PolicyKind::kRandom, std::nullopt};
  for (int t = 0; t < trials; ++t) {
    const auto rr = run_round(random, cases, experts, nullptr, CostParam{0.5},
                              nullptr, BenefitConvention::kIdentity, rng);
    for (const int j : rr.assignment) ++hits[static_cast<std::size_t>(j)];
  }
  const double expect = static_cast<double>(trials) * m / n;
  const double se = std::sqrt(trials * (static_cast<double>(m) / n) *
                              (1.0 - static_cast<double>(m) / n));
  for (int j = 0; j < n; ++j) {
    CHECK(std::abs(hits[static_cast<std::size_t>(j)] - expect) <= 3 * se);
  }
}

TEST_CASE("known policy with a single expert applies that expert's rule") {
  const std::vector<Expert> experts = {Expert{0, {0.4, 0.4}}};
  const std::vector<DecisionCase> cases = {DecisionCase{0, 0, 0.7, 1}};
  Rng rng = make_rng(4, 55);
  const Policy known{PolicyKind::kKnown, std::nullopt};
  const auto rr = run_round(known, cases, experts, nullptr, CostParam{0.5},
                            nullptr, BenefitConvention::kIdentity, rng);
  CHECK(rr.assignment == std::vector<int>{0});
  CHECK(rr.decisions == std::vector<int>{1});
  CHECK(rr.utility_sum == Approx(0.2));
}

TEST_CASE("posterior policy with collapsed beliefs matches known assignments") {
  Rng gen_rng = make_rng(5, 56);
  const auto experts = testutil::random_experts(gen_rng, 9);
  BeliefSet beliefs(experts, 1.0, 1.0);
  for (const auto& e : experts) {
    for (int z = 0; z <= 1; ++z) {
      const double theta = e.theta[static_cast<std::size_t>(z)];
      // Shrink the interval to a hair below the true threshold.
      if (theta > 1e-9) beliefs.observe(e.id, z, theta - 1e-9, 0);
      beliefs.observe(e.id, z, theta, 1);
    }
  }
  Rng rng = make_rng(5, 57);
  const Policy posterior{PolicyKind::kUnknownPosterior, std::nullopt};
  const Policy known{PolicyKind::kKnown, std::nullopt};
  for (int t = 0; t < 25; ++t) {
    const auto cases = testutil::random_cases(gen_rng, 5);
    BeliefSet working = beliefs;
    const auto rr_post =
        run_round(posterior, cases, experts, &working, CostParam{0.5}, nullptr,
                  BenefitConvention::kIdentity, rng);
    Rng dummy = make_rng(0, 0);
    const auto rr_known = run_round(known, cases, experts, nullptr,
                                    CostParam{0.5}, nullptr,
                                    BenefitConvention::kIdentity, dummy);
    CHECK(rr_post.assignment == rr_known.assignment);
  }
}

TEST_CASE("unknown policies require beliefs") {
  Rng gen_rng = make_rng(6, 58);
  const auto experts = testutil::random_experts(gen_rng, 4);
  const auto cases = testutil::random_cases(gen_rng, 2);
  Rng rng = make_rng(6, 59);
  const Policy posterior{PolicyKind::kUnknownPosterior, std::nullopt};
  CHECK_THROWS_AS(run_round(posterior, cases, experts, nullptr, CostParam{0.5},
                            nullptr, BenefitConvention::kIdentity, rng),
                  std::invalid_argument);
}

TEST_CASE("round metrics agree with recomputation from stored decisions") {
  SyntheticConfig config;
  config.cases_per_round = 8;
  config.num_experts = 16;
  config.rounds = 30;
  config.seed = 9;
  const auto sim = run_simulation(
      config, {Policy{PolicyKind::kKnown, std::nullopt},
               Policy{PolicyKind::kRandom, std::nullopt}});
  // Regenerate the shared rounds to recompute metrics independently.
  Rng case_rng = make_rng(config.seed, kCaseStream);
  std::vector<std::vector<DecisionCase>> rounds;
  for (int t = 0; t < config.rounds; ++t) {
    rounds.push_back(generate_round(config, case_rng));
  }
  for (const auto& pr : sim.runs) {
    for (int t = 0; t < config.rounds; ++t) {
      const auto& rr = pr.result.rounds[static_cast<std::size_t>(t)];
      double u = 0.0;
      std::array<int, 2> ben{0, 0};
      for (int i = 0; i < config.cases_per_round; ++i) {
        const auto& dc = rounds[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)];
        u += rr.decisions[static_cast<std::size_t>(i)] * (dc.p - config.cost);
        ben[static_cast<std::size_t>(dc.z)] += rr.decisions[static_cast<std::size_t>(i)];
      }
      CHECK(rr.utility_sum == Approx(u).margin(1e-12));
      CHECK(rr.benefit == ben);
      CHECK(rr.di ==
            Approx(std::abs(ben[1] - ben[0]) /
                   static_cast<double>(config.cases_per_round)));
    }
  }
}

TEST_CASE("run_simulation: empty horizon and paired draws") {
  SyntheticConfig config;
  config.rounds = 0;
  config.cases_per_round = 4;
  config.num_experts = 12;
  const auto sim =
      run_simulation(config, {Policy{PolicyKind::kKnown, std::nullopt}});
  CHECK(sim.runs.size() == 1);
  CHECK(sim.runs[0].result.rounds.empty());

  SyntheticConfig shared;
  shared.cases_per_round = 5;
  shared.num_experts = 15;
  shared.rounds = 40;
  shared.seed = 77;
  const auto a = run_simulation(shared, {Policy{PolicyKind::kKnown, std::nullopt}});
  const auto b = run_simulation(
      shared, {Policy{PolicyKind::kRandom, std::nullopt},
               Policy{PolicyKind::kKnown, std::nullopt},
               Policy{PolicyKind::kUnknownPosterior, std::nullopt}});
  // All policies see the same draw stream, and the Known series is unchanged
  // by who else runs.
  CHECK(a.draw_hash == b.draw_hash);
  CHECK(a.runs[0].result.utility_cum == b.runs[1].result.utility_cum);
}

TEST_CASE("regret series is non-negative and non-decreasing") {
  SyntheticConfig config;
  config.cases_per_round = 6;
  config.num_experts = 18;
  config.rounds = 200;
  config.seed = 13;
  const auto sim = run_simulation(
      config, {Policy{PolicyKind::kUnknownPosterior, std::nullopt}});
  const auto& regret = sim.runs[0].result.regret_cum;
  REQUIRE(regret.size() == 200);
  double prev = 0.0;
  for (const double r : regret) {
    CHECK(r >= 0.0);
    CHECK(r >= prev - 1e-12);
    prev = r;
  }
}

TEST_CASE("known beats random on synthetic runs") {
  double known_mean = 0.0, random_mean = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SyntheticConfig config;
    config.cases_per_round = 6;
    config.num_experts = 18;
    config.rounds = 300;
    config.seed = seed;
    const auto sim = run_simulation(
        config, {Policy{PolicyKind::kKnown, std::nullopt},
                 Policy{PolicyKind::kRandom, std::nullopt}});
    known_mean += sim.runs[0].result.empirical_utility;
    random_mean += sim.runs[1].result.empirical_utility;
  }
  CHECK(known_mean > random_mean);
}

TEST_CASE("adversarial positive instance: known utility equals p each round") {
  const auto inst = adversarial_instance(0.5, AdversarialVariant::kPositive);
  const std::uint64_t seed = 21;
  const int T = 100;
  const auto sim = run_adversarial(
      inst, {Policy{PolicyKind::kKnown, std::nullopt}}, T, seed);
  // Replay the case stream: per round one U(p_lo, p_hi) then one Bernoulli.
  Rng replay = make_rng(seed, kCaseStream);
  for (int t = 0; t < T; ++t) {
    const double p =
        std::uniform_real_distribution<double>(inst.p_lo, inst.p_hi)(replay);
    (void)std::bernoulli_distribution(p)(replay);
    CHECK(sim.runs[0].result.rounds[static_cast<std::size_t>(t)].utility_sum ==
          Approx(p).margin(1e-12));
  }
}

TEST_CASE("adversarial positive instance: point estimates earn linear regret") {
  const auto inst = adversarial_instance(0.5, AdversarialVariant::kPositive);
  const int T = 800;
  const auto sim = run_adversarial(
      inst,
      {Policy{PolicyKind::kUnknownPointEstimate, std::nullopt},
       Policy{PolicyKind::kUnknownPosterior, std::nullopt}},
      T, 5);
  const double point_regret = sim.runs[0].result.regret_cum.back();
  const double posterior_regret = sim.runs[1].result.regret_cum.back();
  const double expected = T * inst.theta_tilde / 8.0;  // 50
  CHECK(point_regret == Approx(expected).epsilon(0.3));
  CHECK(posterior_regret < 0.5 * point_regret);
}

TEST_CASE("adversarial zero instance: optimal cumulative utility is zero") {
  const auto inst = adversarial_instance(0.0, AdversarialVariant::kZero);
  const auto sim = run_adversarial(
      inst, {Policy{PolicyKind::kKnown, std::nullopt}}, 500, 3);
  CHECK(sim.runs[0].result.utility_cum.back() == 0.0);
}

TEST_CASE("adversarial instance validation") {
  CHECK_THROWS_AS(adversarial_instance(0.0, AdversarialVariant::kPositive),
                  std::invalid_argument);
  CHECK_THROWS_AS(adversarial_instance(1.0, AdversarialVariant::kZero),
                  std::invalid_argument);
  CHECK_THROWS_AS(adversarial_instance(-0.1, AdversarialVariant::kPositive),
                  std::invalid_argument);
  // The unknown expert's prior MAP starts exactly at theta_tilde.
  const auto inst = adversarial_instance(0.5, AdversarialVariant::kPositive);
  CHECK(inst.priors.at(1, 0).map_estimate() == Approx(0.5));
  const auto zero = adversarial_instance(0.0, AdversarialVariant::kZero);
  CHECK(zero.priors.at(1, 0).map_estimate() == 0.0);
}

TEST_CASE("constrained rounds fall back when infeasible and record it") {
  // One case, experts that always decide 1 on it, and a band demanding zero
  // benefit: infeasible, served by the unconstrained matching instead.
  const std::vector<DecisionCase> cases = {DecisionCase{0, 0, 0.8, 1}};
  const std::vector<Expert> experts = {Expert{0, {0.0, 0.0}},
                                       Expert{1, {0.0, 0.0}}};
  std::vector<std::vector<DecisionCase>> rounds = {cases};
  RunSpec spec;
  spec.cost = CostParam{0.5};
  const FairnessSpec fairness{0.0, FairThresholds{1.0, 1.0}};
  // theta* = 1 still decides 1 at p = 1 only; here p = 0.8 -> target 0.
  const auto sim = run_policies(
      rounds, experts, {Policy{PolicyKind::kKnown, fairness}}, spec);
  const auto& rr = sim.runs[0].result.rounds[0];
  CHECK_FALSE(rr.feasible);
  CHECK(rr.fallback);
  CHECK(rr.decisions == std::vector<int>{1});
  CHECK(sim.runs[0].result.infeasible_rounds == 1);
}
