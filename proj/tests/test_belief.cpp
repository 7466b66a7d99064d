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

#include "fairassign/belief.hpp"
#include "test_util.hpp"

using namespace fairassign;
using Catch::Approx;

TEST_CASE("bound updates follow the decision direction") {
  ThresholdBelief b;
  b.observe(0.6, 1);
  CHECK(b.lo == 0.0);
  CHECK(b.hi == 0.6);
  b.observe(0.3, 0);
  CHECK(b.lo == 0.3);
  CHECK(b.hi == 0.6);
  // A decide-1 above the current cap changes nothing.
  b.observe(0.8, 1);
  CHECK(b.lo == 0.3);
  CHECK(b.hi == 0.6);

  ThresholdBelief bad;
  bad.observe(0.4, 1);
  CHECK_THROWS_AS(bad.observe(0.4, 0), std::logic_error);
  CHECK_THROWS_AS(bad.observe(1.5, 1), std::invalid_argument);
}

TEST_CASE("bounds are monotone and bracket the true threshold") {
  Rng rng = make_rng(101, 30);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    const double theta = unif(rng);
    ThresholdBelief b;
    for (int t = 0; t < 200; ++t) {
      const double p = unif(rng);
      const double prev_lo = b.lo, prev_hi = b.hi;
      b.observe(p, apply_threshold_rule(p, theta));
      CHECK(b.lo >= prev_lo);
      CHECK(b.hi <= prev_hi);
      CHECK(b.lo < theta);
      CHECK(theta <= b.hi + 1e-15);
    }
  }
}

TEST_CASE("posterior density: flat case and fixed value") {
  ThresholdBelief flat{1.0, 1.0, 0.25, 0.75};
  CHECK(flat.density(0.5) == Approx(2.0));
  CHECK(flat.density(0.1) == 0.0);
  CHECK(flat.density(0.9) == 0.0);

  ThresholdBelief sym{2.0, 2.0, 0.0, 1.0};
  CHECK(sym.density(0.5) == Approx(1.5));
}

TEST_CASE("posterior density integrates to one") {
  for (const double a : {0.5, 1.0, 2.0, 5.0}) {
    for (const double b : {0.5, 1.0, 2.0, 5.0}) {
      ThresholdBelief belief{a, b, 0.2, 0.7};
      INFO("alpha=" << a << " beta=" << b);
      CHECK(testutil::integrate_density(belief) == Approx(1.0).margin(1e-6));
    }
  }
}

TEST_CASE("sampling: uniform case mean and interval collapse") {
  Rng rng = make_rng(7, 31);
  ThresholdBelief flat{1.0, 1.0, 0.2, 0.8};
  double sum = 0.0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) sum += flat.sample(rng);
  const double se = std::sqrt(0.36 / 12.0 / draws);  // sd of U(0.2, 0.8)
  CHECK(sum / draws == Approx(0.5).margin(3 * se));

  ThresholdBelief collapsed{1.0, 1.0, 0.3, 0.3 + 1e-12};
  const double v = collapsed.sample(rng);
  CHECK(v == Approx(0.3).margin(1e-11));
}

TEST_CASE("sampling: asymmetric shapes pin the shape swap") {
  // alpha=1, beta=3 on [0,1]: density rises as theta^2, mean 3/4.
  Rng rng = make_rng(8, 32);
  ThresholdBelief b{1.0, 3.0, 0.0, 1.0};
  double sum = 0.0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) sum += b.sample(rng);
  const double sd = std::sqrt(3.0 / (16.0 * 5.0));  // Beta(3,1) sd
  CHECK(sum / draws == Approx(0.75).margin(3 * sd / std::sqrt(draws)));
}

TEST_CASE("sampling matches the analytic CDF (KS at 0.01)") {
  struct Setting {
    double a, b, lo, hi;
  };
  const Setting settings[] = {
      {1.0, 3.0, 0.0, 1.0}, {3.0, 1.0, 0.3, 0.9}, {2.0, 5.0, 0.1, 0.6}};
  int stream = 40;
  for (const auto& s : settings) {
    Rng rng = make_rng(2026, static_cast<std::uint64_t>(stream++));
    ThresholdBelief belief{s.a, s.b, s.lo, s.hi};
    std::vector<double> samples(10000);
    for (auto& v : samples) v = belief.sample(rng);
    const double d = testutil::ks_statistic(
        samples, [&](double x) { return testutil::posterior_cdf(belief, x); });
    INFO("a=" << s.a << " b=" << s.b);
    CHECK(d <= testutil::ks_critical_001(samples.size()));
  }
}

TEST_CASE("MAP estimates") {
  CHECK(ThresholdBelief{2.0, 2.0, 0.2, 0.8}.map_estimate() == Approx(0.5));
  CHECK(ThresholdBelief{1.0, 1.0, 0.2, 0.8}.map_estimate() == Approx(0.5));
  // Density (theta - lo)^4 increases to the upper boundary.
  CHECK(ThresholdBelief{1.0, 5.0, 0.0, 1.0}.map_estimate() == 1.0);
  CHECK(ThresholdBelief{5.0, 1.0, 0.0, 1.0}.map_estimate() == 0.0);
  // Asymmetric interior mode: shapes (a, b) = (beta, alpha) on [lo, hi].
  CHECK(ThresholdBelief{2.0, 4.0, 0.0, 1.0}.map_estimate() == Approx(0.75));

  ThresholdBelief degenerate{1.0, 1.0, 0.5, 0.5};
  CHECK_THROWS_AS(degenerate.map_estimate(), std::logic_error);
  Rng rng = make_rng(1, 1);
  CHECK_THROWS_AS(degenerate.sample(rng), std::logic_error);
  CHECK_THROWS_AS(degenerate.density(0.5), std::logic_error);
}

TEST_CASE("belief set bookkeeping") {
  const std::vector<Expert> experts = {Expert{3, {0.4, 0.6}},
                                       Expert{9, {0.2, 0.8}}};
  BeliefSet set(experts, 1.0, 1.0);
  CHECK(set.size() == 4);
  CHECK(set.at(3, 0).hi == 1.0);
  CHECK_THROWS_AS(set.at(4, 0), std::out_of_range);
  set.set_prior(9, 1, 2.0, 5.0);
  CHECK(set.at(9, 1).alpha == 2.0);
  set.observe(3, 0, 0.7, 1);
  CHECK(set.at(3, 0).hi == Approx(0.7));
  REQUIRE(set.log().size() == 1);
  CHECK(set.log()[0].expert_id == 3);
  CHECK(set.log()[0].decision == 1);
  CHECK_THROWS_AS(set.observe(4, 0, 0.5, 1), std::out_of_range);
}
