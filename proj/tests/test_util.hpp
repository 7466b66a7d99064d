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

#ifndef FAIRASSIGN_TESTS_TEST_UTIL_HPP_
#define FAIRASSIGN_TESTS_TEST_UTIL_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "fairassign/belief.hpp"
#include "fairassign/domain.hpp"
#include "fairassign/matching.hpp"
#include "fairassign/rng.hpp"

namespace testutil {

// Continued-fraction evaluation for the regularized incomplete beta function.
// Test-side oracle, independent of the library's sampling path.
inline double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-14;
  constexpr double kFpMin = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

inline double reg_inc_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double bt = std::exp(std::lgamma(a + b) - std::lgamma(a) -
                             std::lgamma(b) + a * std::log(x) +
                             b * std::log1p(-x));
  if (x < (a + 1.0) / (a + b + 2.0)) return bt * betacf(a, b, x) / a;
  return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

// CDF of the truncated posterior: the normalized variable follows
// Beta(beta, alpha).
inline double posterior_cdf(const fairassign::ThresholdBelief& belief,
                            double theta) {
  const double s = (theta - belief.lo) / (belief.hi - belief.lo);
  return reg_inc_beta(belief.beta, belief.alpha, s);
}

// Quadrature of the posterior density over [lo, hi]. The substitution
// theta = lo + (hi - lo) (1 - cos u) / 2 regularizes the integrable endpoint
// singularities that appear for shapes below 1.
inline double integrate_density(const fairassign::ThresholdBelief& belief,
                                int nodes = 100001) {
  const double w = belief.hi - belief.lo;
  // Offset so boundary distances w*sin^2(eps/2) stay well above one ulp: the
  // integrand is then evaluated accurately everywhere, and the truncated
  // sliver mass is O(sqrt(2.5e-15)) ~ 1e-7 even for shapes of 0.5.
  const double eps = 1e-7;
  const double u0 = eps, u1 = std::acos(-1.0) - eps;
  const double h = (u1 - u0) / (nodes - 1);
  const auto g = [&](double u) {
    // sin^2(u/2) = (1 - cos u) / 2 without cancellation near the endpoints;
    // nodes that round onto a boundary move one ulp inside, where the density
    // is finite.
    const double s = std::sin(u / 2.0);
    double theta = belief.lo + w * s * s;
    if (theta >= belief.hi) theta = std::nextafter(belief.hi, belief.lo);
    if (theta <= belief.lo) theta = std::nextafter(belief.lo, belief.hi);
    return belief.density(theta) * w * std::sin(u) / 2.0;
  };
  double sum = g(u0) + g(u1);
  for (int k = 1; k < nodes - 1; ++k) {
    sum += g(u0 + k * h) * (k % 2 == 1 ? 4.0 : 2.0);
  }
  return sum * h / 3.0;
}

// Two-sided Kolmogorov-Smirnov statistic.
inline double ks_statistic(std::vector<double> samples,
                           const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
  }
  return d;
}

// KS critical value, asymptotic form, significance 0.01.
inline double ks_critical_001(std::size_t n) {
  return 1.62762 / std::sqrt(static_cast<double>(n));
}

// Cases and experts from the synthetic generator's distributions.
inline std::vector<fairassign::DecisionCase> random_cases(fairassign::Rng& rng,
                                                          int m) {
  std::vector<fairassign::DecisionCase> cases;
  for (int i = 0; i < m; ++i) {
    fairassign::DecisionCase dc;
    dc.id = i;
    dc.z = std::bernoulli_distribution(0.5)(rng) ? 1 : 0;
    dc.p = dc.z == 0 ? fairassign::beta_draw(rng, 3.0, 5.0)
                     : fairassign::beta_draw(rng, 4.0, 3.0);
    dc.y_true = std::bernoulli_distribution(dc.p)(rng) ? 1 : 0;
    cases.push_back(dc);
  }
  return cases;
}

inline std::vector<fairassign::Expert> random_experts(fairassign::Rng& rng,
                                                      int n) {
  std::vector<fairassign::Expert> experts;
  for (int j = 0; j < n; ++j) {
    fairassign::Expert e;
    e.id = j;
    e.theta[0] = fairassign::beta_draw(rng, 0.5, 0.5);
    e.theta[1] = fairassign::beta_draw(rng, 5.0, 5.0);
    experts.push_back(e);
  }
  return experts;
}

inline fairassign::AssignmentGraph random_graph(fairassign::Rng& rng, int n,
                                                int m, double c = 0.5) {
  return fairassign::build_graph(random_cases(rng, m), random_experts(rng, n),
                                 fairassign::CostParam{c});
}

}  // namespace testutil

#endif  // FAIRASSIGN_TESTS_TEST_UTIL_HPP_
