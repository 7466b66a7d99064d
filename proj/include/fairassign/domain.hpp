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

#ifndef FAIRASSIGN_DOMAIN_HPP_
#define FAIRASSIGN_DOMAIN_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fairassign {

// One individual at one round: group label, predicted positive-class
// probability, and (when available) the realized outcome.
struct DecisionCase {
  int id = 0;
  int z = 0;  // group label in {0, 1}
  double p = 0.0;
  std::optional<int> y_true;
};

// One decision maker with a per-group decision threshold.
struct Expert {
  int id = 0;
  std::array<double, 2> theta{0.5, 0.5};

  double threshold(int z) const { return theta[static_cast<std::size_t>(z)]; }
};

// f(d) = d or f(d) = 1 - d: which decision counts as the beneficial outcome.
enum class BenefitConvention { kIdentity, kComplement };

inline int benefit_of(int decision, BenefitConvention conv) {
  return conv == BenefitConvention::kIdentity ? decision : 1 - decision;
}

// Group-dependent thresholds of the fair optimal rule.
struct FairThresholds {
  double theta0 = 0.5;
  double theta1 = 0.5;

  double of(int z) const { return z == 0 ? theta0 : theta1; }
};

// Cost of a positive decision, in outcome units.
struct CostParam {
  double c = 0.5;

  static CostParam checked(double value) {
    if (!(value > 0.0 && value < 1.0)) {
      throw std::invalid_argument("CostParam: c must lie in (0, 1), got " +
                                  std::to_string(value));
    }
    return CostParam{value};
  }
};

// Threshold decision rule; the boundary p == theta decides 1.
inline int apply_threshold_rule(double p, double threshold) {
  return p >= threshold ? 1 : 0;
}

inline int apply_threshold_rule(double p, int z, const FairThresholds& thr) {
  return apply_threshold_rule(p, thr.of(z));
}

inline int apply_threshold_rule(const DecisionCase& dc, const Expert& expert) {
  return apply_threshold_rule(dc.p, expert.threshold(dc.z));
}

// (1 / (m T)) * sum_i d_i (p_i - c).
inline double empirical_utility(const std::vector<int>& decisions,
                                const std::vector<DecisionCase>& cases,
                                CostParam cost, int rounds, int per_round) {
  const std::size_t expected =
      static_cast<std::size_t>(rounds) * static_cast<std::size_t>(per_round);
  if (decisions.size() != cases.size() || decisions.size() != expected) {
    throw std::invalid_argument("empirical_utility: length mismatch");
  }
  if (expected == 0) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < decisions.size(); ++i) {
    sum += decisions[i] * (cases[i].p - cost.c);
  }
  return sum / static_cast<double>(expected);
}

// (1 / T) * sum_i d_i (y_i - c); every case must carry a realized outcome.
inline double true_utility(const std::vector<int>& decisions,
                           const std::vector<DecisionCase>& cases,
                           CostParam cost, int rounds) {
  if (decisions.size() != cases.size()) {
    throw std::invalid_argument("true_utility: length mismatch");
  }
  if (rounds <= 0) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < decisions.size(); ++i) {
    if (!cases[i].y_true.has_value()) {
      throw std::invalid_argument("true_utility: case without y_true");
    }
    sum += decisions[i] * (*cases[i].y_true - cost.c);
  }
  return sum / static_cast<double>(rounds);
}

// Integer benefit count for one group; the fraction is count / m_z.
inline int group_benefit(const std::vector<int>& decisions,
                         const std::vector<DecisionCase>& cases, int z,
                         BenefitConvention conv) {
  if (decisions.size() != cases.size()) {
    throw std::invalid_argument("group_benefit: length mismatch");
  }
  int count = 0;
  for (std::size_t i = 0; i < decisions.size(); ++i) {
    if (cases[i].z == z) count += benefit_of(decisions[i], conv);
  }
  return count;
}

// DI_t = |b_1 - b_0| / m.
inline double disparate_impact(const std::vector<int>& decisions,
                               const std::vector<DecisionCase>& cases,
                               BenefitConvention conv) {
  if (cases.empty()) {
    throw std::invalid_argument("disparate_impact: empty round");
  }
  const int b0 = group_benefit(decisions, cases, 0, conv);
  const int b1 = group_benefit(decisions, cases, 1, conv);
  return std::abs(b1 - b0) / static_cast<double>(cases.size());
}

struct FairThresholdSearch {
  FairThresholds thresholds;
  double utility = 0.0;  // sample utility of the induced rule, 1/m normalized
  bool feasible = true;  // false when no grid point satisfied the band
};

namespace detail {

// Per-group prefix machinery for the threshold grid search: sorted p values
// plus suffix sums of (p - c), so utility and benefit of "decide 1 iff
// p >= theta" are O(log) per query.
struct GroupProfile {
  std::vector<double> sorted_p;
  std::vector<double> suffix_gain;  // suffix_gain[k] = sum_{j>=k} (p_j - c)

  void build(std::vector<double> ps, double c) {
    std::sort(ps.begin(), ps.end());
    sorted_p = std::move(ps);
    suffix_gain.assign(sorted_p.size() + 1, 0.0);
    for (std::size_t k = sorted_p.size(); k-- > 0;) {
      suffix_gain[k] = suffix_gain[k + 1] + (sorted_p[k] - c);
    }
  }

  // Count and utility of decisions under threshold theta.
  int positives(double theta) const {
    auto it = std::lower_bound(sorted_p.begin(), sorted_p.end(), theta);
    return static_cast<int>(sorted_p.end() - it);
  }
  double gain(double theta) const {
    auto it = std::lower_bound(sorted_p.begin(), sorted_p.end(), theta);
    return suffix_gain[static_cast<std::size_t>(it - sorted_p.begin())];
  }
  int size() const { return static_cast<int>(sorted_p.size()); }
};

}  // namespace detail

// Grid search for the fair optimal rule's thresholds on a reference sample.
// Vacuous constraints (alpha >= 1, or a group missing from the sample) return
// the unconstrained pair (c, c) directly. Ties in utility break toward the
// lexicographically smaller (theta0, theta1).
inline FairThresholdSearch optimal_fair_thresholds(
    const std::vector<DecisionCase>& sample, CostParam cost, double alpha,
    BenefitConvention conv, int grid = 200) {
  if (sample.empty()) {
    throw std::invalid_argument("optimal_fair_thresholds: empty sample");
  }
  if (grid < 1) {
    throw std::invalid_argument("optimal_fair_thresholds: grid must be >= 1");
  }
  if (alpha < 0.0) {
    throw std::invalid_argument("optimal_fair_thresholds: alpha must be >= 0");
  }
  std::vector<double> p0, p1;
  for (const auto& dc : sample) {
    (dc.z == 0 ? p0 : p1).push_back(dc.p);
  }
  const double m = static_cast<double>(sample.size());

  detail::GroupProfile g0, g1;
  g0.build(std::move(p0), cost.c);
  g1.build(std::move(p1), cost.c);

  const auto rule_utility = [&](double t0, double t1) {
    return (g0.gain(t0) + g1.gain(t1)) / m;
  };

  if (alpha >= 1.0 || g0.size() == 0 || g1.size() == 0) {
    return {FairThresholds{cost.c, cost.c}, rule_utility(cost.c, cost.c), true};
  }

  const auto benefit = [&](const detail::GroupProfile& g, double theta) {
    const int pos = g.positives(theta);
    return conv == BenefitConvention::kIdentity ? pos : g.size() - pos;
  };

  constexpr double kUtilityTieTol = 1e-12;
  const double band = alpha * m + 1e-9;
  bool found = false;
  double best_u = 0.0;
  FairThresholds best{};
  for (int k0 = 0; k0 <= grid; ++k0) {
    const double t0 = static_cast<double>(k0) / grid;
    const int b0 = benefit(g0, t0);
    const double u0 = g0.gain(t0);
    for (int k1 = 0; k1 <= grid; ++k1) {
      const double t1 = static_cast<double>(k1) / grid;
      if (std::abs(benefit(g1, t1) - b0) > band) continue;
      const double u = (u0 + g1.gain(t1)) / m;
      if (!found || u > best_u + kUtilityTieTol) {
        found = true;
        best_u = u;
        best = FairThresholds{t0, t1};
      }
    }
  }
  if (!found) {
    return {FairThresholds{cost.c, cost.c}, rule_utility(cost.c, cost.c),
            false};
  }
  return {best, best_u, true};
}

}  // namespace fairassign

#endif  // FAIRASSIGN_DOMAIN_HPP_
