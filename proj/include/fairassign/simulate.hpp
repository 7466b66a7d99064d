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

#ifndef FAIRASSIGN_SIMULATE_HPP_
#define FAIRASSIGN_SIMULATE_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fairassign/belief.hpp"
#include "fairassign/domain.hpp"
#include "fairassign/fairmatch.hpp"
#include "fairassign/matching.hpp"
#include "fairassign/rng.hpp"

namespace fairassign {

enum class PolicyKind {
  kOptimal,
  kKnown,
  kUnknownPosterior,
  kUnknownPointEstimate,
  kRandom,
};

inline const char* policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kOptimal: return "optimal";
    case PolicyKind::kKnown: return "known";
    case PolicyKind::kUnknownPosterior: return "unknown_posterior";
    case PolicyKind::kUnknownPointEstimate: return "unknown_point";
    case PolicyKind::kRandom: return "random";
  }
  return "?";
}

struct FairnessSpec {
  double alpha = 1.0;
  FairThresholds theta_star;
};

struct Policy {
  PolicyKind kind = PolicyKind::kKnown;
  std::optional<FairnessSpec> fairness;
};

struct BetaShape {
  double a = 1.0;
  double b = 1.0;
};

struct SyntheticConfig {
  int cases_per_round = 20;  // m
  int num_experts = 60;      // n, default 3m
  int rounds = 1000;         // T
  double cost = 0.5;
  std::uint64_t seed = 0;
  double z_prob = 0.5;
  BetaShape p_given_z0{3.0, 5.0};
  BetaShape p_given_z1{4.0, 3.0};
  BetaShape theta_z0{0.5, 0.5};
  BetaShape theta_z1{5.0, 5.0};
  double prior_alpha = 1.0;
  double prior_beta = 1.0;

  void validate() const {
    if (cases_per_round < 1) throw std::invalid_argument("config: m must be >= 1");
    if (num_experts < cases_per_round) {
      throw std::invalid_argument("config: n must be >= m");
    }
    if (rounds < 0) throw std::invalid_argument("config: T must be >= 0");
    CostParam::checked(cost);
  }
};

// One round of cases: z ~ Bernoulli(z_prob), p ~ Beta per group,
// y ~ Bernoulli(p). Draw order per case is (z, p, y).
inline std::vector<DecisionCase> generate_round(const SyntheticConfig& config,
                                                Rng& rng) {
  std::vector<DecisionCase> cases;
  cases.reserve(static_cast<std::size_t>(config.cases_per_round));
  for (int i = 0; i < config.cases_per_round; ++i) {
    DecisionCase dc;
    dc.id = i;
    dc.z = std::bernoulli_distribution(config.z_prob)(rng) ? 1 : 0;
    const BetaShape& shape = dc.z == 0 ? config.p_given_z0 : config.p_given_z1;
    dc.p = beta_draw(rng, shape.a, shape.b);
    dc.y_true = std::bernoulli_distribution(dc.p)(rng) ? 1 : 0;
    cases.push_back(dc);
  }
  return cases;
}

// Expert pool with independent per-group thresholds, drawn (theta0, theta1).
inline std::vector<Expert> generate_experts(const SyntheticConfig& config,
                                            Rng& rng) {
  std::vector<Expert> experts;
  experts.reserve(static_cast<std::size_t>(config.num_experts));
  for (int j = 0; j < config.num_experts; ++j) {
    Expert e;
    e.id = j;
    e.theta[0] = beta_draw(rng, config.theta_z0.a, config.theta_z0.b);
    e.theta[1] = beta_draw(rng, config.theta_z1.a, config.theta_z1.b);
    experts.push_back(e);
  }
  return experts;
}

struct RoundResult {
  int t = 0;
  double utility_sum = 0.0;       // sum_i d_i (p_i - c)
  double true_utility_sum = 0.0;  // sum_i d_i (y_i - c); NaN if y missing
  double di = 0.0;
  std::array<int, 2> benefit{0, 0};
  bool feasible = true;   // constrained solver found a banded assignment
  bool fallback = false;  // infeasible round served by unconstrained matching
  std::vector<int> assignment;  // case -> expert; empty for Optimal
  std::vector<int> decisions;
};

struct RunResult {
  std::vector<RoundResult> rounds;
  std::vector<double> utility_cum;
  std::vector<double> true_utility_cum;
  std::vector<double> regret_cum;
  double empirical_utility = 0.0;  // 1/(mT) normalization
  double true_utility_total = 0.0;  // 1/T normalization
  double mean_di = 0.0;
  int infeasible_rounds = 0;
};

struct PolicyRun {
  Policy policy;
  RunResult result;
};

struct SimulationResult {
  std::vector<PolicyRun> runs;
  std::uint64_t draw_hash = 0;  // fingerprint of the shared case/expert draws
};

// Executes one round for one policy. Unknown* policies build the graph from
// sampled/MAP thresholds, then observe the realized decisions of the true
// thresholds and update beliefs. Infeasible constrained rounds fall back to
// the unconstrained matching and are flagged.
inline RoundResult run_round(const Policy& policy,
                             const std::vector<DecisionCase>& cases,
                             const std::vector<Expert>& experts,
                             BeliefSet* beliefs, CostParam cost,
                             const std::vector<BandConstraint>* bands,
                             BenefitConvention conv, Rng& rng) {
  const int m = static_cast<int>(cases.size());
  const int n = static_cast<int>(experts.size());
  RoundResult rr;
  rr.decisions.assign(static_cast<std::size_t>(m), 0);

  const bool unknown = policy.kind == PolicyKind::kUnknownPosterior ||
                       policy.kind == PolicyKind::kUnknownPointEstimate;
  if (unknown && beliefs == nullptr) {
    throw std::invalid_argument("run_round: Unknown* policies need beliefs");
  }

  if (policy.kind == PolicyKind::kOptimal) {
    const FairThresholds thr = policy.fairness
                                   ? policy.fairness->theta_star
                                   : FairThresholds{cost.c, cost.c};
    for (int i = 0; i < m; ++i) {
      rr.decisions[static_cast<std::size_t>(i)] =
          apply_threshold_rule(cases[static_cast<std::size_t>(i)].p,
                               cases[static_cast<std::size_t>(i)].z, thr);
    }
  } else if (policy.kind == PolicyKind::kRandom) {
    std::vector<int> idx(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) idx[static_cast<std::size_t>(j)] = j;
    for (int k = 0; k < m; ++k) {
      std::uniform_int_distribution<int> pick(k, n - 1);
      std::swap(idx[static_cast<std::size_t>(k)],
                idx[static_cast<std::size_t>(pick(rng))]);
    }
    rr.assignment.assign(idx.begin(), idx.begin() + m);
  } else {
    std::vector<Expert> working;
    const std::vector<Expert>* solve_experts = &experts;
    if (unknown) {
      working.reserve(static_cast<std::size_t>(n));
      for (const auto& e : experts) {
        Expert est = e;
        for (int z = 0; z <= 1; ++z) {
          const ThresholdBelief& belief = beliefs->at(e.id, z);
          est.theta[static_cast<std::size_t>(z)] =
              policy.kind == PolicyKind::kUnknownPosterior
                  ? belief.sample(rng)
                  : belief.map_estimate();
        }
        working.push_back(est);
      }
      solve_experts = &working;
    }
    const AssignmentGraph graph = build_graph(cases, *solve_experts, cost);
    Matching matching;
    if (bands != nullptr && !bands->empty()) {
      const Matching unconstrained = max_weight_matching(graph);
      if (within_bands(benefit_counts(graph, unconstrained.assign, conv),
                       *bands)) {
        matching = unconstrained;
      } else {
        const LpRelaxation lp = solve_lp(graph, *bands, conv);
        if (lp.status == SolveStatus::kSolved) {
          const RoundedSolution rounded =
              round_fractional(lp.solution, graph, *bands, conv);
          if (rounded.status != SolveStatus::kSolved) {
            throw std::runtime_error("run_round: rounding failed numerically");
          }
          matching = rounded.matching;
        } else if (lp.status == SolveStatus::kInfeasible) {
          matching = unconstrained;
          rr.feasible = false;
          rr.fallback = true;
        } else {
          throw std::runtime_error("run_round: LP failed numerically");
        }
      }
    } else {
      matching = max_weight_matching(graph);
    }
    rr.assignment = matching.assign;
  }

  if (!rr.assignment.empty()) {
    for (int i = 0; i < m; ++i) {
      rr.decisions[static_cast<std::size_t>(i)] = apply_threshold_rule(
          cases[static_cast<std::size_t>(i)],
          experts[static_cast<std::size_t>(rr.assignment[static_cast<std::size_t>(i)])]);
    }
    if (unknown) {
      for (int i = 0; i < m; ++i) {
        const auto& dc = cases[static_cast<std::size_t>(i)];
        beliefs->observe(
            experts[static_cast<std::size_t>(rr.assignment[static_cast<std::size_t>(i)])].id,
            dc.z, dc.p, rr.decisions[static_cast<std::size_t>(i)]);
      }
    }
  }

  bool have_y = true;
  for (int i = 0; i < m; ++i) {
    const auto& dc = cases[static_cast<std::size_t>(i)];
    const int d = rr.decisions[static_cast<std::size_t>(i)];
    rr.utility_sum += d * (dc.p - cost.c);
    if (dc.y_true.has_value()) {
      rr.true_utility_sum += d * (*dc.y_true - cost.c);
    } else {
      have_y = false;
    }
    rr.benefit[static_cast<std::size_t>(dc.z)] += benefit_of(d, conv);
  }
  if (!have_y) {
    rr.true_utility_sum = std::numeric_limits<double>::quiet_NaN();
  }
  rr.di = m > 0 ? std::abs(rr.benefit[1] - rr.benefit[0]) / static_cast<double>(m)
                : 0.0;
  return rr;
}

namespace detail {

inline std::string fairness_key(const std::optional<FairnessSpec>& f) {
  if (!f) return "none";
  return std::to_string(f->alpha) + "," + std::to_string(f->theta_star.theta0) +
         "," + std::to_string(f->theta_star.theta1);
}

}  // namespace detail

struct RunSpec {
  CostParam cost{0.5};
  BenefitConvention convention = BenefitConvention::kIdentity;
  std::uint64_t master_seed = 0;
  BeliefSet initial_beliefs;  // prior state for Unknown* policies
};

// Runs every policy over the same case rounds and expert pool (common random
// numbers). Regret is cumulative Known-minus-policy utility, clamped at zero,
// where the Known reference shares the policy's fairness setting.
inline SimulationResult run_policies(
    const std::vector<std::vector<DecisionCase>>& rounds,
    const std::vector<Expert>& experts, const std::vector<Policy>& policies,
    const RunSpec& spec) {
  const int T = static_cast<int>(rounds.size());
  SimulationResult result;

  std::uint64_t h = kFnvOffset;
  for (const auto& round : rounds) {
    for (const auto& dc : round) {
      h = fnv1a(h, &dc.z, sizeof(dc.z));
      h = fnv1a(h, &dc.p, sizeof(dc.p));
      const int y = dc.y_true.value_or(-1);
      h = fnv1a(h, &y, sizeof(y));
    }
  }
  for (const auto& e : experts) {
    h = fnv1a(h, e.theta.data(), sizeof(double) * e.theta.size());
  }
  result.draw_hash = h;

  std::size_t total_cases = 0;
  for (const auto& round : rounds) total_cases += round.size();

  const auto finalize = [&](RunResult& run) {
    run.utility_cum.resize(static_cast<std::size_t>(T));
    run.true_utility_cum.resize(static_cast<std::size_t>(T));
    double u = 0.0, tu = 0.0, di = 0.0;
    for (int t = 0; t < T; ++t) {
      u += run.rounds[static_cast<std::size_t>(t)].utility_sum;
      tu += run.rounds[static_cast<std::size_t>(t)].true_utility_sum;
      di += run.rounds[static_cast<std::size_t>(t)].di;
      run.utility_cum[static_cast<std::size_t>(t)] = u;
      run.true_utility_cum[static_cast<std::size_t>(t)] = tu;
      run.infeasible_rounds +=
          run.rounds[static_cast<std::size_t>(t)].feasible ? 0 : 1;
    }
    run.empirical_utility =
        total_cases > 0 ? u / static_cast<double>(total_cases) : 0.0;
    run.true_utility_total = T > 0 ? tu / static_cast<double>(T) : 0.0;
    run.mean_di = T > 0 ? di / static_cast<double>(T) : 0.0;
  };

  // Known reference per distinct fairness setting, lazily built and shared.
  std::map<std::string, RunResult> known_refs;
  const auto known_reference =
      [&](const std::optional<FairnessSpec>& fairness) -> const RunResult& {
    const std::string key = detail::fairness_key(fairness);
    auto it = known_refs.find(key);
    if (it != known_refs.end()) return it->second;
    Policy known{PolicyKind::kKnown, fairness};
    Rng unused = make_rng(spec.master_seed, 0);
    RunResult run;
    run.rounds.reserve(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t) {
      std::vector<BandConstraint> bands;
      if (fairness) {
        bands = compute_bands(rounds[static_cast<std::size_t>(t)], spec.cost,
                              fairness->theta_star, fairness->alpha,
                              spec.convention);
      }
      RoundResult rr = run_round(known, rounds[static_cast<std::size_t>(t)],
                                 experts, nullptr, spec.cost,
                                 fairness ? &bands : nullptr, spec.convention,
                                 unused);
      rr.t = t;
      run.rounds.push_back(std::move(rr));
    }
    finalize(run);
    run.regret_cum.assign(static_cast<std::size_t>(T), 0.0);
    return known_refs.emplace(key, std::move(run)).first->second;
  };

  for (std::size_t k = 0; k < policies.size(); ++k) {
    const Policy& policy = policies[k];
    const RunResult& reference = known_reference(policy.fairness);
    PolicyRun pr;
    pr.policy = policy;
    if (policy.kind == PolicyKind::kKnown) {
      pr.result = reference;
      result.runs.push_back(std::move(pr));
      continue;
    }
    Rng rng = make_rng(spec.master_seed, kPolicyStreamBase + k);
    BeliefSet beliefs = spec.initial_beliefs;
    const bool unknown = policy.kind == PolicyKind::kUnknownPosterior ||
                         policy.kind == PolicyKind::kUnknownPointEstimate;
    if (unknown && beliefs.size() == 0) {
      throw std::invalid_argument(
          "run_policies: Unknown* policy without initial beliefs");
    }
    RunResult run;
    run.rounds.reserve(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t) {
      std::vector<BandConstraint> bands;
      if (policy.fairness) {
        bands = compute_bands(rounds[static_cast<std::size_t>(t)], spec.cost,
                              policy.fairness->theta_star,
                              policy.fairness->alpha, spec.convention);
      }
      RoundResult rr = run_round(policy, rounds[static_cast<std::size_t>(t)],
                                 experts, unknown ? &beliefs : nullptr,
                                 spec.cost, policy.fairness ? &bands : nullptr,
                                 spec.convention, rng);
      rr.t = t;
      run.rounds.push_back(std::move(rr));
    }
    finalize(run);
    run.regret_cum.resize(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t) {
      run.regret_cum[static_cast<std::size_t>(t)] =
          std::max(0.0, reference.utility_cum[static_cast<std::size_t>(t)] -
                            run.utility_cum[static_cast<std::size_t>(t)]);
    }
    pr.result = std::move(run);
    result.runs.push_back(std::move(pr));
  }
  return result;
}

// Synthetic experiment: shared draws across all policies for one seed.
inline SimulationResult run_simulation(const SyntheticConfig& config,
                                       const std::vector<Policy>& policies) {
  config.validate();
  Rng expert_rng = make_rng(config.seed, kExpertStream);
  Rng case_rng = make_rng(config.seed, kCaseStream);
  const std::vector<Expert> experts = generate_experts(config, expert_rng);
  std::vector<std::vector<DecisionCase>> rounds;
  rounds.reserve(static_cast<std::size_t>(config.rounds));
  for (int t = 0; t < config.rounds; ++t) {
    rounds.push_back(generate_round(config, case_rng));
  }
  RunSpec spec;
  spec.cost = CostParam{config.cost};
  spec.master_seed = config.seed;
  spec.initial_beliefs =
      BeliefSet(experts, config.prior_alpha, config.prior_beta);
  return run_policies(rounds, experts, policies, spec);
}

// Fair-rule thresholds calibrated on a large sample from the synthetic case
// distribution (dedicated stream, so runs with the same master seed share it).
inline FairThresholds calibrate_fair_thresholds(const SyntheticConfig& config,
                                                double alpha,
                                                BenefitConvention conv,
                                                int sample_size = 20000,
                                                int grid = 200) {
  Rng rng = make_rng(config.seed, kCalibrationStream);
  SyntheticConfig sampler = config;
  sampler.cases_per_round = sample_size;
  const std::vector<DecisionCase> sample = generate_round(sampler, rng);
  return optimal_fair_thresholds(sample, CostParam{config.cost}, alpha, conv, grid)
      .thresholds;
}

enum class AdversarialVariant { kPositive, kZero };

// Fixed two-expert, one-case-per-round instances on which deterministic point
// estimates provably earn linear regret. The prior of the unknown expert is
// shaped so that its MAP estimate starts exactly at theta_tilde.
struct AdversarialInstance {
  AdversarialVariant variant = AdversarialVariant::kPositive;
  double theta_tilde = 0.5;
  double cost = 0.0;
  double p_lo = 0.0, p_hi = 1.0;
  std::vector<Expert> experts;
  BeliefSet priors;
};

inline AdversarialInstance adversarial_instance(double theta_tilde,
                                                AdversarialVariant variant) {
  if (theta_tilde < 0.0 || theta_tilde > 1.0) {
    throw std::invalid_argument("adversarial_instance: theta_tilde outside [0, 1]");
  }
  AdversarialInstance inst;
  inst.variant = variant;
  inst.theta_tilde = theta_tilde;
  double theta_known, theta_unknown;
  if (variant == AdversarialVariant::kPositive) {
    if (theta_tilde <= 0.0) {
      throw std::invalid_argument(
          "adversarial_instance: variant positive needs theta_tilde > 0");
    }
    inst.cost = 0.0;
    theta_unknown = 0.0;
    theta_known = (inst.cost + theta_tilde) / 2.0;
    inst.p_lo = inst.cost;
    inst.p_hi = theta_tilde;
  } else {
    if (theta_tilde >= 1.0) {
      throw std::invalid_argument(
          "adversarial_instance: variant zero needs theta_tilde < 1");
    }
    inst.cost = 1.0;
    theta_unknown = 1.0;
    theta_known = (inst.cost + theta_tilde) / 2.0;
    inst.p_lo = theta_tilde;
    inst.p_hi = inst.cost;
  }
  inst.experts = {Expert{0, {theta_known, theta_known}},
                  Expert{1, {theta_unknown, theta_unknown}}};
  inst.priors = BeliefSet(inst.experts, 1.0, 1.0);
  // Transformed-density mode at theta_tilde: shapes (3 - 2t, 1 + 2t).
  const double pa = 3.0 - 2.0 * theta_tilde;
  const double pb = 1.0 + 2.0 * theta_tilde;
  inst.priors.set_prior(1, 0, pa, pb);
  inst.priors.set_prior(1, 1, pa, pb);
  return inst;
}

inline SimulationResult run_adversarial(const AdversarialInstance& instance,
                                        const std::vector<Policy>& policies,
                                        int rounds, std::uint64_t seed) {
  Rng case_rng = make_rng(seed, kCaseStream);
  std::vector<std::vector<DecisionCase>> series;
  series.reserve(static_cast<std::size_t>(rounds));
  for (int t = 0; t < rounds; ++t) {
    DecisionCase dc;
    dc.id = 0;
    dc.z = 0;
    dc.p = std::uniform_real_distribution<double>(instance.p_lo, instance.p_hi)(case_rng);
    dc.y_true = std::bernoulli_distribution(dc.p)(case_rng) ? 1 : 0;
    series.push_back({dc});
  }
  RunSpec spec;
  spec.cost = CostParam{instance.cost};  // 0 or 1 by construction
  spec.master_seed = seed;
  spec.initial_beliefs = instance.priors;
  return run_policies(series, instance.experts, policies, spec);
}

}  // namespace fairassign

#endif  // FAIRASSIGN_SIMULATE_HPP_
