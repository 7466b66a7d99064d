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

#ifndef FAIRASSIGN_CLI_HPP_
#define FAIRASSIGN_CLI_HPP_

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fairassign/compas.hpp"
#include "fairassign/domain.hpp"
#include "fairassign/simulate.hpp"

namespace fairassign::cli {

// Exit codes: 0 success, 1 runtime failure, 2 configuration error,
// 3 missing dataset. Stable contract.
enum ExitCode : int {
  kOk = 0,
  kRuntimeError = 1,
  kConfigError = 2,
  kMissingDataset = 3,
};

namespace detail {

// %.17g round-trips doubles exactly, which the series round-trip contract
// relies on.
inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline PolicyKind parse_policy(const std::string& token) {
  if (token == "optimal") return PolicyKind::kOptimal;
  if (token == "known") return PolicyKind::kKnown;
  if (token == "unknown_posterior") return PolicyKind::kUnknownPosterior;
  if (token == "unknown_point") return PolicyKind::kUnknownPointEstimate;
  if (token == "random") return PolicyKind::kRandom;
  throw std::invalid_argument(
      "unknown policy '" + token +
      "' (expected optimal|known|unknown_posterior|unknown_point|random)");
}

inline std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(csv);
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline std::vector<double> parse_doubles(const std::string& csv,
                                         const std::string& what) {
  std::vector<double> out;
  for (const auto& token : split_list(csv)) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad value in " + what + ": '" + token + "'");
    }
    if (used != token.size()) {
      throw std::invalid_argument("bad value in " + what + ": '" + token + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument(what + ": empty list");
  return out;
}

inline BenefitConvention parse_convention(const std::string& token) {
  if (token == "identity") return BenefitConvention::kIdentity;
  if (token == "complement") return BenefitConvention::kComplement;
  throw std::invalid_argument("benefit convention must be identity|complement");
}

inline void write_series(const std::filesystem::path& path,
                         const std::vector<PolicyRun>& runs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "t,policy,utility_round,utility_cum,true_utility_cum,di_round,"
         "feasible,regret_cum\n";
  for (const auto& pr : runs) {
    const char* name = policy_name(pr.policy.kind);
    const RunResult& r = pr.result;
    for (std::size_t t = 0; t < r.rounds.size(); ++t) {
      const RoundResult& rr = r.rounds[t];
      out << rr.t << ',' << name << ',' << fmt(rr.utility_sum) << ','
          << fmt(r.utility_cum[t]) << ',' << fmt(r.true_utility_cum[t]) << ','
          << fmt(rr.di) << ',' << (rr.feasible ? 1 : 0) << ','
          << fmt(r.regret_cum[t]) << '\n';
    }
  }
}

class SummaryWriter {
 public:
  explicit SummaryWriter(const std::filesystem::path& path)
      : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open " + path.string());
  }
  void kv(const std::string& key, const std::string& value) {
    out_ << key << " = " << value << '\n';
  }
  void kv(const std::string& key, double value) { kv(key, fmt(value)); }
  void kv(const std::string& key, std::int64_t value) {
    kv(key, std::to_string(value));
  }
  void section(const std::string& name) { out_ << "[" << name << "]\n"; }

 private:
  std::ofstream out_;
};

inline void write_policy_summaries(SummaryWriter& s,
                                   const std::vector<PolicyRun>& runs) {
  for (const auto& pr : runs) {
    const std::string name = policy_name(pr.policy.kind);
    s.section(name);
    s.kv("empirical_utility", pr.result.empirical_utility);
    s.kv("true_utility", pr.result.true_utility_total);
    s.kv("mean_di", pr.result.mean_di);
    s.kv("infeasible_rounds",
         static_cast<std::int64_t>(pr.result.infeasible_rounds));
    s.kv("regret_final", pr.result.regret_cum.empty()
                             ? 0.0
                             : pr.result.regret_cum.back());
  }
}

}  // namespace detail

struct CommonOptions {
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  std::string benefit = "identity";
};

struct SynthOptions {
  int m = 20;
  int n = 0;  // 0 -> 3m
  int T = 1000;
  double c = 0.5;
  double alpha = -1.0;  // < 0 -> unconstrained
  int grid = 200;
  double prior_alpha = 1.0;
  double prior_beta = 1.0;
  std::string policies = "optimal,known,unknown_posterior,random";
};

inline int cmd_synth(const CommonOptions& common, const SynthOptions& opt) {
  SyntheticConfig config;
  config.cases_per_round = opt.m;
  config.num_experts = opt.n > 0 ? opt.n : 3 * opt.m;
  config.rounds = opt.T;
  config.cost = opt.c;
  config.seed = common.seed;
  config.prior_alpha = opt.prior_alpha;
  config.prior_beta = opt.prior_beta;
  config.validate();
  if (opt.alpha > 1.0) throw std::invalid_argument("alpha must lie in [0, 1]");
  const BenefitConvention conv = detail::parse_convention(common.benefit);

  std::optional<FairnessSpec> fairness;
  if (opt.alpha >= 0.0) {
    fairness = FairnessSpec{
        opt.alpha,
        calibrate_fair_thresholds(config, opt.alpha, conv, 20000, opt.grid)};
  }
  std::vector<Policy> policies;
  for (const auto& token : detail::split_list(opt.policies)) {
    policies.push_back(Policy{detail::parse_policy(token), fairness});
  }
  if (policies.empty()) throw std::invalid_argument("empty policy list");

  const SimulationResult sim = run_simulation(config, policies);

  std::filesystem::create_directories(common.out_dir);
  detail::write_series(std::filesystem::path(common.out_dir) / "series.csv",
                       sim.runs);
  detail::SummaryWriter s(std::filesystem::path(common.out_dir) / "summary.txt");
  s.section("config");
  s.kv("command", "synth");
  s.kv("m", static_cast<std::int64_t>(config.cases_per_round));
  s.kv("n", static_cast<std::int64_t>(config.num_experts));
  s.kv("T", static_cast<std::int64_t>(config.rounds));
  s.kv("c", config.cost);
  s.kv("seed", static_cast<std::int64_t>(config.seed));
  s.kv("benefit", common.benefit);
  s.kv("policies", opt.policies);
  if (fairness) {
    s.kv("alpha", fairness->alpha);
    s.kv("theta_star_0", fairness->theta_star.theta0);
    s.kv("theta_star_1", fairness->theta_star.theta1);
  }
  s.kv("draw_hash", static_cast<std::int64_t>(sim.draw_hash));
  detail::write_policy_summaries(s, sim.runs);
  return kOk;
}

struct RegretOptions {
  std::string variant = "positive";
  double theta_tilde = 0.5;
  int T = 2000;
  int synth_m = 10;
  int synth_n = 0;  // 0 -> 3m
};

inline int cmd_regret(const CommonOptions& common, const RegretOptions& opt) {
  AdversarialVariant variant;
  if (opt.variant == "positive") {
    variant = AdversarialVariant::kPositive;
  } else if (opt.variant == "zero") {
    variant = AdversarialVariant::kZero;
  } else {
    throw std::invalid_argument("variant must be positive|zero");
  }
  if (opt.T < 0) throw std::invalid_argument("T must be >= 0");
  const AdversarialInstance instance =
      adversarial_instance(opt.theta_tilde, variant);

  const std::vector<Policy> policies = {
      Policy{PolicyKind::kUnknownPosterior, std::nullopt},
      Policy{PolicyKind::kUnknownPointEstimate, std::nullopt},
  };
  const SimulationResult adversarial =
      run_adversarial(instance, policies, opt.T, common.seed);

  SyntheticConfig config;
  config.cases_per_round = opt.synth_m;
  config.num_experts = opt.synth_n > 0 ? opt.synth_n : 3 * opt.synth_m;
  config.rounds = opt.T;
  config.seed = common.seed;
  config.validate();
  const SimulationResult synthetic = run_simulation(config, policies);

  std::filesystem::create_directories(common.out_dir);
  detail::write_series(
      std::filesystem::path(common.out_dir) / "regret_adversarial.csv",
      adversarial.runs);
  detail::write_series(
      std::filesystem::path(common.out_dir) / "regret_synthetic.csv",
      synthetic.runs);
  detail::SummaryWriter s(std::filesystem::path(common.out_dir) / "summary.txt");
  s.section("config");
  s.kv("command", "regret");
  s.kv("variant", opt.variant);
  s.kv("theta_tilde", opt.theta_tilde);
  s.kv("T", static_cast<std::int64_t>(opt.T));
  s.kv("seed", static_cast<std::int64_t>(common.seed));
  s.section("adversarial");
  for (const auto& pr : adversarial.runs) {
    s.kv(std::string(policy_name(pr.policy.kind)) + "_regret_final",
         pr.result.regret_cum.empty() ? 0.0 : pr.result.regret_cum.back());
  }
  s.section("synthetic");
  for (const auto& pr : synthetic.runs) {
    s.kv(std::string(policy_name(pr.policy.kind)) + "_regret_final",
         pr.result.regret_cum.empty() ? 0.0 : pr.result.regret_cum.back());
  }
  return kOk;
}

struct CompasOptions {
  std::string data;
  int m = 20;
  double c = 0.5;
  double tau = 1.0;
  double biased_fraction = 0.0;
  double bias_factor = 1.2;
  double train_fraction = 0.25;
  double alpha = -1.0;  // < 0 -> unconstrained
  int grid = 200;
  double prior_alpha = 1.0;
  double prior_beta = 1.0;
  std::string policies = "optimal,known,unknown_posterior,random";
};

namespace detail {

struct CompasPipeline {
  compas::LoadResult load;
  compas::SplitResult parts;
  compas::LogisticModel model0, model1;
  std::vector<std::vector<DecisionCase>> rounds;
  int dropped_cases = 0;
};

// Shared front half of the compas and feasibility subcommands:
// load -> stratified split -> per-group models -> shuffled rounds of m.
inline CompasPipeline compas_pipeline(const std::string& data_path,
                                      double train_fraction, int m,
                                      std::uint64_t seed) {
  if (!std::filesystem::exists(data_path)) {
    throw compas::FileError("dataset file not found: " + data_path);
  }
  CompasPipeline p;
  p.load = compas::load_compas(data_path);
  Rng split_rng = make_rng(seed, kSplitStream);
  p.parts = compas::split(p.load.records, train_fraction, split_rng);
  for (int z = 0; z <= 1; ++z) {
    int rows = 0, ones = 0;
    for (const auto& rec : p.parts.train) {
      if (rec.z != z) continue;
      ++rows;
      ones += rec.two_year_recid;
    }
    if (rows < 20 || ones == 0 || ones == rows) {
      throw std::invalid_argument(
          "compas: group " + std::to_string(z) +
          " needs >= 20 training rows with both labels, got " +
          std::to_string(rows));
    }
  }
  p.model0 = compas::train_logistic(p.parts.train, 0, p.load.has_juvenile_columns);
  p.model1 = compas::train_logistic(p.parts.train, 1, p.load.has_juvenile_columns);
  Rng batch_rng = make_rng(seed, kBatchStream);
  auto batched = compas::batch_rounds(p.parts.eval, p.model0, p.model1, m, batch_rng);
  p.rounds = std::move(batched.rounds);
  p.dropped_cases = batched.dropped_cases;
  return p;
}

}  // namespace detail

inline int cmd_compas(const CommonOptions& common, const CompasOptions& opt) {
  if (opt.m < 1) throw std::invalid_argument("m must be >= 1");
  if (opt.alpha > 1.0) throw std::invalid_argument("alpha must lie in [0, 1]");
  CostParam::checked(opt.c);
  const BenefitConvention conv = detail::parse_convention(common.benefit);

  detail::CompasPipeline p =
      detail::compas_pipeline(opt.data, opt.train_fraction, opt.m, common.seed);
  if (p.rounds.empty()) {
    std::cerr << "warning: evaluation split smaller than one round of m="
              << opt.m << "\n";
  }

  compas::JudgePoolConfig pool;
  pool.tau = opt.tau;
  pool.biased_fraction = opt.biased_fraction;
  pool.bias_factor = opt.bias_factor;
  pool.n = 3 * opt.m;
  Rng judge_rng = make_rng(common.seed, kJudgeStream);
  const std::vector<Expert> judges = compas::generate_judges(pool, judge_rng);
  int biased_judges = 0;
  for (const auto& j : judges) biased_judges += j.theta[0] != j.theta[1] ? 1 : 0;

  std::optional<FairnessSpec> fairness;
  if (opt.alpha >= 0.0) {
    const auto train_cases = compas::predictions(p.parts.train, p.model0, p.model1);
    fairness = FairnessSpec{
        opt.alpha, optimal_fair_thresholds(train_cases, CostParam{opt.c},
                                           opt.alpha, conv, opt.grid)
                       .thresholds};
  }
  std::vector<Policy> policies;
  for (const auto& token : detail::split_list(opt.policies)) {
    policies.push_back(Policy{detail::parse_policy(token), fairness});
  }
  if (policies.empty()) throw std::invalid_argument("empty policy list");

  RunSpec spec;
  spec.cost = CostParam{opt.c};
  spec.convention = conv;
  spec.master_seed = common.seed;
  spec.initial_beliefs = BeliefSet(judges, opt.prior_alpha, opt.prior_beta);
  const SimulationResult sim = run_policies(p.rounds, judges, policies, spec);

  std::filesystem::create_directories(common.out_dir);
  detail::write_series(std::filesystem::path(common.out_dir) / "series.csv",
                       sim.runs);
  detail::SummaryWriter s(std::filesystem::path(common.out_dir) / "summary.txt");
  s.section("config");
  s.kv("command", "compas");
  s.kv("data", opt.data);
  s.kv("m", static_cast<std::int64_t>(opt.m));
  s.kv("c", opt.c);
  s.kv("tau", opt.tau);
  s.kv("biased_fraction", opt.biased_fraction);
  s.kv("seed", static_cast<std::int64_t>(common.seed));
  s.kv("benefit", common.benefit);
  s.kv("policies", opt.policies);
  if (fairness) {
    s.kv("alpha", fairness->alpha);
    s.kv("theta_star_0", fairness->theta_star.theta0);
    s.kv("theta_star_1", fairness->theta_star.theta1);
  }
  s.section("data");
  s.kv("records", static_cast<std::int64_t>(p.load.records.size()));
  s.kv("dropped_race", static_cast<std::int64_t>(p.load.dropped_race));
  s.kv("dropped_missing", static_cast<std::int64_t>(p.load.dropped_missing));
  s.kv("train_rows", static_cast<std::int64_t>(p.parts.train.size()));
  s.kv("eval_rows", static_cast<std::int64_t>(p.parts.eval.size()));
  s.kv("rounds", static_cast<std::int64_t>(p.rounds.size()));
  s.kv("dropped_cases", static_cast<std::int64_t>(p.dropped_cases));
  s.section("judges");
  s.kv("n", static_cast<std::int64_t>(judges.size()));
  s.kv("biased_judges", static_cast<std::int64_t>(biased_judges));
  s.kv("biased_fraction_echo",
       judges.empty() ? 0.0
                      : static_cast<double>(biased_judges) /
                            static_cast<double>(judges.size()));
  detail::write_policy_summaries(s, sim.runs);
  return kOk;
}

struct FeasibilityOptions {
  std::string data;
  int m = 20;
  double c = 0.5;
  double train_fraction = 0.25;
  std::string taus = "1.0,5.0";
  std::string biased_fractions = "0.0,0.5";
  std::string alphas = "0.01,0.05,0.1,0.2";
  int replicates = 3;
  int max_rounds = 0;
  double bias_factor = 1.2;
  int grid = 200;
  double prior_alpha = 1.0;
  double prior_beta = 1.0;
};

inline int cmd_feasibility(const CommonOptions& common,
                           const FeasibilityOptions& opt) {
  if (opt.m < 1) throw std::invalid_argument("m must be >= 1");
  if (opt.replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  CostParam::checked(opt.c);
  const BenefitConvention conv = detail::parse_convention(common.benefit);

  compas::SweepConfig sweep;
  sweep.taus = detail::parse_doubles(opt.taus, "taus");
  sweep.biased_fractions = detail::parse_doubles(opt.biased_fractions, "biased_fractions");
  sweep.alphas = detail::parse_doubles(opt.alphas, "alphas");
  for (const double a : sweep.alphas) {
    if (a < 0.0 || a > 1.0) {
      throw std::invalid_argument("alphas must lie in [0, 1]");
    }
  }
  sweep.replicates = opt.replicates;
  sweep.max_rounds = opt.max_rounds;
  sweep.cost = opt.c;
  sweep.bias_factor = opt.bias_factor;
  sweep.prior_alpha = opt.prior_alpha;
  sweep.prior_beta = opt.prior_beta;
  sweep.convention = conv;
  sweep.seed = common.seed;

  detail::CompasPipeline p =
      detail::compas_pipeline(opt.data, opt.train_fraction, opt.m, common.seed);
  if (p.rounds.empty()) {
    throw std::runtime_error("feasibility: no full rounds in evaluation split");
  }

  const auto train_cases = compas::predictions(p.parts.train, p.model0, p.model1);
  std::map<double, FairThresholds> theta_by_alpha;
  for (const double a : sweep.alphas) {
    theta_by_alpha[a] =
        optimal_fair_thresholds(train_cases, CostParam{opt.c}, a, conv, opt.grid)
            .thresholds;
  }

  const std::vector<compas::SweepCell> cells =
      compas::feasibility_sweep(p.rounds, theta_by_alpha, sweep);

  std::filesystem::create_directories(common.out_dir);
  const auto table_path = std::filesystem::path(common.out_dir) / "feasibility.csv";
  std::ofstream out(table_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + table_path.string());
  out << "tau,biased_fraction,alpha,regime,infeasibility_prob,stderr\n";
  for (const auto& cell : cells) {
    out << detail::fmt(cell.tau) << ',' << detail::fmt(cell.biased_fraction)
        << ',' << detail::fmt(cell.alpha) << ','
        << (cell.known_regime ? "known" : "unknown") << ','
        << detail::fmt(cell.infeasibility_prob) << ','
        << detail::fmt(cell.stderr_) << '\n';
  }
  out.close();

  detail::SummaryWriter s(std::filesystem::path(common.out_dir) / "summary.txt");
  s.section("config");
  s.kv("command", "feasibility");
  s.kv("data", opt.data);
  s.kv("m", static_cast<std::int64_t>(opt.m));
  s.kv("c", opt.c);
  s.kv("taus", opt.taus);
  s.kv("biased_fractions", opt.biased_fractions);
  s.kv("alphas", opt.alphas);
  s.kv("replicates", static_cast<std::int64_t>(opt.replicates));
  s.kv("rounds_used",
       static_cast<std::int64_t>(sweep.max_rounds > 0
                                     ? std::min<std::size_t>(
                                           static_cast<std::size_t>(sweep.max_rounds),
                                           p.rounds.size())
                                     : p.rounds.size()));
  s.kv("seed", static_cast<std::int64_t>(common.seed));
  s.kv("cells", static_cast<std::int64_t>(cells.size()));
  return kOk;
}

inline int run(int argc, const char* const* argv) {
  CLI::App app{"fairassign: expert-to-decision assignment experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "flat key-value config file with [subcommand] sections");
  app.allow_config_extras(false);

  CommonOptions common;
  app.add_option("--seed", common.seed, "master seed");
  app.add_option("--out", common.out_dir, "output directory");
  app.add_option("--benefit", common.benefit, "benefit convention: identity|complement");

  SynthOptions synth;
  CLI::App* synth_cmd = app.add_subcommand("synth", "synthetic experiment");
  synth_cmd->add_option("--m", synth.m, "cases per round");
  synth_cmd->add_option("--n", synth.n, "experts (default 3m)");
  synth_cmd->add_option("--T", synth.T, "rounds");
  synth_cmd->add_option("--c", synth.c, "cost of a positive decision");
  synth_cmd->add_option("--alpha", synth.alpha, "disparate-impact tolerance");
  synth_cmd->add_option("--grid", synth.grid, "threshold grid resolution");
  synth_cmd->add_option("--prior-alpha", synth.prior_alpha, "belief prior shape");
  synth_cmd->add_option("--prior-beta", synth.prior_beta, "belief prior shape");
  synth_cmd->add_option("--policies", synth.policies, "comma-separated policy list");

  RegretOptions regret;
  CLI::App* regret_cmd = app.add_subcommand("regret", "adversarial + synthetic regret");
  regret_cmd->add_option("--variant", regret.variant, "positive|zero");
  regret_cmd->add_option("--theta-tilde", regret.theta_tilde, "instance parameter");
  regret_cmd->add_option("--T", regret.T, "rounds");
  regret_cmd->add_option("--m", regret.synth_m, "synthetic cases per round");
  regret_cmd->add_option("--n", regret.synth_n, "synthetic experts (default 3m)");

  CompasOptions compas_opt;
  CLI::App* compas_cmd = app.add_subcommand("compas", "real-data experiment");
  compas_cmd->add_option("--data", compas_opt.data, "ProPublica two-year CSV")->required();
  compas_cmd->add_option("--m", compas_opt.m, "cases per round");
  compas_cmd->add_option("--c", compas_opt.c, "cost of a positive decision");
  compas_cmd->add_option("--tau", compas_opt.tau, "judge diversity parameter");
  compas_cmd->add_option("--biased-fraction", compas_opt.biased_fraction,
                         "fraction of biased judges");
  compas_cmd->add_option("--bias-factor", compas_opt.bias_factor, "theta1 multiplier");
  compas_cmd->add_option("--train-fraction", compas_opt.train_fraction,
                         "training split fraction");
  compas_cmd->add_option("--alpha", compas_opt.alpha, "disparate-impact tolerance");
  compas_cmd->add_option("--grid", compas_opt.grid, "threshold grid resolution");
  compas_cmd->add_option("--prior-alpha", compas_opt.prior_alpha, "belief prior shape");
  compas_cmd->add_option("--prior-beta", compas_opt.prior_beta, "belief prior shape");
  compas_cmd->add_option("--policies", compas_opt.policies, "comma-separated policy list");

  FeasibilityOptions feas;
  CLI::App* feas_cmd = app.add_subcommand("feasibility", "banded-assignment feasibility sweep");
  feas_cmd->add_option("--data", feas.data, "ProPublica two-year CSV")->required();
  feas_cmd->add_option("--m", feas.m, "cases per round");
  feas_cmd->add_option("--c", feas.c, "cost of a positive decision");
  feas_cmd->add_option("--train-fraction", feas.train_fraction, "training split fraction");
  feas_cmd->add_option("--taus", feas.taus, "comma-separated tau grid");
  feas_cmd->add_option("--biased-fractions", feas.biased_fractions,
                       "comma-separated bias grid");
  feas_cmd->add_option("--alphas", feas.alphas, "comma-separated alpha grid");
  feas_cmd->add_option("--replicates", feas.replicates, "judge-pool replicates per cell");
  feas_cmd->add_option("--max-rounds", feas.max_rounds, "cap on rounds per cell (0 = all)");
  feas_cmd->add_option("--bias-factor", feas.bias_factor, "theta1 multiplier");
  feas_cmd->add_option("--grid", feas.grid, "threshold grid resolution");
  feas_cmd->add_option("--prior-alpha", feas.prior_alpha, "belief prior shape");
  feas_cmd->add_option("--prior-beta", feas.prior_beta, "belief prior shape");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (synth_cmd->parsed()) return cmd_synth(common, synth);
    if (regret_cmd->parsed()) return cmd_regret(common, regret);
    if (compas_cmd->parsed()) return cmd_compas(common, compas_opt);
    if (feas_cmd->parsed()) return cmd_feasibility(common, feas);
    std::cerr << "no subcommand given\n";
    return kConfigError;
  } catch (const compas::FileError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kMissingDataset;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return kRuntimeError;
  }
}

}  // namespace fairassign::cli

#endif  // FAIRASSIGN_CLI_HPP_
