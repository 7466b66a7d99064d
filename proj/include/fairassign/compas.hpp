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

#ifndef FAIRASSIGN_COMPAS_HPP_
#define FAIRASSIGN_COMPAS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fairassign/domain.hpp"
#include "fairassign/rng.hpp"
#include "fairassign/simulate.hpp"

namespace fairassign::compas {

// Missing dataset file; the CLI maps this to its dedicated exit code.
class FileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One screened offender, race coded as the sensitive attribute:
// Caucasian -> z=0, African-American -> z=1.
struct OffenderRecord {
  int z = 0;
  int two_year_recid = 0;
  double sex = 0.0;  // Male = 1, Female = 0
  double age = 0.0;
  double priors_count = 0.0;
  double charge_degree = 0.0;  // felony = 1, misdemeanor = 0
  double juv_fel = 0.0;
  double juv_misd = 0.0;
  double juv_other = 0.0;
};

struct LoadResult {
  std::vector<OffenderRecord> records;
  int dropped_race = 0;     // races outside the two modeled groups
  int dropped_missing = 0;  // missing or unparsable modeled fields
  bool has_juvenile_columns = false;
};

namespace detail {

// One CSV record with quoted-field support; returns false at end of input.
inline bool read_csv_record(std::istream& in, std::vector<std::string>& fields) {
  fields.clear();
  std::string field;
  bool in_quotes = false;
  bool any = false;
  int ch;
  while ((ch = in.get()) != EOF) {
    any = true;
    const char c = static_cast<char>(ch);
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          field.push_back('"');
          in.get();
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      fields.push_back(std::move(field));
      return true;
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  if (!any) return false;
  fields.push_back(std::move(field));
  return true;
}

inline std::optional<long> parse_int(const std::string& s) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (end == nullptr || *end != '\0') return std::nullopt;
  return v;
}

}  // namespace detail

// Loads the ProPublica two-year screening file. Required columns: race, sex,
// age, priors_count, c_charge_degree, two_year_recid; the three juvenile
// count columns are used as features when all are present.
inline LoadResult load_compas(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw FileError("dataset file not found: " + path);
  }
  std::vector<std::string> header;
  if (!detail::read_csv_record(in, header)) {
    throw std::invalid_argument("load_compas: empty file (no header)");
  }
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;

  const std::vector<std::string> required = {"race",          "sex",
                                             "age",           "priors_count",
                                             "c_charge_degree", "two_year_recid"};
  std::string missing;
  for (const auto& name : required) {
    if (!col.count(name)) missing += (missing.empty() ? "" : ", ") + name;
  }
  if (!missing.empty()) {
    throw std::invalid_argument("load_compas: missing required columns: " + missing);
  }

  LoadResult out;
  out.has_juvenile_columns = col.count("juv_fel_count") &&
                             col.count("juv_misd_count") &&
                             col.count("juv_other_count");

  std::vector<std::string> fields;
  while (detail::read_csv_record(in, fields)) {
    if (fields.size() != header.size()) {
      ++out.dropped_missing;
      continue;
    }
    const auto get = [&](const std::string& name) -> const std::string& {
      return fields[col.at(name)];
    };
    const std::string& race = get("race");
    if (race.empty()) {
      ++out.dropped_missing;
      continue;
    }
    int z;
    if (race == "Caucasian") {
      z = 0;
    } else if (race == "African-American") {
      z = 1;
    } else {
      ++out.dropped_race;
      continue;
    }
    const std::string& sex = get("sex");
    const std::string& degree = get("c_charge_degree");
    const auto age = detail::parse_int(get("age"));
    const auto priors = detail::parse_int(get("priors_count"));
    const auto recid = detail::parse_int(get("two_year_recid"));
    const bool sex_ok = sex == "Male" || sex == "Female";
    const bool degree_ok = degree == "F" || degree == "M";
    if (!sex_ok || !degree_ok || !age || *age <= 0 || !priors || *priors < 0 ||
        !recid || (*recid != 0 && *recid != 1)) {
      ++out.dropped_missing;
      continue;
    }
    OffenderRecord rec;
    rec.z = z;
    rec.two_year_recid = static_cast<int>(*recid);
    rec.sex = sex == "Male" ? 1.0 : 0.0;
    rec.age = static_cast<double>(*age);
    rec.priors_count = static_cast<double>(*priors);
    rec.charge_degree = degree == "F" ? 1.0 : 0.0;
    if (out.has_juvenile_columns) {
      const auto jf = detail::parse_int(get("juv_fel_count"));
      const auto jm = detail::parse_int(get("juv_misd_count"));
      const auto jo = detail::parse_int(get("juv_other_count"));
      if (!jf || !jm || !jo) {
        ++out.dropped_missing;
        continue;
      }
      rec.juv_fel = static_cast<double>(*jf);
      rec.juv_misd = static_cast<double>(*jm);
      rec.juv_other = static_cast<double>(*jo);
    }
    out.records.push_back(rec);
  }
  return out;
}

inline std::vector<double> features(const OffenderRecord& rec, bool use_juvenile) {
  std::vector<double> x = {rec.age, rec.sex, rec.priors_count, rec.charge_degree};
  if (use_juvenile) {
    x.push_back(rec.juv_fel);
    x.push_back(rec.juv_misd);
    x.push_back(rec.juv_other);
  }
  return x;
}

struct SplitResult {
  std::vector<OffenderRecord> train;
  std::vector<OffenderRecord> eval;
};

// Disjoint random split, stratified by group so both appear in both parts.
inline SplitResult split(const std::vector<OffenderRecord>& records,
                         double train_fraction, Rng& rng) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("split: train_fraction must lie in (0, 1)");
  }
  std::array<std::vector<std::size_t>, 2> by_group;
  for (std::size_t i = 0; i < records.size(); ++i) {
    by_group[static_cast<std::size_t>(records[i].z)].push_back(i);
  }
  if (by_group[0].empty() || by_group[1].empty()) {
    throw std::invalid_argument("split: a group is absent from the input");
  }
  SplitResult out;
  for (int z = 0; z <= 1; ++z) {
    auto& idx = by_group[static_cast<std::size_t>(z)];
    std::shuffle(idx.begin(), idx.end(), rng);
    const auto n_train = static_cast<std::size_t>(
        std::lround(train_fraction * static_cast<double>(idx.size())));
    for (std::size_t k = 0; k < idx.size(); ++k) {
      (k < n_train ? out.train : out.eval).push_back(records[idx[k]]);
    }
  }
  return out;
}

struct LogisticModel {
  int z = -1;
  bool uses_juvenile = false;
  std::vector<double> weights;  // over standardized features
  double intercept = 0.0;
  std::vector<double> feature_mean;
  std::vector<double> feature_sd;

  double predict_features(const std::vector<double>& raw) const {
    double logit = intercept;
    for (std::size_t k = 0; k < weights.size(); ++k) {
      const double sd = feature_sd[k] > 1e-12 ? feature_sd[k] : 1.0;
      logit += weights[k] * ((raw[k] - feature_mean[k]) / sd);
    }
    const double p = 1.0 / (1.0 + std::exp(-logit));
    return std::clamp(p, 1e-12, 1.0 - 1e-12);
  }

  double predict(const OffenderRecord& rec) const {
    return predict_features(features(rec, uses_juvenile));
  }
};

struct FitOptions {
  double l2 = 1e-4;
  double tol = 1e-8;
  int max_epochs = 10000;
};

// Gradient descent on the L2-penalized mean logistic loss over standardized
// features. Steps are accepted only if the loss does not increase (halving
// retry), so the per-epoch loss trace is non-increasing by construction.
inline LogisticModel fit_logistic(const std::vector<std::vector<double>>& X,
                                  const std::vector<int>& y,
                                  const FitOptions& opt = {},
                                  std::vector<double>* loss_trace = nullptr) {
  if (X.empty() || X.size() != y.size()) {
    throw std::invalid_argument("fit_logistic: bad training data");
  }
  const int ones = std::accumulate(y.begin(), y.end(), 0);
  if (ones == 0 || ones == static_cast<int>(y.size())) {
    throw std::invalid_argument("fit_logistic: single-label training set");
  }
  const std::size_t n = X.size();
  const std::size_t d = X[0].size();

  LogisticModel model;
  model.feature_mean.assign(d, 0.0);
  model.feature_sd.assign(d, 0.0);
  for (const auto& row : X) {
    for (std::size_t k = 0; k < d; ++k) model.feature_mean[k] += row[k];
  }
  for (std::size_t k = 0; k < d; ++k) model.feature_mean[k] /= static_cast<double>(n);
  for (const auto& row : X) {
    for (std::size_t k = 0; k < d; ++k) {
      const double c = row[k] - model.feature_mean[k];
      model.feature_sd[k] += c * c;
    }
  }
  for (std::size_t k = 0; k < d; ++k) {
    model.feature_sd[k] = std::sqrt(model.feature_sd[k] / static_cast<double>(n));
  }

  std::vector<std::vector<double>> Xs(n, std::vector<double>(d));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      const double sd = model.feature_sd[k] > 1e-12 ? model.feature_sd[k] : 1.0;
      Xs[i][k] = (X[i][k] - model.feature_mean[k]) / sd;
    }
  }

  std::vector<double> w(d, 0.0);
  double b = 0.0;
  const auto loss_of = [&](const std::vector<double>& wv, double bv) {
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double logit = bv;
      for (std::size_t k = 0; k < d; ++k) logit += wv[k] * Xs[i][k];
      // log(1 + exp(-|logit|)) form keeps this stable for large |logit|.
      const double m = std::max(logit, 0.0);
      loss += m - y[i] * logit + std::log1p(std::exp(-std::abs(logit)));
    }
    loss /= static_cast<double>(n);
    double reg = 0.0;
    for (const double v : wv) reg += v * v;
    return loss + 0.5 * opt.l2 * reg;
  };

  double loss = loss_of(w, b);
  if (loss_trace) loss_trace->push_back(loss);
  double lr = 1.0;
  std::vector<double> grad(d, 0.0), cand(d, 0.0);
  for (int epoch = 0; epoch < opt.max_epochs; ++epoch) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double logit = b;
      for (std::size_t k = 0; k < d; ++k) logit += w[k] * Xs[i][k];
      const double p = 1.0 / (1.0 + std::exp(-logit));
      const double err = p - y[i];
      for (std::size_t k = 0; k < d; ++k) grad[k] += err * Xs[i][k];
      grad_b += err;
    }
    for (std::size_t k = 0; k < d; ++k) {
      grad[k] = grad[k] / static_cast<double>(n) + opt.l2 * w[k];
    }
    grad_b /= static_cast<double>(n);

    double new_loss = loss;
    double cand_b = b;
    bool accepted = false;
    for (int halving = 0; halving < 60; ++halving) {
      for (std::size_t k = 0; k < d; ++k) cand[k] = w[k] - lr * grad[k];
      cand_b = b - lr * grad_b;
      new_loss = loss_of(cand, cand_b);
      if (new_loss <= loss) {
        accepted = true;
        break;
      }
      lr *= 0.5;
    }
    if (!accepted) break;
    w = cand;
    b = cand_b;
    lr = std::min(lr * 1.05, 10.0);
    if (loss_trace) loss_trace->push_back(new_loss);
    const bool converged = loss - new_loss < opt.tol;
    loss = new_loss;
    if (converged) break;
  }
  model.weights = std::move(w);
  model.intercept = b;
  return model;
}

// Per-group model over the fixed feature set.
inline LogisticModel train_logistic(const std::vector<OffenderRecord>& train,
                                    int z, bool use_juvenile,
                                    const FitOptions& opt = {},
                                    std::vector<double>* loss_trace = nullptr) {
  std::vector<std::vector<double>> X;
  std::vector<int> y;
  for (const auto& rec : train) {
    if (rec.z != z) continue;
    X.push_back(features(rec, use_juvenile));
    y.push_back(rec.two_year_recid);
  }
  if (X.empty()) {
    throw std::invalid_argument("train_logistic: no rows for group");
  }
  LogisticModel model = fit_logistic(X, y, opt, loss_trace);
  model.z = z;
  model.uses_juvenile = use_juvenile;
  return model;
}

struct JudgePoolConfig {
  double tau = 1.0;
  double biased_fraction = 0.0;
  double bias_factor = 1.2;
  int n = 60;

  void validate() const {
    if (!(tau > 0.0)) throw std::invalid_argument("judges: tau must be > 0");
    if (biased_fraction < 0.0 || biased_fraction > 1.0) {
      throw std::invalid_argument("judges: biased_fraction must lie in [0, 1]");
    }
    if (bias_factor < 0.0) throw std::invalid_argument("judges: bias_factor < 0");
    if (n < 1) throw std::invalid_argument("judges: n must be >= 1");
  }
};

// Fictitious judges: theta ~ Beta(tau, tau) shared across groups, except a
// biased subset (chosen uniformly) with theta_1 = min(1, bias_factor * theta_0).
inline std::vector<Expert> generate_judges(const JudgePoolConfig& config, Rng& rng) {
  config.validate();
  std::vector<Expert> judges;
  judges.reserve(static_cast<std::size_t>(config.n));
  for (int j = 0; j < config.n; ++j) {
    const double theta = beta_draw(rng, config.tau, config.tau);
    judges.push_back(Expert{j, {theta, theta}});
  }
  const int biased = static_cast<int>(
      std::lround(config.biased_fraction * static_cast<double>(config.n)));
  std::vector<int> idx(static_cast<std::size_t>(config.n));
  for (int j = 0; j < config.n; ++j) idx[static_cast<std::size_t>(j)] = j;
  for (int k = 0; k < biased; ++k) {
    std::uniform_int_distribution<int> pick(k, config.n - 1);
    std::swap(idx[static_cast<std::size_t>(k)], idx[static_cast<std::size_t>(pick(rng))]);
  }
  for (int k = 0; k < biased; ++k) {
    Expert& judge = judges[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])];
    judge.theta[1] = std::min(1.0, config.bias_factor * judge.theta[0]);
  }
  return judges;
}

struct RoundsResult {
  std::vector<std::vector<DecisionCase>> rounds;
  int dropped_cases = 0;  // final partial round
};

// Shuffles the evaluation records, scores them with the per-group models, and
// chunks them into rounds of m.
inline RoundsResult batch_rounds(const std::vector<OffenderRecord>& eval,
                                 const LogisticModel& model0,
                                 const LogisticModel& model1, int m, Rng& rng) {
  if (m < 1) throw std::invalid_argument("batch_rounds: m must be >= 1");
  std::vector<std::size_t> order(eval.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  RoundsResult out;
  const std::size_t num_rounds = eval.size() / static_cast<std::size_t>(m);
  out.dropped_cases = static_cast<int>(eval.size() - num_rounds * static_cast<std::size_t>(m));
  out.rounds.reserve(num_rounds);
  std::size_t at = 0;
  for (std::size_t r = 0; r < num_rounds; ++r) {
    std::vector<DecisionCase> round;
    round.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i, ++at) {
      const OffenderRecord& rec = eval[order[at]];
      DecisionCase dc;
      dc.id = static_cast<int>(order[at]);
      dc.z = rec.z;
      dc.p = (rec.z == 0 ? model0 : model1).predict(rec);
      dc.y_true = rec.two_year_recid;
      round.push_back(dc);
    }
    out.rounds.push_back(std::move(round));
  }
  return out;
}

inline std::vector<DecisionCase> predictions(
    const std::vector<OffenderRecord>& records, const LogisticModel& model0,
    const LogisticModel& model1) {
  std::vector<DecisionCase> cases;
  cases.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const OffenderRecord& rec = records[i];
    DecisionCase dc;
    dc.id = static_cast<int>(i);
    dc.z = rec.z;
    dc.p = (rec.z == 0 ? model0 : model1).predict(rec);
    dc.y_true = rec.two_year_recid;
    cases.push_back(dc);
  }
  return cases;
}

struct SweepConfig {
  std::vector<double> taus{1.0, 5.0};
  std::vector<double> biased_fractions{0.0, 0.5};
  std::vector<double> alphas{0.01, 0.05, 0.1, 0.2};
  int replicates = 3;
  int max_rounds = 0;  // 0 = use every round
  double cost = 0.5;
  double bias_factor = 1.2;
  int pool_factor = 3;  // judges per round = pool_factor * m
  double prior_alpha = 1.0;
  double prior_beta = 1.0;
  BenefitConvention convention = BenefitConvention::kIdentity;
  std::uint64_t seed = 0;
};

struct SweepCell {
  double tau = 0.0;
  double biased_fraction = 0.0;
  double alpha = 0.0;
  bool known_regime = true;
  double infeasibility_prob = 0.0;
  double stderr_ = 0.0;
};

// Fraction of rounds with no banded assignment, per pool configuration and
// tolerance, for the known- and unknown-threshold regimes. Judge pools are
// shared across alphas within a (tau, bias, replicate) cell so the
// monotonicity in alpha is measured on common draws.
inline std::vector<SweepCell> feasibility_sweep(
    const std::vector<std::vector<DecisionCase>>& all_rounds,
    const std::map<double, FairThresholds>& theta_by_alpha,
    const SweepConfig& config) {
  if (all_rounds.empty()) {
    throw std::invalid_argument("feasibility_sweep: no rounds");
  }
  std::vector<std::vector<DecisionCase>> rounds = all_rounds;
  if (config.max_rounds > 0 &&
      static_cast<int>(rounds.size()) > config.max_rounds) {
    rounds.resize(static_cast<std::size_t>(config.max_rounds));
  }
  const int m = static_cast<int>(rounds[0].size());
  const double T = static_cast<double>(rounds.size());

  std::vector<SweepCell> cells;
  std::uint64_t pool_index = 0;
  for (const double tau : config.taus) {
    for (const double bias : config.biased_fractions) {
      // replicate -> alpha -> regime(0 known, 1 unknown) -> infeasible fraction
      std::vector<std::map<double, std::array<double, 2>>> frac(
          static_cast<std::size_t>(config.replicates));
      for (int rep = 0; rep < config.replicates; ++rep) {
        JudgePoolConfig pool;
        pool.tau = tau;
        pool.biased_fraction = bias;
        pool.bias_factor = config.bias_factor;
        pool.n = config.pool_factor * m;
        Rng judge_rng = make_rng(config.seed, kSweepStreamBase + pool_index);
        ++pool_index;
        const std::vector<Expert> judges = generate_judges(pool, judge_rng);
        for (const double alpha : config.alphas) {
          const FairThresholds theta = theta_by_alpha.at(alpha);
          RunSpec spec;
          spec.cost = CostParam::checked(config.cost);
          spec.convention = config.convention;
          spec.master_seed = config.seed + pool_index;
          spec.initial_beliefs =
              BeliefSet(judges, config.prior_alpha, config.prior_beta);
          const std::vector<Policy> policies = {
              Policy{PolicyKind::kKnown, FairnessSpec{alpha, theta}},
              Policy{PolicyKind::kUnknownPosterior, FairnessSpec{alpha, theta}},
          };
          const SimulationResult sim = run_policies(rounds, judges, policies, spec);
          frac[static_cast<std::size_t>(rep)][alpha] = {
              sim.runs[0].result.infeasible_rounds / T,
              sim.runs[1].result.infeasible_rounds / T,
          };
        }
      }
      for (const double alpha : config.alphas) {
        for (int regime = 0; regime < 2; ++regime) {
          double mean = 0.0;
          for (int rep = 0; rep < config.replicates; ++rep) {
            mean += frac[static_cast<std::size_t>(rep)].at(alpha)[static_cast<std::size_t>(regime)];
          }
          mean /= config.replicates;
          double var = 0.0;
          for (int rep = 0; rep < config.replicates; ++rep) {
            const double d =
                frac[static_cast<std::size_t>(rep)].at(alpha)[static_cast<std::size_t>(regime)] -
                mean;
            var += d * d;
          }
          const double se =
              config.replicates > 1
                  ? std::sqrt(var / (config.replicates * (config.replicates - 1.0)))
                  : 0.0;
          cells.push_back(SweepCell{tau, bias, alpha, regime == 0, mean, se});
        }
      }
    }
  }
  return cells;
}

}  // namespace fairassign::compas

#endif  // FAIRASSIGN_COMPAS_HPP_
