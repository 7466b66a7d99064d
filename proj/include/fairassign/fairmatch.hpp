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

#ifndef FAIRASSIGN_FAIRMATCH_HPP_
#define FAIRASSIGN_FAIRMATCH_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fairassign/domain.hpp"
#include "fairassign/matching.hpp"
#include "fairassign/simplex.hpp"

namespace fairassign {

// Per-round benefit-count band for one group, in benefit units (f applied).
struct BandConstraint {
  int z = 0;
  int lower = 0;
  int upper = 0;
  int group_size = 0;  // m_z for this round
};

// Bands centered on the reference rule's benefit count with alpha * m_z slack,
// endpoints rounded to integers since benefits are counts.
inline std::vector<BandConstraint> compute_bands(
    const std::vector<DecisionCase>& cases, CostParam cost,
    const FairThresholds& theta_star, double alpha, BenefitConvention conv) {
  (void)cost;
  std::vector<BandConstraint> bands;
  for (int z = 0; z <= 1; ++z) {
    int m_z = 0;
    int target = 0;
    for (const auto& dc : cases) {
      if (dc.z != z) continue;
      ++m_z;
      target += benefit_of(apply_threshold_rule(dc.p, theta_star.of(z)), conv);
    }
    if (m_z == 0) continue;
    const double slack = alpha * m_z;
    int lower = static_cast<int>(std::ceil(target - slack - 1e-9));
    int upper = static_cast<int>(std::floor(target + slack + 1e-9));
    lower = std::clamp(lower, 0, m_z);
    upper = std::clamp(upper, 0, m_z);
    bands.push_back(BandConstraint{z, lower, upper, m_z});
  }
  return bands;
}

namespace detail {

inline std::array<int, 2> band_lower(const std::vector<BandConstraint>& bands) {
  std::array<int, 2> lo{0, 0};
  for (const auto& b : bands) lo[static_cast<std::size_t>(b.z)] = b.lower;
  return lo;
}

inline std::array<int, 2> band_upper(const std::vector<BandConstraint>& bands,
                                     const std::array<int, 2>& group_sizes) {
  std::array<int, 2> up{group_sizes[0], group_sizes[1]};
  for (const auto& b : bands) up[static_cast<std::size_t>(b.z)] = b.upper;
  return up;
}

inline std::array<int, 2> group_sizes(const std::vector<DecisionCase>& cases) {
  std::array<int, 2> m_z{0, 0};
  for (const auto& dc : cases) ++m_z[static_cast<std::size_t>(dc.z)];
  return m_z;
}

}  // namespace detail

// Per-group benefit counts of a matching, read off the graph's decision bits.
inline std::array<int, 2> benefit_counts(const AssignmentGraph& graph,
                                         const std::vector<int>& assign,
                                         BenefitConvention conv) {
  std::array<int, 2> counts{0, 0};
  for (int i = 0; i < graph.num_cases; ++i) {
    const int z = graph.cases[static_cast<std::size_t>(i)].z;
    counts[static_cast<std::size_t>(z)] +=
        benefit_of(graph.bit(assign[static_cast<std::size_t>(i)], i), conv);
  }
  return counts;
}

inline bool within_bands(const std::array<int, 2>& counts,
                         const std::vector<BandConstraint>& bands) {
  for (const auto& b : bands) {
    const int c = counts[static_cast<std::size_t>(b.z)];
    if (c < b.lower || c > b.upper) return false;
  }
  return true;
}

// Exhaustive reference solver, m <= 8: max-weight injective assignment whose
// per-group benefit counts lie inside every band. Tie-break as in `matching`.
inline std::optional<Matching> solve_constrained_exact(
    const AssignmentGraph& graph, const std::vector<BandConstraint>& bands,
    BenefitConvention conv) {
  const int n = graph.num_experts;
  const int m = graph.num_cases;
  if (m > 8) {
    throw std::invalid_argument("solve_constrained_exact: m > 8 refused");
  }
  const auto m_z = detail::group_sizes(graph.cases);
  const auto lower = detail::band_lower(bands);
  const auto upper = detail::band_upper(bands, m_z);
  if (m == 0) {
    if (lower[0] > 0 || lower[1] > 0) return std::nullopt;
    return Matching{{}, 0.0};
  }

  // remaining[i][z]: cases with group z at depth >= i.
  std::vector<std::array<int, 2>> remaining(static_cast<std::size_t>(m) + 1,
                                            {0, 0});
  for (int i = m; i-- > 0;) {
    remaining[static_cast<std::size_t>(i)] = remaining[static_cast<std::size_t>(i) + 1];
    ++remaining[static_cast<std::size_t>(i)]
               [static_cast<std::size_t>(graph.cases[static_cast<std::size_t>(i)].z)];
  }
  std::vector<double> bound(static_cast<std::size_t>(m) + 1, 0.0);
  for (int i = m; i-- > 0;) {
    double best = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) best = std::max(best, graph.weight(j, i));
    bound[static_cast<std::size_t>(i)] = bound[static_cast<std::size_t>(i) + 1] + best;
  }

  std::vector<char> used(static_cast<std::size_t>(n), 0);
  std::vector<int> stack(static_cast<std::size_t>(m), -1);
  std::array<int, 2> ben{0, 0};

  const auto reachable = [&](int depth) {
    for (int z = 0; z <= 1; ++z) {
      if (ben[static_cast<std::size_t>(z)] > upper[static_cast<std::size_t>(z)]) return false;
      if (ben[static_cast<std::size_t>(z)] +
              remaining[static_cast<std::size_t>(depth)][static_cast<std::size_t>(z)] <
          lower[static_cast<std::size_t>(z)]) {
        return false;
      }
    }
    return true;
  };

  double best_total = -std::numeric_limits<double>::infinity();
  bool any = false;
  const auto pass1 = [&](auto&& self, int i, double total) -> void {
    if (!reachable(i)) return;
    if (any && total + bound[static_cast<std::size_t>(i)] <= best_total) return;
    if (i == m) {
      any = true;
      best_total = std::max(best_total, total);
      return;
    }
    const int z = graph.cases[static_cast<std::size_t>(i)].z;
    for (int j = 0; j < n; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      used[static_cast<std::size_t>(j)] = 1;
      const int phi = benefit_of(graph.bit(j, i), conv);
      ben[static_cast<std::size_t>(z)] += phi;
      self(self, i + 1, total + graph.weight(j, i));
      ben[static_cast<std::size_t>(z)] -= phi;
      used[static_cast<std::size_t>(j)] = 0;
    }
  };
  pass1(pass1, 0, 0.0);
  if (!any) return std::nullopt;

  Matching result;
  bool done = false;
  const auto pass2 = [&](auto&& self, int i, double total) -> void {
    if (done || !reachable(i)) return;
    if (total + bound[static_cast<std::size_t>(i)] < best_total - detail::kTieTol) return;
    if (i == m) {
      if (total >= best_total - detail::kTieTol) {
        result.assign = stack;
        result.total_weight = total;
        done = true;
      }
      return;
    }
    const int z = graph.cases[static_cast<std::size_t>(i)].z;
    for (int j = 0; j < n && !done; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      used[static_cast<std::size_t>(j)] = 1;
      stack[static_cast<std::size_t>(i)] = j;
      const int phi = benefit_of(graph.bit(j, i), conv);
      ben[static_cast<std::size_t>(z)] += phi;
      self(self, i + 1, total + graph.weight(j, i));
      ben[static_cast<std::size_t>(z)] -= phi;
      used[static_cast<std::size_t>(j)] = 0;
    }
  };
  pass2(pass2, 0, 0.0);
  return result;
}

enum class SolveStatus { kSolved, kInfeasible, kNumericalError };

struct FractionalSolution {
  int num_experts = 0;
  int num_cases = 0;
  std::vector<double> x;  // n*m, row-major like AssignmentGraph
  double objective = 0.0;

  double at(int j, int i) const {
    return x[static_cast<std::size_t>(j) * num_cases + i];
  }
};

struct LpRelaxation {
  SolveStatus status = SolveStatus::kSolved;
  FractionalSolution solution;
};

// LP relaxation of the banded assignment:
//   max sum w_ji x_ji
//   s.t. sum_j x_ji  = 1        for every case i
//        sum_i x_ji <= 1        for every expert j
//        lower_z <= sum_{i in z} f(bit_ji) x_ji <= upper_z  per band
// Vacuous band sides (lower <= 0, upper >= m_z) are dropped.
inline LpRelaxation solve_lp(const AssignmentGraph& graph,
                             const std::vector<BandConstraint>& bands,
                             BenefitConvention conv) {
  const int n = graph.num_experts;
  const int m = graph.num_cases;
  LpRelaxation out;
  if (m == 0) {
    for (const auto& b : bands) {
      if (b.lower > 0) {
        out.status = SolveStatus::kInfeasible;
        return out;
      }
    }
    return out;
  }
  LinearProgram lp;
  lp.num_vars = n * m;
  lp.objective = graph.weights;
  lp.rows.reserve(static_cast<std::size_t>(n + m + 2 * bands.size()));
  for (int i = 0; i < m; ++i) {
    LpRow row;
    row.coeff.assign(static_cast<std::size_t>(lp.num_vars), 0.0);
    for (int j = 0; j < n; ++j) row.coeff[static_cast<std::size_t>(j) * m + i] = 1.0;
    row.relation = '=';
    row.rhs = 1.0;
    lp.rows.push_back(std::move(row));
  }
  for (int j = 0; j < n; ++j) {
    LpRow row;
    row.coeff.assign(static_cast<std::size_t>(lp.num_vars), 0.0);
    for (int i = 0; i < m; ++i) row.coeff[static_cast<std::size_t>(j) * m + i] = 1.0;
    row.relation = '<';
    row.rhs = 1.0;
    lp.rows.push_back(std::move(row));
  }
  for (const auto& band : bands) {
    std::vector<double> coeff(static_cast<std::size_t>(lp.num_vars), 0.0);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < m; ++i) {
        if (graph.cases[static_cast<std::size_t>(i)].z != band.z) continue;
        coeff[static_cast<std::size_t>(j) * m + i] = benefit_of(graph.bit(j, i), conv);
      }
    }
    if (band.lower > 0) {
      lp.rows.push_back(LpRow{coeff, '>', static_cast<double>(band.lower)});
    }
    if (band.upper < band.group_size) {
      lp.rows.push_back(LpRow{std::move(coeff), '<', static_cast<double>(band.upper)});
    }
  }

  const LpSolution sol = solve_linear_program(lp, 1e-7);
  switch (sol.status) {
    case LpStatus::kOptimal:
      out.solution.num_experts = n;
      out.solution.num_cases = m;
      out.solution.x = sol.x;
      out.solution.objective = sol.objective;
      return out;
    case LpStatus::kInfeasible:
      out.status = SolveStatus::kInfeasible;
      return out;
    default:
      out.status = SolveStatus::kNumericalError;
      return out;
  }
}

struct RoundedSolution {
  SolveStatus status = SolveStatus::kSolved;
  Matching matching;
};

namespace detail {

constexpr double kSupportTol = 1e-9;
constexpr double kForbidden = 1e6;

// Max-weight completion of the unfixed cases restricted to the fractional
// support. The support of any feasible fractional point contains a perfect
// matching on the case side, so forbidden edges are never selected; if
// numerics ever break that, the completion falls back to the full residual
// graph.
inline void complete_on_support(const AssignmentGraph& graph,
                                const FractionalSolution& frac,
                                const std::vector<int>& case_ids,
                                const std::vector<int>& expert_ids,
                                std::vector<int>& assign_out) {
  const int rm = static_cast<int>(case_ids.size());
  const int rn = static_cast<int>(expert_ids.size());
  if (rm == 0) return;
  AssignmentGraph sub;
  sub.num_experts = rn;
  sub.num_cases = rm;
  sub.weights.resize(static_cast<std::size_t>(rn) * rm);
  sub.decision_bits.resize(static_cast<std::size_t>(rn) * rm);
  sub.cases.reserve(static_cast<std::size_t>(rm));
  sub.experts.reserve(static_cast<std::size_t>(rn));
  for (int i : case_ids) sub.cases.push_back(graph.cases[static_cast<std::size_t>(i)]);
  for (int j : expert_ids) sub.experts.push_back(graph.experts[static_cast<std::size_t>(j)]);
  for (int jj = 0; jj < rn; ++jj) {
    for (int ii = 0; ii < rm; ++ii) {
      const int j = expert_ids[static_cast<std::size_t>(jj)];
      const int i = case_ids[static_cast<std::size_t>(ii)];
      const bool in_support = frac.at(jj, ii) > kSupportTol;
      sub.weights[static_cast<std::size_t>(jj) * rm + ii] =
          in_support ? graph.weight(j, i) : -kForbidden;
      sub.decision_bits[static_cast<std::size_t>(jj) * rm + ii] =
          static_cast<std::uint8_t>(graph.bit(j, i));
    }
  }
  Matching sol = max_weight_matching(sub);
  if (sol.total_weight <= -kForbidden / 2) {
    for (int jj = 0; jj < rn; ++jj) {
      for (int ii = 0; ii < rm; ++ii) {
        sub.weights[static_cast<std::size_t>(jj) * rm + ii] =
            graph.weight(expert_ids[static_cast<std::size_t>(jj)],
                         case_ids[static_cast<std::size_t>(ii)]);
      }
    }
    sol = max_weight_matching(sub);
  }
  for (int ii = 0; ii < rm; ++ii) {
    assign_out[static_cast<std::size_t>(case_ids[static_cast<std::size_t>(ii)])] =
        expert_ids[static_cast<std::size_t>(sol.assign[static_cast<std::size_t>(ii)])];
  }
}

}  // namespace detail

// Iterative rounding of a feasible fractional solution: repeatedly fix
// variables with x >= 1/2 at 1 (largest first), re-solve the residual LP, and
// once no variable reaches 1/2, round the remaining support by max-weight
// matching. Returned weight and band violation are validated empirically
// against solve_constrained_exact (>= 1/2 of optimum, violation <= 2 units).
inline RoundedSolution round_fractional(const FractionalSolution& fractional,
                                        const AssignmentGraph& graph,
                                        const std::vector<BandConstraint>& bands,
                                        BenefitConvention conv) {
  const int n = graph.num_experts;
  const int m = graph.num_cases;
  RoundedSolution out;
  out.matching.assign.assign(static_cast<std::size_t>(m), -1);
  if (m == 0) return out;

  const auto m_z = detail::group_sizes(graph.cases);
  const auto lower = detail::band_lower(bands);
  const auto upper = detail::band_upper(bands, m_z);

  struct State {
    std::vector<int> assign;
    std::vector<char> case_fixed;
    std::vector<char> expert_used;
    std::array<int, 2> fixed_ben{0, 0};
    std::array<int, 2> remaining_z{0, 0};
  };
  State st;
  st.assign.assign(static_cast<std::size_t>(m), -1);
  st.case_fixed.assign(static_cast<std::size_t>(m), 0);
  st.expert_used.assign(static_cast<std::size_t>(n), 0);
  st.remaining_z = m_z;

  // `frac` always describes the residual spanned by (case_ids, expert_ids).
  FractionalSolution frac = fractional;
  std::vector<int> case_ids(static_cast<std::size_t>(m));
  std::vector<int> expert_ids(static_cast<std::size_t>(n));
  for (int i = 0; i < m; ++i) case_ids[static_cast<std::size_t>(i)] = i;
  for (int j = 0; j < n; ++j) expert_ids[static_cast<std::size_t>(j)] = j;

  // Fixes (j, i) at 1 unless it conflicts, would overshoot a band's upper
  // endpoint, or would strand a lower endpoint.
  const auto try_fix = [&](State& s, int j, int i) {
    if (s.case_fixed[static_cast<std::size_t>(i)] ||
        s.expert_used[static_cast<std::size_t>(j)]) {
      return false;
    }
    const int z = graph.cases[static_cast<std::size_t>(i)].z;
    const int phi = benefit_of(graph.bit(j, i), conv);
    if (s.fixed_ben[static_cast<std::size_t>(z)] + phi >
        upper[static_cast<std::size_t>(z)]) {
      return false;
    }
    if (lower[static_cast<std::size_t>(z)] -
            (s.fixed_ben[static_cast<std::size_t>(z)] + phi) >
        s.remaining_z[static_cast<std::size_t>(z)] - 1) {
      return false;
    }
    s.assign[static_cast<std::size_t>(i)] = j;
    s.case_fixed[static_cast<std::size_t>(i)] = 1;
    s.expert_used[static_cast<std::size_t>(j)] = 1;
    s.fixed_ben[static_cast<std::size_t>(z)] += phi;
    --s.remaining_z[static_cast<std::size_t>(z)];
    return true;
  };

  const auto residual_ids = [&](const State& s, std::vector<int>& cs,
                                std::vector<int>& es) {
    cs.clear();
    es.clear();
    for (int i = 0; i < m; ++i) {
      if (!s.case_fixed[static_cast<std::size_t>(i)]) cs.push_back(i);
    }
    for (int j = 0; j < n; ++j) {
      if (!s.expert_used[static_cast<std::size_t>(j)]) es.push_back(j);
    }
  };

  const auto residual_lp = [&](const State& s, const std::vector<int>& cs,
                               const std::vector<int>& es) -> LpRelaxation {
    if (cs.empty()) return LpRelaxation{};
    AssignmentGraph sub;
    sub.num_experts = static_cast<int>(es.size());
    sub.num_cases = static_cast<int>(cs.size());
    sub.weights.resize(static_cast<std::size_t>(sub.num_experts) * sub.num_cases);
    sub.decision_bits.resize(sub.weights.size());
    for (int i : cs) sub.cases.push_back(graph.cases[static_cast<std::size_t>(i)]);
    for (int j : es) sub.experts.push_back(graph.experts[static_cast<std::size_t>(j)]);
    for (int jj = 0; jj < sub.num_experts; ++jj) {
      for (int ii = 0; ii < sub.num_cases; ++ii) {
        const int j = es[static_cast<std::size_t>(jj)];
        const int i = cs[static_cast<std::size_t>(ii)];
        sub.weights[static_cast<std::size_t>(jj) * sub.num_cases + ii] =
            graph.weight(j, i);
        sub.decision_bits[static_cast<std::size_t>(jj) * sub.num_cases + ii] =
            static_cast<std::uint8_t>(graph.bit(j, i));
      }
    }
    std::vector<BandConstraint> residual;
    for (const auto& b : bands) {
      const int rm_z = s.remaining_z[static_cast<std::size_t>(b.z)];
      if (rm_z == 0) continue;
      residual.push_back(BandConstraint{
          b.z, std::max(0, b.lower - s.fixed_ben[static_cast<std::size_t>(b.z)]),
          std::min(rm_z, b.upper - s.fixed_ben[static_cast<std::size_t>(b.z)]),
          rm_z});
    }
    return solve_lp(sub, residual, conv);
  };

  struct Cand {
    double x;
    int j, i;  // residual indices
  };
  while (!case_ids.empty()) {
    std::vector<Cand> cands;
    for (int jj = 0; jj < static_cast<int>(expert_ids.size()); ++jj) {
      for (int ii = 0; ii < static_cast<int>(case_ids.size()); ++ii) {
        const double v = frac.at(jj, ii);
        if (v >= 0.5 - detail::kSupportTol) cands.push_back(Cand{v, jj, ii});
      }
    }
    if (cands.empty()) break;
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
      if (a.x != b.x) return a.x > b.x;
      if (a.i != b.i) return a.i < b.i;
      return a.j < b.j;
    });

    const State snapshot = st;
    int fixed_now = 0;
    for (const auto& c : cands) {
      fixed_now += try_fix(st, expert_ids[static_cast<std::size_t>(c.j)],
                           case_ids[static_cast<std::size_t>(c.i)])
                       ? 1
                       : 0;
    }
    if (fixed_now == 0) break;

    std::vector<int> new_cases, new_experts;
    residual_ids(st, new_cases, new_experts);
    LpRelaxation res = residual_lp(st, new_cases, new_experts);
    if (res.status == SolveStatus::kInfeasible && fixed_now > 1) {
      // Retry with the single largest fix.
      st = snapshot;
      bool one = false;
      for (const auto& c : cands) {
        if (try_fix(st, expert_ids[static_cast<std::size_t>(c.j)],
                    case_ids[static_cast<std::size_t>(c.i)])) {
          one = true;
          break;
        }
      }
      if (!one) break;
      residual_ids(st, new_cases, new_experts);
      res = residual_lp(st, new_cases, new_experts);
    }
    if (res.status == SolveStatus::kNumericalError) {
      out.status = SolveStatus::kNumericalError;
      return out;
    }
    if (res.status == SolveStatus::kInfeasible) {
      // Abandon this batch; complete from the last feasible fractional point.
      st = snapshot;
      break;
    }
    case_ids = std::move(new_cases);
    expert_ids = std::move(new_experts);
    frac = std::move(res.solution);
  }

  out.matching.assign = st.assign;
  detail::complete_on_support(graph, frac, case_ids, expert_ids,
                              out.matching.assign);
  out.matching.total_weight = 0.0;
  for (int i = 0; i < m; ++i) {
    out.matching.total_weight +=
        graph.weight(out.matching.assign[static_cast<std::size_t>(i)], i);
  }
  detail::check_injective(out.matching, n);
  return out;
}

// True iff some injective assignment satisfies every band: exact enumeration
// for m <= 8, otherwise the unconstrained optimum's counts or LP feasibility
// (relaxation-based, so a proxy at that scale).
inline bool check_feasibility(const AssignmentGraph& graph,
                              const std::vector<BandConstraint>& bands,
                              BenefitConvention conv) {
  if (graph.num_cases <= 8) {
    return solve_constrained_exact(graph, bands, conv).has_value();
  }
  const Matching unconstrained = max_weight_matching(graph);
  if (within_bands(benefit_counts(graph, unconstrained.assign, conv), bands)) {
    return true;
  }
  return solve_lp(graph, bands, conv).status == SolveStatus::kSolved;
}

}  // namespace fairassign

#endif  // FAIRASSIGN_FAIRMATCH_HPP_
