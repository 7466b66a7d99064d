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

#ifndef FAIRASSIGN_MATCHING_HPP_
#define FAIRASSIGN_MATCHING_HPP_

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fairassign/domain.hpp"

namespace fairassign {

// Per-round weighted bipartite graph between experts (rows) and cases
// (columns). The decision bit is stored explicitly so that a zero weight at
// p == c cannot be confused with a declined decision.
struct AssignmentGraph {
  int num_experts = 0;  // n
  int num_cases = 0;    // m, with n >= m
  std::vector<double> weights;        // n*m, row-major [expert][case]
  std::vector<std::uint8_t> decision_bits;
  std::vector<Expert> experts;
  std::vector<DecisionCase> cases;

  double weight(int j, int i) const {
    return weights[static_cast<std::size_t>(j) * num_cases + i];
  }
  int bit(int j, int i) const {
    return decision_bits[static_cast<std::size_t>(j) * num_cases + i];
  }
};

inline AssignmentGraph build_graph(const std::vector<DecisionCase>& cases,
                                   const std::vector<Expert>& experts,
                                   CostParam cost) {
  const int n = static_cast<int>(experts.size());
  const int m = static_cast<int>(cases.size());
  if (n < m) {
    throw std::invalid_argument("build_graph: need at least as many experts as cases");
  }
  AssignmentGraph g;
  g.num_experts = n;
  g.num_cases = m;
  g.experts = experts;
  g.cases = cases;
  g.weights.resize(static_cast<std::size_t>(n) * m);
  g.decision_bits.resize(static_cast<std::size_t>(n) * m);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < m; ++i) {
      const int bit = apply_threshold_rule(cases[i], experts[j]);
      g.decision_bits[static_cast<std::size_t>(j) * m + i] =
          static_cast<std::uint8_t>(bit);
      g.weights[static_cast<std::size_t>(j) * m + i] =
          bit ? cases[i].p - cost.c : 0.0;
    }
  }
  return g;
}

// A perfect matching on the case side: assign[i] is the expert of case i.
struct Matching {
  std::vector<int> assign;
  double total_weight = 0.0;
};

namespace detail {

constexpr double kTightEps = 1e-9;
constexpr double kTieTol = 1e-9;

inline void check_injective(const Matching& matching, int num_experts) {
  std::vector<char> used(static_cast<std::size_t>(num_experts), 0);
  for (int j : matching.assign) {
    if (j < 0 || j >= num_experts || used[static_cast<std::size_t>(j)]) {
      throw std::logic_error("matching: assignment not injective/total");
    }
    used[static_cast<std::size_t>(j)] = 1;
  }
}

// Square Hungarian, minimization, O(N^3). Rows are cases (real cases first,
// then zero-cost dummies so every expert column is matched), columns are
// experts. Produces the matching plus dual potentials with
// u[i] + v[j] <= cost(i, j) and equality on matched edges.
struct HungarianResult {
  std::vector<int> row_match;  // row -> col
  std::vector<double> u, v;    // 0-indexed potentials
};

template <typename CostFn>
HungarianResult hungarian_square(int size, const CostFn& cost) {
  const double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(size) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(size) + 1, 0.0);
  std::vector<int> p(static_cast<std::size_t>(size) + 1, 0);
  std::vector<int> way(static_cast<std::size_t>(size) + 1, 0);
  for (int i = 1; i <= size; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(size) + 1, kInf);
    std::vector<char> used(static_cast<std::size_t>(size) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = p[static_cast<std::size_t>(j0)];
      int j1 = 0;
      double delta = kInf;
      for (int j = 1; j <= size; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] -
                           v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= size; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0);
  }
  HungarianResult res;
  res.row_match.assign(static_cast<std::size_t>(size), -1);
  for (int j = 1; j <= size; ++j) {
    if (p[static_cast<std::size_t>(j)] > 0) {
      res.row_match[static_cast<std::size_t>(p[static_cast<std::size_t>(j)]) - 1] =
          j - 1;
    }
  }
  res.u.assign(u.begin() + 1, u.end());
  res.v.assign(v.begin() + 1, v.end());
  return res;
}

// Kuhn-style rematch of `row` within the tight graph, never flipping the
// matched edge of a row <= locked_below.
inline bool rematch(int row, int locked_below,
                    const std::vector<std::vector<int>>& tight_cols,
                    std::vector<int>& row_match, std::vector<int>& col_match,
                    std::vector<char>& visited) {
  for (int j : tight_cols[static_cast<std::size_t>(row)]) {
    if (visited[static_cast<std::size_t>(j)]) continue;
    visited[static_cast<std::size_t>(j)] = 1;
    const int occupant = col_match[static_cast<std::size_t>(j)];
    if (occupant == -1 ||
        (occupant > locked_below &&
         rematch(occupant, locked_below, tight_cols, row_match, col_match,
                 visited))) {
      row_match[static_cast<std::size_t>(row)] = j;
      col_match[static_cast<std::size_t>(j)] = row;
      return true;
    }
  }
  return false;
}

}  // namespace detail

// Exact max-weight matching assigning every case a distinct expert. Handles
// negative weights and rectangular n > m. Among optimal matchings, returns
// the lexicographically smallest assignment vector: after the Hungarian
// solve, the matching is refined inside the graph of dual-tight edges, where
// every perfect matching attains the optimal value.
inline Matching max_weight_matching(const AssignmentGraph& graph) {
  const int n = graph.num_experts;
  const int m = graph.num_cases;
  if (m == 0) return Matching{{}, 0.0};

  // Rows 0..m-1 are real cases, rows m..n-1 zero-cost dummies.
  const auto cost = [&](int row, int col) {
    return row < m ? -graph.weight(col, row) : 0.0;
  };
  auto hung = detail::hungarian_square(n, cost);

  std::vector<int>& row_match = hung.row_match;
  std::vector<int> col_match(static_cast<std::size_t>(n), -1);
  for (int r = 0; r < n; ++r) {
    col_match[static_cast<std::size_t>(row_match[static_cast<std::size_t>(r)])] = r;
  }

  std::vector<std::vector<int>> tight_cols(static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r) {
    for (int j = 0; j < n; ++j) {
      const double rc = cost(r, j) - hung.u[static_cast<std::size_t>(r)] -
                        hung.v[static_cast<std::size_t>(j)];
      if (rc <= detail::kTightEps) tight_cols[static_cast<std::size_t>(r)].push_back(j);
    }
  }

  std::vector<char> visited(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < m; ++i) {
    const int current = row_match[static_cast<std::size_t>(i)];
    for (int j : tight_cols[static_cast<std::size_t>(i)]) {
      if (j >= current) break;
      const int displaced = col_match[static_cast<std::size_t>(j)];
      if (displaced < i) continue;  // column held by an already-fixed case
      // Force (i, j); the displaced row must find another tight column.
      row_match[static_cast<std::size_t>(i)] = j;
      col_match[static_cast<std::size_t>(j)] = i;
      row_match[static_cast<std::size_t>(displaced)] = -1;
      col_match[static_cast<std::size_t>(current)] = -1;
      std::fill(visited.begin(), visited.end(), 0);
      visited[static_cast<std::size_t>(j)] = 1;
      if (detail::rematch(displaced, i, tight_cols, row_match, col_match,
                          visited)) {
        break;
      }
      row_match[static_cast<std::size_t>(displaced)] = j;
      col_match[static_cast<std::size_t>(j)] = displaced;
      row_match[static_cast<std::size_t>(i)] = current;
      col_match[static_cast<std::size_t>(current)] = i;
    }
  }

  Matching result;
  result.assign.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    result.assign[static_cast<std::size_t>(i)] = row_match[static_cast<std::size_t>(i)];
    result.total_weight += graph.weight(result.assign[static_cast<std::size_t>(i)], i);
  }
  detail::check_injective(result, n);
  return result;
}

// Exhaustive oracle over all injective assignments, m <= 8. Shares the
// tie-break rule with max_weight_matching: totals within 1e-9 count as tied
// and the lexicographically smallest assignment wins.
inline Matching brute_force_matching(const AssignmentGraph& graph) {
  const int n = graph.num_experts;
  const int m = graph.num_cases;
  if (m > 8) {
    throw std::invalid_argument("brute_force_matching: m > 8 refused");
  }
  if (m == 0) return Matching{{}, 0.0};

  // Optimistic completion bound: per-case maxima.
  std::vector<double> bound(static_cast<std::size_t>(m) + 1, 0.0);
  for (int i = m; i-- > 0;) {
    double best = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) best = std::max(best, graph.weight(j, i));
    bound[static_cast<std::size_t>(i)] = bound[static_cast<std::size_t>(i) + 1] + best;
  }

  std::vector<char> used(static_cast<std::size_t>(n), 0);
  std::vector<int> stack(static_cast<std::size_t>(m), -1);

  double best_total = -std::numeric_limits<double>::infinity();
  const auto pass1 = [&](auto&& self, int i, double total) -> void {
    if (total + bound[static_cast<std::size_t>(i)] <= best_total) return;
    if (i == m) {
      best_total = std::max(best_total, total);
      return;
    }
    for (int j = 0; j < n; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      used[static_cast<std::size_t>(j)] = 1;
      self(self, i + 1, total + graph.weight(j, i));
      used[static_cast<std::size_t>(j)] = 0;
    }
  };
  pass1(pass1, 0, 0.0);

  Matching result;
  bool done = false;
  const auto pass2 = [&](auto&& self, int i, double total) -> void {
    if (done) return;
    if (total + bound[static_cast<std::size_t>(i)] < best_total - detail::kTieTol) {
      return;
    }
    if (i == m) {
      if (total >= best_total - detail::kTieTol) {
        result.assign = stack;
        result.total_weight = total;
        done = true;
      }
      return;
    }
    for (int j = 0; j < n && !done; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      used[static_cast<std::size_t>(j)] = 1;
      stack[static_cast<std::size_t>(i)] = j;
      self(self, i + 1, total + graph.weight(j, i));
      used[static_cast<std::size_t>(j)] = 0;
    }
  };
  pass2(pass2, 0, 0.0);
  return result;
}

}  // namespace fairassign

#endif  // FAIRASSIGN_MATCHING_HPP_
