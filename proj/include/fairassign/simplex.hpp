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

#ifndef FAIRASSIGN_SIMPLEX_HPP_
#define FAIRASSIGN_SIMPLEX_HPP_

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace fairassign {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

struct LpRow {
  std::vector<double> coeff;
  char relation = '<';  // '<', '=', '>'
  double rhs = 0.0;
};

struct LinearProgram {
  int num_vars = 0;
  std::vector<double> objective;  // maximized
  std::vector<LpRow> rows;
};

struct LpSolution {
  LpStatus status = LpStatus::kOptimal;
  double objective = 0.0;
  std::vector<double> x;
  int iterations = 0;
};

namespace detail {

constexpr double kPivotTol = 1e-10;

// Dense two-phase tableau simplex. Pricing is Dantzig while the objective
// moves and falls back to Bland's rule after a degenerate stall, which keeps
// the pivot sequence cycle-free and deterministic.
class SimplexTableau {
 public:
  SimplexTableau(const LinearProgram& lp, double tol)
      : tol_(tol), num_rows_(static_cast<int>(lp.rows.size())) {
    if (static_cast<int>(lp.objective.size()) != lp.num_vars) {
      throw std::invalid_argument("simplex: objective size mismatch");
    }
    // Column layout: structural | slack/surplus | artificial.
    num_structural_ = lp.num_vars;
    int n_slack = 0, n_art = 0;
    for (const auto& row : lp.rows) {
      const bool flipped = row.rhs < 0.0;
      const char rel = !flipped             ? row.relation
                       : row.relation == '<' ? '>'
                       : row.relation == '>' ? '<'
                                             : '=';
      if (rel != '=') ++n_slack;
      if (rel != '<') ++n_art;
    }
    num_cols_ = num_structural_ + n_slack + n_art;
    first_artificial_ = num_structural_ + n_slack;
    width_ = num_cols_ + 1;
    tab_.assign(static_cast<std::size_t>(num_rows_ + 2) * width_, 0.0);
    basis_.assign(static_cast<std::size_t>(num_rows_), -1);

    int slack_at = num_structural_;
    int art_at = first_artificial_;
    for (int r = 0; r < num_rows_; ++r) {
      const LpRow& row = lp.rows[static_cast<std::size_t>(r)];
      if (static_cast<int>(row.coeff.size()) != lp.num_vars) {
        throw std::invalid_argument("simplex: row size mismatch");
      }
      const double sign = row.rhs < 0.0 ? -1.0 : 1.0;
      const char rel = sign > 0.0           ? row.relation
                       : row.relation == '<' ? '>'
                       : row.relation == '>' ? '<'
                                             : '=';
      double* t = row_ptr(r);
      for (int c = 0; c < num_structural_; ++c) {
        t[c] = sign * row.coeff[static_cast<std::size_t>(c)];
      }
      t[num_cols_] = sign * row.rhs;
      if (rel == '<') {
        t[slack_at] = 1.0;
        basis_[static_cast<std::size_t>(r)] = slack_at++;
      } else if (rel == '>') {
        t[slack_at++] = -1.0;
        t[art_at] = 1.0;
        basis_[static_cast<std::size_t>(r)] = art_at++;
      } else {
        t[art_at] = 1.0;
        basis_[static_cast<std::size_t>(r)] = art_at++;
      }
    }

    // Phase-2 objective row: z - sum c_j x_j = 0.
    double* zrow = row_ptr(num_rows_);
    for (int c = 0; c < num_structural_; ++c) {
      zrow[c] = -lp.objective[static_cast<std::size_t>(c)];
    }
    // Phase-1 objective row: maximize -(sum of artificials), priced out
    // against the rows whose artificial starts basic.
    double* wrow = row_ptr(num_rows_ + 1);
    for (int c = first_artificial_; c < num_cols_; ++c) wrow[c] = 1.0;
    for (int r = 0; r < num_rows_; ++r) {
      if (basis_[static_cast<std::size_t>(r)] >= first_artificial_) {
        const double* t = row_ptr(r);
        for (int c = 0; c <= num_cols_; ++c) wrow[c] -= t[c];
      }
    }
  }

  LpStatus run(int max_iterations, int& iterations) {
    if (first_artificial_ < num_cols_) {
      const LpStatus s =
          pivot_loop(num_rows_ + 1, /*ban_artificials=*/false, max_iterations,
                     iterations);
      if (s == LpStatus::kIterationLimit) return s;
      if (row_ptr(num_rows_ + 1)[num_cols_] < -tol_) return LpStatus::kInfeasible;
      drive_out_artificials();
    }
    return pivot_loop(num_rows_, /*ban_artificials=*/true, max_iterations,
                      iterations);
  }

  double value(int col) const {
    for (int r = 0; r < num_rows_; ++r) {
      if (basis_[static_cast<std::size_t>(r)] == col) {
        return row_ptr(r)[num_cols_];
      }
    }
    return 0.0;
  }

  std::vector<double> structural_values() const {
    std::vector<double> x(static_cast<std::size_t>(num_structural_), 0.0);
    for (int r = 0; r < num_rows_; ++r) {
      const int b = basis_[static_cast<std::size_t>(r)];
      if (b < num_structural_) {
        x[static_cast<std::size_t>(b)] = row_ptr(r)[num_cols_];
      }
    }
    return x;
  }

 private:
  double* row_ptr(int r) { return tab_.data() + static_cast<std::size_t>(r) * width_; }
  const double* row_ptr(int r) const {
    return tab_.data() + static_cast<std::size_t>(r) * width_;
  }

  void pivot(int pr, int pc) {
    double* prow = row_ptr(pr);
    const double inv = 1.0 / prow[pc];
    for (int c = 0; c <= num_cols_; ++c) prow[c] *= inv;
    prow[pc] = 1.0;
    for (int r = 0; r < num_rows_ + 2; ++r) {
      if (r == pr) continue;
      double* t = row_ptr(r);
      const double factor = t[pc];
      if (factor == 0.0) continue;
      for (int c = 0; c <= num_cols_; ++c) t[c] -= factor * prow[c];
      t[pc] = 0.0;
    }
    basis_[static_cast<std::size_t>(pr)] = pc;
  }

  // Ratio test; ties go to the row whose basic variable has the smallest
  // column index.
  int leaving_row(int pc) const {
    int best = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int r = 0; r < num_rows_; ++r) {
      const double a = row_ptr(r)[pc];
      if (a <= kPivotTol) continue;
      const double ratio = row_ptr(r)[num_cols_] / a;
      if (ratio < best_ratio - 1e-12 ||
          (ratio < best_ratio + 1e-12 &&
           (best == -1 || basis_[static_cast<std::size_t>(r)] <
                              basis_[static_cast<std::size_t>(best)]))) {
        best_ratio = std::min(best_ratio, ratio);
        best = r;
      }
    }
    return best;
  }

  LpStatus pivot_loop(int obj_row, bool ban_artificials, int max_iterations,
                      int& iterations) {
    const int limit = ban_artificials ? first_artificial_ : num_cols_;
    int stall = 0;
    bool bland = false;
    double last_obj = row_ptr(obj_row)[num_cols_];
    while (true) {
      if (iterations++ >= max_iterations) return LpStatus::kIterationLimit;
      const double* orow = row_ptr(obj_row);
      int pc = -1;
      if (bland) {
        for (int c = 0; c < limit; ++c) {
          if (orow[c] < -tol_) {
            pc = c;
            break;
          }
        }
      } else {
        double best = -tol_;
        for (int c = 0; c < limit; ++c) {
          if (orow[c] < best) {
            best = orow[c];
            pc = c;
          }
        }
      }
      if (pc == -1) return LpStatus::kOptimal;
      const int pr = leaving_row(pc);
      if (pr == -1) return LpStatus::kUnbounded;
      pivot(pr, pc);
      const double obj = row_ptr(obj_row)[num_cols_];
      if (obj > last_obj + 1e-12) {
        last_obj = obj;
        stall = 0;
        bland = false;
      } else if (++stall >= 20) {
        bland = true;
      }
    }
  }

  // Remove artificials from the basis after phase 1; rows with no usable
  // pivot element are redundant and keep their artificial at level zero.
  void drive_out_artificials() {
    for (int r = 0; r < num_rows_; ++r) {
      if (basis_[static_cast<std::size_t>(r)] < first_artificial_) continue;
      const double* t = row_ptr(r);
      int pc = -1;
      for (int c = 0; c < first_artificial_; ++c) {
        if (std::abs(t[c]) > 1e-8) {
          pc = c;
          break;
        }
      }
      if (pc != -1) pivot(r, pc);
    }
  }

  double tol_;
  int num_rows_;
  int num_structural_ = 0;
  int num_cols_ = 0;
  int first_artificial_ = 0;
  int width_ = 0;
  std::vector<double> tab_;
  std::vector<int> basis_;
};

}  // namespace detail

inline LpSolution solve_linear_program(const LinearProgram& lp,
                                       double tol = 1e-7,
                                       int max_iterations = 50000) {
  LpSolution sol;
  if (lp.num_vars == 0) {
    for (const auto& row : lp.rows) {
      const bool ok = row.relation == '<'   ? row.rhs >= -tol
                      : row.relation == '>' ? row.rhs <= tol
                                            : std::abs(row.rhs) <= tol;
      if (!ok) {
        sol.status = LpStatus::kInfeasible;
        return sol;
      }
    }
    return sol;
  }
  detail::SimplexTableau tableau(lp, tol);
  sol.status = tableau.run(max_iterations, sol.iterations);
  if (sol.status == LpStatus::kOptimal) {
    sol.x = tableau.structural_values();
    double obj = 0.0;
    for (int c = 0; c < lp.num_vars; ++c) {
      obj += lp.objective[static_cast<std::size_t>(c)] * sol.x[static_cast<std::size_t>(c)];
    }
    sol.objective = obj;
  }
  return sol;
}

}  // namespace fairassign

#endif  // FAIRASSIGN_SIMPLEX_HPP_
