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

#ifndef FAIRASSIGN_BELIEF_HPP_
#define FAIRASSIGN_BELIEF_HPP_

#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fairassign/domain.hpp"
#include "fairassign/rng.hpp"

namespace fairassign {

// Posterior state for one (expert, group) threshold: Beta prior shapes plus
// the running bounds implied by noiseless threshold observations. A decision
// of 1 at p caps the threshold from above, a decision of 0 raises the floor.
//
// The normalized variable (theta - lo) / (hi - lo) follows Beta(beta, alpha):
// the density's exponent on (hi - theta) is alpha - 1 and on (theta - lo) is
// beta - 1, so the shape order is swapped relative to the usual
// Beta(alpha, beta) reading. sample() and map_estimate() depend on this.
struct ThresholdBelief {
  double alpha = 1.0;
  double beta = 1.0;
  double lo = 0.0;
  double hi = 1.0;

  void observe(double p, int decision) {
    if (p < 0.0 || p > 1.0) {
      throw std::invalid_argument("ThresholdBelief::observe: p outside [0, 1]");
    }
    double new_lo = lo, new_hi = hi;
    if (decision == 1) {
      new_hi = std::min(new_hi, p);
    } else {
      new_lo = std::max(new_lo, p);
    }
    if (new_lo >= new_hi) {
      throw std::logic_error(
          "ThresholdBelief::observe: inconsistent observations (lo >= hi)");
    }
    lo = new_lo;
    hi = new_hi;
  }

  double density(double theta) const {
    require_valid();
    if (theta < lo || theta > hi) return 0.0;
    const double width = hi - lo;
    const double log_norm = std::lgamma(alpha + beta) - std::lgamma(alpha) -
                            std::lgamma(beta) -
                            (alpha + beta - 1.0) * std::log(width);
    // Unit exponents contribute nothing; skipping them avoids 0 * log(0) at
    // the boundaries.
    double log_kernel = 0.0;
    if (alpha != 1.0) log_kernel += (alpha - 1.0) * std::log(hi - theta);
    if (beta != 1.0) log_kernel += (beta - 1.0) * std::log(theta - lo);
    return std::exp(log_norm + log_kernel);
  }

  double sample(Rng& rng) const {
    require_valid();
    const double u = beta_draw(rng, beta, alpha);  // note the shape swap
    return lo + u * (hi - lo);
  }

  double map_estimate() const {
    require_valid();
    const double a = beta, b = alpha;  // shapes of the normalized variable
    double s;
    if (a > 1.0 && b > 1.0) {
      s = (a - 1.0) / (a + b - 2.0);
    } else if (a == 1.0 && b == 1.0) {
      s = 0.5;  // flat posterior: midpoint by documented tie-break
    } else if (a <= 1.0 && b > 1.0) {
      s = 0.0;
    } else if (a > 1.0 && b <= 1.0) {
      s = 1.0;
    } else {
      // Both exponents negative: boundary modes; the faster divergence wins,
      // ties go to the lower boundary.
      s = a <= b ? 0.0 : 1.0;
    }
    return lo + s * (hi - lo);
  }

 private:
  void require_valid() const {
    if (!(lo < hi)) {
      throw std::logic_error("ThresholdBelief: degenerate interval (lo >= hi)");
    }
    if (!(alpha > 0.0) || !(beta > 0.0)) {
      throw std::invalid_argument("ThresholdBelief: shapes must be positive");
    }
  }
};

struct Observation {
  int expert_id = 0;
  int z = 0;
  double p = 0.0;
  int decision = 0;
};

// One belief per (expert, group) pair plus the observation log.
class BeliefSet {
 public:
  BeliefSet() = default;
  BeliefSet(const std::vector<Expert>& experts, double prior_alpha,
            double prior_beta) {
    for (const auto& e : experts) {
      for (int z = 0; z <= 1; ++z) {
        beliefs_[{e.id, z}] = ThresholdBelief{prior_alpha, prior_beta, 0.0, 1.0};
      }
    }
  }

  void set_prior(int expert_id, int z, double prior_alpha, double prior_beta) {
    beliefs_[{expert_id, z}] = ThresholdBelief{prior_alpha, prior_beta, 0.0, 1.0};
  }

  const ThresholdBelief& at(int expert_id, int z) const {
    const auto it = beliefs_.find({expert_id, z});
    if (it == beliefs_.end()) {
      throw std::out_of_range("BeliefSet: no belief for (expert, z)");
    }
    return it->second;
  }

  void observe(int expert_id, int z, double p, int decision) {
    const auto it = beliefs_.find({expert_id, z});
    if (it == beliefs_.end()) {
      throw std::out_of_range("BeliefSet: no belief for (expert, z)");
    }
    it->second.observe(p, decision);
    log_.push_back(Observation{expert_id, z, p, decision});
  }

  const std::vector<Observation>& log() const { return log_; }
  std::size_t size() const { return beliefs_.size(); }

 private:
  std::map<std::pair<int, int>, ThresholdBelief> beliefs_;
  std::vector<Observation> log_;
};

}  // namespace fairassign

#endif  // FAIRASSIGN_BELIEF_HPP_
