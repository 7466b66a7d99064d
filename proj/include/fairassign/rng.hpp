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

#ifndef FAIRASSIGN_RNG_HPP_
#define FAIRASSIGN_RNG_HPP_

#include <cstdint>
#include <random>

namespace fairassign {

using Rng = std::mt19937_64;

// Named streams derived from one master seed. Every consumer gets its own
// engine so that adding or removing a policy never perturbs another's draws.
enum StreamId : std::uint64_t {
  kCaseStream = 1,
  kExpertStream = 2,
  kCalibrationStream = 3,
  kSplitStream = 4,
  kBatchStream = 5,
  kJudgeStream = 6,
  kPolicyStreamBase = 100,
  kSweepStreamBase = 10000,
};

inline Rng make_rng(std::uint64_t master_seed, std::uint64_t stream) {
  std::seed_seq seq{
      static_cast<std::uint32_t>(master_seed),
      static_cast<std::uint32_t>(master_seed >> 32),
      static_cast<std::uint32_t>(stream),
      static_cast<std::uint32_t>(stream >> 32),
  };
  return Rng(seq);
}

// Beta(a, b) variate via the two-Gamma construction.
inline double beta_draw(Rng& rng, double a, double b) {
  std::gamma_distribution<double> ga(a, 1.0);
  std::gamma_distribution<double> gb(b, 1.0);
  double x = ga(rng);
  double y = gb(rng);
  while (x + y <= 0.0) {  // underflow of both variates; essentially unreachable
    x = ga(rng);
    y = gb(rng);
  }
  return x / (x + y);
}

// FNV-1a, used to fingerprint draw streams for the paired-comparison checks.
inline std::uint64_t fnv1a(std::uint64_t hash, const void* data, std::size_t len) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    hash ^= bytes[i];
    hash *= 1099511628211ull;
  }
  return hash;
}

constexpr std::uint64_t kFnvOffset = 14695981039346656037ull;

}  // namespace fairassign

#endif  // FAIRASSIGN_RNG_HPP_
