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

#ifndef FAIRASSIGN_TESTS_FIXTURE_HPP_
#define FAIRASSIGN_TESTS_FIXTURE_HPP_

#include <cmath>
#include <fstream>
#include <random>
#include <string>

#include "fairassign/rng.hpp"

namespace testutil {

struct FixtureStats {
  int valid = 0;
  int other_race = 0;
  int missing = 0;
};

// Deterministic ProPublica-schema CSV with quoted names, out-of-model races,
// and a few rows with missing fields. The label depends on priors and age so
// the logistic models have signal to find.
inline FixtureStats write_compas_fixture(const std::string& path, int rows,
                                         std::uint64_t seed = 99) {
  std::ofstream out(path, std::ios::binary);
  fairassign::Rng rng = fairassign::make_rng(seed, 77);
  FixtureStats stats;
  out << "id,name,race,sex,age,juv_fel_count,juv_misd_count,juv_other_count,"
         "priors_count,c_charge_degree,two_year_recid\n";
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < rows; ++i) {
    const double race_draw = unif(rng);
    std::string race;
    bool modeled = true;
    if (race_draw < 0.45) {
      race = "African-American";
    } else if (race_draw < 0.80) {
      race = "Caucasian";
    } else if (race_draw < 0.90) {
      race = "Hispanic";
      modeled = false;
    } else {
      race = "Other";
      modeled = false;
    }
    const bool male = unif(rng) < 0.8;
    const int age = 18 + static_cast<int>(unif(rng) * 52.0);
    const int juv_fel = unif(rng) < 0.1 ? 1 : 0;
    const int juv_misd = unif(rng) < 0.15 ? 1 : 0;
    const int juv_other = unif(rng) < 0.1 ? 1 : 0;
    int priors = 0;
    while (priors < 20 && unif(rng) < 0.55) ++priors;
    const bool felony = unif(rng) < 0.6;
    const double logit = -0.4 + 0.28 * priors - 0.045 * (age - 35) +
                         0.3 * (race == "African-American" ? 1.0 : 0.0);
    const int recid = unif(rng) < 1.0 / (1.0 + std::exp(-logit)) ? 1 : 0;
    const bool drop_age = unif(rng) < 0.02;

    out << i << ",\"Roe, Case" << i << "\"," << race << ','
        << (male ? "Male" : "Female") << ',';
    if (drop_age) {
      out << "";
    } else {
      out << age;
    }
    out << ',' << juv_fel << ',' << juv_misd << ',' << juv_other << ','
        << priors << ',' << (felony ? 'F' : 'M') << ',' << recid << '\n';

    if (!modeled) {
      ++stats.other_race;
    } else if (drop_age) {
      ++stats.missing;
    } else {
      ++stats.valid;
    }
  }
  return stats;
}

}  // namespace testutil

#endif  // FAIRASSIGN_TESTS_FIXTURE_HPP_
