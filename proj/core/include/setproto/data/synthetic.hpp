// Copyright 2026 The setproto Authors
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

#pragma once

#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "setproto/data/posting.hpp"

namespace setproto {

/// Ground truth for planted-group recovery experiments. Each sample takes the
/// union of 1..max_groups_per_sample distinct groups plus a uniform number of
/// background (non-group) skills; its salary is
///   base + sum_k beta_k * [group_k subset of skills] + Normal(0, noise).
struct SyntheticSpec {
  int n_skills = 60;
  std::vector<std::vector<int>> groups;
  std::vector<double> betas;
  double base_salary = 5.0;
  double noise = 0.5;
  int n_samples = 5000;
  std::uint64_t seed = 0;
  int min_groups_per_sample = 1;
  int max_groups_per_sample = 3;
  int min_distractors = 0;
  int max_distractors = 3;

  /// Throws ConfigError on overlapping groups, negative betas, etc.
  void validate() const;
};

/// Builds a spec with `n_groups` disjoint random groups of sizes in
/// [min_size, max_size] and betas uniform in [beta_lo, beta_hi].
SyntheticSpec make_planted_spec(int n_skills, int n_groups, int min_size, int max_size,
                                double beta_lo, double beta_hi, double noise, int n_samples,
                                std::uint64_t seed);

/// Skill names are "skill_NN" (zero-padded) so lexicographic vocabulary
/// order matches skill index.
std::string synthetic_skill_name(int id, int n_skills);

std::vector<RawPosting> generate_synthetic(const SyntheticSpec& spec);

nlohmann::json spec_to_json(const SyntheticSpec& spec);
SyntheticSpec spec_from_json(const nlohmann::json& j);

}  // namespace setproto
