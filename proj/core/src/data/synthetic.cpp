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

#include "setproto/data/synthetic.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <set>

#include "setproto/error.hpp"

namespace setproto {

void SyntheticSpec::validate() const {
  if (n_skills < 1) throw ConfigError("synthetic: n_skills must be positive");
  if (groups.empty()) throw ConfigError("synthetic: at least one group required");
  if (betas.size() != groups.size()) throw ConfigError("synthetic: one beta per group required");
  std::set<int> used;
  for (const auto& g : groups) {
    if (g.empty()) throw ConfigError("synthetic: empty group");
    for (int s : g) {
      if (s < 0 || s >= n_skills) throw ConfigError("synthetic: group skill out of range");
      if (!used.insert(s).second) throw ConfigError("synthetic: groups must be disjoint");
    }
  }
  for (double b : betas)
    if (!(b >= 0.0)) throw ConfigError("synthetic: betas must be non-negative");
  if (!(noise >= 0.0)) throw ConfigError("synthetic: noise must be non-negative");
  if (!(base_salary > 0.0)) throw ConfigError("synthetic: base salary must be positive");
  if (n_samples < 0) throw ConfigError("synthetic: n_samples must be non-negative");
  if (min_groups_per_sample < 1 || max_groups_per_sample < min_groups_per_sample ||
      max_groups_per_sample > static_cast<int>(groups.size()))
    throw ConfigError("synthetic: invalid groups-per-sample range");
  if (min_distractors < 0 || max_distractors < min_distractors ||
      max_distractors > n_skills - static_cast<int>(used.size()))
    throw ConfigError("synthetic: invalid distractor range");
}

SyntheticSpec make_planted_spec(int n_skills, int n_groups, int min_size, int max_size,
                                double beta_lo, double beta_hi, double noise, int n_samples,
                                std::uint64_t seed) {
  if (n_groups < 1 || min_size < 1 || max_size < min_size || n_groups * max_size > n_skills)
    throw ConfigError("synthetic: cannot place the requested groups");
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<int> perm(static_cast<std::size_t>(n_skills));
  for (int i = 0; i < n_skills; ++i) perm[static_cast<std::size_t>(i)] = i;
  for (std::size_t i = perm.size(); i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(perm[i - 1], perm[pick(rng)]);
  }
  SyntheticSpec spec;
  spec.n_skills = n_skills;
  spec.noise = noise;
  spec.n_samples = n_samples;
  spec.seed = seed;
  std::size_t next = 0;
  std::uniform_int_distribution<int> size_dist(min_size, max_size);
  std::uniform_real_distribution<double> beta_dist(beta_lo, beta_hi);
  for (int k = 0; k < n_groups; ++k) {
    const int size = size_dist(rng);
    std::vector<int> g(perm.begin() + static_cast<std::ptrdiff_t>(next),
                       perm.begin() + static_cast<std::ptrdiff_t>(next + static_cast<std::size_t>(size)));
    next += static_cast<std::size_t>(size);
    std::sort(g.begin(), g.end());
    spec.groups.push_back(std::move(g));
    spec.betas.push_back(beta_dist(rng));
  }
  spec.max_groups_per_sample = std::min(3, n_groups);
  return spec;
}

std::string synthetic_skill_name(int id, int n_skills) {
  int width = 1;
  for (int v = std::max(n_skills - 1, 1); v >= 10; v /= 10) ++width;
  char buf[32];
  std::snprintf(buf, sizeof buf, "skill_%0*d", width, id);
  return buf;
}

std::vector<RawPosting> generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::vector<int> background;
  {
    std::set<int> in_group;
    for (const auto& g : spec.groups) in_group.insert(g.begin(), g.end());
    for (int s = 0; s < spec.n_skills; ++s)
      if (!in_group.count(s)) background.push_back(s);
  }
  const int k = static_cast<int>(spec.groups.size());
  std::uniform_int_distribution<int> n_groups_dist(spec.min_groups_per_sample, spec.max_groups_per_sample);
  std::uniform_int_distribution<int> n_distract_dist(spec.min_distractors, spec.max_distractors);
  std::normal_distribution<double> noise(0.0, 1.0);

  std::vector<RawPosting> out;
  out.reserve(static_cast<std::size_t>(spec.n_samples));
  std::vector<int> order(static_cast<std::size_t>(k));
  for (int s = 0; s < spec.n_samples; ++s) {
    for (int g = 0; g < k; ++g) order[static_cast<std::size_t>(g)] = g;
    const int take = n_groups_dist(rng);
    // Partial Fisher-Yates: the first `take` entries are a uniform draw.
    for (int i = 0; i < take; ++i) {
      std::uniform_int_distribution<int> pick(i, k - 1);
      std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(pick(rng))]);
    }
    std::set<int> skills;
    double salary = spec.base_salary;
    for (int i = 0; i < take; ++i) {
      const auto g = static_cast<std::size_t>(order[static_cast<std::size_t>(i)]);
      skills.insert(spec.groups[g].begin(), spec.groups[g].end());
      salary += spec.betas[g];
    }
    std::vector<int> pool = background;
    const int distract = n_distract_dist(rng);
    for (int i = 0; i < distract; ++i) {
      std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(i), pool.size() - 1);
      std::swap(pool[static_cast<std::size_t>(i)], pool[pick(rng)]);
      skills.insert(pool[static_cast<std::size_t>(i)]);
    }
    const double eps = noise(rng);
    salary += spec.noise * eps;
    RawPosting p;
    for (int id : skills) p.skills.push_back({synthetic_skill_name(id, spec.n_skills), std::nullopt});
    p.salary = std::max(salary, 1e-3);
    out.push_back(std::move(p));
  }
  return out;
}

nlohmann::json spec_to_json(const SyntheticSpec& spec) {
  return {{"n_skills", spec.n_skills},
          {"groups", spec.groups},
          {"betas", spec.betas},
          {"base_salary", spec.base_salary},
          {"noise", spec.noise},
          {"n_samples", spec.n_samples},
          {"seed", spec.seed},
          {"min_groups_per_sample", spec.min_groups_per_sample},
          {"max_groups_per_sample", spec.max_groups_per_sample},
          {"min_distractors", spec.min_distractors},
          {"max_distractors", spec.max_distractors}};
}

SyntheticSpec spec_from_json(const nlohmann::json& j) {
  SyntheticSpec s;
  s.n_skills = j.value("n_skills", s.n_skills);
  s.groups = j.value("groups", s.groups);
  s.betas = j.value("betas", s.betas);
  s.base_salary = j.value("base_salary", s.base_salary);
  s.noise = j.value("noise", s.noise);
  s.n_samples = j.value("n_samples", s.n_samples);
  s.seed = j.value("seed", s.seed);
  s.min_groups_per_sample = j.value("min_groups_per_sample", s.min_groups_per_sample);
  s.max_groups_per_sample = j.value("max_groups_per_sample", s.max_groups_per_sample);
  s.min_distractors = j.value("min_distractors", s.min_distractors);
  s.max_distractors = j.value("max_distractors", s.max_distractors);
  s.validate();
  return s;
}

}  // namespace setproto
