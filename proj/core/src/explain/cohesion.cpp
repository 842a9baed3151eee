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

#include "setproto/explain/cohesion.hpp"

#include <algorithm>
#include <random>

#include <spdlog/spdlog.h>

#include "setproto/error.hpp"
#include "setproto/model/forward.hpp"

namespace setproto {

double subset_cohesion_score(std::span<const int> subset, const CooccurrenceGraph& graph) {
  if (subset.size() < 2) throw Error("cohesion score needs a subset of at least two skills");
  double total = 0.0;
  for (std::size_t i = 0; i < subset.size(); ++i)
    for (std::size_t j = i + 1; j < subset.size(); ++j) total += graph.weight(subset[i], subset[j]);
  const double n = static_cast<double>(subset.size());
  return total * 2.0 / (n * (n - 1.0));
}

std::vector<std::vector<int>> extracted_subsets(const Model& model, const SkillSetInput& input) {
  ad::Tape tape;
  const ParamVars p = register_params(tape, model, GradientScope{false, false, false});
  const SampleNodes s = select_subsets(tape, p, model.config, input, ForwardOptions{});
  const Matrix& mask = s.mask.value();
  std::vector<std::vector<int>> out(static_cast<std::size_t>(mask.cols()));
  for (Eigen::Index h = 0; h < mask.cols(); ++h) {
    auto& v = out[static_cast<std::size_t>(h)];
    for (Eigen::Index r = 0; r < mask.rows(); ++r)
      if (mask(r, h) > 0.0) v.push_back(input.skills[static_cast<std::size_t>(r)]);
    std::sort(v.begin(), v.end());
  }
  return out;
}

CohesionReport cohesion_report(const Model& model, std::span<const EncodedSample> samples,
                               const CooccurrenceGraph& graph, int resamples, std::uint64_t seed) {
  if (resamples < 1) throw Error("cohesion baseline needs at least one resample");
  CohesionReport r;
  r.resamples = resamples;
  std::mt19937_64 rng(seed);
  double model_total = 0.0;
  double random_total = 0.0;
  std::vector<int> draw;
  for (const auto& sample : samples) {
    for (const auto& subset : extracted_subsets(model, sample.input)) {
      if (subset.size() < 2) continue;
      ++r.n_subsets;
      model_total += subset_cohesion_score(subset, graph);
      std::vector<int> skills = sample.input.skills;
      double sum = 0.0;
      for (int t = 0; t < resamples; ++t) {
        for (std::size_t i = 0; i < subset.size(); ++i) {
          std::uniform_int_distribution<std::size_t> pick(i, skills.size() - 1);
          std::swap(skills[i], skills[pick(rng)]);
        }
        draw.assign(skills.begin(), skills.begin() + static_cast<std::ptrdiff_t>(subset.size()));
        sum += subset_cohesion_score(draw, graph);
      }
      random_total += sum / resamples;
    }
  }
  if (r.n_subsets == 0) {
    spdlog::warn("no extracted subset has two or more skills; cohesion report is empty");
    return r;
  }
  r.model_mean = model_total / static_cast<double>(r.n_subsets);
  r.random_mean = random_total / static_cast<double>(r.n_subsets);
  return r;
}

nlohmann::json to_json(const CohesionReport& r) {
  return {{"model_mean", r.model_mean},
          {"random_mean", r.random_mean},
          {"n_subsets", r.n_subsets},
          {"resamples", r.resamples}};
}

}  // namespace setproto
