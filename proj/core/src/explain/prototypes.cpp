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

#include "setproto/explain/prototypes.hpp"

#include <algorithm>

#include "setproto/model/forward.hpp"

namespace setproto {

std::vector<double> mean_salary_weights(const Model& model, std::span<const EncodedSample> samples) {
  const int m = model.config.n_prototypes;
  std::vector<double> out(static_cast<std::size_t>(m), 0.0);
  if (samples.empty() || !model.config.uses_prototypes()) return out;
  constexpr std::size_t kBatch = 256;
  RowVector sum = RowVector::Zero(m);
  for (std::size_t begin = 0; begin < samples.size(); begin += kBatch) {
    const std::size_t end = std::min(samples.size(), begin + kBatch);
    std::vector<const SkillSetInput*> batch;
    for (std::size_t i = begin; i < end; ++i) batch.push_back(&samples[i].input);
    ad::Tape tape;
    const ParamVars p = register_params(tape, model, GradientScope{false, false, false});
    sum += context_salary_weights(tape, p, model.config, batch).value().colwise().sum();
  }
  for (int k = 0; k < m; ++k)
    out[static_cast<std::size_t>(k)] = sum(k) / static_cast<double>(samples.size());
  return out;
}

std::vector<RankedPrototype> rank_by_weight(std::span<const double> mean_weights) {
  std::vector<RankedPrototype> out;
  for (std::size_t k = 0; k < mean_weights.size(); ++k)
    out.push_back({static_cast<int>(k), mean_weights[k]});
  std::stable_sort(out.begin(), out.end(), [](const RankedPrototype& a, const RankedPrototype& b) {
    return a.mean_salary_weight > b.mean_salary_weight;
  });
  return out;
}

std::vector<RankedPrototype> rank_prototypes(const Model& model,
                                             std::span<const EncodedSample> samples) {
  return rank_by_weight(mean_salary_weights(model, samples));
}

nlohmann::json export_prototypes(const Model& model, const SkillVocabulary& vocab) {
  const PrototypeBank& bank = model.bank;
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index k = 0; k < bank.membership.rows(); ++k) {
    nlohmann::json skills = nlohmann::json::array();
    for (Eigen::Index j = 0; j < bank.membership.cols(); ++j) {
      const double s = bank.membership(k, j);
      const double d = bank.delta(k, j);
      if (s == 0.0 && d == 0.0) continue;
      skills.push_back({{"name", vocab.skill_name(static_cast<int>(j))},
                        {"gamma_s", s},
                        {"gamma_lv", bank.importance(k, j)},
                        {"delta", d}});
    }
    const auto kk = static_cast<std::size_t>(k);
    const double mean =
        kk < model.prototype_salary_means.size() ? model.prototype_salary_means[kk] : 0.0;
    out.push_back({{"id", k}, {"skills", std::move(skills)}, {"mean_salary_weight", mean}});
  }
  return out;
}

}  // namespace setproto
