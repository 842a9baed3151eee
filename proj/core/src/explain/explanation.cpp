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

#include "setproto/explain/explanation.hpp"

#include <algorithm>
#include <numeric>

#include "setproto/model/predict.hpp"

namespace setproto {

Explanation explain(const Model& model, const SkillSetInput& input) {
  const PredictionTrace tr = predict_trace(model, input);
  std::vector<std::size_t> order(tr.skills.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return tr.skills[a] < tr.skills[b]; });

  Explanation e;
  e.context = input.context;
  e.salary = tr.salary;
  for (std::size_t i : order) {
    e.skills.push_back(tr.skills[i]);
    e.levels.push_back(tr.levels[i]);
  }
  for (Eigen::Index h = 0; h < tr.mask.cols(); ++h) {
    ViewSubset v;
    v.view = static_cast<int>(h);
    for (std::size_t i : order) {
      const auto r = static_cast<Eigen::Index>(i);
      v.skills.push_back({tr.skills[i], tr.levels[i], tr.mask(r, h), tr.alpha(r)});
    }
    e.subsets.push_back(std::move(v));
  }
  for (Eigen::Index k = 0; k < tr.weights.size(); ++k)
    e.matches.push_back({static_cast<int>(k), tr.aggregated(k), tr.weights(k), tr.salary_weights(k),
                         tr.contributions(k)});
  return e;
}

nlohmann::json decode_context(const std::vector<double>& context, const SkillVocabulary& vocab) {
  nlohmann::json out = nlohmann::json::object();
  const auto& schema = vocab.context_schema();
  for (std::size_t f = 0; f < schema.size() && f < context.size(); ++f) {
    const ContextField& field = schema[f];
    if (field.kind == ContextField::Kind::kCategorical) {
      const int c = static_cast<int>(context[f]);
      out[field.name] = c >= 0 && c < static_cast<int>(field.categories.size())
                            ? nlohmann::json(field.categories[static_cast<std::size_t>(c)])
                            : nlohmann::json(nullptr);
    } else {
      out[field.name] = context[f] * field.stddev + field.mean;
    }
  }
  return out;
}

namespace {

nlohmann::json level_json(int level, const SkillVocabulary& vocab) {
  return level == kNoLevel ? nlohmann::json(nullptr) : nlohmann::json(vocab.level_name(level));
}

}  // namespace

nlohmann::json to_json(const Explanation& e, const SkillVocabulary& vocab) {
  nlohmann::json skills = nlohmann::json::array();
  for (std::size_t i = 0; i < e.skills.size(); ++i)
    skills.push_back({{"id", e.skills[i]},
                      {"name", vocab.skill_name(e.skills[i])},
                      {"level", level_json(e.levels[i], vocab)}});
  nlohmann::json subsets = nlohmann::json::array();
  for (const auto& v : e.subsets) {
    nlohmann::json members = nlohmann::json::array();
    for (const auto& s : v.skills)
      members.push_back({{"id", s.skill},
                         {"name", vocab.skill_name(s.skill)},
                         {"mask", s.mask},
                         {"alpha", s.alpha},
                         {"selected", s.mask > 0.5}});
    subsets.push_back({{"view", v.view}, {"skills", std::move(members)}});
  }
  nlohmann::json matches = nlohmann::json::array();
  for (const auto& m : e.matches)
    matches.push_back({{"prototype", m.prototype},
                       {"similarity", m.similarity},
                       {"weight", m.weight},
                       {"salary_weight", m.salary_weight},
                       {"contribution", m.contribution}});
  return {{"input", {{"skills", std::move(skills)}, {"context", decode_context(e.context, vocab)}}},
          {"subsets", std::move(subsets)},
          {"prototype_matches", std::move(matches)},
          {"salary", e.salary}};
}

}  // namespace setproto
