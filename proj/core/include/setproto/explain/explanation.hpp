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

#include <vector>

#include <nlohmann/json.hpp>

#include "setproto/data/posting.hpp"
#include "setproto/model/params.hpp"

namespace setproto {

struct ExplainedSkill {
  int skill = 0;
  int level = kNoLevel;
  double mask = 0.0;
  double alpha = 0.0;
};

struct ViewSubset {
  int view = 0;
  std::vector<ExplainedSkill> skills;  // every input skill, ascending id
};

struct PrototypeMatch {
  int prototype = 0;
  double similarity = 0.0;  // summed over views
  double weight = 0.0;      // softmax over prototypes
  double salary_weight = 0.0;
  double contribution = 0.0;  // weight * salary_weight
};

/// Deterministic-mode reasoning trace of one prediction. Per-skill lists are
/// ordered by skill id, so permuting the input does not change it.
struct Explanation {
  std::vector<int> skills;
  std::vector<int> levels;
  std::vector<double> context;
  std::vector<ViewSubset> subsets;
  std::vector<PrototypeMatch> matches;  // empty for the no-prototype variant
  double salary = 0.0;
};

Explanation explain(const Model& model, const SkillSetInput& input);

/// Category names and raw numeric values for an encoded context record;
/// missing categorical values become null.
nlohmann::json decode_context(const std::vector<double>& context, const SkillVocabulary& vocab);
nlohmann::json to_json(const Explanation& e, const SkillVocabulary& vocab);

}  // namespace setproto
