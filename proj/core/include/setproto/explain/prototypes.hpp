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

#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "setproto/data/posting.hpp"
#include "setproto/model/params.hpp"

namespace setproto {

/// Mean contextual salary weight of every prototype over `samples`.
std::vector<double> mean_salary_weights(const Model& model, std::span<const EncodedSample> samples);

struct RankedPrototype {
  int prototype = 0;
  double mean_salary_weight = 0.0;
};

/// Prototypes by descending mean salary weight; ties by ascending id.
std::vector<RankedPrototype> rank_prototypes(const Model& model,
                                             std::span<const EncodedSample> samples);
std::vector<RankedPrototype> rank_by_weight(std::span<const double> mean_weights);

/// [{id, skills: [{name, gamma_s, gamma_lv, delta}], mean_salary_weight}] using
/// the salary means stored in the model. Lists every skill that is a member
/// or carries a nonzero delta.
nlohmann::json export_prototypes(const Model& model, const SkillVocabulary& vocab);

}  // namespace setproto
