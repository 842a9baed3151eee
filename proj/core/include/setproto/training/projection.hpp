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

#include <cstddef>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "setproto/data/frequent_sets.hpp"
#include "setproto/data/posting.hpp"
#include "setproto/model/params.hpp"

namespace setproto {

/// One extracted subset: the skills a view selects under deterministic masks.
struct SubsetCandidate {
  std::vector<int> skills;     // ascending ids
  std::vector<double> alpha;   // calibrated weights aligned with `skills`
  std::size_t source = 0;      // index of the input it was extracted from
  int view = 0;
};

struct CandidateSet {
  std::vector<SubsetCandidate> items;  // ordered by (source, view)
  Matrix z;                            // transformed subset embeddings, one row per item
};

/// Extracts every non-empty view subset of every input.
CandidateSet extract_candidates(const Model& model, std::span<const SkillSetInput> inputs);

/// Most frequent level of each skill in `samples` (ties to the lower id,
/// absent counted as its own value); kNoLevel for unseen skills.
std::vector<int> modal_levels(std::span<const EncodedSample> samples, int n_skills);

/// Frequent sets as model inputs, each skill at its modal level.
std::vector<SkillSetInput> frequent_set_inputs(const FrequentSetPool& pool,
                                               std::span<const int> levels);

/// For every prototype row, the candidate row of highest similarity.
/// Ties go to the lowest candidate index.
std::vector<std::size_t> nearest_candidates(const Matrix& candidate_z, const Matrix& prototype_z,
                                            double epsilon);

/// Transformed prototype embeddings under the current parameters.
Matrix prototype_representations(const Model& model);

struct ProjectionEvent {
  int epoch = 0;
  std::size_t n_candidates = 0;
  int n_changed = 0;  // prototypes whose membership changed
  double mean_similarity = 0.0;
  std::vector<std::size_t> chosen;  // candidate index per prototype
};

/// Replaces each prototype with its most similar candidate: membership and
/// level weights come from the candidate, delta is cleared and the
/// continuous embedding is reset to the pooled member embeddings.
ProjectionEvent project_prototypes(Model& model, const CandidateSet& candidates);
/// Throws when `inputs` yields no candidates.
ProjectionEvent project_prototypes(Model& model, std::span<const SkillSetInput> inputs);

nlohmann::json to_json(const ProjectionEvent& e);

}  // namespace setproto
