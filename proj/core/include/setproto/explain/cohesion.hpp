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
#include <cstdint>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "setproto/data/cooccurrence.hpp"
#include "setproto/data/posting.hpp"
#include "setproto/model/params.hpp"

namespace setproto {

/// Mean co-occurrence weight over the unordered pairs of `subset`.
/// Throws when the subset has fewer than two skills.
double subset_cohesion_score(std::span<const int> subset, const CooccurrenceGraph& graph);

struct CohesionReport {
  double model_mean = 0.0;   // over extracted subsets with at least two skills
  double random_mean = 0.0;  // size-matched random subsets of the same postings
  std::size_t n_subsets = 0;
  int resamples = 0;
};

/// Every view subset selected under deterministic masks is scored; the
/// baseline redraws each one `resamples` times as a uniformly random subset
/// of equal size from the same posting's skills.
CohesionReport cohesion_report(const Model& model, std::span<const EncodedSample> samples,
                               const CooccurrenceGraph& graph, int resamples = 100,
                               std::uint64_t seed = 0);

/// Selected skills of each view, ascending id; views selecting nothing give
/// empty lists.
std::vector<std::vector<int>> extracted_subsets(const Model& model, const SkillSetInput& input);

nlohmann::json to_json(const CohesionReport& r);

}  // namespace setproto
