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

#include "setproto/data/posting.hpp"
#include "setproto/model/params.hpp"

namespace setproto {

/// Everything the deterministic inference path computed for one input.
struct PredictionTrace {
  std::vector<int> skills;  // input order
  std::vector<int> levels;
  Matrix scores;             // n x H attention scores
  Matrix mask;               // n x H, hard 0/1
  ColVector alpha;           // n calibrated importance weights
  Matrix subset_embeddings;  // H x d
  Matrix view_similarities;  // H x M
  RowVector aggregated;      // M, summed over views
  RowVector weights;         // M, softmax over prototypes
  RowVector salary_weights;  // M
  RowVector contributions;   // M, weights .* salary_weights
  double salary = 0.0;
};

/// Deterministic (hard-mask, noise-free) prediction. Pure and reentrant.
double predict(const Model& model, const SkillSetInput& input);
PredictionTrace predict_trace(const Model& model, const SkillSetInput& input);
std::vector<double> predict_batch(const Model& model, std::span<const SkillSetInput> inputs,
                                  std::size_t batch_size = 256);
std::vector<double> predict_samples(const Model& model, std::span<const EncodedSample> samples,
                                    std::size_t batch_size = 256);

}  // namespace setproto
