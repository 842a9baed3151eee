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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "setproto/data/cooccurrence.hpp"
#include "setproto/data/frequent_sets.hpp"
#include "setproto/data/posting.hpp"
#include "setproto/explain/metrics.hpp"
#include "setproto/model/params.hpp"
#include "setproto/training/config.hpp"
#include "setproto/training/projection.hpp"

namespace setproto {

struct EpochLog {
  int epoch = 0;  // 1-based; refinement epochs continue the count
  std::string phase;  // "train" or "refine"
  double temperature = 0.0;
  double pred = 0.0;
  double con = 0.0;
  double rep = 0.0;
  double div = 0.0;
  double l1 = 0.0;  // lambda_p * |delta|_1 at epoch end
  double total = 0.0;
  std::optional<MetricReport> val;
};

struct TrainReport {
  TrainConfig config;
  std::size_t n_train = 0;
  std::size_t n_val = 0;
  std::size_t pool_size = 0;
  std::vector<EpochLog> epochs;
  std::vector<ProjectionEvent> projections;
  int selected_epoch = 0;  // epoch whose state was kept
  std::optional<MetricReport> val;
  std::optional<MetricReport> test;
  std::vector<double> delta_l1;  // per prototype
};

nlohmann::json to_json(const TrainReport& r);

struct FitResult {
  Model model;
  TrainReport report;
};

/// Trains a model. `shape` supplies the vocabulary sizes and context schema;
/// every other model setting comes from `config`. Deterministic for a fixed
/// seed. Throws when the training set is empty, when a loss turns
/// non-finite, or when prototype projection has no candidates.
FitResult fit(const ModelConfig& shape, std::span<const EncodedSample> train,
              std::span<const EncodedSample> val, const FrequentSetPool& pool,
              const CooccurrenceGraph& graph, const TrainConfig& config);

}  // namespace setproto
