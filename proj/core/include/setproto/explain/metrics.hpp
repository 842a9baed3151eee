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

#include <nlohmann/json.hpp>

#include "setproto/data/posting.hpp"
#include "setproto/model/params.hpp"

namespace setproto {

struct MetricReport {
  double rmse = 0.0;
  double mae = 0.0;
  std::size_t n = 0;
};

/// Throws when the spans differ in length or are empty.
MetricReport compute_metrics(std::span<const double> predictions, std::span<const double> targets);
MetricReport evaluate(const Model& model, std::span<const EncodedSample> samples);

nlohmann::json to_json(const MetricReport& m);

}  // namespace setproto
