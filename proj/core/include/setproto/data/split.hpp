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

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "setproto/data/posting.hpp"

namespace setproto {

struct SplitRatios {
  double train = 0.6;
  double val = 0.2;
  double test = 0.2;
};

struct DatasetSplit {
  std::vector<EncodedSample> train;
  std::vector<EncodedSample> val;
  std::vector<EncodedSample> test;
};

/// Content hash over sorted skills, levels, context and salary bits.
std::uint64_t sample_hash(const EncodedSample& sample);

/// Deterministic split: samples are first put in canonical hash order, then
/// shuffled with `seed` and cut by `ratios`. Independent of input order.
/// Throws ConfigError for bad ratios or fewer than three samples.
DatasetSplit split_dataset(std::span<const EncodedSample> samples, const SplitRatios& ratios,
                           std::uint64_t seed);

}  // namespace setproto
