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

#include "setproto/data/posting.hpp"

namespace setproto {

struct FrequentSet {
  std::vector<int> items;  // sorted ascending
  std::size_t count = 0;
  double support = 0.0;
};

/// Frequent skill sets of size >= 2, ordered by (size, items).
struct FrequentSetPool {
  double min_support = 0.0;
  std::size_t n_transactions = 0;
  std::vector<FrequentSet> sets;

  bool empty() const { return sets.empty(); }
  std::size_t size() const { return sets.size(); }
};

/// Level-wise Apriori search over sorted duplicate-free transactions. Returns
/// every itemset with at least two items and support >= min_support.
/// `max_size` caps the itemset size (0 = unlimited). Throws ConfigError if
/// min_support is outside (0, 1].
FrequentSetPool mine_frequent_sets(std::span<const std::vector<int>> transactions,
                                   double min_support, std::size_t max_size = 0);
FrequentSetPool mine_frequent_sets(std::span<const EncodedSample> samples, double min_support,
                                   std::size_t max_size = 0);

nlohmann::json pool_to_json(const FrequentSetPool& pool, const SkillVocabulary* vocab = nullptr);

}  // namespace setproto
