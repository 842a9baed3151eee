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

#include "setproto/data/frequent_sets.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>

#include <spdlog/spdlog.h>

#include "setproto/error.hpp"

namespace setproto {
namespace {

using Bits = std::vector<std::uint64_t>;

std::size_t popcount_and(const Bits& a, const Bits& b, Bits& out) {
  std::size_t c = 0;
  for (std::size_t w = 0; w < a.size(); ++w) {
    out[w] = a[w] & b[w];
    c += static_cast<std::size_t>(std::popcount(out[w]));
  }
  return c;
}

struct Level {
  std::vector<std::vector<int>> items;
  std::vector<Bits> tids;
  std::vector<std::size_t> counts;
};

}  // namespace

FrequentSetPool mine_frequent_sets(std::span<const std::vector<int>> transactions,
                                   double min_support, std::size_t max_size) {
  if (!(min_support > 0.0 && min_support <= 1.0))
    throw ConfigError("min_support must lie in (0, 1]");
  FrequentSetPool pool;
  pool.min_support = min_support;
  pool.n_transactions = transactions.size();
  if (transactions.empty()) {
    spdlog::warn("frequent-set mining on an empty dataset; pool is empty");
    return pool;
  }
  const std::size_t n = transactions.size();
  const std::size_t words = (n + 63) / 64;
  // Integer threshold avoids floating-point disagreement at the boundary.
  const double raw = min_support * static_cast<double>(n);
  std::size_t min_count = static_cast<std::size_t>(std::ceil(raw - 1e-9));
  if (min_count == 0) min_count = 1;

  std::map<int, Bits> item_tids;
  for (std::size_t t = 0; t < n; ++t) {
    std::set<int> uniq(transactions[t].begin(), transactions[t].end());
    for (int item : uniq) {
      auto& bits = item_tids[item];
      if (bits.empty()) bits.assign(words, 0);
      bits[t / 64] |= std::uint64_t{1} << (t % 64);
    }
  }

  Level current;
  for (auto& [item, bits] : item_tids) {
    std::size_t c = 0;
    for (auto w : bits) c += static_cast<std::size_t>(std::popcount(w));
    if (c >= min_count) {
      current.items.push_back({item});
      current.tids.push_back(std::move(bits));
      current.counts.push_back(c);
    }
  }

  Bits scratch(words);
  for (std::size_t k = 2; !current.items.empty() && (max_size == 0 || k <= max_size); ++k) {
    std::set<std::vector<int>> previous(current.items.begin(), current.items.end());
    Level next;
    // Items within a level are lexicographically sorted, so sets sharing a
    // (k-2)-prefix are contiguous.
    for (std::size_t i = 0; i < current.items.size(); ++i) {
      const auto& a = current.items[i];
      for (std::size_t j = i + 1; j < current.items.size(); ++j) {
        const auto& b = current.items[j];
        if (!std::equal(a.begin(), a.end() - 1, b.begin(), b.end() - 1)) break;
        std::vector<int> cand = a;
        cand.push_back(b.back());
        bool all_frequent = true;
        for (std::size_t drop = 0; drop + 2 < cand.size() && all_frequent; ++drop) {
          std::vector<int> sub;
          sub.reserve(cand.size() - 1);
          for (std::size_t q = 0; q < cand.size(); ++q)
            if (q != drop) sub.push_back(cand[q]);
          all_frequent = previous.count(sub) > 0;
        }
        if (!all_frequent) continue;
        const std::size_t c = popcount_and(current.tids[i], current.tids[j], scratch);
        if (c < min_count) continue;
        next.items.push_back(std::move(cand));
        next.tids.push_back(scratch);
        next.counts.push_back(c);
      }
    }
    for (std::size_t i = 0; i < next.items.size(); ++i)
      pool.sets.push_back({next.items[i], next.counts[i],
                           static_cast<double>(next.counts[i]) / static_cast<double>(n)});
    current = std::move(next);
  }
  return pool;
}

FrequentSetPool mine_frequent_sets(std::span<const EncodedSample> samples, double min_support,
                                   std::size_t max_size) {
  std::vector<std::vector<int>> tx;
  tx.reserve(samples.size());
  for (const auto& s : samples) tx.push_back(s.input.skills);
  return mine_frequent_sets(tx, min_support, max_size);
}

nlohmann::json pool_to_json(const FrequentSetPool& pool, const SkillVocabulary* vocab) {
  nlohmann::json sets = nlohmann::json::array();
  for (const auto& s : pool.sets) {
    nlohmann::json j{{"skills", s.items}, {"count", s.count}, {"support", s.support}};
    if (vocab) {
      std::vector<std::string> names;
      for (int id : s.items) names.push_back(vocab->skill_name(id));
      j["names"] = names;
    }
    sets.push_back(std::move(j));
  }
  return {{"min_support", pool.min_support},
          {"n_transactions", pool.n_transactions},
          {"sets", std::move(sets)}};
}

}  // namespace setproto
