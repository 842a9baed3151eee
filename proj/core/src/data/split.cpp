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

#include "setproto/data/split.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>

#include "setproto/error.hpp"

namespace setproto {
namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

void mix(std::uint64_t& h, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) {
    h ^= (v >> (8 * b)) & 0xffu;
    h *= kFnvPrime;
  }
}

bool content_less(const EncodedSample& a, const EncodedSample& b) {
  if (a.input.skills != b.input.skills) return a.input.skills < b.input.skills;
  if (a.input.levels != b.input.levels) return a.input.levels < b.input.levels;
  if (a.input.context != b.input.context) return a.input.context < b.input.context;
  return a.salary < b.salary;
}

}  // namespace

std::uint64_t sample_hash(const EncodedSample& sample) {
  std::vector<std::pair<int, int>> items;
  for (std::size_t i = 0; i < sample.input.skills.size(); ++i)
    items.emplace_back(sample.input.skills[i],
                       i < sample.input.levels.size() ? sample.input.levels[i] : kNoLevel);
  std::sort(items.begin(), items.end());
  std::uint64_t h = kFnvOffset;
  for (const auto& [s, l] : items) {
    mix(h, static_cast<std::uint64_t>(static_cast<std::uint32_t>(s)));
    mix(h, static_cast<std::uint64_t>(static_cast<std::uint32_t>(l)));
  }
  for (double c : sample.input.context) mix(h, std::bit_cast<std::uint64_t>(c));
  mix(h, std::bit_cast<std::uint64_t>(sample.salary));
  return h;
}

DatasetSplit split_dataset(std::span<const EncodedSample> samples, const SplitRatios& ratios,
                           std::uint64_t seed) {
  if (!(ratios.train > 0 && ratios.val > 0 && ratios.test > 0))
    throw ConfigError("split ratios must be positive");
  if (std::abs(ratios.train + ratios.val + ratios.test - 1.0) > 1e-9)
    throw ConfigError("split ratios must sum to 1");
  if (samples.size() < 3) throw ConfigError("splitting requires at least 3 samples");

  std::vector<std::pair<std::uint64_t, std::size_t>> order;
  order.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) order.emplace_back(sample_hash(samples[i]), i);
  std::sort(order.begin(), order.end(), [&samples](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first < y.first;
    return content_less(samples[x.second], samples[y.second]);
  });
  std::mt19937_64 rng(seed);
  // Explicit Fisher-Yates keeps the permutation independent of the standard
  // library's shuffle implementation.
  for (std::size_t i = order.size(); i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(order[i - 1], order[pick(rng)]);
  }

  const std::size_t n = samples.size();
  std::size_t n_train = static_cast<std::size_t>(std::llround(ratios.train * static_cast<double>(n)));
  std::size_t n_val = static_cast<std::size_t>(std::llround(ratios.val * static_cast<double>(n)));
  n_train = std::clamp<std::size_t>(n_train, 1, n - 2);
  n_val = std::clamp<std::size_t>(n_val, 1, n - n_train - 1);

  DatasetSplit out;
  for (std::size_t k = 0; k < n; ++k) {
    const EncodedSample& s = samples[order[k].second];
    if (k < n_train) {
      out.train.push_back(s);
    } else if (k < n_train + n_val) {
      out.val.push_back(s);
    } else {
      out.test.push_back(s);
    }
  }
  return out;
}

}  // namespace setproto
