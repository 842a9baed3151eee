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

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "setproto/data/posting.hpp"
#include "setproto/tensor.hpp"

namespace setproto {

/// Undirected skill co-occurrence graph. Edge weight is the fraction of
/// postings containing both endpoints, so weights lie in (0, 1].
class CooccurrenceGraph {
 public:
  struct Edge {
    int a;
    int b;
    double weight;
  };

  CooccurrenceGraph() = default;
  explicit CooccurrenceGraph(int n_nodes) : n_nodes_(n_nodes) {}

  int n_nodes() const { return n_nodes_; }
  std::size_t n_edges() const { return weights_.size(); }

  /// Zero for absent pairs and for a == b.
  double weight(int a, int b) const;
  /// Overwrites the weight of pair {a, b}; a weight of zero removes it.
  void set_weight(int a, int b, double w);

  /// Edges with a < b, sorted by (a, b).
  std::vector<Edge> edges() const;

  /// |skills| x |skills| symmetric weight matrix with a zero diagonal.
  Matrix pair_weights(std::span<const int> skills) const;

 private:
  static std::uint64_t key(int a, int b);

  int n_nodes_ = 0;
  std::unordered_map<std::uint64_t, double> weights_;
};

/// Throws Error on an empty dataset.
CooccurrenceGraph build_cooccurrence_graph(std::span<const EncodedSample> samples, int n_nodes);

nlohmann::json graph_to_json(const CooccurrenceGraph& graph, const SkillVocabulary* vocab = nullptr);
CooccurrenceGraph graph_from_json(const nlohmann::json& j);

}  // namespace setproto
