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

#include "setproto/data/cooccurrence.hpp"

#include <algorithm>

#include "setproto/error.hpp"

namespace setproto {

std::uint64_t CooccurrenceGraph::key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

double CooccurrenceGraph::weight(int a, int b) const {
  if (a == b) return 0.0;
  auto it = weights_.find(key(a, b));
  return it == weights_.end() ? 0.0 : it->second;
}

void CooccurrenceGraph::set_weight(int a, int b, double w) {
  if (a == b) throw Error("co-occurrence graph: self-loops are not allowed");
  if (a < 0 || b < 0 || a >= n_nodes_ || b >= n_nodes_) throw Error("co-occurrence graph: node out of range");
  if (w < 0.0) throw Error("co-occurrence graph: negative weight");
  if (w == 0.0) {
    weights_.erase(key(a, b));
  } else {
    weights_[key(a, b)] = w;
  }
}

std::vector<CooccurrenceGraph::Edge> CooccurrenceGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(weights_.size());
  for (const auto& [k, w] : weights_)
    out.push_back({static_cast<int>(k >> 32), static_cast<int>(k & 0xffffffffu), w});
  std::sort(out.begin(), out.end(),
            [](const Edge& x, const Edge& y) { return x.a != y.a ? x.a < y.a : x.b < y.b; });
  return out;
}

Matrix CooccurrenceGraph::pair_weights(std::span<const int> skills) const {
  const auto n = static_cast<Eigen::Index>(skills.size());
  Matrix w = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = weight(skills[static_cast<std::size_t>(i)], skills[static_cast<std::size_t>(j)]);
      w(i, j) = v;
      w(j, i) = v;
    }
  return w;
}

CooccurrenceGraph build_cooccurrence_graph(std::span<const EncodedSample> samples, int n_nodes) {
  if (samples.empty()) throw Error("co-occurrence graph: dataset is empty");
  std::unordered_map<std::uint64_t, std::size_t> counts;
  for (const auto& s : samples) {
    const auto& ids = s.input.skills;
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (std::size_t j = i + 1; j < ids.size(); ++j) {
        if (ids[i] == ids[j]) continue;
        const int a = std::min(ids[i], ids[j]);
        const int b = std::max(ids[i], ids[j]);
        ++counts[(static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b)];
      }
  }
  CooccurrenceGraph g(n_nodes);
  const double total = static_cast<double>(samples.size());
  for (const auto& [k, c] : counts)
    g.set_weight(static_cast<int>(k >> 32), static_cast<int>(k & 0xffffffffu),
                 static_cast<double>(c) / total);
  return g;
}

nlohmann::json graph_to_json(const CooccurrenceGraph& graph, const SkillVocabulary* vocab) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : graph.edges()) {
    nlohmann::json j{{"a", e.a}, {"b", e.b}, {"weight", e.weight}};
    if (vocab) j["names"] = {vocab->skill_name(e.a), vocab->skill_name(e.b)};
    edges.push_back(std::move(j));
  }
  return {{"n_nodes", graph.n_nodes()}, {"edges", std::move(edges)}};
}

CooccurrenceGraph graph_from_json(const nlohmann::json& j) {
  CooccurrenceGraph g(j.at("n_nodes").get<int>());
  for (const auto& e : j.at("edges"))
    g.set_weight(e.at("a").get<int>(), e.at("b").get<int>(), e.at("weight").get<double>());
  return g;
}

}  // namespace setproto
