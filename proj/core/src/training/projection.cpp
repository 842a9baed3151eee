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

#include "setproto/training/projection.hpp"

#include <algorithm>
#include <map>
#include <memory>

#include "setproto/autodiff/ops.hpp"
#include "setproto/error.hpp"
#include "setproto/model/forward.hpp"
#include "setproto/model/functional.hpp"

namespace setproto {

CandidateSet extract_candidates(const Model& model, std::span<const SkillSetInput> inputs) {
  CandidateSet out;
  std::vector<RowVector> rows;
  constexpr std::size_t kChunk = 256;
  std::unique_ptr<ad::Tape> tape;
  ParamVars p;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (i % kChunk == 0) {
      tape = std::make_unique<ad::Tape>();
      p = register_params(*tape, model, GradientScope{false, false, false});
    }
    const SampleNodes s = select_subsets(*tape, p, model.config, inputs[i], ForwardOptions{});
    const Matrix z = transform(p, s.subsets).value();
    const Matrix& mask = s.mask.value();
    const Matrix& alpha = s.alpha.value();
    for (Eigen::Index h = 0; h < mask.cols(); ++h) {
      SubsetCandidate c;
      c.source = i;
      c.view = static_cast<int>(h);
      std::vector<std::pair<int, double>> members;
      for (Eigen::Index r = 0; r < mask.rows(); ++r)
        if (mask(r, h) > 0.0)
          members.emplace_back(inputs[i].skills[static_cast<std::size_t>(r)], alpha(r, 0));
      if (members.empty()) continue;
      std::sort(members.begin(), members.end());
      for (const auto& [skill, a] : members) {
        c.skills.push_back(skill);
        c.alpha.push_back(a);
      }
      out.items.push_back(std::move(c));
      rows.push_back(z.row(h));
    }
  }
  const Eigen::Index d = model.config.embed_dim;
  out.z.resize(static_cast<Eigen::Index>(rows.size()), d);
  for (std::size_t r = 0; r < rows.size(); ++r) out.z.row(static_cast<Eigen::Index>(r)) = rows[r];
  return out;
}

std::vector<int> modal_levels(std::span<const EncodedSample> samples, int n_skills) {
  std::vector<std::map<int, std::size_t>> counts(static_cast<std::size_t>(n_skills));
  for (const auto& s : samples)
    for (std::size_t i = 0; i < s.input.skills.size(); ++i) {
      const int skill = s.input.skills[i];
      if (skill >= 0 && skill < n_skills) ++counts[static_cast<std::size_t>(skill)][s.input.levels[i]];
    }
  std::vector<int> out(static_cast<std::size_t>(n_skills), kNoLevel);
  for (std::size_t k = 0; k < counts.size(); ++k) {
    std::size_t best = 0;
    for (const auto& [level, n] : counts[k])
      if (n > best) {
        best = n;
        out[k] = level;
      }
  }
  return out;
}

std::vector<SkillSetInput> frequent_set_inputs(const FrequentSetPool& pool,
                                               std::span<const int> levels) {
  std::vector<SkillSetInput> out;
  out.reserve(pool.sets.size());
  for (const auto& fs : pool.sets) {
    SkillSetInput in;
    in.skills = fs.items;
    for (int s : fs.items)
      in.levels.push_back(s >= 0 && static_cast<std::size_t>(s) < levels.size()
                              ? levels[static_cast<std::size_t>(s)]
                              : kNoLevel);
    out.push_back(std::move(in));
  }
  return out;
}

std::vector<std::size_t> nearest_candidates(const Matrix& candidate_z, const Matrix& prototype_z,
                                            double epsilon) {
  if (candidate_z.rows() == 0) throw Error("projection needs at least one candidate subset");
  std::vector<std::size_t> out(static_cast<std::size_t>(prototype_z.rows()), 0);
  for (Eigen::Index k = 0; k < prototype_z.rows(); ++k) {
    double best = -1.0;
    for (Eigen::Index c = 0; c < candidate_z.rows(); ++c) {
      const double sim = similarity_from_sq_distance(
          (candidate_z.row(c) - prototype_z.row(k)).squaredNorm(), epsilon);
      if (sim > best) {
        best = sim;
        out[static_cast<std::size_t>(k)] = static_cast<std::size_t>(c);
      }
    }
  }
  return out;
}

Matrix prototype_representations(const Model& model) {
  ad::Tape tape;
  const ParamVars p = register_params(tape, model, GradientScope{false, false, false});
  return transform(p, prototype_embeddings(tape, p, model)).value();
}

ProjectionEvent project_prototypes(Model& model, const CandidateSet& candidates) {
  const Matrix zp = prototype_representations(model);
  ProjectionEvent ev;
  ev.n_candidates = candidates.items.size();
  ev.chosen = nearest_candidates(candidates.z, zp, model.config.epsilon);
  PrototypeBank& bank = model.bank;
  double sim_total = 0.0;
  for (std::size_t k = 0; k < ev.chosen.size(); ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    const SubsetCandidate& c = candidates.items[ev.chosen[k]];
    sim_total += similarity_from_sq_distance(
        (candidates.z.row(static_cast<Eigen::Index>(ev.chosen[k])) - zp.row(kk)).squaredNorm(),
        model.config.epsilon);
    RowVector membership = RowVector::Zero(bank.membership.cols());
    RowVector importance = RowVector::Zero(bank.importance.cols());
    for (std::size_t i = 0; i < c.skills.size(); ++i) {
      membership(c.skills[i]) = 1.0;
      importance(c.skills[i]) = c.alpha[i];
    }
    if (membership != RowVector(bank.membership.row(kk))) ++ev.n_changed;
    bank.membership.row(kk) = membership;
    bank.importance.row(kk) = importance;
    bank.delta.row(kk).setZero();
    model.params.prototype_embedding.row(kk) =
        prototype_embedding(bank, static_cast<int>(k), model.params.embedding);
  }
  ev.mean_similarity = ev.chosen.empty() ? 0.0 : sim_total / static_cast<double>(ev.chosen.size());
  return ev;
}

ProjectionEvent project_prototypes(Model& model, std::span<const SkillSetInput> inputs) {
  const CandidateSet candidates = extract_candidates(model, inputs);
  if (candidates.items.empty())
    throw Error("no extracted subsets to project prototypes onto; lower min_support to enlarge "
                "the frequent set pool");
  return project_prototypes(model, candidates);
}

nlohmann::json to_json(const ProjectionEvent& e) {
  return {{"epoch", e.epoch},
          {"n_candidates", e.n_candidates},
          {"n_changed", e.n_changed},
          {"mean_similarity", e.mean_similarity},
          {"chosen", e.chosen}};
}

}  // namespace setproto
