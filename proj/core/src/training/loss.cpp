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

#include "setproto/training/loss.hpp"

#include "setproto/autodiff/ops.hpp"
#include "setproto/error.hpp"

namespace setproto {

LossTerms total_loss(ad::Tape& tape, const BatchOutput& out,
                     std::span<const SkillSetInput* const> batch, std::span<const double> targets,
                     const ModelConfig& config, const CooccurrenceGraph& graph,
                     const LossWeights& weights) {
  if (targets.size() != batch.size()) throw Error("total_loss: one target per sample required");
  Matrix y(static_cast<Eigen::Index>(targets.size()), 1);
  for (std::size_t i = 0; i < targets.size(); ++i) y(static_cast<Eigen::Index>(i), 0) = targets[i];

  LossTerms t;
  t.pred = ad::mean(ad::square(ad::sub(out.prediction, tape.constant(std::move(y)))));
  const Matrix zero = Matrix::Zero(1, 1);
  t.con = config.uses_subsets()
              ? cooccurrence_loss(out, batch, graph, config.density_floor)
              : tape.constant(zero);
  if (config.uses_prototypes()) {
    t.rep = representation_loss(out.sq_distances);
    t.div = diversity_loss(out.prototype_z, config.theta_min, config.epsilon);
  } else {
    t.rep = tape.constant(zero);
    t.div = tape.constant(zero);
  }
  t.total = ad::add(t.pred, ad::add(ad::scale(t.con, weights.con),
                                    ad::add(ad::scale(t.rep, weights.rep),
                                            ad::scale(t.div, weights.div))));
  return t;
}

}  // namespace setproto
