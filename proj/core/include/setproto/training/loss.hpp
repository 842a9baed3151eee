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

#include <span>

#include "setproto/autodiff/tape.hpp"
#include "setproto/data/cooccurrence.hpp"
#include "setproto/model/forward.hpp"

namespace setproto {

struct LossWeights {
  double con = 0.1;
  double rep = 0.1;
  double div = 0.1;
};

struct LossTerms {
  ad::Var pred;
  ad::Var con;
  ad::Var rep;
  ad::Var div;
  ad::Var total;
};

/// Mean squared error plus the weighted regularizers. Terms that do not
/// apply to the model variant are constant zero.
LossTerms total_loss(ad::Tape& tape, const BatchOutput& out,
                     std::span<const SkillSetInput* const> batch, std::span<const double> targets,
                     const ModelConfig& config, const CooccurrenceGraph& graph,
                     const LossWeights& weights);

}  // namespace setproto
