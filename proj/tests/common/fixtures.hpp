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
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "setproto/autodiff/tape.hpp"
#include "setproto/data/cooccurrence.hpp"
#include "setproto/data/posting.hpp"
#include "setproto/model/forward.hpp"
#include "setproto/model/params.hpp"

namespace setproto::testing {

/// Vocabulary with `n_skills` skills, three levels and two context fields
/// (categorical "city" with three values, numeric "experience").
SkillVocabulary small_vocab(int n_skills);

ModelConfig small_config(const SkillVocabulary& vocab, int embed_dim, int n_views, int n_prototypes,
                         int transform_hidden = 256);

/// Initialized model with every parameter perturbed away from zero so that
/// no gradient path is trivially inactive.
Model random_model(const ModelConfig& config, std::uint64_t seed);

/// Distinct skills, random levels (some absent) and a random context.
SkillSetInput random_input(const ModelConfig& config, std::mt19937_64& rng, int min_size,
                           int max_size);

std::vector<EncodedSample> random_samples(const ModelConfig& config, std::size_t n,
                                          std::uint64_t seed, int min_size, int max_size);

struct GradReport {
  double max_rel_error = 0.0;
  std::string where;
  std::size_t checked = 0;
};

/// Relative error used by every gradient comparison.
double relative_error(double analytic, double numeric);

using ScalarFn = std::function<ad::Var(ad::Tape&, std::span<const ad::Var>)>;

/// Central differences against reverse-mode gradients of a scalar function
/// of the given inputs.
GradReport check_gradients(const ScalarFn& f, std::vector<Matrix> inputs, double h = 1e-5);

enum class LossTerm { kPred, kCon, kRep, kDiv, kTotal, kPrediction };

struct ModelGradCase {
  std::vector<SkillSetInput> batch;
  std::vector<double> targets;
  const CooccurrenceGraph* graph = nullptr;
  double temperature = 0.7;
  std::uint64_t noise_seed = 1;
  GradientScope scope;
};

/// Checks the gradient of one loss term with respect to every trainable
/// tensor of `model` (and delta, when the scope includes it). Gumbel noise
/// is replayed from the same seed at every evaluation.
GradReport check_model_gradients(Model model, const ModelGradCase& c, LossTerm term,
                                 double h = 1e-5);

}  // namespace setproto::testing
