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

// Differentiable forward pass of the full model over a minibatch, plus the
// regularizers that consume its intermediate tensors.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "setproto/autodiff/ops.hpp"
#include "setproto/data/cooccurrence.hpp"
#include "setproto/data/posting.hpp"
#include "setproto/model/params.hpp"

namespace setproto {

enum class MaskMode {
  kHard,    // 1[score > 0], no noise; the inference path
  kSoft,    // sigmoid(score / tau), no noise
  kGumbel,  // Gumbel-Sigmoid sample at temperature tau; the training path
};

struct ForwardOptions {
  MaskMode mode = MaskMode::kHard;
  double temperature = 1.0;
  double noise_clamp = 1e-10;
  std::mt19937_64* rng = nullptr;  // required for kGumbel
};

/// Which parameter groups receive gradients.
struct GradientScope {
  bool network = true;
  bool prototype_embedding = true;
  bool delta = false;
};

/// Parameters registered on a tape.
struct ParamVars {
  ad::Var embedding, query_proj, key_proj, level_embedding, calib_w, calib_b;
  ad::Var transform_w1, transform_b1, transform_w2, transform_b2;
  ad::Var prototype_embedding;
  ad::Var delta;
  std::vector<ad::Var> context_tables;
  ad::Var fm_bias;
  std::vector<ad::Var> fm_linear;
  ad::Var deep_w1, deep_b1, deep_w2, deep_b2;
  ad::Var head_w1, head_b1, head_w2, head_b2;
  ad::Var regression_w, regression_b;

  /// Pairs each registered variable with its parameter tensor; delta is
  /// reported separately.
  std::vector<std::pair<ad::Var, Matrix*>> trainable(ModelParams& params) const;
};

ParamVars register_params(ad::Tape& tape, const Model& model, const GradientScope& scope);

/// Per-sample intermediate values.
struct SampleNodes {
  ad::Var embeddings;  // n x d
  ad::Var scores;      // n x H
  ad::Var mask;        // n x H
  ad::Var alpha;       // n x 1
  ad::Var subsets;     // H x d
};

struct BatchOutput {
  std::vector<SampleNodes> samples;
  ad::Var subset_z;        // (B*H) x d
  ad::Var prototype_e;     // M x d (absent for the no-prototype variant)
  ad::Var prototype_z;     // M x d
  ad::Var sq_distances;    // (B*H) x M
  ad::Var similarities;    // (B*H) x M
  ad::Var aggregated;      // B x M
  ad::Var weights;         // B x M softmax over prototypes
  ad::Var salary_weights;  // B x M
  ad::Var context_repr;    // B x d
  ad::Var prediction;      // B x 1
  int n_views = 0;
};

/// Validates a model input: non-empty, in-range, duplicate-free skills.
void validate_input(const SkillSetInput& input, const ModelConfig& config);

// Building blocks, exposed for tests.
ad::Var transform(const ParamVars& p, ad::Var rows);
ad::Var calibrate(const ParamVars& p, const ModelConfig& config, std::span<const int> levels);
ad::Var prototype_embeddings(ad::Tape& tape, const ParamVars& p, const Model& model);
ad::Var context_salary_weights(ad::Tape& tape, const ParamVars& p, const ModelConfig& config,
                               std::span<const SkillSetInput* const> batch, ad::Var* repr = nullptr);
/// FM(C) = w0 + sum_i w_i .* e_i + sum_{i<j} e_i .* e_j over field embeddings.
ad::Var factorization_machine(ad::Var bias, std::span<const ad::Var> linear,
                              std::span<const ad::Var> fields);

/// Draws G0 - G1 for an n x H score matrix.
Matrix gumbel_difference(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng, double clamp);

/// Scores, mask, calibration and per-view subset embeddings for one sample.
SampleNodes select_subsets(ad::Tape& tape, const ParamVars& p, const ModelConfig& config,
                           const SkillSetInput& input, const ForwardOptions& options);

BatchOutput forward(ad::Tape& tape, const ParamVars& p, const Model& model,
                    std::span<const SkillSetInput* const> batch, const ForwardOptions& options);

// Losses on forward outputs.

/// Mean over subsets of the nearest-prototype squared distance plus mean over
/// prototypes of the nearest-subset squared distance.
ad::Var representation_loss(ad::Var sq_distances);
/// (1/M) sum_{i<j} max(0, sim(P_i, P_j) - theta_min).
ad::Var diversity_loss(ad::Var prototype_z, double theta_min, double epsilon);
/// Mean over the batch of the per-sample co-occurrence density loss.
ad::Var cooccurrence_loss(const BatchOutput& out, std::span<const SkillSetInput* const> batch,
                          const CooccurrenceGraph& graph, double floor);

}  // namespace setproto
