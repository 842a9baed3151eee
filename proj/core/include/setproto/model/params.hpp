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
#include <string>
#include <vector>

#include "setproto/model/config.hpp"
#include "setproto/tensor.hpp"

namespace setproto {

/// Discrete prototype skill sets. Row k of `membership` is a multi-hot
/// vector over the vocabulary, `importance` holds per-skill weights in
/// [0, 1] and `delta` is the refinement bias (zero until refinement).
struct PrototypeBank {
  Matrix membership;  // M x N, entries in {0, 1}
  Matrix importance;  // M x N
  Matrix delta;       // M x N
  bool discrete = false;  // embeddings derived from the bank when true

  static PrototypeBank empty(int n_prototypes, int n_skills);

  /// membership .* importance + delta, the effective per-skill weights.
  Matrix effective_weights() const;
  /// Number of member skills of prototype k.
  int support_size(int k) const;
  std::vector<int> support(int k) const;
};

/// Every learnable tensor except the prototype bank.
struct ModelParams {
  Matrix embedding;        // N x d skill embedding table
  Matrix query_proj;       // d x d, views are contiguous column blocks
  Matrix key_proj;         // d x d
  Matrix level_embedding;  // (levels + 1) x level_dim, last row = no level
  Matrix calib_w;          // level_dim x 1
  Matrix calib_b;          // 1 x 1

  Matrix transform_w1;  // d x hidden
  Matrix transform_b1;  // 1 x hidden
  Matrix transform_w2;  // hidden x d
  Matrix transform_b2;  // 1 x d

  Matrix prototype_embedding;  // M x d, continuous prototype targets

  std::vector<Matrix> context_tables;  // per field: rows x d
  Matrix fm_bias;                      // 1 x d
  std::vector<Matrix> fm_linear;       // per field: 1 x d
  Matrix deep_w1;                      // (fields * d) x context_hidden
  Matrix deep_b1;
  Matrix deep_w2;                      // context_hidden x d
  Matrix deep_b2;
  Matrix head_w1;                      // d x context_hidden
  Matrix head_b1;
  Matrix head_w2;                      // context_hidden x M
  Matrix head_b2;                      // 1 x M

  Matrix regression_w;  // 2d x 1, used by the no-prototype variant
  Matrix regression_b;  // 1 x 1

  struct Named {
    std::string name;
    Matrix* value;
  };
  struct ConstNamed {
    std::string name;
    const Matrix* value;
  };
  /// Stable, name-ordered view of every tensor.
  std::vector<Named> tensors();
  std::vector<ConstNamed> tensors() const;

  /// Zero-valued tensors with the shapes implied by `config`.
  static ModelParams zeros(const ModelConfig& config);
};

struct Model {
  ModelConfig config;
  ModelParams params;
  PrototypeBank bank;
  /// Mean contextual salary weight per prototype over the training set;
  /// empty until training finishes.
  std::vector<double> prototype_salary_means;

  /// Rounds every stored value to the nearest IEEE-754 binary32 so that the
  /// float checkpoint format reproduces the model exactly.
  void round_to_float();
};

/// Random initialization. Deterministic per seed.
Model init_model(const ModelConfig& config, std::uint64_t seed);

/// Sets the salary head bias so the initial prototype salary weights span
/// the quantiles of `salaries` (or the regression bias to their mean).
void init_salary_head(Model& model, const std::vector<double>& salaries);

/// Identity transform: with hidden width >= 2d the transformation layer is
/// set to x -> silu(x) - silu(-x) = x. Used by tests.
void set_identity_transform(ModelParams& params);

}  // namespace setproto
