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

// Value-level entry points for the individual model stages. Each wraps the
// same differentiable kernels used in training on a throwaway tape.

#include <random>
#include <span>
#include <vector>

#include "setproto/data/cooccurrence.hpp"
#include "setproto/model/params.hpp"

namespace setproto {

/// Permutation-invariant mean pooling; throws Error on zero rows.
RowVector pool(const Matrix& rows);

/// Scaled dot-product scores of each skill for view `view`:
/// (skills W_K)_h (set W_Q)_h^T / sqrt(d_h).
ColVector view_attention_scores(const RowVector& set_embedding, const Matrix& skill_embeddings,
                                const Matrix& query_proj, const Matrix& key_proj, int n_views,
                                int view);

/// logistic((s + G0 - G1) / tau). With `rng == nullptr` the noise is zero.
/// Throws Error when tau <= 0.
Matrix gumbel_sigmoid(const Matrix& scores, double tau, std::mt19937_64* rng, double clamp = 1e-10);

/// 1[score > 0].
Matrix hard_mask(const Matrix& scores);

/// Per-skill importance weights in (0, 1) from the level calibrator.
ColVector calibrate_skill_weights(const Model& model, std::span<const int> levels);

/// Mask-weighted mean of alpha-scaled rows per view (H x d); a view with an
/// all-zero mask yields the zero vector.
Matrix subset_embedding(const Matrix& mask, const ColVector& alpha, const Matrix& rows);

/// -log(max(mean_h density_h, floor)) for one sample.
double cooccurrence_density_loss(const Matrix& mask, std::span<const int> skills,
                                 const CooccurrenceGraph& graph, double floor = 1e-6);

/// Embedding of prototype k: the effective-weighted sum of table rows divided
/// by the prototype's support size (the zero vector for an empty support).
RowVector prototype_embedding(const PrototypeBank& bank, int k, const Matrix& table);

/// Shared transformation layer applied row-wise.
Matrix apply_transform(const ModelParams& params, const Matrix& rows);

/// log((d + 1) / (d + eps)) for squared distance d.
double similarity_from_sq_distance(double sq_distance, double eps);
double similarity(const RowVector& a, const RowVector& b, double eps);

/// Context-dependent non-negative salary weight per prototype.
RowVector context_salary_weights(const Model& model, const std::vector<double>& context);

double rep_loss(const Matrix& subset_z, const Matrix& prototype_z);
double div_loss(const Matrix& prototype_z, double theta_min, double eps);

}  // namespace setproto
