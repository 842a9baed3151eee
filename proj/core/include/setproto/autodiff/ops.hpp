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

// Differentiable operations on tape variables. Shapes are checked eagerly and
// mismatches throw std::invalid_argument.

#include <cstddef>
#include <span>
#include <vector>

#include "setproto/autodiff/tape.hpp"

namespace setproto::ad {

// Elementwise and linear algebra.
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);                   // Hadamard product
Var scale(Var a, double s);
Var add_scalar(Var a, double s);
Var matmul(Var a, Var b);
Var add_rowvec(Var a, Var row);          // row (1 x c) broadcast over rows of a
Var mul_rowvec(Var a, Var row);
Var broadcast_rows(Var row, Eigen::Index rows);
Var scale_rows(Var a, std::span<const double> factors);

Var square(Var a);
Var sigmoid(Var a);
Var softplus(Var a);
Var silu(Var a);
Var log(Var a);

// Reductions.
Var sum(Var a);                          // 1 x 1
Var mean(Var a);                         // 1 x 1
Var abs_sum(Var a);                      // 1 x 1, subgradient 0 at 0
Var mean_rows(Var a);                    // 1 x c, error on zero rows
Var row_sum(Var a);                      // r x 1
Var sum_row_blocks(Var a, Eigen::Index block);  // (k*block) x c -> k x c
Var min_rows(Var a);                     // r x 1, gradient to first argmin
Var min_cols(Var a);                     // 1 x c, gradient to first argmin

// Structure.
Var gather_rows(Var table, std::span<const int> ids);
Var concat_rows(std::span<const Var> parts);
Var concat_cols(std::span<const Var> parts);
Var softmax_rows(Var a);

// Model-specific fused kernels.

/// Per-view scaled dot-product scores. `keys` is n x d, `query` 1 x d; the d
/// columns are split into `views` contiguous blocks of width d/views and the
/// result is n x views with entry (i, h) = <keys_i^h, query^h> / sqrt(d/views).
Var multihead_scores(Var keys, Var query, Eigen::Index views);

/// Mask-weighted mean pooling per view. `mask` n x H, `alpha` n x 1,
/// `rows` n x d; output H x d with row h equal to
/// sum_i mask(i,h) alpha(i) rows(i) / sum_i mask(i,h), or zero when the
/// column mask sum is zero.
Var masked_pool(Var mask, Var alpha, Var rows);

/// Pairwise squared Euclidean distances: (r x c, m x c) -> r x m.
Var sq_dist(Var a, Var b);

/// log((d + 1) / (d + eps)) elementwise on squared distances.
Var log_similarity(Var sq_distances, double eps);

/// sum_{i<j} max(0, a(i,j) - threshold) over the strict upper triangle.
Var upper_hinge_sum(Var a, double threshold);

/// Soft co-occurrence density loss for one sample. `mask` n x H, `weights`
/// n x n symmetric with a zero diagonal; a pair (i,j) is an edge iff its
/// weight is positive. Returns -log(max(mean_h density_h, floor)) where
/// density_h = sum a_i a_j w_ij / (sum a_i a_j + floor) over edges.
Var density_loss(Var mask, const Matrix& weights, double floor);

}  // namespace setproto::ad
