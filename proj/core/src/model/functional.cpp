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

#include "setproto/model/functional.hpp"

#include <algorithm>
#include <cmath>

#include "setproto/autodiff/ops.hpp"
#include "setproto/error.hpp"
#include "setproto/model/forward.hpp"

namespace setproto {

RowVector pool(const Matrix& rows) {
  if (rows.rows() == 0) throw Error("pool: at least one row required");
  ad::Tape t;
  return ad::mean_rows(t.constant(rows)).value();
}

ColVector view_attention_scores(const RowVector& set_embedding, const Matrix& skill_embeddings,
                                const Matrix& query_proj, const Matrix& key_proj, int n_views,
                                int view) {
  if (view < 0 || view >= n_views) throw Error("view index out of range");
  ad::Tape t;
  ad::Var q = ad::matmul(t.constant(Matrix(set_embedding)), t.constant(query_proj));
  ad::Var k = ad::matmul(t.constant(skill_embeddings), t.constant(key_proj));
  return ad::multihead_scores(k, q, n_views).value().col(view);
}

Matrix gumbel_sigmoid(const Matrix& scores, double tau, std::mt19937_64* rng, double clamp) {
  if (!(tau > 0.0)) throw Error("Gumbel-Sigmoid temperature must be positive");
  ad::Tape t;
  ad::Var s = t.constant(scores);
  if (rng) s = ad::add(s, t.constant(gumbel_difference(scores.rows(), scores.cols(), *rng, clamp)));
  return ad::sigmoid(ad::scale(s, 1.0 / tau)).value();
}

Matrix hard_mask(const Matrix& scores) { return (scores.array() > 0.0).cast<double>().matrix(); }

ColVector calibrate_skill_weights(const Model& model, std::span<const int> levels) {
  ad::Tape t;
  ParamVars p = register_params(t, model, GradientScope{false, false, false});
  return calibrate(p, model.config, levels).value();
}

Matrix subset_embedding(const Matrix& mask, const ColVector& alpha, const Matrix& rows) {
  ad::Tape t;
  return ad::masked_pool(t.constant(mask), t.constant(Matrix(alpha)), t.constant(rows)).value();
}

double cooccurrence_density_loss(const Matrix& mask, std::span<const int> skills,
                                 const CooccurrenceGraph& graph, double floor) {
  ad::Tape t;
  return ad::density_loss(t.constant(mask), graph.pair_weights(skills), floor).scalar();
}

RowVector prototype_embedding(const PrototypeBank& bank, int k, const Matrix& table) {
  if (k < 0 || k >= bank.membership.rows()) throw Error("prototype index out of range");
  const RowVector w = bank.membership.row(k).cwiseProduct(bank.importance.row(k)) + bank.delta.row(k);
  return (w * table) / static_cast<double>(std::max(1, bank.support_size(k)));
}

Matrix apply_transform(const ModelParams& params, const Matrix& rows) {
  ad::Tape t;
  ParamVars p;
  p.transform_w1 = t.constant(params.transform_w1);
  p.transform_b1 = t.constant(params.transform_b1);
  p.transform_w2 = t.constant(params.transform_w2);
  p.transform_b2 = t.constant(params.transform_b2);
  return transform(p, t.constant(rows)).value();
}

double similarity_from_sq_distance(double sq_distance, double eps) {
  return std::log1p((1.0 - eps) / (sq_distance + eps));
}

double similarity(const RowVector& a, const RowVector& b, double eps) {
  return similarity_from_sq_distance((a - b).squaredNorm(), eps);
}

RowVector context_salary_weights(const Model& model, const std::vector<double>& context) {
  ad::Tape t;
  ParamVars p = register_params(t, model, GradientScope{false, false, false});
  SkillSetInput in;
  in.context = context;
  const SkillSetInput* batch[] = {&in};
  return context_salary_weights(t, p, model.config, batch).value();
}

double rep_loss(const Matrix& subset_z, const Matrix& prototype_z) {
  ad::Tape t;
  return representation_loss(ad::sq_dist(t.constant(subset_z), t.constant(prototype_z))).scalar();
}

double div_loss(const Matrix& prototype_z, double theta_min, double eps) {
  ad::Tape t;
  return diversity_loss(t.constant(prototype_z), theta_min, eps).scalar();
}

}  // namespace setproto
