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

#include "setproto/model/forward.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "setproto/error.hpp"

namespace setproto {
namespace {

ad::Var reg(ad::Tape& tape, const Matrix& m, bool trainable) {
  return trainable ? tape.variable(m) : tape.constant(m);
}

// Context field embeddings for a batch, one B x d block per field.
std::vector<ad::Var> field_embeddings(ad::Tape& tape, const ParamVars& p, const ModelConfig& config,
                                      std::span<const SkillSetInput* const> batch) {
  std::vector<ad::Var> out;
  const auto b = static_cast<Eigen::Index>(batch.size());
  for (std::size_t f = 0; f < config.context_schema.size(); ++f) {
    const ContextField& field = config.context_schema[f];
    if (field.kind == ContextField::Kind::kCategorical) {
      std::vector<int> ids(batch.size());
      for (std::size_t i = 0; i < batch.size(); ++i) {
        const double v = batch[i]->context.at(f);
        const int id = static_cast<int>(v);
        if (id < 0 || id >= field.table_rows())
          throw UnknownValueError("context value index out of range for field " + field.name);
        ids[i] = id;
      }
      out.push_back(ad::gather_rows(p.context_tables[f], ids));
    } else {
      Matrix values(b, 1);
      for (std::size_t i = 0; i < batch.size(); ++i)
        values(static_cast<Eigen::Index>(i), 0) = batch[i]->context.at(f);
      out.push_back(ad::matmul(tape.constant(std::move(values)), p.context_tables[f]));
    }
  }
  return out;
}

ad::Var context_representation(ad::Tape& tape, const ParamVars& p, const ModelConfig& config,
                               std::span<const SkillSetInput* const> batch) {
  for (const auto* in : batch)
    if (in->context.size() != config.context_schema.size())
      throw UnknownValueError("context record has " + std::to_string(in->context.size()) +
                              " fields, schema expects " +
                              std::to_string(config.context_schema.size()));
  const auto b = static_cast<Eigen::Index>(batch.size());
  std::vector<ad::Var> fields = field_embeddings(tape, p, config, batch);
  ad::Var fm = factorization_machine(ad::broadcast_rows(p.fm_bias, b), p.fm_linear, fields);
  ad::Var hidden;
  if (fields.empty()) {
    hidden = ad::silu(ad::broadcast_rows(p.deep_b1, b));
  } else {
    hidden = ad::silu(ad::add_rowvec(ad::matmul(ad::concat_cols(fields), p.deep_w1), p.deep_b1));
  }
  ad::Var deep = ad::add_rowvec(ad::matmul(hidden, p.deep_w2), p.deep_b2);
  return ad::add(fm, deep);
}

ad::Var salary_head(const ParamVars& p, ad::Var repr) {
  ad::Var h = ad::silu(ad::add_rowvec(ad::matmul(repr, p.head_w1), p.head_b1));
  return ad::softplus(ad::add_rowvec(ad::matmul(h, p.head_w2), p.head_b2));
}

}  // namespace

ad::Var factorization_machine(ad::Var bias, std::span<const ad::Var> linear,
                              std::span<const ad::Var> fields) {
  if (linear.size() != fields.size())
    throw std::invalid_argument("factorization_machine: one linear weight per field required");
  ad::Var out = bias;
  for (std::size_t i = 0; i < fields.size(); ++i) out = ad::add(out, ad::mul_rowvec(fields[i], linear[i]));
  for (std::size_t i = 0; i < fields.size(); ++i)
    for (std::size_t j = i + 1; j < fields.size(); ++j)
      out = ad::add(out, ad::mul(fields[i], fields[j]));
  return out;
}

std::vector<std::pair<ad::Var, Matrix*>> ParamVars::trainable(ModelParams& params) const {
  std::vector<std::pair<ad::Var, Matrix*>> out;
  auto add = [&out](ad::Var v, Matrix* m) {
    if (v.tape() && v.needs_grad()) out.emplace_back(v, m);
  };
  add(embedding, &params.embedding);
  add(query_proj, &params.query_proj);
  add(key_proj, &params.key_proj);
  add(level_embedding, &params.level_embedding);
  add(calib_w, &params.calib_w);
  add(calib_b, &params.calib_b);
  add(transform_w1, &params.transform_w1);
  add(transform_b1, &params.transform_b1);
  add(transform_w2, &params.transform_w2);
  add(transform_b2, &params.transform_b2);
  add(prototype_embedding, &params.prototype_embedding);
  for (std::size_t f = 0; f < context_tables.size(); ++f) add(context_tables[f], &params.context_tables[f]);
  add(fm_bias, &params.fm_bias);
  for (std::size_t f = 0; f < fm_linear.size(); ++f) add(fm_linear[f], &params.fm_linear[f]);
  add(deep_w1, &params.deep_w1);
  add(deep_b1, &params.deep_b1);
  add(deep_w2, &params.deep_w2);
  add(deep_b2, &params.deep_b2);
  add(head_w1, &params.head_w1);
  add(head_b1, &params.head_b1);
  add(head_w2, &params.head_w2);
  add(head_b2, &params.head_b2);
  add(regression_w, &params.regression_w);
  add(regression_b, &params.regression_b);
  return out;
}

ParamVars register_params(ad::Tape& tape, const Model& model, const GradientScope& scope) {
  const ModelParams& m = model.params;
  const bool net = scope.network;
  ParamVars p;
  p.embedding = reg(tape, m.embedding, net);
  p.query_proj = reg(tape, m.query_proj, net);
  p.key_proj = reg(tape, m.key_proj, net);
  p.level_embedding = reg(tape, m.level_embedding, net);
  p.calib_w = reg(tape, m.calib_w, net);
  p.calib_b = reg(tape, m.calib_b, net);
  p.transform_w1 = reg(tape, m.transform_w1, net);
  p.transform_b1 = reg(tape, m.transform_b1, net);
  p.transform_w2 = reg(tape, m.transform_w2, net);
  p.transform_b2 = reg(tape, m.transform_b2, net);
  p.prototype_embedding =
      reg(tape, m.prototype_embedding, scope.prototype_embedding && !model.bank.discrete);
  p.delta = reg(tape, model.bank.delta, scope.delta && model.bank.discrete);
  for (const auto& t : m.context_tables) p.context_tables.push_back(reg(tape, t, net));
  p.fm_bias = reg(tape, m.fm_bias, net);
  for (const auto& w : m.fm_linear) p.fm_linear.push_back(reg(tape, w, net));
  p.deep_w1 = reg(tape, m.deep_w1, net);
  p.deep_b1 = reg(tape, m.deep_b1, net);
  p.deep_w2 = reg(tape, m.deep_w2, net);
  p.deep_b2 = reg(tape, m.deep_b2, net);
  p.head_w1 = reg(tape, m.head_w1, net);
  p.head_b1 = reg(tape, m.head_b1, net);
  p.head_w2 = reg(tape, m.head_w2, net);
  p.head_b2 = reg(tape, m.head_b2, net);
  p.regression_w = reg(tape, m.regression_w, net);
  p.regression_b = reg(tape, m.regression_b, net);
  return p;
}

void validate_input(const SkillSetInput& input, const ModelConfig& config) {
  if (input.skills.empty()) throw EmptySkillSetError();
  if (input.levels.size() != input.skills.size())
    throw Error("input levels must align with skills");
  std::set<int> seen;
  for (int s : input.skills) {
    if (s < 0 || s >= config.n_skills) throw Error("skill id out of range: " + std::to_string(s));
    if (!seen.insert(s).second) throw Error("duplicate skill id: " + std::to_string(s));
  }
  for (int l : input.levels)
    if (l != kNoLevel && (l < 0 || l >= config.n_levels))
      throw Error("level id out of range: " + std::to_string(l));
}

ad::Var transform(const ParamVars& p, ad::Var rows) {
  ad::Var h = ad::silu(ad::add_rowvec(ad::matmul(rows, p.transform_w1), p.transform_b1));
  return ad::add_rowvec(ad::matmul(h, p.transform_w2), p.transform_b2);
}

ad::Var calibrate(const ParamVars& p, const ModelConfig& config, std::span<const int> levels) {
  std::vector<int> rows(levels.size());
  for (std::size_t i = 0; i < levels.size(); ++i)
    rows[i] = levels[i] == kNoLevel ? config.n_levels : levels[i];
  ad::Var e = ad::gather_rows(p.level_embedding, rows);
  return ad::sigmoid(ad::add_rowvec(ad::matmul(e, p.calib_w), p.calib_b));
}

ad::Var prototype_embeddings(ad::Tape& tape, const ParamVars& p, const Model& model) {
  if (!model.bank.discrete) return p.prototype_embedding;
  const PrototypeBank& bank = model.bank;
  ad::Var base = tape.constant(bank.membership.cwiseProduct(bank.importance));
  ad::Var weights = ad::add(base, p.delta);
  std::vector<double> inv(static_cast<std::size_t>(bank.membership.rows()));
  for (std::size_t k = 0; k < inv.size(); ++k)
    inv[k] = 1.0 / std::max(1, bank.support_size(static_cast<int>(k)));
  return ad::scale_rows(ad::matmul(weights, p.embedding), inv);
}

ad::Var context_salary_weights(ad::Tape& tape, const ParamVars& p, const ModelConfig& config,
                               std::span<const SkillSetInput* const> batch, ad::Var* repr) {
  ad::Var r = context_representation(tape, p, config, batch);
  if (repr) *repr = r;
  return salary_head(p, r);
}

Matrix gumbel_difference(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng, double clamp) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  auto gumbel = [&]() {
    const double u = std::clamp(uni(rng), clamp, 1.0 - clamp);
    return -std::log(-std::log(u));
  };
  Matrix out(rows, cols);
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    const double g0 = gumbel();
    const double g1 = gumbel();
    out.data()[i] = g0 - g1;
  }
  return out;
}

SampleNodes select_subsets(ad::Tape& tape, const ParamVars& p, const ModelConfig& c,
                           const SkillSetInput& in, const ForwardOptions& options) {
  validate_input(in, c);
  SampleNodes s;
  const auto n = static_cast<Eigen::Index>(in.skills.size());
  s.embeddings = ad::gather_rows(p.embedding, in.skills);
  if (c.uses_subsets()) {
    ad::Var set_embedding = ad::mean_rows(s.embeddings);
    ad::Var query = ad::matmul(set_embedding, p.query_proj);
    ad::Var keys = ad::matmul(s.embeddings, p.key_proj);
    s.scores = ad::multihead_scores(keys, query, c.n_views);
    switch (options.mode) {
      case MaskMode::kHard:
        s.mask = tape.constant((s.scores.value().array() > 0.0).cast<double>().matrix());
        break;
      case MaskMode::kSoft:
        s.mask = ad::sigmoid(ad::scale(s.scores, 1.0 / options.temperature));
        break;
      case MaskMode::kGumbel: {
        Matrix noise = gumbel_difference(n, c.n_views, *options.rng, options.noise_clamp);
        s.mask = ad::sigmoid(
            ad::scale(ad::add(s.scores, tape.constant(std::move(noise))), 1.0 / options.temperature));
        break;
      }
    }
  } else {
    s.scores = tape.constant(Matrix::Zero(n, 1));
    s.mask = tape.constant(Matrix::Ones(n, 1));
  }
  s.alpha = calibrate(p, c, in.levels);
  s.subsets = ad::masked_pool(s.mask, s.alpha, s.embeddings);
  return s;
}

BatchOutput forward(ad::Tape& tape, const ParamVars& p, const Model& model,
                    std::span<const SkillSetInput* const> batch, const ForwardOptions& options) {
  const ModelConfig& c = model.config;
  if (batch.empty()) throw Error("forward: empty batch");
  if (options.mode != MaskMode::kHard && !(options.temperature > 0.0))
    throw Error("Gumbel-Sigmoid temperature must be positive");
  if (options.mode == MaskMode::kGumbel && options.rng == nullptr)
    throw Error("Gumbel mask mode requires a random stream");

  BatchOutput out;
  out.n_views = c.uses_subsets() ? c.n_views : 1;
  std::vector<ad::Var> subsets;
  subsets.reserve(batch.size());
  for (const SkillSetInput* in : batch) {
    out.samples.push_back(select_subsets(tape, p, c, *in, options));
    subsets.push_back(out.samples.back().subsets);
  }
  out.subset_z = transform(p, ad::concat_rows(subsets));
  const auto b = static_cast<Eigen::Index>(batch.size());

  if (c.uses_prototypes()) {
    out.prototype_e = prototype_embeddings(tape, p, model);
    out.prototype_z = transform(p, out.prototype_e);
    out.sq_distances = ad::sq_dist(out.subset_z, out.prototype_z);
    out.similarities = ad::log_similarity(out.sq_distances, c.epsilon);
    out.aggregated = ad::sum_row_blocks(out.similarities, out.n_views);
    out.weights = ad::softmax_rows(out.aggregated);
    out.salary_weights = context_salary_weights(tape, p, c, batch, &out.context_repr);
    out.prediction = ad::row_sum(ad::mul(out.weights, out.salary_weights));
  } else {
    out.context_repr = context_representation(tape, p, c, batch);
    ad::Var pooled = ad::scale(ad::sum_row_blocks(out.subset_z, out.n_views),
                               1.0 / static_cast<double>(out.n_views));
    std::vector<ad::Var> parts{pooled, out.context_repr};
    ad::Var features = ad::concat_cols(parts);
    out.prediction = ad::add(ad::matmul(features, p.regression_w), ad::broadcast_rows(p.regression_b, b));
  }
  return out;
}

ad::Var representation_loss(ad::Var sq_distances) {
  return ad::add(ad::mean(ad::min_rows(sq_distances)), ad::mean(ad::min_cols(sq_distances)));
}

ad::Var diversity_loss(ad::Var prototype_z, double theta_min, double epsilon) {
  const double m = static_cast<double>(prototype_z.rows());
  ad::Var sims = ad::log_similarity(ad::sq_dist(prototype_z, prototype_z), epsilon);
  return ad::scale(ad::upper_hinge_sum(sims, theta_min), 1.0 / m);
}

ad::Var cooccurrence_loss(const BatchOutput& out, std::span<const SkillSetInput* const> batch,
                          const CooccurrenceGraph& graph, double floor) {
  std::vector<ad::Var> terms;
  terms.reserve(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i)
    terms.push_back(ad::density_loss(out.samples[i].mask, graph.pair_weights(batch[i]->skills), floor));
  return ad::mean(ad::concat_rows(terms));
}

}  // namespace setproto
