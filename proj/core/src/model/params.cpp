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

#include "setproto/model/params.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "setproto/error.hpp"

namespace setproto {
namespace {

Matrix normal(Eigen::Index rows, Eigen::Index cols, double stddev, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, stddev);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = dist(rng);
  return m;
}

void round_matrix(Matrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i)
    m.data()[i] = static_cast<double>(static_cast<float>(m.data()[i]));
}

}  // namespace

PrototypeBank PrototypeBank::empty(int n_prototypes, int n_skills) {
  PrototypeBank b;
  b.membership = Matrix::Zero(n_prototypes, n_skills);
  b.importance = Matrix::Zero(n_prototypes, n_skills);
  b.delta = Matrix::Zero(n_prototypes, n_skills);
  return b;
}

Matrix PrototypeBank::effective_weights() const {
  return membership.cwiseProduct(importance) + delta;
}

int PrototypeBank::support_size(int k) const {
  return static_cast<int>((membership.row(k).array() != 0.0).count());
}

std::vector<int> PrototypeBank::support(int k) const {
  std::vector<int> out;
  for (Eigen::Index j = 0; j < membership.cols(); ++j)
    if (membership(k, j) != 0.0) out.push_back(static_cast<int>(j));
  return out;
}

std::vector<ModelParams::Named> ModelParams::tensors() {
  std::vector<Named> out{{"embedding", &embedding},
                         {"query_proj", &query_proj},
                         {"key_proj", &key_proj},
                         {"level_embedding", &level_embedding},
                         {"calib_w", &calib_w},
                         {"calib_b", &calib_b},
                         {"transform_w1", &transform_w1},
                         {"transform_b1", &transform_b1},
                         {"transform_w2", &transform_w2},
                         {"transform_b2", &transform_b2},
                         {"prototype_embedding", &prototype_embedding}};
  for (std::size_t f = 0; f < context_tables.size(); ++f)
    out.push_back({"context_tables." + std::to_string(f), &context_tables[f]});
  out.push_back({"fm_bias", &fm_bias});
  for (std::size_t f = 0; f < fm_linear.size(); ++f)
    out.push_back({"fm_linear." + std::to_string(f), &fm_linear[f]});
  for (auto& [name, m] : std::vector<std::pair<const char*, Matrix*>>{
           {"deep_w1", &deep_w1}, {"deep_b1", &deep_b1}, {"deep_w2", &deep_w2},
           {"deep_b2", &deep_b2}, {"head_w1", &head_w1}, {"head_b1", &head_b1},
           {"head_w2", &head_w2}, {"head_b2", &head_b2}, {"regression_w", &regression_w},
           {"regression_b", &regression_b}})
    out.push_back({name, m});
  return out;
}

std::vector<ModelParams::ConstNamed> ModelParams::tensors() const {
  std::vector<ConstNamed> out;
  for (auto& n : const_cast<ModelParams*>(this)->tensors()) out.push_back({n.name, n.value});
  return out;
}

ModelParams ModelParams::zeros(const ModelConfig& c) {
  const int d = c.embed_dim;
  const int fields = c.n_context_fields();
  ModelParams p;
  p.embedding = Matrix::Zero(c.n_skills, d);
  p.query_proj = Matrix::Zero(d, d);
  p.key_proj = Matrix::Zero(d, d);
  p.level_embedding = Matrix::Zero(c.n_levels + 1, c.level_dim);
  p.calib_w = Matrix::Zero(c.level_dim, 1);
  p.calib_b = Matrix::Zero(1, 1);
  p.transform_w1 = Matrix::Zero(d, c.transform_hidden);
  p.transform_b1 = Matrix::Zero(1, c.transform_hidden);
  p.transform_w2 = Matrix::Zero(c.transform_hidden, d);
  p.transform_b2 = Matrix::Zero(1, d);
  p.prototype_embedding = Matrix::Zero(c.n_prototypes, d);
  for (const auto& f : c.context_schema) {
    p.context_tables.push_back(Matrix::Zero(f.table_rows(), d));
    p.fm_linear.push_back(Matrix::Zero(1, d));
  }
  p.fm_bias = Matrix::Zero(1, d);
  p.deep_w1 = Matrix::Zero(fields * d, c.context_hidden);
  p.deep_b1 = Matrix::Zero(1, c.context_hidden);
  p.deep_w2 = Matrix::Zero(c.context_hidden, d);
  p.deep_b2 = Matrix::Zero(1, d);
  p.head_w1 = Matrix::Zero(d, c.context_hidden);
  p.head_b1 = Matrix::Zero(1, c.context_hidden);
  p.head_w2 = Matrix::Zero(c.context_hidden, c.n_prototypes);
  p.head_b2 = Matrix::Zero(1, c.n_prototypes);
  p.regression_w = Matrix::Zero(2 * d, 1);
  p.regression_b = Matrix::Zero(1, 1);
  return p;
}

void Model::round_to_float() {
  for (auto& t : params.tensors()) round_matrix(*t.value);
  round_matrix(bank.importance);
  round_matrix(bank.delta);
}

Model init_model(const ModelConfig& config, std::uint64_t seed) {
  config.validate();
  std::mt19937_64 rng(seed);
  const int d = config.embed_dim;
  const double dd = static_cast<double>(d);
  Model m;
  m.config = config;
  m.params = ModelParams::zeros(config);
  ModelParams& p = m.params;
  p.embedding = normal(config.n_skills, d, 0.3, rng);
  p.query_proj = normal(d, d, 1.0 / std::sqrt(dd), rng);
  p.key_proj = normal(d, d, 1.0 / std::sqrt(dd), rng);
  p.level_embedding = normal(config.n_levels + 1, config.level_dim, 0.1, rng);
  p.calib_w = normal(config.level_dim, 1, 0.1, rng);
  p.transform_w1 = normal(d, config.transform_hidden, std::sqrt(2.0 / dd), rng);
  p.transform_w2 = normal(config.transform_hidden, d,
                          1.0 / std::sqrt(static_cast<double>(config.transform_hidden)), rng);
  p.prototype_embedding = normal(config.n_prototypes, d, 0.15, rng);
  for (auto& t : p.context_tables) t = normal(t.rows(), t.cols(), 0.1, rng);
  for (auto& w : p.fm_linear) w = normal(1, d, 0.1, rng);
  if (p.deep_w1.rows() > 0)
    p.deep_w1 = normal(p.deep_w1.rows(), p.deep_w1.cols(),
                       std::sqrt(2.0 / static_cast<double>(p.deep_w1.rows())), rng);
  p.deep_w2 = normal(config.context_hidden, d, 0.1 / std::sqrt(static_cast<double>(config.context_hidden)), rng);
  p.head_w1 = normal(d, config.context_hidden, std::sqrt(2.0 / dd), rng);
  p.head_w2 = normal(config.context_hidden, config.n_prototypes, 0.01, rng);
  p.regression_w = normal(2 * d, 1, 0.01, rng);
  m.bank = PrototypeBank::empty(config.n_prototypes, config.n_skills);
  return m;
}

void init_salary_head(Model& model, const std::vector<double>& salaries) {
  if (salaries.empty()) return;
  std::vector<double> s = salaries;
  std::sort(s.begin(), s.end());
  double mean = 0.0;
  for (double v : s) mean += v;
  mean /= static_cast<double>(s.size());
  model.params.regression_b(0, 0) = mean;
  const int m = model.config.n_prototypes;
  for (int k = 0; k < m; ++k) {
    const double q = (static_cast<double>(k) + 0.5) / static_cast<double>(m);
    const auto idx = static_cast<std::size_t>(q * static_cast<double>(s.size() - 1));
    const double target = std::max(s[idx], 1e-3);
    // Inverse softplus.
    model.params.head_b2(0, k) = target > 30.0 ? target : std::log(std::expm1(target));
  }
}

void set_identity_transform(ModelParams& params) {
  const auto d = params.transform_w1.rows();
  const auto hidden = params.transform_w1.cols();
  if (hidden < 2 * d) throw ConfigError("identity transform needs hidden width >= 2d");
  params.transform_w1.setZero();
  params.transform_b1.setZero();
  params.transform_w2.setZero();
  params.transform_b2.setZero();
  for (Eigen::Index i = 0; i < d; ++i) {
    params.transform_w1(i, i) = 1.0;
    params.transform_w1(i, d + i) = -1.0;
    params.transform_w2(i, i) = 1.0;
    params.transform_w2(d + i, i) = -1.0;
  }
}

}  // namespace setproto
