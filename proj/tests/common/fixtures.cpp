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

#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "setproto/autodiff/ops.hpp"
#include "setproto/training/loss.hpp"

namespace setproto::testing {

SkillVocabulary small_vocab(int n_skills) {
  std::vector<std::string> skills;
  for (int i = 0; i < n_skills; ++i) skills.push_back("s" + std::to_string(100 + i));
  ContextField city{"city", ContextField::Kind::kCategorical, {"a", "b", "c"}, 0.0, 1.0};
  ContextField exp{"experience", ContextField::Kind::kNumeric, {}, 3.0, 2.0};
  return SkillVocabulary(std::move(skills), {"basic", "mid", "expert"}, {city, exp});
}

ModelConfig small_config(const SkillVocabulary& vocab, int embed_dim, int n_views,
                         int n_prototypes, int transform_hidden) {
  ModelConfig c;
  c.n_skills = vocab.n_skills();
  c.n_levels = vocab.n_levels();
  c.context_schema = vocab.context_schema();
  c.embed_dim = embed_dim;
  c.n_views = n_views;
  c.n_prototypes = n_prototypes;
  c.transform_hidden = transform_hidden;
  c.level_dim = 3;
  c.context_hidden = 5;
  c.validate();
  return c;
}

Model random_model(const ModelConfig& config, std::uint64_t seed) {
  Model m = init_model(config, seed);
  std::mt19937_64 rng(seed + 7);
  std::normal_distribution<double> nd(0.0, 0.3);
  for (auto& t : m.params.tensors())
    for (Eigen::Index i = 0; i < t.value->size(); ++i) t.value->data()[i] += nd(rng);
  return m;
}

SkillSetInput random_input(const ModelConfig& config, std::mt19937_64& rng, int min_size,
                           int max_size) {
  std::uniform_int_distribution<int> size_dist(min_size, std::min(max_size, config.n_skills));
  std::vector<int> ids(static_cast<std::size_t>(config.n_skills));
  std::iota(ids.begin(), ids.end(), 0);
  std::shuffle(ids.begin(), ids.end(), rng);
  ids.resize(static_cast<std::size_t>(size_dist(rng)));
  std::sort(ids.begin(), ids.end());

  SkillSetInput in;
  in.skills = ids;
  std::uniform_int_distribution<int> lv(-1, config.n_levels - 1);
  for (std::size_t i = 0; i < ids.size(); ++i) in.levels.push_back(lv(rng));
  std::normal_distribution<double> nd(0.0, 1.0);
  for (const auto& f : config.context_schema) {
    if (f.kind == ContextField::Kind::kCategorical) {
      std::uniform_int_distribution<int> cat(0, static_cast<int>(f.categories.size()) - 1);
      in.context.push_back(cat(rng));
    } else {
      in.context.push_back(nd(rng));
    }
  }
  return in;
}

std::vector<EncodedSample> random_samples(const ModelConfig& config, std::size_t n,
                                          std::uint64_t seed, int min_size, int max_size) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 0.1);
  std::vector<EncodedSample> out;
  for (std::size_t i = 0; i < n; ++i) {
    EncodedSample s;
    s.input = random_input(config, rng, min_size, max_size);
    // Salary grows with the number of low-id skills.
    double y = 3.0;
    for (int id : s.input.skills) y += id < config.n_skills / 2 ? 0.5 : 0.1;
    s.salary = y + noise(rng);
    out.push_back(std::move(s));
  }
  return out;
}

double relative_error(double analytic, double numeric) {
  return std::abs(analytic - numeric) /
         std::max({std::abs(analytic), std::abs(numeric), 1e-6});
}

namespace {

void record(GradReport& r, double analytic, double numeric, const std::string& where) {
  const double e = relative_error(analytic, numeric);
  ++r.checked;
  if (e > r.max_rel_error) {
    r.max_rel_error = e;
    r.where = where;
  }
}

}  // namespace

GradReport check_gradients(const ScalarFn& f, std::vector<Matrix> inputs, double h) {
  std::vector<Matrix> grads;
  {
    ad::Tape tape;
    std::vector<ad::Var> vars;
    for (const auto& m : inputs) vars.push_back(tape.variable(m));
    ad::Var y = f(tape, vars);
    tape.backward(y);
    for (std::size_t i = 0; i < vars.size(); ++i) {
      const Matrix& g = vars[i].grad();
      grads.push_back(g.size() ? g : Matrix::Zero(inputs[i].rows(), inputs[i].cols()));
    }
  }
  auto eval = [&] {
    ad::Tape tape;
    std::vector<ad::Var> vars;
    for (const auto& m : inputs) vars.push_back(tape.constant(m));
    return f(tape, vars).scalar();
  };

  GradReport r;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    for (Eigen::Index k = 0; k < inputs[i].size(); ++k) {
      double& x = inputs[i].data()[k];
      const double x0 = x;
      x = x0 + h;
      const double up = eval();
      x = x0 - h;
      const double down = eval();
      x = x0;
      record(r, grads[i].data()[k], (up - down) / (2 * h),
             "input " + std::to_string(i) + "[" + std::to_string(k) + "]");
    }
  }
  return r;
}

namespace {

double select_term(const LossTerms& t, const BatchOutput& out, LossTerm term) {
  switch (term) {
    case LossTerm::kPred: return t.pred.scalar();
    case LossTerm::kCon: return t.con.scalar();
    case LossTerm::kRep: return t.rep.scalar();
    case LossTerm::kDiv: return t.div.scalar();
    case LossTerm::kTotal: return t.total.scalar();
    case LossTerm::kPrediction: return out.prediction.value().sum();
  }
  return 0.0;
}

ad::Var select_var(ad::Tape& tape, const LossTerms& t, const BatchOutput& out, LossTerm term) {
  (void)tape;
  switch (term) {
    case LossTerm::kPred: return t.pred;
    case LossTerm::kCon: return t.con;
    case LossTerm::kRep: return t.rep;
    case LossTerm::kDiv: return t.div;
    case LossTerm::kTotal: return t.total;
    case LossTerm::kPrediction: return ad::sum(out.prediction);
  }
  return t.total;
}

}  // namespace

GradReport check_model_gradients(Model model, const ModelGradCase& c, LossTerm term, double h) {
  CooccurrenceGraph empty_graph(model.config.n_skills);
  const CooccurrenceGraph& graph = c.graph ? *c.graph : empty_graph;
  std::vector<const SkillSetInput*> batch;
  for (const auto& in : c.batch) batch.push_back(&in);

  auto run = [&](ad::Tape& tape, const GradientScope& scope, ParamVars& p) {
    p = register_params(tape, model, scope);
    std::mt19937_64 rng(c.noise_seed);
    ForwardOptions opt;
    opt.mode = MaskMode::kGumbel;
    opt.temperature = c.temperature;
    opt.rng = &rng;
    BatchOutput out = forward(tape, p, model, batch, opt);
    LossTerms t = total_loss(tape, out, batch, c.targets, model.config, graph, LossWeights{});
    return std::make_pair(out, t);
  };

  // Analytic gradients, copied out per tensor.
  std::vector<std::pair<Matrix*, Matrix>> analytic;
  {
    ad::Tape tape;
    ParamVars p;
    auto [out, t] = run(tape, c.scope, p);
    tape.backward(select_var(tape, t, out, term));
    for (auto& [var, ptr] : p.trainable(model.params)) {
      const Matrix& g = var.grad();
      analytic.emplace_back(ptr, g.size() ? g : Matrix::Zero(ptr->rows(), ptr->cols()));
    }
    if (c.scope.delta) {
      const Matrix& g = p.delta.grad();
      analytic.emplace_back(&model.bank.delta,
                            g.size() ? g : Matrix::Zero(model.bank.delta.rows(), model.bank.delta.cols()));
    }
  }

  auto eval = [&] {
    ad::Tape tape;
    ParamVars p;
    GradientScope none{false, false, false};
    auto [out, t] = run(tape, none, p);
    return select_term(t, out, term);
  };

  std::vector<std::pair<const Matrix*, std::string>> names;
  for (const auto& t : model.params.tensors()) names.emplace_back(t.value, t.name);
  names.emplace_back(&model.bank.delta, "delta");
  auto name_of = [&](const Matrix* m) {
    for (const auto& [ptr, n] : names)
      if (ptr == m) return n;
    return std::string("?");
  };

  GradReport r;
  for (auto& [ptr, g] : analytic) {
    for (Eigen::Index k = 0; k < ptr->size(); ++k) {
      double& x = ptr->data()[k];
      const double x0 = x;
      x = x0 + h;
      const double up = eval();
      x = x0 - h;
      const double down = eval();
      x = x0;
      record(r, g.data()[k], (up - down) / (2 * h), name_of(ptr) + "[" + std::to_string(k) + "]");
    }
  }
  return r;
}

}  // namespace setproto::testing
