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

#include "setproto/training/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include <spdlog/spdlog.h>

#include "setproto/autodiff/ops.hpp"
#include "setproto/error.hpp"
#include "setproto/explain/prototypes.hpp"
#include "setproto/model/forward.hpp"
#include "setproto/training/adam.hpp"
#include "setproto/training/loss.hpp"

namespace setproto {
namespace {

struct EpochTotals {
  double pred = 0.0;
  double con = 0.0;
  double rep = 0.0;
  double div = 0.0;
  double total = 0.0;
};

void check_finite(const LossTerms& t, int epoch, std::size_t step) {
  const double values[] = {t.pred.scalar(), t.con.scalar(), t.rep.scalar(), t.div.scalar(),
                           t.total.scalar()};
  for (double v : values)
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "non-finite loss at epoch " << epoch << ", step " << step << " (pred=" << values[0]
          << ", con=" << values[1] << ", rep=" << values[2] << ", div=" << values[3]
          << "); try a smaller learning_rate";
      throw Error(msg.str());
    }
}

struct Trainer {
  Model& model;
  std::span<const EncodedSample> train;
  const CooccurrenceGraph& graph;
  const TrainConfig& cfg;
  Adam adam;
  std::mt19937_64 order_rng;
  std::mt19937_64 noise_rng;

  EpochTotals run_epoch(int epoch, double tau, bool with_delta) {
    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), order_rng);
    const LossWeights weights{cfg.lambda_con, cfg.lambda_rep, cfg.lambda_div};
    const GradientScope scope{true, !model.bank.discrete, with_delta};
    const auto batch_size = static_cast<std::size_t>(cfg.batch_size);
    EpochTotals totals;
    std::size_t steps = 0;
    for (std::size_t begin = 0; begin < order.size(); begin += batch_size) {
      const std::size_t end = std::min(order.size(), begin + batch_size);
      std::vector<const SkillSetInput*> batch;
      std::vector<double> targets;
      for (std::size_t i = begin; i < end; ++i) {
        batch.push_back(&train[order[i]].input);
        targets.push_back(train[order[i]].salary);
      }
      ad::Tape tape;
      const ParamVars p = register_params(tape, model, scope);
      const ForwardOptions options{MaskMode::kGumbel, tau, cfg.gumbel.noise_clamp, &noise_rng};
      const BatchOutput out = forward(tape, p, model, batch, options);
      const LossTerms t = total_loss(tape, out, batch, targets, model.config, graph, weights);
      check_finite(t, epoch, steps);
      tape.backward(t.total);
      for (auto& [var, param] : p.trainable(model.params)) adam.step(*param, var.grad());
      if (with_delta) adam.step_l1(model.bank.delta, p.delta.grad(), cfg.lambda_p);
      totals.pred += t.pred.scalar();
      totals.con += t.con.scalar();
      totals.rep += t.rep.scalar();
      totals.div += t.div.scalar();
      totals.total += t.total.scalar();
      ++steps;
    }
    const double n = static_cast<double>(std::max<std::size_t>(steps, 1));
    totals.pred /= n;
    totals.con /= n;
    totals.rep /= n;
    totals.div /= n;
    totals.total /= n;
    return totals;
  }
};

std::vector<SkillSetInput> sample_inputs(std::span<const EncodedSample> samples) {
  std::vector<SkillSetInput> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.input);
  return out;
}

}  // namespace

FitResult fit(const ModelConfig& shape, std::span<const EncodedSample> train,
              std::span<const EncodedSample> val, const FrequentSetPool& pool,
              const CooccurrenceGraph& graph, const TrainConfig& config) {
  config.validate();
  if (train.empty()) throw Error("training set is empty");
  ModelConfig mc = shape;
  apply_model_settings(config, mc);
  mc.validate();

  const Variant variant = mc.variant;
  const bool prototypes = mc.uses_prototypes();
  const bool periodic = prototypes && variant != Variant::kWithoutRelearning;
  std::vector<SkillSetInput> pool_inputs;
  if (periodic) {
    if (pool.empty())
      throw Error("frequent set pool is empty; lower min_support so that prototype projection "
                  "has candidates");
    pool_inputs = frequent_set_inputs(pool, modal_levels(train, mc.n_skills));
  }

  FitResult result;
  TrainReport& report = result.report;
  report.config = config;
  report.n_train = train.size();
  report.n_val = val.size();
  report.pool_size = pool.size();

  Model model = init_model(mc, config.seed);
  {
    std::vector<double> salaries;
    for (const auto& s : train) salaries.push_back(s.salary);
    init_salary_head(model, salaries);
  }
  Trainer trainer{model,
                  train,
                  graph,
                  config,
                  Adam(config.learning_rate),
                  std::mt19937_64(config.seed ^ 0x5851f42d4c957f2dULL),
                  std::mt19937_64(config.seed ^ 0x14057b7ef767814fULL)};

  const int n_total = config.total_epochs;
  const int n_warm = config.resolved_warmup();
  const int n_refine = prototypes ? config.resolved_refine() : 0;

  auto project = [&](int epoch, std::span<const SkillSetInput> inputs) {
    ProjectionEvent ev = project_prototypes(model, inputs);
    ev.epoch = epoch;
    trainer.adam.reset(model.params.prototype_embedding);
    spdlog::info("epoch {}: projected {} prototypes onto {} candidates ({} changed)", epoch,
                 mc.n_prototypes, ev.n_candidates, ev.n_changed);
    report.projections.push_back(std::move(ev));
  };

  std::optional<Model> best;
  double best_rmse = std::numeric_limits<double>::infinity();
  auto consider = [&](int epoch, const std::optional<MetricReport>& m) {
    const double rmse = m ? m->rmse : 0.0;
    if (!best || rmse < best_rmse) {
      best = model;
      best_rmse = rmse;
      report.selected_epoch = epoch;
    }
  };
  auto log_epoch = [&](int epoch, const char* phase, double tau, const EpochTotals& t) {
    EpochLog log;
    log.epoch = epoch;
    log.phase = phase;
    log.temperature = tau;
    log.pred = t.pred;
    log.con = t.con;
    log.rep = t.rep;
    log.div = t.div;
    log.l1 = config.lambda_p * model.bank.delta.cwiseAbs().sum();
    log.total = t.total;
    if (!val.empty()) log.val = evaluate(model, val);
    spdlog::debug("epoch {} [{}] tau={:.4f} loss={:.5f} val_rmse={:.5f}", epoch, phase, tau,
                  t.total, log.val ? log.val->rmse : 0.0);
    report.epochs.push_back(log);
    return log.val;
  };

  for (int e = 1; e <= n_total; ++e) {
    const double tau = anneal_temperature(e - 1, config);
    const EpochTotals t = trainer.run_epoch(e, tau, false);
    if (periodic && e > n_warm && (e % config.projection_period == 0 || e == n_total))
      project(e, pool_inputs);
    if (e == n_total && variant == Variant::kWithoutRelearning) {
      const std::vector<SkillSetInput> inputs = sample_inputs(train);
      project(e, inputs);
    }
    if (e == n_total && prototypes) model.bank.discrete = true;
    const auto m = log_epoch(e, "train", tau, t);
    if (!prototypes || e == n_total) consider(e, m);
  }

  const double tau_final = anneal_temperature(n_total, config);
  const bool with_delta = variant == Variant::kFull;
  for (int l = 1; l <= n_refine; ++l) {
    const int e = n_total + l;
    const EpochTotals t = trainer.run_epoch(e, tau_final, with_delta);
    consider(e, log_epoch(e, "refine", tau_final, t));
  }

  model = std::move(*best);
  model.round_to_float();
  model.prototype_salary_means = mean_salary_weights(model, train);
  if (!val.empty()) report.val = evaluate(model, val);
  report.delta_l1.resize(static_cast<std::size_t>(mc.n_prototypes));
  for (int k = 0; k < mc.n_prototypes; ++k)
    report.delta_l1[static_cast<std::size_t>(k)] = model.bank.delta.row(k).cwiseAbs().sum();
  spdlog::info("training finished; kept epoch {}{}", report.selected_epoch,
               report.val ? fmt::format(", val rmse {:.4f}", report.val->rmse) : std::string());
  result.model = std::move(model);
  return result;
}

nlohmann::json to_json(const TrainReport& r) {
  nlohmann::json epochs = nlohmann::json::array();
  for (const auto& e : r.epochs) {
    nlohmann::json j = {{"epoch", e.epoch}, {"phase", e.phase}, {"temperature", e.temperature},
                        {"pred", e.pred},   {"con", e.con},     {"rep", e.rep},
                        {"div", e.div},     {"l1", e.l1},       {"total", e.total}};
    if (e.val) j["val"] = to_json(*e.val);
    epochs.push_back(std::move(j));
  }
  nlohmann::json projections = nlohmann::json::array();
  for (const auto& p : r.projections) projections.push_back(to_json(p));
  nlohmann::json out = {{"config", to_json(r.config)},
                        {"n_train", r.n_train},
                        {"n_val", r.n_val},
                        {"pool_size", r.pool_size},
                        {"epochs", std::move(epochs)},
                        {"projections", std::move(projections)},
                        {"selected_epoch", r.selected_epoch},
                        {"delta_l1", r.delta_l1}};
  if (r.val) out["val"] = to_json(*r.val);
  if (r.test) out["test"] = to_json(*r.test);
  return out;
}

}  // namespace setproto
