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

#include "setproto/training/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <string>

#include "setproto/error.hpp"

namespace setproto {
namespace {

constexpr double kAnnealFraction = 0.8;

template <typename T>
void read_key(const nlohmann::json& j, const char* key, T& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("train config key '") + key + "' has the wrong type");
  }
}

void reject_unknown(const nlohmann::json& j, const std::set<std::string>& known, const char* where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key()))
      throw ConfigError(std::string("unknown ") + where + " key '" + it.key() + "'");
}

}  // namespace

int TrainConfig::resolved_warmup() const {
  return warmup_epochs >= 0 ? warmup_epochs : static_cast<int>(std::floor(0.2 * total_epochs));
}

int TrainConfig::resolved_refine() const {
  return refine_epochs >= 0 ? refine_epochs : static_cast<int>(std::lround(0.1 * total_epochs));
}

double TrainConfig::resolved_anneal_rate() const {
  if (gumbel.anneal_rate > 0.0) return gumbel.anneal_rate;
  const double horizon = std::max(1.0, kAnnealFraction * total_epochs);
  return std::pow(gumbel.tau_min / gumbel.tau0, 1.0 / horizon);
}

void TrainConfig::validate() const {
  if (total_epochs < 1) throw ConfigError("total_epochs must be >= 1");
  if (resolved_warmup() >= total_epochs) throw ConfigError("warmup_epochs must be < total_epochs");
  if (projection_period < 1) throw ConfigError("projection_period must be >= 1");
  if (resolved_refine() < 0) throw ConfigError("refine_epochs must be >= 0");
  for (double l : {lambda_con, lambda_rep, lambda_div, lambda_p})
    if (!(l >= 0.0) || !std::isfinite(l)) throw ConfigError("loss weights must be finite and >= 0");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (!(gumbel.tau_min > 0.0) || gumbel.tau_min > gumbel.tau0)
    throw ConfigError("temperatures must satisfy 0 < tau_min <= tau0");
  if (gumbel.anneal_rate < 0.0 || gumbel.anneal_rate > 1.0)
    throw ConfigError("anneal_rate must lie in [0, 1]");
  if (!(gumbel.noise_clamp > 0.0 && gumbel.noise_clamp < 0.5))
    throw ConfigError("noise_clamp must lie in (0, 0.5)");
}

nlohmann::json to_json(const TrainConfig& c) {
  return {
      {"total_epochs", c.total_epochs},
      {"warmup_epochs", c.warmup_epochs},
      {"projection_period", c.projection_period},
      {"refine_epochs", c.refine_epochs},
      {"lambda_con", c.lambda_con},
      {"lambda_rep", c.lambda_rep},
      {"lambda_div", c.lambda_div},
      {"lambda_p", c.lambda_p},
      {"learning_rate", c.learning_rate},
      {"batch_size", c.batch_size},
      {"seed", c.seed},
      {"n_prototypes", c.n_prototypes},
      {"n_views", c.n_views},
      {"embed_dim", c.embed_dim},
      {"transform_hidden", c.transform_hidden},
      {"level_dim", c.level_dim},
      {"context_hidden", c.context_hidden},
      {"epsilon", c.epsilon},
      {"theta_min", c.theta_min},
      {"density_floor", c.density_floor},
      {"variant", to_string(c.variant)},
      {"gumbel",
       {{"tau0", c.gumbel.tau0},
        {"tau_min", c.gumbel.tau_min},
        {"anneal_rate", c.gumbel.anneal_rate},
        {"hard_at_inference", c.gumbel.hard_at_inference},
        {"noise_clamp", c.gumbel.noise_clamp}}},
  };
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("train config must be a JSON object");
  reject_unknown(j,
                 {"total_epochs", "warmup_epochs", "projection_period", "refine_epochs", "lambda_con",
                  "lambda_rep", "lambda_div", "lambda_p", "learning_rate", "batch_size", "seed",
                  "n_prototypes", "n_views", "embed_dim", "transform_hidden", "level_dim",
                  "context_hidden", "epsilon", "theta_min", "density_floor", "variant", "gumbel"},
                 "train config");
  TrainConfig c;
  read_key(j, "total_epochs", c.total_epochs);
  read_key(j, "warmup_epochs", c.warmup_epochs);
  read_key(j, "projection_period", c.projection_period);
  read_key(j, "refine_epochs", c.refine_epochs);
  read_key(j, "lambda_con", c.lambda_con);
  read_key(j, "lambda_rep", c.lambda_rep);
  read_key(j, "lambda_div", c.lambda_div);
  read_key(j, "lambda_p", c.lambda_p);
  read_key(j, "learning_rate", c.learning_rate);
  read_key(j, "batch_size", c.batch_size);
  read_key(j, "seed", c.seed);
  read_key(j, "n_prototypes", c.n_prototypes);
  read_key(j, "n_views", c.n_views);
  read_key(j, "embed_dim", c.embed_dim);
  read_key(j, "transform_hidden", c.transform_hidden);
  read_key(j, "level_dim", c.level_dim);
  read_key(j, "context_hidden", c.context_hidden);
  read_key(j, "epsilon", c.epsilon);
  read_key(j, "theta_min", c.theta_min);
  read_key(j, "density_floor", c.density_floor);
  std::string variant = to_string(c.variant);
  read_key(j, "variant", variant);
  c.variant = parse_variant(variant);
  if (auto g = j.find("gumbel"); g != j.end()) {
    if (!g->is_object()) throw ConfigError("train config key 'gumbel' must be an object");
    reject_unknown(*g, {"tau0", "tau_min", "anneal_rate", "hard_at_inference", "noise_clamp"},
                   "gumbel");
    read_key(*g, "tau0", c.gumbel.tau0);
    read_key(*g, "tau_min", c.gumbel.tau_min);
    read_key(*g, "anneal_rate", c.gumbel.anneal_rate);
    read_key(*g, "hard_at_inference", c.gumbel.hard_at_inference);
    read_key(*g, "noise_clamp", c.gumbel.noise_clamp);
  }
  c.validate();
  return c;
}

TrainConfig load_train_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open train config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("train config " + path.string() + " is not valid JSON: " + e.what());
  }
  return train_config_from_json(j);
}

void apply_model_settings(const TrainConfig& c, ModelConfig& m) {
  m.embed_dim = c.embed_dim;
  m.n_views = c.n_views;
  m.n_prototypes = c.n_prototypes;
  m.transform_hidden = c.transform_hidden;
  m.level_dim = c.level_dim;
  m.context_hidden = c.context_hidden;
  m.epsilon = c.epsilon;
  m.theta_min = c.theta_min;
  m.density_floor = c.density_floor;
  m.variant = c.variant;
}

ModelConfig make_model_config(const SkillVocabulary& vocab, const TrainConfig& config) {
  ModelConfig m;
  m.n_skills = vocab.n_skills();
  m.n_levels = vocab.n_levels();
  m.context_schema = vocab.context_schema();
  apply_model_settings(config, m);
  m.validate();
  return m;
}

double anneal_temperature(int epoch, const TrainConfig& config) {
  const GumbelConfig& g = config.gumbel;
  if (epoch <= 0) return g.tau0;
  if (config.gumbel.anneal_rate <= 0.0 && epoch >= kAnnealFraction * config.total_epochs)
    return g.tau_min;
  return std::max(g.tau_min, g.tau0 * std::pow(config.resolved_anneal_rate(), epoch));
}

TrainConfig make_ablation(TrainConfig config, Variant variant) {
  config.variant = variant;
  if (variant == Variant::kWithoutSubsets) config.n_views = 1;
  return config;
}

}  // namespace setproto
