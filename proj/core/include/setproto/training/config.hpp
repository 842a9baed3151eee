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
#include <filesystem>

#include <nlohmann/json.hpp>

#include "setproto/data/vocabulary.hpp"
#include "setproto/model/config.hpp"

namespace setproto {

struct GumbelConfig {
  double tau0 = 1.0;
  double tau_min = 0.1;
  /// Per-epoch decay factor; 0 derives it so tau_min is reached at 80% of
  /// the training epochs.
  double anneal_rate = 0.0;
  bool hard_at_inference = true;
  double noise_clamp = 1e-10;
};

/// Training hyperparameters. Every key is optional in the JSON form; the
/// defaults below apply to missing keys.
struct TrainConfig {
  int total_epochs = 100;
  int warmup_epochs = -1;  // -1: 20% of total_epochs
  int projection_period = 5;
  int refine_epochs = -1;  // -1: 10% of total_epochs

  double lambda_con = 0.1;
  double lambda_rep = 0.1;
  double lambda_div = 0.1;
  double lambda_p = 1e-3;

  double learning_rate = 1e-3;
  int batch_size = 64;
  std::uint64_t seed = 0;

  int n_prototypes = 64;
  int n_views = 4;
  int embed_dim = 32;
  int transform_hidden = 256;
  int level_dim = 8;
  int context_hidden = 64;
  double epsilon = 1e-4;
  double theta_min = 1.0;
  double density_floor = 1e-6;
  Variant variant = Variant::kFull;

  GumbelConfig gumbel;

  int resolved_warmup() const;
  int resolved_refine() const;
  /// Decay factor actually used by the temperature schedule.
  double resolved_anneal_rate() const;

  /// Throws ConfigError.
  void validate() const;
};

nlohmann::json to_json(const TrainConfig& c);
/// Unknown keys are rejected so typos do not silently fall back to defaults.
TrainConfig train_config_from_json(const nlohmann::json& j);
TrainConfig load_train_config(const std::filesystem::path& path);

/// Model shape for a vocabulary under a training configuration.
ModelConfig make_model_config(const SkillVocabulary& vocab, const TrainConfig& config);
void apply_model_settings(const TrainConfig& config, ModelConfig& model);

/// Gumbel temperature for zero-based epoch `epoch`.
double anneal_temperature(int epoch, const TrainConfig& config);

/// Returns `config` adjusted for an ablation variant.
TrainConfig make_ablation(TrainConfig config, Variant variant);

}  // namespace setproto
