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

#include <string>
#include <vector>

#include "setproto/data/vocabulary.hpp"

namespace setproto {

/// Architecture variants used for ablations.
enum class Variant {
  kFull,
  kWithoutPrototypes,  // direct regression head on pooled subset embeddings
  kWithoutSubsets,     // single all-ones "subset" per sample
  kWithoutRelearning,  // one nearest-neighbour prototype replacement after training
};

std::string to_string(Variant v);
/// Accepts "full", "wo_prot", "wo_sub", "wo_rel". Throws ConfigError.
Variant parse_variant(const std::string& name);

/// Static shape and hyperparameters of a model instance.
struct ModelConfig {
  int n_skills = 0;
  int n_levels = 0;
  std::vector<ContextField> context_schema;

  int embed_dim = 32;
  int n_views = 4;
  int n_prototypes = 64;
  int transform_hidden = 256;
  int level_dim = 8;
  int context_hidden = 64;

  double epsilon = 1e-4;    // similarity smoothing
  double theta_min = 1.0;   // diversity hinge threshold
  double density_floor = 1e-6;

  Variant variant = Variant::kFull;

  bool uses_prototypes() const { return variant != Variant::kWithoutPrototypes; }
  bool uses_subsets() const { return variant != Variant::kWithoutSubsets; }
  int view_width() const { return embed_dim / n_views; }
  int n_context_fields() const { return static_cast<int>(context_schema.size()); }

  /// Throws ConfigError.
  void validate() const;
};

}  // namespace setproto
