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

#include "setproto/model/config.hpp"

#include "setproto/error.hpp"

namespace setproto {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::kFull:
      return "full";
    case Variant::kWithoutPrototypes:
      return "wo_prot";
    case Variant::kWithoutSubsets:
      return "wo_sub";
    case Variant::kWithoutRelearning:
      return "wo_rel";
  }
  return "full";
}

Variant parse_variant(const std::string& name) {
  if (name == "full") return Variant::kFull;
  if (name == "wo_prot") return Variant::kWithoutPrototypes;
  if (name == "wo_sub") return Variant::kWithoutSubsets;
  if (name == "wo_rel") return Variant::kWithoutRelearning;
  throw ConfigError("unknown variant '" + name + "' (expected full, wo_prot, wo_sub, wo_rel)");
}

void ModelConfig::validate() const {
  if (n_skills < 1) throw ConfigError("model needs a non-empty skill vocabulary");
  if (n_levels < 0) throw ConfigError("n_levels must be non-negative");
  if (embed_dim < 1) throw ConfigError("embed_dim must be >= 1");
  if (n_views < 1) throw ConfigError("n_views must be >= 1");
  if (embed_dim % n_views != 0) throw ConfigError("embed_dim must be divisible by n_views");
  if (n_prototypes < 1) throw ConfigError("n_prototypes must be >= 1");
  if (transform_hidden < 1 || level_dim < 1 || context_hidden < 1)
    throw ConfigError("hidden widths must be >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must lie in (0, 1)");
  if (!(density_floor > 0.0)) throw ConfigError("density floor must be positive");
  if (variant == Variant::kWithoutSubsets && n_views != 1)
    throw ConfigError("the wo_sub variant uses a single view");
}

}  // namespace setproto
