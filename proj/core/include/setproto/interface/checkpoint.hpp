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

#include <filesystem>

#include <nlohmann/json.hpp>

#include "setproto/data/vocabulary.hpp"
#include "setproto/model/params.hpp"

namespace setproto {

inline constexpr int kCheckpointFormatVersion = 1;

/// A checkpoint directory holds manifest.json and tensors.bin. The manifest
/// carries the format version, model settings, vocabulary, the discrete
/// prototype parts and an index {name, shape, offset, length} into
/// tensors.bin, which stores little-endian binary32 values row-major.
struct Checkpoint {
  Model model;
  SkillVocabulary vocab;
  nlohmann::json training;  // free-form hyperparameter record, may be null
};

/// Writes each file to a temporary name and renames it into place; the
/// manifest is written last. Throws CheckpointError with the failing path.
void save_checkpoint(const std::filesystem::path& dir, const Model& model,
                     const SkillVocabulary& vocab, const nlohmann::json& training = nullptr);

/// Throws CheckpointError on a missing file, malformed manifest,
/// unsupported version, or a tensor whose shape or byte range disagrees
/// with the manifest or the model settings.
Checkpoint load_checkpoint(const std::filesystem::path& dir);

nlohmann::json vocabulary_to_json(const SkillVocabulary& vocab);
SkillVocabulary vocabulary_from_json(const nlohmann::json& j);
nlohmann::json model_config_to_json(const ModelConfig& c);
/// The context schema is taken from `vocab`.
ModelConfig model_config_from_json(const nlohmann::json& j, const SkillVocabulary& vocab);

}  // namespace setproto
