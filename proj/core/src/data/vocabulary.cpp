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

#include "setproto/data/vocabulary.hpp"

#include "setproto/error.hpp"

namespace setproto {

SkillVocabulary::SkillVocabulary(std::vector<std::string> skills, std::vector<std::string> levels,
                                 std::vector<ContextField> context_schema)
    : skills_(std::move(skills)), levels_(std::move(levels)), schema_(std::move(context_schema)) {
  for (std::size_t i = 0; i < skills_.size(); ++i) {
    if (skills_[i].empty()) throw Error("vocabulary: empty skill name");
    if (!skill_index_.emplace(skills_[i], static_cast<int>(i)).second)
      throw Error("vocabulary: duplicate skill '" + skills_[i] + "'");
  }
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (levels_[i].empty()) throw Error("vocabulary: empty level name");
    if (!level_index_.emplace(levels_[i], static_cast<int>(i)).second)
      throw Error("vocabulary: duplicate level '" + levels_[i] + "'");
  }
  category_index_.resize(schema_.size());
  for (std::size_t f = 0; f < schema_.size(); ++f) {
    if (!field_index_.emplace(schema_[f].name, f).second)
      throw Error("vocabulary: duplicate context field '" + schema_[f].name + "'");
    const auto& cats = schema_[f].categories;
    for (std::size_t c = 0; c < cats.size(); ++c)
      if (!category_index_[f].emplace(cats[c], static_cast<int>(c)).second)
        throw Error("vocabulary: duplicate category '" + cats[c] + "' in field " + schema_[f].name);
  }
}

int SkillVocabulary::skill_id(const std::string& name) const {
  auto it = skill_index_.find(name);
  if (it == skill_index_.end()) throw UnknownSkillError(name);
  return it->second;
}

std::optional<int> SkillVocabulary::find_skill(const std::string& name) const {
  auto it = skill_index_.find(name);
  if (it == skill_index_.end()) return std::nullopt;
  return it->second;
}

int SkillVocabulary::level_id(const std::string& name) const {
  auto it = level_index_.find(name);
  if (it == level_index_.end()) throw UnknownValueError("unknown skill level: " + name);
  return it->second;
}

std::optional<std::size_t> SkillVocabulary::find_field(const std::string& name) const {
  auto it = field_index_.find(name);
  if (it == field_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> SkillVocabulary::find_category(std::size_t field, const std::string& value) const {
  const auto& idx = category_index_.at(field);
  auto it = idx.find(value);
  if (it == idx.end()) return std::nullopt;
  return it->second;
}

}  // namespace setproto
