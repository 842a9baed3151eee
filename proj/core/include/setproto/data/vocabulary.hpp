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

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace setproto {

/// One descriptor of the per-posting context record.
struct ContextField {
  enum class Kind { kCategorical, kNumeric };

  std::string name;
  Kind kind = Kind::kCategorical;
  std::vector<std::string> categories;  // kCategorical only, sorted
  double mean = 0.0;                    // kNumeric standardization
  double stddev = 1.0;

  /// Rows of the field's embedding table: categories plus one reserved
  /// row for a missing value. Numeric fields use a single row.
  int table_rows() const {
    return kind == Kind::kCategorical ? static_cast<int>(categories.size()) + 1 : 1;
  }
  int missing_index() const { return static_cast<int>(categories.size()); }
};

/// Bidirectional id <-> name maps for skills, levels and context categories.
class SkillVocabulary {
 public:
  SkillVocabulary() = default;
  SkillVocabulary(std::vector<std::string> skills, std::vector<std::string> levels,
                  std::vector<ContextField> context_schema);

  int n_skills() const { return static_cast<int>(skills_.size()); }
  int n_levels() const { return static_cast<int>(levels_.size()); }

  const std::vector<std::string>& skills() const { return skills_; }
  const std::vector<std::string>& levels() const { return levels_; }
  const std::vector<ContextField>& context_schema() const { return schema_; }

  const std::string& skill_name(int id) const { return skills_.at(static_cast<std::size_t>(id)); }
  const std::string& level_name(int id) const { return levels_.at(static_cast<std::size_t>(id)); }

  /// Throws UnknownSkillError.
  int skill_id(const std::string& name) const;
  std::optional<int> find_skill(const std::string& name) const;
  /// Throws UnknownValueError.
  int level_id(const std::string& name) const;
  /// Index of `name` in the context schema, or nullopt.
  std::optional<std::size_t> find_field(const std::string& name) const;
  /// Category index within a categorical field; nullopt when unseen.
  std::optional<int> find_category(std::size_t field, const std::string& value) const;

 private:
  std::vector<std::string> skills_;
  std::vector<std::string> levels_;
  std::vector<ContextField> schema_;
  std::unordered_map<std::string, int> skill_index_;
  std::unordered_map<std::string, int> level_index_;
  std::unordered_map<std::string, std::size_t> field_index_;
  std::vector<std::unordered_map<std::string, int>> category_index_;
};

}  // namespace setproto
