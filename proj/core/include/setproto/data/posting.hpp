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

// Job-posting records: the raw JSON Lines form and the encoded form consumed
// by the model. A raw posting line looks like
//
//   {"skills":[{"name":"Python","level":"Proficient"}],
//    "context":{"city":"X","work_experience":"3-5"},"salary":18.5}
//
// "level" is optional and "salary" may also be {"min":a,"max":b}, in which
// case the midpoint is used.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "setproto/data/vocabulary.hpp"

namespace setproto {

inline constexpr int kNoLevel = -1;

using ContextValue = std::variant<std::string, double>;

struct RawSkill {
  std::string name;
  std::optional<std::string> level;
};

struct RawPosting {
  std::vector<RawSkill> skills;
  std::vector<std::pair<std::string, ContextValue>> context;
  std::optional<double> salary;
};

/// Model input: a skill set with optional per-skill levels and the encoded
/// context record. Skill order carries no meaning.
struct SkillSetInput {
  std::vector<int> skills;
  std::vector<int> levels;      // aligned with `skills`, kNoLevel when absent
  std::vector<double> context;  // one value per schema field
};

/// Encoded posting. `input.skills` is sorted ascending and duplicate-free.
struct EncodedSample {
  SkillSetInput input;
  double salary = 0.0;
};

struct EncodeOptions {
  /// Map unseen categorical context values to the reserved missing row
  /// instead of failing.
  bool allow_unknown_context = false;
  /// Require a positive finite salary.
  bool require_salary = true;
};

/// Parses one JSON object. Throws ParseError carrying `line`.
RawPosting parse_posting(const nlohmann::json& j, std::size_t line = 0);
RawPosting parse_posting_line(const std::string& text, std::size_t line = 0);
std::vector<RawPosting> read_postings(std::istream& in);
std::vector<RawPosting> read_postings_file(const std::filesystem::path& path);

nlohmann::json posting_to_json(const RawPosting& posting);
void write_postings_file(const std::filesystem::path& path, std::span<const RawPosting> postings);

/// Lexicographically ordered vocabulary covering every skill, level and
/// context value in `postings`.
SkillVocabulary build_vocabulary(std::span<const RawPosting> postings);

EncodedSample encode_posting(const RawPosting& posting, const SkillVocabulary& vocab,
                             const EncodeOptions& options = {});
std::vector<EncodedSample> encode_postings(std::span<const RawPosting> postings,
                                           const SkillVocabulary& vocab,
                                           const EncodeOptions& options = {});

/// Encodes only the context record against the vocabulary's schema.
std::vector<double> encode_context(const std::vector<std::pair<std::string, ContextValue>>& context,
                                   const SkillVocabulary& vocab, const EncodeOptions& options = {});

}  // namespace setproto
