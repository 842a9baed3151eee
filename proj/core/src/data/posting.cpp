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

#include "setproto/data/posting.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <set>

#include "setproto/error.hpp"

namespace setproto {
namespace {

using nlohmann::json;

double parse_salary(const json& s, std::size_t line) {
  double value = 0.0;
  if (s.is_number()) {
    value = s.get<double>();
  } else if (s.is_object() && s.contains("min") && s.contains("max") && s["min"].is_number() &&
             s["max"].is_number()) {
    value = 0.5 * (s["min"].get<double>() + s["max"].get<double>());
  } else {
    throw ParseError("salary must be a number or {\"min\":a,\"max\":b}", line);
  }
  if (!std::isfinite(value) || value <= 0.0) throw ParseError("salary must be positive and finite", line);
  return value;
}

}  // namespace

RawPosting parse_posting(const json& j, std::size_t line) {
  if (!j.is_object()) throw ParseError("posting must be a JSON object", line);
  RawPosting p;
  auto skills = j.find("skills");
  if (skills == j.end() || !skills->is_array()) throw ParseError("missing \"skills\" array", line);
  for (const auto& s : *skills) {
    RawSkill rs;
    if (s.is_string()) {
      rs.name = s.get<std::string>();
    } else if (s.is_object() && s.contains("name") && s["name"].is_string()) {
      rs.name = s["name"].get<std::string>();
      if (auto lv = s.find("level"); lv != s.end() && !lv->is_null()) {
        if (!lv->is_string()) throw ParseError("skill level must be a string", line);
        rs.level = lv->get<std::string>();
      }
    } else {
      throw ParseError("skill entries must be strings or {\"name\":...} objects", line);
    }
    if (rs.name.empty()) throw ParseError("empty skill name", line);
    p.skills.push_back(std::move(rs));
  }
  if (auto ctx = j.find("context"); ctx != j.end() && !ctx->is_null()) {
    if (!ctx->is_object()) throw ParseError("\"context\" must be an object", line);
    for (const auto& [key, value] : ctx->items()) {
      if (value.is_string()) {
        p.context.emplace_back(key, value.get<std::string>());
      } else if (value.is_number()) {
        p.context.emplace_back(key, value.get<double>());
      } else {
        throw ParseError("context field '" + key + "' must be a string or number", line);
      }
    }
  }
  if (auto s = j.find("salary"); s != j.end() && !s->is_null()) p.salary = parse_salary(*s, line);
  return p;
}

RawPosting parse_posting_line(const std::string& text, std::size_t line) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), line);
  }
  return parse_posting(j, line);
}

std::vector<RawPosting> read_postings(std::istream& in) {
  std::vector<RawPosting> out;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); }))
      continue;
    out.push_back(parse_posting_line(text, line));
  }
  return out;
}

std::vector<RawPosting> read_postings_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open dataset " + path.string());
  return read_postings(in);
}

json posting_to_json(const RawPosting& posting) {
  json skills = json::array();
  for (const auto& s : posting.skills) {
    json e{{"name", s.name}};
    if (s.level) e["level"] = *s.level;
    skills.push_back(std::move(e));
  }
  json j{{"skills", std::move(skills)}};
  json ctx = json::object();
  for (const auto& [k, v] : posting.context)
    std::visit([&ctx, &k](const auto& x) { ctx[k] = x; }, v);
  j["context"] = std::move(ctx);
  if (posting.salary) j["salary"] = *posting.salary;
  return j;
}

void write_postings_file(const std::filesystem::path& path, std::span<const RawPosting> postings) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  for (const auto& p : postings) out << posting_to_json(p).dump() << '\n';
  if (!out) throw Error("write failed: " + path.string());
}

SkillVocabulary build_vocabulary(std::span<const RawPosting> postings) {
  std::set<std::string> skills;
  std::set<std::string> levels;
  struct FieldInfo {
    std::set<std::string> categories;
    std::vector<double> numbers;
  };
  std::map<std::string, FieldInfo> fields;
  for (const auto& p : postings) {
    for (const auto& s : p.skills) {
      skills.insert(s.name);
      if (s.level) levels.insert(*s.level);
    }
    for (const auto& [k, v] : p.context) {
      auto& info = fields[k];
      if (const auto* str = std::get_if<std::string>(&v)) {
        info.categories.insert(*str);
      } else {
        info.numbers.push_back(std::get<double>(v));
      }
    }
  }
  std::vector<ContextField> schema;
  for (auto& [name, info] : fields) {
    ContextField f;
    f.name = name;
    if (!info.categories.empty() && !info.numbers.empty())
      throw ParseError("context field '" + name + "' mixes strings and numbers", 0);
    if (!info.numbers.empty()) {
      f.kind = ContextField::Kind::kNumeric;
      double m = 0.0;
      for (double x : info.numbers) m += x;
      m /= static_cast<double>(info.numbers.size());
      double var = 0.0;
      for (double x : info.numbers) var += (x - m) * (x - m);
      var /= static_cast<double>(info.numbers.size());
      f.mean = m;
      f.stddev = var > 0.0 ? std::sqrt(var) : 1.0;
    } else {
      f.kind = ContextField::Kind::kCategorical;
      f.categories.assign(info.categories.begin(), info.categories.end());
    }
    schema.push_back(std::move(f));
  }
  return SkillVocabulary({skills.begin(), skills.end()}, {levels.begin(), levels.end()},
                         std::move(schema));
}

std::vector<double> encode_context(const std::vector<std::pair<std::string, ContextValue>>& context,
                                   const SkillVocabulary& vocab, const EncodeOptions& options) {
  const auto& schema = vocab.context_schema();
  std::vector<double> out(schema.size());
  std::vector<bool> seen(schema.size(), false);
  for (std::size_t f = 0; f < schema.size(); ++f)
    out[f] = schema[f].kind == ContextField::Kind::kCategorical ? schema[f].missing_index() : 0.0;
  for (const auto& [key, value] : context) {
    auto f = vocab.find_field(key);
    if (!f) throw UnknownValueError("unknown context field: " + key);
    if (seen[*f]) throw UnknownValueError("duplicate context field: " + key);
    seen[*f] = true;
    const ContextField& field = schema[*f];
    if (field.kind == ContextField::Kind::kCategorical) {
      const auto* str = std::get_if<std::string>(&value);
      if (!str) throw UnknownValueError("context field '" + key + "' expects a string");
      auto c = vocab.find_category(*f, *str);
      if (!c) {
        if (!options.allow_unknown_context)
          throw UnknownValueError("unknown value '" + *str + "' for context field '" + key + "'");
        out[*f] = field.missing_index();
      } else {
        out[*f] = *c;
      }
    } else {
      const auto* num = std::get_if<double>(&value);
      if (!num) throw UnknownValueError("context field '" + key + "' expects a number");
      out[*f] = (*num - field.mean) / field.stddev;
    }
  }
  return out;
}

EncodedSample encode_posting(const RawPosting& posting, const SkillVocabulary& vocab,
                             const EncodeOptions& options) {
  if (posting.skills.empty()) throw EmptySkillSetError();
  std::map<int, int> levels;  // skill id -> level, ordered by id
  for (const auto& s : posting.skills) {
    const int id = vocab.skill_id(s.name);
    const int lv = s.level ? vocab.level_id(*s.level) : kNoLevel;
    auto [it, inserted] = levels.emplace(id, lv);
    if (!inserted && it->second == kNoLevel) it->second = lv;
  }
  EncodedSample out;
  for (const auto& [id, lv] : levels) {
    out.input.skills.push_back(id);
    out.input.levels.push_back(lv);
  }
  out.input.context = encode_context(posting.context, vocab, options);
  if (posting.salary) {
    out.salary = *posting.salary;
  } else if (options.require_salary) {
    throw Error("posting has no salary");
  }
  return out;
}

std::vector<EncodedSample> encode_postings(std::span<const RawPosting> postings,
                                           const SkillVocabulary& vocab,
                                           const EncodeOptions& options) {
  std::vector<EncodedSample> out;
  out.reserve(postings.size());
  for (std::size_t i = 0; i < postings.size(); ++i) {
    try {
      out.push_back(encode_posting(postings[i], vocab, options));
    } catch (const UnknownSkillError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), i + 1);
    }
  }
  return out;
}

}  // namespace setproto
