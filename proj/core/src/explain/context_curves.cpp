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

#include "setproto/explain/context_curves.hpp"

#include <fmt/format.h>

#include <ostream>

#include "setproto/error.hpp"
#include "setproto/model/functional.hpp"

namespace setproto {
namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::vector<ContextCurvePoint> context_curves(const Model& model, const SkillVocabulary& vocab,
                                              const std::string& field, int numeric_points) {
  if (!model.config.uses_prototypes())
    throw Error("context curves need a model with prototypes");
  const auto f = vocab.find_field(field);
  if (!f) throw UnknownValueError("unknown context field: " + field);
  const auto& schema = vocab.context_schema();
  std::vector<double> base(schema.size());
  for (std::size_t i = 0; i < schema.size(); ++i)
    base[i] = schema[i].kind == ContextField::Kind::kCategorical ? schema[i].missing_index() : 0.0;

  std::vector<std::pair<std::string, double>> values;
  const ContextField& cf = schema[*f];
  if (cf.kind == ContextField::Kind::kCategorical) {
    for (std::size_t c = 0; c < cf.categories.size(); ++c)
      values.emplace_back(cf.categories[c], static_cast<double>(c));
  } else {
    if (numeric_points < 2) throw Error("numeric context curves need at least two points");
    for (int i = 0; i < numeric_points; ++i) {
      const double z = -2.0 + 4.0 * i / (numeric_points - 1);
      values.emplace_back(fmt::format("{:.6g}", cf.mean + z * cf.stddev), z);
    }
  }

  std::vector<ContextCurvePoint> out;
  for (const auto& [label, encoded] : values) {
    std::vector<double> ctx = base;
    ctx[*f] = encoded;
    const RowVector w = context_salary_weights(model, ctx);
    for (Eigen::Index k = 0; k < w.size(); ++k) out.push_back({label, static_cast<int>(k), w(k)});
  }
  return out;
}

void write_context_curves_csv(std::ostream& out, const std::string& field,
                              std::span<const ContextCurvePoint> points) {
  out << "field,value,prototype,salary_weight\n";
  for (const auto& p : points)
    out << csv_field(field) << ',' << csv_field(p.value) << ',' << p.prototype << ','
        << fmt::format("{:.17g}", p.salary_weight) << '\n';
}

}  // namespace setproto
