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

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "setproto/model/params.hpp"

namespace setproto {

struct ContextCurvePoint {
  std::string value;  // category name or formatted number
  int prototype = 0;
  double salary_weight = 0.0;
};

/// Salary weight of every prototype as one context field sweeps its range
/// while the other fields stay missing (categorical) or at their mean
/// (numeric). Categorical fields visit each category; numeric fields visit
/// `numeric_points` evenly spaced values over mean +/- 2 standard deviations.
std::vector<ContextCurvePoint> context_curves(const Model& model, const SkillVocabulary& vocab,
                                              const std::string& field, int numeric_points = 11);

/// CSV with header `field,value,prototype,salary_weight`.
void write_context_curves_csv(std::ostream& out, const std::string& field,
                              std::span<const ContextCurvePoint> points);

}  // namespace setproto
