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

#include "setproto/model/predict.hpp"

#include <algorithm>

#include "setproto/model/forward.hpp"

namespace setproto {

PredictionTrace predict_trace(const Model& model, const SkillSetInput& input) {
  ad::Tape tape;
  ParamVars p = register_params(tape, model, GradientScope{false, false, false});
  const SkillSetInput* batch[] = {&input};
  BatchOutput out = forward(tape, p, model, batch, ForwardOptions{MaskMode::kHard});

  PredictionTrace tr;
  tr.skills = input.skills;
  tr.levels = input.levels;
  const SampleNodes& s = out.samples[0];
  tr.scores = s.scores.value();
  tr.mask = s.mask.value();
  tr.alpha = s.alpha.value();
  tr.subset_embeddings = s.subsets.value();
  tr.salary = out.prediction.value()(0, 0);
  if (model.config.uses_prototypes()) {
    tr.view_similarities = out.similarities.value();
    tr.aggregated = out.aggregated.value().row(0);
    tr.weights = out.weights.value().row(0);
    tr.salary_weights = out.salary_weights.value().row(0);
    tr.contributions = tr.weights.cwiseProduct(tr.salary_weights);
  }
  return tr;
}

double predict(const Model& model, const SkillSetInput& input) {
  return predict_batch(model, std::span<const SkillSetInput>(&input, 1)).front();
}

std::vector<double> predict_batch(const Model& model, std::span<const SkillSetInput> inputs,
                                  std::size_t batch_size) {
  std::vector<double> out;
  out.reserve(inputs.size());
  batch_size = std::max<std::size_t>(batch_size, 1);
  for (std::size_t begin = 0; begin < inputs.size(); begin += batch_size) {
    const std::size_t end = std::min(inputs.size(), begin + batch_size);
    std::vector<const SkillSetInput*> batch;
    for (std::size_t i = begin; i < end; ++i) batch.push_back(&inputs[i]);
    ad::Tape tape;
    ParamVars p = register_params(tape, model, GradientScope{false, false, false});
    BatchOutput o = forward(tape, p, model, batch, ForwardOptions{MaskMode::kHard});
    for (Eigen::Index r = 0; r < o.prediction.rows(); ++r) out.push_back(o.prediction.value()(r, 0));
  }
  return out;
}

std::vector<double> predict_samples(const Model& model, std::span<const EncodedSample> samples,
                                    std::size_t batch_size) {
  std::vector<SkillSetInput> inputs;
  inputs.reserve(samples.size());
  for (const auto& s : samples) inputs.push_back(s.input);
  return predict_batch(model, inputs, batch_size);
}

}  // namespace setproto
