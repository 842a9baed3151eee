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

#include "setproto/explain/metrics.hpp"

#include <cmath>
#include <vector>

#include "setproto/error.hpp"
#include "setproto/model/predict.hpp"

namespace setproto {

MetricReport compute_metrics(std::span<const double> predictions, std::span<const double> targets) {
  if (predictions.size() != targets.size())
    throw Error("metrics: prediction and target counts differ");
  if (targets.empty()) throw Error("metrics: no samples");
  double se = 0.0;
  double ae = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double r = predictions[i] - targets[i];
    se += r * r;
    ae += std::abs(r);
  }
  const double n = static_cast<double>(targets.size());
  return {std::sqrt(se / n), ae / n, targets.size()};
}

MetricReport evaluate(const Model& model, std::span<const EncodedSample> samples) {
  std::vector<double> targets;
  targets.reserve(samples.size());
  for (const auto& s : samples) targets.push_back(s.salary);
  const std::vector<double> preds = predict_samples(model, samples);
  return compute_metrics(preds, targets);
}

nlohmann::json to_json(const MetricReport& m) {
  return {{"rmse", m.rmse}, {"mae", m.mae}, {"n", m.n}};
}

}  // namespace setproto
