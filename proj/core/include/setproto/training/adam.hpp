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

#include <map>

#include "setproto/tensor.hpp"

namespace setproto {

/// Adaptive-moment optimizer with per-tensor state keyed by tensor address.
class Adam {
 public:
  explicit Adam(double learning_rate, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

  void step(Matrix& param, const Matrix& grad);

  /// Step on f(x) + lambda * |x|_1 using the orthant-wise pseudo-gradient.
  /// Coordinates never cross zero within a step; a zero coordinate stays at
  /// zero while |df/dx| <= lambda.
  void step_l1(Matrix& param, const Matrix& grad, double lambda);

  /// Drops the moment estimates of `param`.
  void reset(const Matrix& param);

  double learning_rate() const { return lr_; }

 private:
  struct State {
    Matrix m;
    Matrix v;
    long t = 0;
  };
  State& state(const Matrix& param);
  void apply(Matrix& param, const Matrix& grad);

  double lr_;
  double beta1_;
  double beta2_;
  double eps_;
  std::map<const Matrix*, State> states_;
};

/// Pseudo-gradient of f + lambda * |x|_1: the minimum-norm subgradient.
Matrix l1_pseudo_gradient(const Matrix& x, const Matrix& grad, double lambda);

}  // namespace setproto
