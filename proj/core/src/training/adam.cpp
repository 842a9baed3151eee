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

#include "setproto/training/adam.hpp"

#include <cmath>

namespace setproto {

Adam::Adam(double learning_rate, double beta1, double beta2, double eps)
    : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(eps) {}

Adam::State& Adam::state(const Matrix& param) {
  State& s = states_[&param];
  if (s.m.rows() != param.rows() || s.m.cols() != param.cols()) {
    s.m = Matrix::Zero(param.rows(), param.cols());
    s.v = Matrix::Zero(param.rows(), param.cols());
    s.t = 0;
  }
  return s;
}

void Adam::apply(Matrix& param, const Matrix& grad) {
  State& s = state(param);
  ++s.t;
  s.m = beta1_ * s.m + (1.0 - beta1_) * grad;
  s.v = beta2_ * s.v + (1.0 - beta2_) * grad.cwiseProduct(grad);
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(s.t));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(s.t));
  param.array() -= lr_ * (s.m.array() / c1) / ((s.v.array() / c2).sqrt() + eps_);
}

void Adam::step(Matrix& param, const Matrix& grad) {
  if (grad.size() == 0) return;
  apply(param, grad);
}

void Adam::step_l1(Matrix& param, const Matrix& grad, double lambda) {
  const Matrix g = grad.size() == 0 ? Matrix::Zero(param.rows(), param.cols()) : grad;
  const Matrix pg = l1_pseudo_gradient(param, g, lambda);
  // Orthant of each coordinate: its sign, or the descent direction at zero.
  Matrix orthant(param.rows(), param.cols());
  for (Eigen::Index i = 0; i < param.size(); ++i) {
    const double x = param.data()[i];
    orthant.data()[i] = x != 0.0 ? (x > 0.0 ? 1.0 : -1.0)
                                 : (pg.data()[i] < 0.0 ? 1.0 : (pg.data()[i] > 0.0 ? -1.0 : 0.0));
  }
  apply(param, pg);
  for (Eigen::Index i = 0; i < param.size(); ++i)
    if (param.data()[i] * orthant.data()[i] <= 0.0) param.data()[i] = 0.0;
}

void Adam::reset(const Matrix& param) { states_.erase(&param); }

Matrix l1_pseudo_gradient(const Matrix& x, const Matrix& grad, double lambda) {
  Matrix pg(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double v = x.data()[i];
    const double g = grad.data()[i];
    if (v > 0.0) {
      pg.data()[i] = g + lambda;
    } else if (v < 0.0) {
      pg.data()[i] = g - lambda;
    } else if (g + lambda < 0.0) {
      pg.data()[i] = g + lambda;
    } else if (g - lambda > 0.0) {
      pg.data()[i] = g - lambda;
    } else {
      pg.data()[i] = 0.0;
    }
  }
  return pg;
}

}  // namespace setproto
