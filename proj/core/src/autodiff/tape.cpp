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

#include "setproto/autodiff/tape.hpp"

#include <stdexcept>
#include <utility>

namespace setproto::ad {

Var Tape::constant(Matrix value) {
  nodes_.push_back(Node{std::move(value), Matrix(), nullptr, false});
  return Var(this, nodes_.size() - 1);
}

Var Tape::variable(Matrix value) {
  nodes_.push_back(Node{std::move(value), Matrix(), nullptr, true});
  return Var(this, nodes_.size() - 1);
}

Var Tape::push(Matrix value, bool needs_grad, Backward backward) {
  if (!needs_grad) backward = nullptr;
  nodes_.push_back(Node{std::move(value), Matrix(), std::move(backward), needs_grad});
  return Var(this, nodes_.size() - 1);
}

void Tape::backward(Var root) {
  if (root.tape() != this) throw std::invalid_argument("backward: variable from another tape");
  const Matrix& v = nodes_[root.id()].value;
  if (v.rows() != 1 || v.cols() != 1) throw std::invalid_argument("backward: root must be 1x1");
  if (!nodes_[root.id()].needs_grad) return;
  accumulate(root.id(), Matrix::Ones(1, 1));
  for (std::size_t i = root.id() + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (n.backward && n.grad.size() != 0) n.backward(*this, i);
  }
}

}  // namespace setproto::ad
