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

// Minimal tape-based reverse-mode automatic differentiation over dense
// matrices. A Tape records every intermediate value in creation order; each
// node that depends on a differentiable input carries a closure that pushes
// its gradient into its inputs. Tapes are single-use and not thread-safe;
// create one per forward pass.

#include <cstddef>
#include <functional>
#include <vector>

#include "setproto/tensor.hpp"

namespace setproto::ad {

class Tape;

/// Handle to a node on a tape. Cheap to copy; valid while the tape lives.
class Var {
 public:
  Var() = default;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  const Matrix& value() const;
  const Matrix& grad() const;
  double scalar() const;
  bool needs_grad() const;
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }

  Tape* tape() const { return tape_; }
  std::size_t id() const { return id_; }

 private:
  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

class Tape {
 public:
  using Backward = std::function<void(Tape&, std::size_t self)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  /// Leaf that does not receive gradients.
  Var constant(Matrix value);
  /// Leaf that receives gradients.
  Var variable(Matrix value);
  /// Interior node; `backward` is dropped when `needs_grad` is false.
  Var push(Matrix value, bool needs_grad, Backward backward);

  /// Seeds d(root)/d(root) = 1 and propagates to every reachable leaf.
  /// `root` must be 1x1.
  void backward(Var root);

  const Matrix& value(std::size_t id) const { return nodes_[id].value; }
  const Matrix& grad(std::size_t id) const { return nodes_[id].grad; }
  bool needs_grad(std::size_t id) const { return nodes_[id].needs_grad; }

  /// Adds `g` into the gradient of node `id` if it participates in
  /// differentiation. Allocates the gradient buffer on first use.
  template <typename Derived>
  void accumulate(std::size_t id, const Eigen::MatrixBase<Derived>& g) {
    Node& n = nodes_[id];
    if (!n.needs_grad) return;
    if (n.grad.size() == 0) {
      n.grad = g;
    } else {
      n.grad += g;
    }
  }

  /// Zero-initialized gradient buffer for node `id`, or nullptr when the node
  /// does not participate in differentiation. Used for sparse row updates.
  Matrix* grad_buffer(std::size_t id) {
    Node& n = nodes_[id];
    if (!n.needs_grad) return nullptr;
    if (n.grad.size() == 0) n.grad = Matrix::Zero(n.value.rows(), n.value.cols());
    return &n.grad;
  }

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    Backward backward;
    bool needs_grad = false;
  };
  std::vector<Node> nodes_;
};

inline const Matrix& Var::value() const { return tape_->value(id_); }
inline const Matrix& Var::grad() const { return tape_->grad(id_); }
inline bool Var::needs_grad() const { return tape_->needs_grad(id_); }
inline double Var::scalar() const { return value()(0, 0); }

}  // namespace setproto::ad
