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

#include "setproto/autodiff/ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace setproto::ad {
namespace {

void check(bool ok, const char* op, const std::string& what) {
  if (!ok) throw std::invalid_argument(std::string(op) + ": " + what);
}

void same_shape(Var a, Var b, const char* op) {
  check(a.rows() == b.rows() && a.cols() == b.cols(), op,
        "shape mismatch " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " vs " +
            std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
}

double stable_sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Tape& tape_of(Var a) { return *a.tape(); }

}  // namespace

Var add(Var a, Var b) {
  same_shape(a, b, "add");
  const auto ia = a.id(), ib = b.id();
  return tape_of(a).push(a.value() + b.value(), a.needs_grad() || b.needs_grad(),
                         [ia, ib](Tape& t, std::size_t self) {
                           t.accumulate(ia, t.grad(self));
                           t.accumulate(ib, t.grad(self));
                         });
}

Var sub(Var a, Var b) {
  same_shape(a, b, "sub");
  const auto ia = a.id(), ib = b.id();
  return tape_of(a).push(a.value() - b.value(), a.needs_grad() || b.needs_grad(),
                         [ia, ib](Tape& t, std::size_t self) {
                           t.accumulate(ia, t.grad(self));
                           t.accumulate(ib, -t.grad(self));
                         });
}

Var mul(Var a, Var b) {
  same_shape(a, b, "mul");
  const auto ia = a.id(), ib = b.id();
  return tape_of(a).push(a.value().cwiseProduct(b.value()), a.needs_grad() || b.needs_grad(),
                         [ia, ib](Tape& t, std::size_t self) {
                           const Matrix& g = t.grad(self);
                           if (t.needs_grad(ia)) t.accumulate(ia, g.cwiseProduct(t.value(ib)));
                           if (t.needs_grad(ib)) t.accumulate(ib, g.cwiseProduct(t.value(ia)));
                         });
}

Var scale(Var a, double s) {
  const auto ia = a.id();
  return tape_of(a).push(a.value() * s, a.needs_grad(), [ia, s](Tape& t, std::size_t self) {
    t.accumulate(ia, t.grad(self) * s);
  });
}

Var add_scalar(Var a, double s) {
  const auto ia = a.id();
  return tape_of(a).push(a.value().array() + s, a.needs_grad(),
                         [ia](Tape& t, std::size_t self) { t.accumulate(ia, t.grad(self)); });
}

Var matmul(Var a, Var b) {
  check(a.cols() == b.rows(), "matmul",
        "inner dimensions " + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()));
  const auto ia = a.id(), ib = b.id();
  Matrix out = a.value() * b.value();
  return tape_of(a).push(std::move(out), a.needs_grad() || b.needs_grad(),
                         [ia, ib](Tape& t, std::size_t self) {
                           const Matrix& g = t.grad(self);
                           if (t.needs_grad(ia)) t.accumulate(ia, g * t.value(ib).transpose());
                           if (t.needs_grad(ib)) t.accumulate(ib, t.value(ia).transpose() * g);
                         });
}

Var add_rowvec(Var a, Var row) {
  check(row.rows() == 1 && row.cols() == a.cols(), "add_rowvec", "row must be 1 x cols(a)");
  const auto ia = a.id(), ir = row.id();
  Matrix out = a.value().rowwise() + row.value().row(0);
  return tape_of(a).push(std::move(out), a.needs_grad() || row.needs_grad(),
                         [ia, ir](Tape& t, std::size_t self) {
                           const Matrix& g = t.grad(self);
                           t.accumulate(ia, g);
                           if (t.needs_grad(ir)) t.accumulate(ir, g.colwise().sum());
                         });
}

Var mul_rowvec(Var a, Var row) {
  check(row.rows() == 1 && row.cols() == a.cols(), "mul_rowvec", "row must be 1 x cols(a)");
  const auto ia = a.id(), ir = row.id();
  Matrix out = a.value().array().rowwise() * row.value().row(0).array();
  return tape_of(a).push(std::move(out), a.needs_grad() || row.needs_grad(),
                         [ia, ir](Tape& t, std::size_t self) {
                           const Matrix& g = t.grad(self);
                           if (t.needs_grad(ia)) {
                             Matrix ga = g.array().rowwise() * t.value(ir).row(0).array();
                             t.accumulate(ia, ga);
                           }
                           if (t.needs_grad(ir))
                             t.accumulate(ir, g.cwiseProduct(t.value(ia)).colwise().sum());
                         });
}

Var broadcast_rows(Var row, Eigen::Index rows) {
  check(row.rows() == 1, "broadcast_rows", "input must be a row");
  const auto ir = row.id();
  Matrix out = row.value().replicate(rows, 1);
  return tape_of(row).push(std::move(out), row.needs_grad(), [ir](Tape& t, std::size_t self) {
    t.accumulate(ir, t.grad(self).colwise().sum());
  });
}

Var scale_rows(Var a, std::span<const double> factors) {
  check(static_cast<Eigen::Index>(factors.size()) == a.rows(), "scale_rows",
        "one factor per row required");
  const auto ia = a.id();
  ColVector f(a.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) f(i) = factors[static_cast<std::size_t>(i)];
  Matrix out = a.value().array().colwise() * f.array();
  return tape_of(a).push(std::move(out), a.needs_grad(), [ia, f](Tape& t, std::size_t self) {
    Matrix g = t.grad(self).array().colwise() * f.array();
    t.accumulate(ia, g);
  });
}

Var square(Var a) {
  const auto ia = a.id();
  return tape_of(a).push(a.value().array().square().matrix(), a.needs_grad(),
                         [ia](Tape& t, std::size_t self) {
                           t.accumulate(ia, 2.0 * t.grad(self).cwiseProduct(t.value(ia)));
                         });
}

Var sigmoid(Var a) {
  const auto ia = a.id();
  Matrix out = a.value().unaryExpr([](double x) { return stable_sigmoid(x); });
  return tape_of(a).push(std::move(out), a.needs_grad(), [ia](Tape& t, std::size_t self) {
    const Matrix& y = t.value(self);
    Matrix g = t.grad(self).array() * y.array() * (1.0 - y.array());
    t.accumulate(ia, g);
  });
}

Var softplus(Var a) {
  const auto ia = a.id();
  Matrix out = a.value().unaryExpr(
      [](double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); });
  return tape_of(a).push(std::move(out), a.needs_grad(), [ia](Tape& t, std::size_t self) {
    Matrix d = t.value(ia).unaryExpr([](double x) { return stable_sigmoid(x); });
    t.accumulate(ia, t.grad(self).cwiseProduct(d));
  });
}

Var silu(Var a) {
  const auto ia = a.id();
  Matrix out = a.value().unaryExpr([](double x) { return x * stable_sigmoid(x); });
  return tape_of(a).push(std::move(out), a.needs_grad(), [ia](Tape& t, std::size_t self) {
    Matrix d = t.value(ia).unaryExpr([](double x) {
      const double s = stable_sigmoid(x);
      return s * (1.0 + x * (1.0 - s));
    });
    t.accumulate(ia, t.grad(self).cwiseProduct(d));
  });
}

Var log(Var a) {
  const auto ia = a.id();
  Matrix out = a.value().array().log().matrix();
  return tape_of(a).push(std::move(out), a.needs_grad(), [ia](Tape& t, std::size_t self) {
    t.accumulate(ia, t.grad(self).cwiseQuotient(t.value(ia)));
  });
}

Var sum(Var a) {
  const auto ia = a.id();
  Matrix out(1, 1);
  out(0, 0) = a.value().sum();
  return tape_of(a).push(std::move(out), a.needs_grad(), [ia](Tape& t, std::size_t self) {
    const double g = t.grad(self)(0, 0);
    t.accumulate(ia, Matrix::Constant(t.value(ia).rows(), t.value(ia).cols(), g));
  });
}

Var mean(Var a) {
  check(a.value().size() > 0, "mean", "empty input");
  return scale(sum(a), 1.0 / static_cast<double>(a.value().size()));
}

Var abs_sum(Var a) {
  const auto ia = a.id();
  Matrix out(1, 1);
  out(0, 0) = a.value().cwiseAbs().sum();
  return tape_of(a).push(std::move(out), a.needs_grad(), [ia](Tape& t, std::size_t self) {
    const double g = t.grad(self)(0, 0);
    Matrix s = t.value(ia).unaryExpr([g](double x) { return x > 0 ? g : (x < 0 ? -g : 0.0); });
    t.accumulate(ia, s);
  });
}

Var mean_rows(Var a) {
  check(a.rows() > 0, "mean_rows", "pooling requires at least one row");
  const auto ia = a.id();
  const double inv = 1.0 / static_cast<double>(a.rows());
  Matrix out = a.value().colwise().sum() * inv;
  return tape_of(a).push(std::move(out), a.needs_grad(), [ia, inv](Tape& t, std::size_t self) {
    t.accumulate(ia, (t.grad(self) * inv).replicate(t.value(ia).rows(), 1));
  });
}

Var row_sum(Var a) {
  const auto ia = a.id();
  Matrix out = a.value().rowwise().sum();
  return tape_of(a).push(std::move(out), a.needs_grad(), [ia](Tape& t, std::size_t self) {
    t.accumulate(ia, t.grad(self).replicate(1, t.value(ia).cols()));
  });
}

Var sum_row_blocks(Var a, Eigen::Index block) {
  check(block > 0 && a.rows() % block == 0, "sum_row_blocks", "rows must be a multiple of block");
  const auto ia = a.id();
  const Eigen::Index k = a.rows() / block;
  Matrix out = Matrix::Zero(k, a.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r) out.row(r / block) += a.value().row(r);
  return tape_of(a).push(std::move(out), a.needs_grad(), [ia, block](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    Matrix ga(t.value(ia).rows(), g.cols());
    for (Eigen::Index r = 0; r < ga.rows(); ++r) ga.row(r) = g.row(r / block);
    t.accumulate(ia, ga);
  });
}

Var min_rows(Var a) {
  check(a.cols() > 0, "min_rows", "empty rows");
  const auto ia = a.id();
  Matrix out(a.rows(), 1);
  std::vector<Eigen::Index> arg(static_cast<std::size_t>(a.rows()));
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    Eigen::Index j = 0;
    out(r, 0) = a.value().row(r).minCoeff(&j);
    arg[static_cast<std::size_t>(r)] = j;
  }
  return tape_of(a).push(std::move(out), a.needs_grad(),
                         [ia, arg = std::move(arg)](Tape& t, std::size_t self) {
                           Matrix* ga = t.grad_buffer(ia);
                           const Matrix& g = t.grad(self);
                           for (std::size_t r = 0; r < arg.size(); ++r)
                             (*ga)(static_cast<Eigen::Index>(r), arg[r]) += g(static_cast<Eigen::Index>(r), 0);
                         });
}

Var min_cols(Var a) {
  check(a.rows() > 0, "min_cols", "empty columns");
  const auto ia = a.id();
  Matrix out(1, a.cols());
  std::vector<Eigen::Index> arg(static_cast<std::size_t>(a.cols()));
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    Eigen::Index i = 0;
    out(0, c) = a.value().col(c).minCoeff(&i);
    arg[static_cast<std::size_t>(c)] = i;
  }
  return tape_of(a).push(std::move(out), a.needs_grad(),
                         [ia, arg = std::move(arg)](Tape& t, std::size_t self) {
                           Matrix* ga = t.grad_buffer(ia);
                           const Matrix& g = t.grad(self);
                           for (std::size_t c = 0; c < arg.size(); ++c)
                             (*ga)(arg[c], static_cast<Eigen::Index>(c)) += g(0, static_cast<Eigen::Index>(c));
                         });
}

Var gather_rows(Var table, std::span<const int> ids) {
  const auto it = table.id();
  Matrix out(static_cast<Eigen::Index>(ids.size()), table.cols());
  for (std::size_t k = 0; k < ids.size(); ++k) {
    check(ids[k] >= 0 && ids[k] < table.rows(), "gather_rows", "row id out of range");
    out.row(static_cast<Eigen::Index>(k)) = table.value().row(ids[k]);
  }
  std::vector<int> idx(ids.begin(), ids.end());
  return tape_of(table).push(std::move(out), table.needs_grad(),
                             [it, idx = std::move(idx)](Tape& t, std::size_t self) {
                               Matrix* gt = t.grad_buffer(it);
                               const Matrix& g = t.grad(self);
                               for (std::size_t k = 0; k < idx.size(); ++k)
                                 gt->row(idx[k]) += g.row(static_cast<Eigen::Index>(k));
                             });
}

Var concat_rows(std::span<const Var> parts) {
  check(!parts.empty(), "concat_rows", "no inputs");
  const Eigen::Index cols = parts[0].cols();
  Eigen::Index rows = 0;
  bool needs = false;
  std::vector<std::size_t> ids;
  std::vector<Eigen::Index> offsets;
  for (const Var& p : parts) {
    check(p.cols() == cols, "concat_rows", "column mismatch");
    offsets.push_back(rows);
    ids.push_back(p.id());
    rows += p.rows();
    needs = needs || p.needs_grad();
  }
  Matrix out(rows, cols);
  for (std::size_t k = 0; k < parts.size(); ++k)
    out.middleRows(offsets[k], parts[k].rows()) = parts[k].value();
  return tape_of(parts[0]).push(
      std::move(out), needs,
      [ids = std::move(ids), offsets = std::move(offsets)](Tape& t, std::size_t self) {
        const Matrix& g = t.grad(self);
        for (std::size_t k = 0; k < ids.size(); ++k) {
          if (!t.needs_grad(ids[k])) continue;
          t.accumulate(ids[k], g.middleRows(offsets[k], t.value(ids[k]).rows()));
        }
      });
}

Var concat_cols(std::span<const Var> parts) {
  check(!parts.empty(), "concat_cols", "no inputs");
  const Eigen::Index rows = parts[0].rows();
  Eigen::Index cols = 0;
  bool needs = false;
  std::vector<std::size_t> ids;
  std::vector<Eigen::Index> offsets;
  for (const Var& p : parts) {
    check(p.rows() == rows, "concat_cols", "row mismatch");
    offsets.push_back(cols);
    ids.push_back(p.id());
    cols += p.cols();
    needs = needs || p.needs_grad();
  }
  Matrix out(rows, cols);
  for (std::size_t k = 0; k < parts.size(); ++k)
    out.middleCols(offsets[k], parts[k].cols()) = parts[k].value();
  return tape_of(parts[0]).push(
      std::move(out), needs,
      [ids = std::move(ids), offsets = std::move(offsets)](Tape& t, std::size_t self) {
        const Matrix& g = t.grad(self);
        for (std::size_t k = 0; k < ids.size(); ++k) {
          if (!t.needs_grad(ids[k])) continue;
          t.accumulate(ids[k], g.middleCols(offsets[k], t.value(ids[k]).cols()));
        }
      });
}

Var softmax_rows(Var a) {
  const auto ia = a.id();
  Matrix out(a.rows(), a.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    const double m = a.value().row(r).maxCoeff();
    out.row(r) = (a.value().row(r).array() - m).exp().matrix();
    out.row(r) /= out.row(r).sum();
  }
  return tape_of(a).push(std::move(out), a.needs_grad(), [ia](Tape& t, std::size_t self) {
    const Matrix& y = t.value(self);
    const Matrix& g = t.grad(self);
    ColVector dot = g.cwiseProduct(y).rowwise().sum();
    Matrix ga = y.array() * (g.colwise() - dot).array();
    t.accumulate(ia, ga);
  });
}

Var multihead_scores(Var keys, Var query, Eigen::Index views) {
  check(query.rows() == 1 && query.cols() == keys.cols(), "multihead_scores",
        "query must be 1 x cols(keys)");
  check(views > 0 && keys.cols() % views == 0, "multihead_scores", "width not divisible by views");
  const auto ik = keys.id(), iq = query.id();
  const Eigen::Index width = keys.cols() / views;
  const double inv = 1.0 / std::sqrt(static_cast<double>(width));
  const Matrix& k = keys.value();
  const Matrix& q = query.value();
  Matrix out(k.rows(), views);
  for (Eigen::Index h = 0; h < views; ++h)
    out.col(h) = (k.middleCols(h * width, width) * q.middleCols(h * width, width).transpose()) * inv;
  return tape_of(keys).push(
      std::move(out), keys.needs_grad() || query.needs_grad(),
      [ik, iq, views, width, inv](Tape& t, std::size_t self) {
        const Matrix& g = t.grad(self);
        const Matrix& k = t.value(ik);
        const Matrix& q = t.value(iq);
        if (t.needs_grad(ik)) {
          Matrix gk(k.rows(), k.cols());
          for (Eigen::Index h = 0; h < views; ++h)
            gk.middleCols(h * width, width) = g.col(h) * q.middleCols(h * width, width) * inv;
          t.accumulate(ik, gk);
        }
        if (t.needs_grad(iq)) {
          Matrix gq(1, q.cols());
          for (Eigen::Index h = 0; h < views; ++h)
            gq.middleCols(h * width, width) = g.col(h).transpose() * k.middleCols(h * width, width) * inv;
          t.accumulate(iq, gq);
        }
      });
}

Var masked_pool(Var mask, Var alpha, Var rows) {
  const Eigen::Index n = rows.rows();
  check(mask.rows() == n && alpha.rows() == n && alpha.cols() == 1, "masked_pool",
        "mask, alpha and rows must share the row count");
  const auto im = mask.id(), ia = alpha.id(), ir = rows.id();
  const Matrix& m = mask.value();
  const Matrix& a = alpha.value();
  const Matrix& x = rows.value();
  const Eigen::Index views = m.cols();
  Matrix weighted = m.array().colwise() * a.col(0).array();  // n x H
  RowVector den = m.colwise().sum();
  Matrix out = weighted.transpose() * x;                      // H x d
  for (Eigen::Index h = 0; h < views; ++h) {
    if (den(h) > 0.0) {
      out.row(h) /= den(h);
    } else {
      out.row(h).setZero();
    }
  }
  const bool needs = mask.needs_grad() || alpha.needs_grad() || rows.needs_grad();
  return tape_of(rows).push(std::move(out), needs, [im, ia, ir, den](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);  // H x d
    const Matrix& m = t.value(im);
    const Matrix& a = t.value(ia);
    const Matrix& x = t.value(ir);
    const Matrix& out = t.value(self);
    const Eigen::Index views = m.cols();
    Matrix gs = g;  // g scaled by 1/den per view, zero where den == 0
    for (Eigen::Index h = 0; h < views; ++h) {
      if (den(h) > 0.0) {
        gs.row(h) /= den(h);
      } else {
        gs.row(h).setZero();
      }
    }
    Matrix xg = x * gs.transpose();  // n x H: <x_i, g_h>/den_h
    if (t.needs_grad(ir)) {
      Matrix weighted = m.array().colwise() * a.col(0).array();
      t.accumulate(ir, weighted * gs);
    }
    if (t.needs_grad(ia)) {
      ColVector ga = m.cwiseProduct(xg).rowwise().sum();
      t.accumulate(ia, ga);
    }
    if (t.needs_grad(im)) {
      RowVector og = out.cwiseProduct(gs).rowwise().sum().transpose();  // <out_h, g_h>/den_h
      Matrix gm = (xg.array().colwise() * a.col(0).array()).rowwise() - og.array();
      t.accumulate(im, gm);
    }
  });
}

Var sq_dist(Var a, Var b) {
  check(a.cols() == b.cols(), "sq_dist", "width mismatch");
  const auto ia = a.id(), ib = b.id();
  const Matrix& x = a.value();
  const Matrix& y = b.value();
  Matrix out(x.rows(), y.rows());
  for (Eigen::Index r = 0; r < x.rows(); ++r)
    for (Eigen::Index m = 0; m < y.rows(); ++m) out(r, m) = (x.row(r) - y.row(m)).squaredNorm();
  return tape_of(a).push(std::move(out), a.needs_grad() || b.needs_grad(),
                         [ia, ib](Tape& t, std::size_t self) {
                           const Matrix& g = t.grad(self);
                           const Matrix& x = t.value(ia);
                           const Matrix& y = t.value(ib);
                           if (t.needs_grad(ia)) {
                             ColVector rs = g.rowwise().sum();
                             Matrix gx = 2.0 * ((x.array().colwise() * rs.array()).matrix() - g * y);
                             t.accumulate(ia, gx);
                           }
                           if (t.needs_grad(ib)) {
                             ColVector cs = g.colwise().sum().transpose();
                             Matrix gy = 2.0 * ((y.array().colwise() * cs.array()).matrix() -
                                                g.transpose() * x);
                             t.accumulate(ib, gy);
                           }
                         });
}

Var log_similarity(Var sq_distances, double eps) {
  const auto id = sq_distances.id();
  Matrix out = sq_distances.value().unaryExpr(
      [eps](double d) { return std::log1p((1.0 - eps) / (d + eps)); });
  return tape_of(sq_distances).push(std::move(out), sq_distances.needs_grad(),
                                    [id, eps](Tape& t, std::size_t self) {
                                      Matrix d = t.value(id).unaryExpr([eps](double v) {
                                        return 1.0 / (v + 1.0) - 1.0 / (v + eps);
                                      });
                                      t.accumulate(id, t.grad(self).cwiseProduct(d));
                                    });
}

Var upper_hinge_sum(Var a, double threshold) {
  check(a.rows() == a.cols(), "upper_hinge_sum", "square input required");
  const auto ia = a.id();
  const Matrix& v = a.value();
  double total = 0.0;
  for (Eigen::Index i = 0; i < v.rows(); ++i)
    for (Eigen::Index j = i + 1; j < v.cols(); ++j) total += std::max(0.0, v(i, j) - threshold);
  Matrix out(1, 1);
  out(0, 0) = total;
  return tape_of(a).push(std::move(out), a.needs_grad(), [ia, threshold](Tape& t, std::size_t self) {
    const double g = t.grad(self)(0, 0);
    const Matrix& v = t.value(ia);
    Matrix ga = Matrix::Zero(v.rows(), v.cols());
    for (Eigen::Index i = 0; i < v.rows(); ++i)
      for (Eigen::Index j = i + 1; j < v.cols(); ++j)
        if (v(i, j) > threshold) ga(i, j) = g;
    t.accumulate(ia, ga);
  });
}

Var density_loss(Var mask, const Matrix& weights, double floor) {
  const Eigen::Index n = mask.rows();
  check(weights.rows() == n && weights.cols() == n, "density_loss", "weights must be n x n");
  const auto im = mask.id();
  const Matrix& a = mask.value();
  const Eigen::Index views = a.cols();
  Matrix w = weights;
  w.diagonal().setZero();
  Matrix edge = (w.array() > 0.0).cast<double>().matrix();
  // Ordered-pair sums count each unordered edge twice, hence the 0.5 factors.
  Matrix aw = w * a;  // n x H: sum_j w_ij a_jh
  Matrix ae = edge * a;
  RowVector num = 0.5 * a.cwiseProduct(aw).colwise().sum();
  RowVector cnt = 0.5 * a.cwiseProduct(ae).colwise().sum();
  RowVector dens = num.array() / (cnt.array() + floor);
  const double avg = dens.mean();
  Matrix out(1, 1);
  out(0, 0) = -std::log(std::max(avg, floor));
  return tape_of(mask).push(
      std::move(out), mask.needs_grad(),
      [im, aw = std::move(aw), ae = std::move(ae), num, cnt, avg, floor, views](Tape& t,
                                                                           std::size_t self) {
        if (avg <= floor) return;
        const double g = t.grad(self)(0, 0) * (-1.0 / avg) / static_cast<double>(views);
        Matrix ga(aw.rows(), views);
        for (Eigen::Index h = 0; h < views; ++h) {
          const double z = cnt(h) + floor;
          ga.col(h) = g * (aw.col(h) * z - ae.col(h) * num(h)) / (z * z);
        }
        t.accumulate(im, ga);
      });
}

}  // namespace setproto::ad
