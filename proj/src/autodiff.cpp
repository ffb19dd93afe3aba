// Copyright 2026 The commgad Authors
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

#include "commgad/autodiff.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

#include "commgad/error.hpp"

namespace commgad {

const Matrix& Tensor::value() const { return tape_->value(id_); }
const Matrix& Tensor::grad() const { return tape_->grad(id_); }
bool Tensor::requires_grad() const { return tape_->requires_grad(id_); }

Tensor Tape::leaf(Matrix value, std::string name) {
  Node n;
  n.op = "leaf";
  n.name = std::move(name);
  n.grad = Matrix(value.rows(), value.cols());
  n.value = std::move(value);
  n.requires_grad = true;
  nodes_.push_back(std::move(n));
  return {this, nodes_.size() - 1};
}

Tensor Tape::constant(Matrix value, std::string name) {
  Node n;
  n.op = "const";
  n.name = std::move(name);
  n.grad = Matrix(value.rows(), value.cols());
  n.value = std::move(value);
  nodes_.push_back(std::move(n));
  return {this, nodes_.size() - 1};
}

Tensor Tape::record(std::string op, std::vector<std::size_t> inputs, Matrix value, BackwardFn backward) {
  Node n;
  n.op = std::move(op);
  for (auto in : inputs) n.requires_grad = n.requires_grad || nodes_[in].requires_grad;
  n.inputs = std::move(inputs);
  n.grad = Matrix(value.rows(), value.cols());
  n.value = std::move(value);
  if (n.requires_grad) n.backward = std::move(backward);
  nodes_.push_back(std::move(n));
  return {this, nodes_.size() - 1};
}

void Tape::backward(const Tensor& loss) {
  if (loss.tape() != this) throw Error("backward: tensor belongs to another tape");
  if (loss.rows() != 1 || loss.cols() != 1) {
    throw ShapeError("backward: loss must be 1x1, got " + loss.value().shape_string());
  }
  zero_grad();
  nodes_[loss.id()].grad(0, 0) = 1.0;
  for (std::size_t id = loss.id() + 1; id-- > 0;) {
    Node& n = nodes_[id];
    if (n.backward) n.backward(*this, id);
  }
}

void Tape::zero_grad() {
  for (auto& n : nodes_) n.grad.fill(0.0);
}

std::string Tape::to_json() const {
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    out.push_back({{"id", i},
                   {"op", n.op},
                   {"name", n.name},
                   {"inputs", n.inputs},
                   {"shape", {n.value.rows(), n.value.cols()}},
                   {"requires_grad", n.requires_grad}});
  }
  return out.dump(1);
}

namespace ad {
namespace {

Tape& tape_of(const Tensor& a) {
  if (!a.valid()) throw Error("operation on an empty tensor");
  return *a.tape();
}

Tape& tape_of(const Tensor& a, const Tensor& b) {
  if (a.tape() != b.tape()) throw Error("operands recorded on different tapes");
  return tape_of(a);
}

void require_same_shape(const char* op, const Tensor& a, const Tensor& b) {
  if (!a.value().same_shape(b.value())) {
    throw ShapeError(std::string(op) + ": " + a.value().shape_string() + " vs " + b.value().shape_string());
  }
}

void accumulate(Matrix& dst, const Matrix& src) {
  auto& d = dst.data();
  const auto& s = src.data();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] += s[i];
}

// Elementwise unary op with derivative f'(x, y) evaluated from input and output.
template <typename F, typename D>
Tensor unary(const char* name, const Tensor& a, F f, D dfdx) {
  Tape& t = tape_of(a);
  Matrix out(a.rows(), a.cols());
  const auto& x = a.value().data();
  for (std::size_t i = 0; i < x.size(); ++i) out.data()[i] = f(x[i]);
  const std::size_t ia = a.id();
  return t.record(name, {ia}, std::move(out), [ia, dfdx](Tape& tp, std::size_t self) {
    if (!tp.requires_grad(ia)) return;
    const auto& g = tp.grad(self).data();
    const auto& x = tp.value(ia).data();
    const auto& y = tp.value(self).data();
    auto& ga = tp.grad(ia).data();
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * dfdx(x[i], y[i]);
  });
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  Tape& t = tape_of(a, b);
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: " + a.value().shape_string() + " * " + b.value().shape_string());
  }
  const std::size_t ia = a.id(), ib = b.id();
  return t.record("matmul", {ia, ib}, commgad::matmul(a.value(), b.value()), [ia, ib](Tape& tp, std::size_t self) {
    const Matrix& g = tp.grad(self);
    if (tp.requires_grad(ia)) accumulate(tp.grad(ia), matmul_a_bt(g, tp.value(ib)));
    if (tp.requires_grad(ib)) accumulate(tp.grad(ib), matmul_at_b(tp.value(ia), g));
  });
}

Tensor spmm(const SparseAdjacency& a, const Tensor& b) {
  Tape& t = tape_of(b);
  if (a.n != b.rows()) {
    throw ShapeError("spmm: adjacency is " + std::to_string(a.n) + "x" + std::to_string(a.n) +
                     ", dense operand is " + b.value().shape_string());
  }
  const std::size_t d = b.cols();
  Matrix out(a.n, d);
  const Matrix& bv = b.value();
  for (std::size_t i = 0; i < a.n; ++i) {
    auto o = out.row(i);
    for (std::size_t p = a.row_offsets[i]; p < a.row_offsets[i + 1]; ++p) {
      const double w = a.values[p];
      const auto src = bv.row(a.col_indices[p]);
      for (std::size_t k = 0; k < d; ++k) o[k] += w * src[k];
    }
  }
  const std::size_t ib = b.id();
  const SparseAdjacency* adj = &a;
  return t.record("spmm", {ib}, std::move(out), [ib, adj, d](Tape& tp, std::size_t self) {
    if (!tp.requires_grad(ib)) return;
    // grad_b = Aᵀ g; accumulate column-wise contributions row by row.
    const Matrix& g = tp.grad(self);
    Matrix& gb = tp.grad(ib);
    for (std::size_t i = 0; i < adj->n; ++i) {
      const auto gi = g.row(i);
      for (std::size_t p = adj->row_offsets[i]; p < adj->row_offsets[i + 1]; ++p) {
        const double w = adj->values[p];
        auto dst = gb.row(adj->col_indices[p]);
        for (std::size_t k = 0; k < d; ++k) dst[k] += w * gi[k];
      }
    }
  });
}

Tensor add(const Tensor& a, const Tensor& b) {
  Tape& t = tape_of(a, b);
  require_same_shape("add", a, b);
  Matrix out = a.value();
  accumulate(out, b.value());
  const std::size_t ia = a.id(), ib = b.id();
  return t.record("add", {ia, ib}, std::move(out), [ia, ib](Tape& tp, std::size_t self) {
    if (tp.requires_grad(ia)) accumulate(tp.grad(ia), tp.grad(self));
    if (tp.requires_grad(ib)) accumulate(tp.grad(ib), tp.grad(self));
  });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  Tape& t = tape_of(a, b);
  require_same_shape("sub", a, b);
  Matrix out = a.value();
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] -= b.value().data()[i];
  const std::size_t ia = a.id(), ib = b.id();
  return t.record("sub", {ia, ib}, std::move(out), [ia, ib](Tape& tp, std::size_t self) {
    const auto& g = tp.grad(self).data();
    if (tp.requires_grad(ia)) accumulate(tp.grad(ia), tp.grad(self));
    if (tp.requires_grad(ib)) {
      auto& gb = tp.grad(ib).data();
      for (std::size_t i = 0; i < g.size(); ++i) gb[i] -= g[i];
    }
  });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  Tape& t = tape_of(a, b);
  require_same_shape("mul", a, b);
  Matrix out = a.value();
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] *= b.value().data()[i];
  const std::size_t ia = a.id(), ib = b.id();
  return t.record("mul", {ia, ib}, std::move(out), [ia, ib](Tape& tp, std::size_t self) {
    const auto& g = tp.grad(self).data();
    const auto& av = tp.value(ia).data();
    const auto& bv = tp.value(ib).data();
    if (tp.requires_grad(ia)) {
      auto& ga = tp.grad(ia).data();
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * bv[i];
    }
    if (tp.requires_grad(ib)) {
      auto& gb = tp.grad(ib).data();
      for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * av[i];
    }
  });
}

Tensor scale(const Tensor& a, double s) {
  return unary("scale", a, [s](double x) { return s * x; }, [s](double, double) { return s; });
}

Tensor add_bias(const Tensor& a, const Tensor& bias_row) {
  Tape& t = tape_of(a, bias_row);
  if (bias_row.rows() != 1 || bias_row.cols() != a.cols()) {
    throw ShapeError("add_bias: bias " + bias_row.value().shape_string() + " for " + a.value().shape_string());
  }
  Matrix out = a.value();
  const auto b = bias_row.value().row(0);
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto r = out.row(i);
    for (std::size_t k = 0; k < r.size(); ++k) r[k] += b[k];
  }
  const std::size_t ia = a.id(), ib = bias_row.id();
  return t.record("add_bias", {ia, ib}, std::move(out), [ia, ib](Tape& tp, std::size_t self) {
    const Matrix& g = tp.grad(self);
    if (tp.requires_grad(ia)) accumulate(tp.grad(ia), g);
    if (tp.requires_grad(ib)) {
      auto gb = tp.grad(ib).row(0);
      for (std::size_t i = 0; i < g.rows(); ++i) {
        const auto gi = g.row(i);
        for (std::size_t k = 0; k < gi.size(); ++k) gb[k] += gi[k];
      }
    }
  });
}

Tensor relu(const Tensor& a) {
  return unary(
      "relu", a, [](double x) { return x > 0.0 ? x : 0.0; }, [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Tensor exp_elem(const Tensor& a) {
  return unary("exp", a, [](double x) { return std::exp(x); }, [](double, double y) { return y; });
}

Tensor sqrt_elem(const Tensor& a) {
  return unary(
      "sqrt", a, [](double x) { return std::sqrt(x); }, [](double, double y) { return y > 0.0 ? 0.5 / y : 0.0; });
}

Tensor square(const Tensor& a) {
  return unary("square", a, [](double x) { return x * x; }, [](double x, double) { return 2.0 * x; });
}

Tensor clamp_min(const Tensor& a, double floor, std::size_t* clamped) {
  if (clamped) {
    for (double v : a.value().data()) {
      if (v < floor) ++*clamped;
    }
  }
  return unary(
      "clamp_min", a, [floor](double x) { return x < floor ? floor : x; },
      [floor](double x, double) { return x < floor ? 0.0 : 1.0; });
}

Tensor concat_cols(const Tensor& a, const Tensor& b) {
  Tape& t = tape_of(a, b);
  if (a.rows() != b.rows()) {
    throw ShapeError("concat_cols: " + a.value().shape_string() + " and " + b.value().shape_string());
  }
  const std::size_t ca = a.cols(), cb = b.cols();
  Matrix out(a.rows(), ca + cb);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto o = out.row(i);
    std::copy_n(a.value().row(i).begin(), ca, o.begin());
    std::copy_n(b.value().row(i).begin(), cb, o.begin() + static_cast<std::ptrdiff_t>(ca));
  }
  const std::size_t ia = a.id(), ib = b.id();
  return t.record("concat_cols", {ia, ib}, std::move(out), [ia, ib, ca, cb](Tape& tp, std::size_t self) {
    const Matrix& g = tp.grad(self);
    for (std::size_t i = 0; i < g.rows(); ++i) {
      const auto gi = g.row(i);
      if (tp.requires_grad(ia)) {
        auto d = tp.grad(ia).row(i);
        for (std::size_t k = 0; k < ca; ++k) d[k] += gi[k];
      }
      if (tp.requires_grad(ib)) {
        auto d = tp.grad(ib).row(i);
        for (std::size_t k = 0; k < cb; ++k) d[k] += gi[ca + k];
      }
    }
  });
}

std::pair<Tensor, Tensor> split_cols(const Tensor& a, std::size_t at) {
  Tape& t = tape_of(a);
  if (at > a.cols()) throw ShapeError("split_cols: split point past the last column");
  const std::size_t n = a.rows(), cols = a.cols();
  Matrix left(n, at), right(n, cols - at);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = a.value().row(i);
    std::copy_n(r.begin(), at, left.row(i).begin());
    std::copy(r.begin() + static_cast<std::ptrdiff_t>(at), r.end(), right.row(i).begin());
  }
  const std::size_t ia = a.id();
  auto make = [&](Matrix part, std::size_t offset) {
    const std::size_t width = part.cols();
    return t.record("split_cols", {ia}, std::move(part), [ia, offset, width](Tape& tp, std::size_t self) {
      if (!tp.requires_grad(ia)) return;
      const Matrix& g = tp.grad(self);
      Matrix& ga = tp.grad(ia);
      for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t k = 0; k < width; ++k) ga(i, offset + k) += g(i, k);
    });
  };
  Tensor l = make(std::move(left), 0);
  Tensor r = make(std::move(right), at);
  return {l, r};
}

Tensor softmax_rows(const Tensor& a) {
  Tape& t = tape_of(a);
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto x = a.value().row(i);
    auto y = out.row(i);
    const double mx = *std::max_element(x.begin(), x.end());
    double z = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      y[k] = std::exp(x[k] - mx);
      z += y[k];
    }
    for (double& v : y) v /= z;
  }
  const std::size_t ia = a.id();
  return t.record("softmax_rows", {ia}, std::move(out), [ia](Tape& tp, std::size_t self) {
    if (!tp.requires_grad(ia)) return;
    const Matrix& g = tp.grad(self);
    const Matrix& y = tp.value(self);
    Matrix& ga = tp.grad(ia);
    for (std::size_t i = 0; i < g.rows(); ++i) {
      double dot = 0.0;
      for (std::size_t k = 0; k < g.cols(); ++k) dot += g(i, k) * y(i, k);
      for (std::size_t k = 0; k < g.cols(); ++k) ga(i, k) += y(i, k) * (g(i, k) - dot);
    }
  });
}

Tensor row_dot(const Tensor& a, const Tensor& b) {
  Tape& t = tape_of(a, b);
  require_same_shape("row_dot", a, b);
  Matrix out(a.rows(), 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto x = a.value().row(i), y = b.value().row(i);
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
    out(i, 0) = s;
  }
  const std::size_t ia = a.id(), ib = b.id();
  return t.record("row_dot", {ia, ib}, std::move(out), [ia, ib](Tape& tp, std::size_t self) {
    const Matrix& g = tp.grad(self);
    const Matrix& av = tp.value(ia);
    const Matrix& bv = tp.value(ib);
    for (std::size_t i = 0; i < g.rows(); ++i) {
      const double gi = g(i, 0);
      if (tp.requires_grad(ia)) {
        auto d = tp.grad(ia).row(i);
        for (std::size_t k = 0; k < d.size(); ++k) d[k] += gi * bv(i, k);
      }
      if (tp.requires_grad(ib)) {
        auto d = tp.grad(ib).row(i);
        for (std::size_t k = 0; k < d.size(); ++k) d[k] += gi * av(i, k);
      }
    }
  });
}

Tensor mul_rows(const Tensor& a, const Tensor& s) {
  Tape& t = tape_of(a, s);
  if (s.cols() != 1 || s.rows() != a.rows()) {
    throw ShapeError("mul_rows: factor " + s.value().shape_string() + " for " + a.value().shape_string());
  }
  Matrix out = a.value();
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (double& v : out.row(i)) v *= s.value()(i, 0);
  const std::size_t ia = a.id(), is = s.id();
  return t.record("mul_rows", {ia, is}, std::move(out), [ia, is](Tape& tp, std::size_t self) {
    const Matrix& g = tp.grad(self);
    const Matrix& av = tp.value(ia);
    const Matrix& sv = tp.value(is);
    for (std::size_t i = 0; i < g.rows(); ++i) {
      if (tp.requires_grad(ia)) {
        auto d = tp.grad(ia).row(i);
        for (std::size_t k = 0; k < d.size(); ++k) d[k] += g(i, k) * sv(i, 0);
      }
      if (tp.requires_grad(is)) {
        double acc = 0.0;
        for (std::size_t k = 0; k < g.cols(); ++k) acc += g(i, k) * av(i, k);
        tp.grad(is)(i, 0) += acc;
      }
    }
  });
}

Tensor row_sum(const Tensor& a) {
  Tape& t = tape_of(a);
  Matrix out(a.rows(), 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (double v : a.value().row(i)) s += v;
    out(i, 0) = s;
  }
  const std::size_t ia = a.id();
  return t.record("row_sum", {ia}, std::move(out), [ia](Tape& tp, std::size_t self) {
    if (!tp.requires_grad(ia)) return;
    const Matrix& g = tp.grad(self);
    Matrix& ga = tp.grad(ia);
    for (std::size_t i = 0; i < ga.rows(); ++i)
      for (double& v : ga.row(i)) v += g(i, 0);
  });
}

Tensor mask_rows(const Tensor& a, const std::vector<double>& mask) {
  Tape& t = tape_of(a);
  if (mask.size() != a.rows()) throw ShapeError("mask_rows: mask length does not match rows");
  Matrix out = a.value();
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (double& v : out.row(i)) v *= mask[i];
  const std::size_t ia = a.id();
  return t.record("mask_rows", {ia}, std::move(out), [ia, mask](Tape& tp, std::size_t self) {
    if (!tp.requires_grad(ia)) return;
    const Matrix& g = tp.grad(self);
    Matrix& ga = tp.grad(ia);
    for (std::size_t i = 0; i < g.rows(); ++i) {
      if (mask[i] == 0.0) continue;
      auto d = ga.row(i);
      for (std::size_t k = 0; k < d.size(); ++k) d[k] += g(i, k) * mask[i];
    }
  });
}

Tensor sum_all(const Tensor& a) {
  Tape& t = tape_of(a);
  double s = 0.0;
  for (double v : a.value().data()) s += v;
  const std::size_t ia = a.id();
  return t.record("sum_all", {ia}, Matrix(1, 1, s), [ia](Tape& tp, std::size_t self) {
    if (!tp.requires_grad(ia)) return;
    const double g = tp.grad(self)(0, 0);
    for (double& v : tp.grad(ia).data()) v += g;
  });
}

Tensor detach(const Tensor& a) { return tape_of(a).constant(a.value(), "detach"); }

}  // namespace ad
}  // namespace commgad
