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

#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "commgad/graph.hpp"
#include "commgad/matrix.hpp"

namespace commgad {

class Tape;

// Handle to a value recorded on a Tape. Cheap to copy; the tape owns storage.
class Tensor {
 public:
  Tensor() = default;
  Tensor(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape() const { return tape_; }
  std::size_t id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }

  const Matrix& value() const;
  const Matrix& grad() const;
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }
  bool requires_grad() const;

 private:
  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

// Records operations in execution order. backward() walks the record in
// exact reverse order, so every input id precedes the ids that consume it.
// Not thread-safe; one tape per training run.
class Tape {
 public:
  using BackwardFn = std::function<void(Tape&, std::size_t)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Tensor leaf(Matrix value, std::string name = "param");
  Tensor constant(Matrix value, std::string name = "const");

  // Low-level: append an op result. `backward` reads the node's grad and
  // accumulates into its inputs' grads.
  Tensor record(std::string op, std::vector<std::size_t> inputs, Matrix value, BackwardFn backward);

  // Seeds d(loss)/d(loss) = 1 and propagates. `loss` must be 1×1.
  void backward(const Tensor& loss);
  void zero_grad();

  std::size_t size() const { return nodes_.size(); }
  const Matrix& value(std::size_t id) const { return nodes_[id].value; }
  const Matrix& grad(std::size_t id) const { return nodes_[id].grad; }
  Matrix& grad(std::size_t id) { return nodes_[id].grad; }
  bool requires_grad(std::size_t id) const { return nodes_[id].requires_grad; }

  // Debug dump: [{id, op, name, inputs, shape}, ...].
  std::string to_json() const;

 private:
  struct Node {
    std::string op;
    std::string name;
    std::vector<std::size_t> inputs;
    Matrix value;
    Matrix grad;
    bool requires_grad = false;
    BackwardFn backward;
  };
  std::deque<Node> nodes_;
};

namespace ad {

Tensor matmul(const Tensor& a, const Tensor& b);
// Sparse (constant) times dense. The adjacency must outlive the tape.
Tensor spmm(const SparseAdjacency& a, const Tensor& b);

Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);  // elementwise
Tensor scale(const Tensor& a, double s);
Tensor add_bias(const Tensor& a, const Tensor& bias_row);  // bias is 1×cols

Tensor relu(const Tensor& a);
Tensor exp_elem(const Tensor& a);
Tensor sqrt_elem(const Tensor& a);
Tensor square(const Tensor& a);

// Entries below `floor` are raised to it and receive no gradient.
// `clamped`, if given, is incremented per clamped entry.
Tensor clamp_min(const Tensor& a, double floor, std::size_t* clamped = nullptr);

Tensor concat_cols(const Tensor& a, const Tensor& b);
std::pair<Tensor, Tensor> split_cols(const Tensor& a, std::size_t at);

// Row-wise softmax with max shift.
Tensor softmax_rows(const Tensor& a);

Tensor row_dot(const Tensor& a, const Tensor& b);      // N×d, N×d -> N×1
Tensor mul_rows(const Tensor& a, const Tensor& s);     // N×d ⊙ broadcast N×1
Tensor row_sum(const Tensor& a);                       // N×d -> N×1
Tensor mask_rows(const Tensor& a, const std::vector<double>& mask);  // constant per-row factor
Tensor sum_all(const Tensor& a);                       // -> 1×1

// Same value, no gradient flows back through it.
Tensor detach(const Tensor& a);

}  // namespace ad
}  // namespace commgad
