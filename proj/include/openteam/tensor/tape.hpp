#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

#include "openteam/tensor/ops.hpp"
#include "openteam/tensor/tensor.hpp"

namespace openteam::tensor {

class Tape;

// Handle to a value recorded on a Tape. Cheap to copy; valid while the tape lives.
class Var {
 public:
  Var() = default;

  const Tensor& value() const;
  const Shape& shape() const { return value().shape(); }
  Tape* tape() const { return tape_; }
  std::uint32_t id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }
  bool requires_grad() const;

 private:
  friend class Tape;
  Var(Tape* tape, std::uint32_t id) : tape_(tape), id_(id) {}
  Tape* tape_ = nullptr;
  std::uint32_t id_ = 0;
};

class Gradients {
 public:
  // Zero-filled when the loss does not depend on the variable.
  Tensor get(Var v) const;
  const Tensor* find(Var v) const;

 private:
  friend class Tape;
  std::vector<Tensor> grads_;
  std::vector<bool> present_;
};

// Append-only record of a computation. Nodes are stored in creation order, so
// inputs always precede the nodes that consume them.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Differentiable input owning its value.
  Var leaf(Tensor value);
  // Differentiable input referring to external storage, which must outlive the tape
  // and stay unmodified until backward() returns.
  Var leaf_ref(const Tensor& value);
  // Non-differentiable input.
  Var constant(Tensor value);

  Var apply(OpKind kind, std::span<const Var> inputs, OpAttrs attrs = {});
  Var apply(OpKind kind, std::initializer_list<Var> inputs, OpAttrs attrs = {});

  // Reverse sweep from a rank-0 loss; every node is visited at most once.
  Gradients backward(Var loss) const;

  std::size_t size() const { return nodes_.size(); }
  const Tensor& value(std::uint32_t id) const;
  bool requires_grad(std::uint32_t id) const { return nodes_[id].requires_grad; }

 private:
  struct Node {
    OpKind kind = OpKind::reshape;
    bool is_input = false;
    bool requires_grad = false;
    std::vector<std::uint32_t> inputs;
    OpAttrs attrs;
    Tensor owned;
    const Tensor* borrowed = nullptr;
    const Tensor& value() const { return borrowed ? *borrowed : owned; }
  };

  Var push_input(Tensor owned, const Tensor* borrowed, bool requires_grad);

  std::vector<Node> nodes_;
};

// Named operations on tape variables.
Var matmul(Var a, Var b);
Var operator+(Var a, Var b);
Var operator-(Var a, Var b);
Var operator*(Var a, Var b);
Var scale(Var a, double s);
Var concat_last(std::span<const Var> parts);
Var concat_last(std::initializer_list<Var> parts);
Var sum(Var a);
Var sum_axis(Var a, std::size_t axis);
Var mean_axis(Var a, std::size_t axis);
Var transpose(Var a);
Var select_rows(Var a, std::vector<std::size_t> indices);
Var slice_last(Var a, std::size_t start, std::size_t length);
Var reshape(Var a, Shape shape);
Var tanh(Var a);
Var sigmoid(Var a);
Var relu(Var a);
Var leaky_relu(Var a);
Var exp(Var a);
Var log(Var a);
Var softmax(Var a);
Var max_last(Var a);
Var segment_sum(Var a, std::vector<std::size_t> segment_ids, std::size_t segments);

}  // namespace openteam::tensor
