#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "openteam/tensor/tensor.hpp"

namespace openteam::tensor {

enum class OpKind {
  matmul,       // [m,k] x [k,n]
  add,          // same shape, or rank-1 right operand broadcast over rows
  subtract,     // as add
  multiply,     // elementwise, same shape
  scale,        // attrs.scalar * x
  concat_last,  // concatenation along the last axis
  sum_all,      // -> scalar
  sum_axis,     // removes attrs.axis
  mean_axis,    // removes attrs.axis
  transpose,    // rank 2
  select_rows,  // gathers attrs.indices along axis 0 (elements for rank 1)
  slice_last,   // attrs.start, attrs.length along the last axis
  reshape,      // attrs.shape
  tanh,
  sigmoid,
  relu,
  leaky_relu,   // slope 0.01
  exp,
  log,          // rejects non-positive inputs
  softmax,      // along the last axis, max-shifted
  max_last,     // removes the last axis
  segment_sum,  // rows of [E,d] summed into attrs.length segments by attrs.indices
};

inline constexpr double kLeakySlope = 0.01;

std::string_view op_name(OpKind kind);

struct OpAttrs {
  double scalar = 0.0;
  std::size_t axis = 0;
  std::size_t start = 0;
  std::size_t length = 0;
  std::vector<std::size_t> indices;
  Shape shape;
};

// Forward evaluation on plain values. Throws std::invalid_argument on shape
// mismatch (naming the kind and the offending shapes) and std::domain_error
// for log of a non-positive value.
Tensor forward_op(OpKind kind, std::span<const Tensor* const> inputs, const OpAttrs& attrs = {});
Tensor forward_op(OpKind kind, const std::vector<Tensor>& inputs, const OpAttrs& attrs = {});

namespace detail {

// Accumulates dL/d(input_i) into grads[i] for every non-null grads[i].
void backward_op(OpKind kind, std::span<const Tensor* const> inputs, const Tensor& output,
                 const Tensor& grad_output, const OpAttrs& attrs, std::span<Tensor* const> grads);

}  // namespace detail
}  // namespace openteam::tensor
