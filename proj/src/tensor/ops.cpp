#include "openteam/tensor/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "openteam/simd/kernels.hpp"

namespace openteam::tensor {

std::string_view op_name(OpKind kind) {
  switch (kind) {
    case OpKind::matmul: return "matmul";
    case OpKind::add: return "add";
    case OpKind::subtract: return "subtract";
    case OpKind::multiply: return "multiply";
    case OpKind::scale: return "scale";
    case OpKind::concat_last: return "concat_last";
    case OpKind::sum_all: return "sum_all";
    case OpKind::sum_axis: return "sum_axis";
    case OpKind::mean_axis: return "mean_axis";
    case OpKind::transpose: return "transpose";
    case OpKind::select_rows: return "select_rows";
    case OpKind::slice_last: return "slice_last";
    case OpKind::reshape: return "reshape";
    case OpKind::tanh: return "tanh";
    case OpKind::sigmoid: return "sigmoid";
    case OpKind::relu: return "relu";
    case OpKind::leaky_relu: return "leaky_relu";
    case OpKind::exp: return "exp";
    case OpKind::log: return "log";
    case OpKind::softmax: return "softmax";
    case OpKind::max_last: return "max_last";
    case OpKind::segment_sum: return "segment_sum";
  }
  return "unknown";
}

namespace {

[[noreturn]] void shape_error(OpKind kind, const Shape& a, const Shape& b) {
  throw std::invalid_argument(std::string(op_name(kind)) + ": shape mismatch " + shape_str(a) +
                              " vs " + shape_str(b));
}

[[noreturn]] void shape_error(OpKind kind, const Shape& a, std::string_view what) {
  throw std::invalid_argument(std::string(op_name(kind)) + ": invalid input shape " + shape_str(a) +
                              " (" + std::string(what) + ")");
}

void expect_arity(OpKind kind, std::size_t got, std::size_t want) {
  if (got != want)
    throw std::invalid_argument(std::string(op_name(kind)) + ": expected " + std::to_string(want) +
                                " inputs, got " + std::to_string(got));
}

bool row_broadcast(const Shape& a, const Shape& b) {
  return b.size() == 1 && a.size() >= 2 && a.back() == b[0];
}

Shape without_axis(const Shape& s, std::size_t axis) {
  Shape out;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (i != axis) out.push_back(s[i]);
  return out;
}

// Splits a shape around an axis into (outer, dim, inner) strides.
struct AxisSplit {
  std::size_t outer = 1, dim = 1, inner = 1;
};

AxisSplit split_axis(const Shape& s, std::size_t axis) {
  AxisSplit r;
  for (std::size_t i = 0; i < axis; ++i) r.outer *= s[i];
  r.dim = s[axis];
  for (std::size_t i = axis + 1; i < s.size(); ++i) r.inner *= s[i];
  return r;
}

template <class F>
Tensor map_unary(const Tensor& x, F f) {
  Tensor out(x.shape());
  const double* in = x.ptr();
  double* o = out.ptr();
  for (std::size_t i = 0; i < x.numel(); ++i) o[i] = f(in[i]);
  return out;
}

double sigmoid_value(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Tensor binary_forward(OpKind kind, const Tensor& a, const Tensor& b) {
  const auto& k = simd::kernels();
  if (a.shape() == b.shape()) {
    Tensor out(a.shape());
    switch (kind) {
      case OpKind::add: k.add(a.ptr(), b.ptr(), out.ptr(), a.numel()); break;
      case OpKind::subtract: k.sub(a.ptr(), b.ptr(), out.ptr(), a.numel()); break;
      default: k.mul(a.ptr(), b.ptr(), out.ptr(), a.numel()); break;
    }
    return out;
  }
  if (kind != OpKind::multiply && row_broadcast(a.shape(), b.shape())) {
    Tensor out(a.shape());
    const std::size_t cols = b.numel();
    const std::size_t rows = a.numel() / cols;
    for (std::size_t r = 0; r < rows; ++r) {
      if (kind == OpKind::add)
        k.add(a.ptr() + r * cols, b.ptr(), out.ptr() + r * cols, cols);
      else
        k.sub(a.ptr() + r * cols, b.ptr(), out.ptr() + r * cols, cols);
    }
    return out;
  }
  shape_error(kind, a.shape(), b.shape());
}

}  // namespace

Tensor forward_op(OpKind kind, const std::vector<Tensor>& inputs, const OpAttrs& attrs) {
  std::vector<const Tensor*> ptrs;
  ptrs.reserve(inputs.size());
  for (const auto& t : inputs) ptrs.push_back(&t);
  return forward_op(kind, ptrs, attrs);
}

Tensor forward_op(OpKind kind, std::span<const Tensor* const> in, const OpAttrs& attrs) {
  const auto& k = simd::kernels();
  if (kind == OpKind::concat_last) {
    if (in.empty()) throw std::invalid_argument("concat_last: needs at least one input");
    const Shape& first = in[0]->shape();
    if (first.empty()) shape_error(kind, first, "scalars cannot be concatenated");
    Shape lead(first.begin(), first.end() - 1);
    std::size_t total = 0;
    for (const Tensor* t : in) {
      const Shape& s = t->shape();
      if (s.size() != first.size() || !std::equal(lead.begin(), lead.end(), s.begin()))
        shape_error(kind, first, s);
      total += s.back();
    }
    Shape out_shape = lead;
    out_shape.push_back(total);
    Tensor out(out_shape);
    const std::size_t rows = out.numel() / total;
    std::size_t offset = 0;
    for (const Tensor* t : in) {
      const std::size_t w = t->shape().back();
      for (std::size_t r = 0; r < rows; ++r)
        std::copy_n(t->ptr() + r * w, w, out.ptr() + r * total + offset);
      offset += w;
    }
    return out;
  }

  const std::size_t unary = 1;
  switch (kind) {
    case OpKind::matmul: {
      expect_arity(kind, in.size(), 2);
      const Tensor& a = *in[0];
      const Tensor& b = *in[1];
      if (a.rank() != 2 || b.rank() != 2 || a.dim(1) != b.dim(0)) shape_error(kind, a.shape(), b.shape());
      Tensor out({a.dim(0), b.dim(1)});
      k.gemm(a.ptr(), b.ptr(), out.ptr(), a.dim(0), a.dim(1), b.dim(1));
      return out;
    }
    case OpKind::add:
    case OpKind::subtract:
    case OpKind::multiply:
      expect_arity(kind, in.size(), 2);
      return binary_forward(kind, *in[0], *in[1]);
    default:
      break;
  }

  expect_arity(kind, in.size(), unary);
  const Tensor& x = *in[0];
  switch (kind) {
    case OpKind::scale: {
      Tensor out(x.shape());
      k.scale(x.ptr(), attrs.scalar, out.ptr(), x.numel());
      return out;
    }
    case OpKind::sum_all:
      return Tensor::scalar(k.sum(x.ptr(), x.numel()));
    case OpKind::sum_axis:
    case OpKind::mean_axis: {
      if (attrs.axis >= x.rank()) shape_error(kind, x.shape(), "axis out of range");
      const AxisSplit s = split_axis(x.shape(), attrs.axis);
      Tensor out(without_axis(x.shape(), attrs.axis));
      for (std::size_t o = 0; o < s.outer; ++o)
        for (std::size_t d = 0; d < s.dim; ++d)
          for (std::size_t i = 0; i < s.inner; ++i)
            out[o * s.inner + i] += x[(o * s.dim + d) * s.inner + i];
      if (kind == OpKind::mean_axis) out = map_unary(out, [n = double(s.dim)](double v) { return v / n; });
      return out;
    }
    case OpKind::transpose: {
      if (x.rank() != 2) shape_error(kind, x.shape(), "rank 2 required");
      Tensor out({x.dim(1), x.dim(0)});
      for (std::size_t r = 0; r < x.dim(0); ++r)
        for (std::size_t c = 0; c < x.dim(1); ++c) out.at(c, r) = x.at(r, c);
      return out;
    }
    case OpKind::select_rows: {
      if (x.rank() == 0) shape_error(kind, x.shape(), "cannot select from a scalar");
      if (attrs.indices.empty()) shape_error(kind, x.shape(), "empty index list");
      const std::size_t rows = x.dim(0);
      const std::size_t width = x.numel() / rows;
      Shape out_shape = x.shape();
      out_shape[0] = attrs.indices.size();
      Tensor out(out_shape);
      for (std::size_t i = 0; i < attrs.indices.size(); ++i) {
        const std::size_t r = attrs.indices[i];
        if (r >= rows)
          throw std::invalid_argument("select_rows: index " + std::to_string(r) + " out of range for " +
                                      shape_str(x.shape()));
        std::copy_n(x.ptr() + r * width, width, out.ptr() + i * width);
      }
      return out;
    }
    case OpKind::slice_last: {
      if (x.rank() == 0 || attrs.length == 0 || attrs.start + attrs.length > x.shape().back())
        shape_error(kind, x.shape(), "slice out of range");
      const std::size_t w = x.shape().back();
      Shape out_shape = x.shape();
      out_shape.back() = attrs.length;
      Tensor out(out_shape);
      const std::size_t rows = x.numel() / w;
      for (std::size_t r = 0; r < rows; ++r)
        std::copy_n(x.ptr() + r * w + attrs.start, attrs.length, out.ptr() + r * attrs.length);
      return out;
    }
    case OpKind::reshape:
      if (shape_numel(attrs.shape) != x.numel()) shape_error(kind, x.shape(), attrs.shape);
      return x.reshaped(attrs.shape);
    case OpKind::tanh:
      return map_unary(x, [](double v) { return std::tanh(v); });
    case OpKind::sigmoid:
      return map_unary(x, sigmoid_value);
    case OpKind::relu:
      return map_unary(x, [](double v) { return v > 0.0 ? v : 0.0; });
    case OpKind::leaky_relu:
      return map_unary(x, [](double v) { return v > 0.0 ? v : kLeakySlope * v; });
    case OpKind::exp:
      return map_unary(x, [](double v) { return std::exp(v); });
    case OpKind::log:
      for (double v : x.data())
        if (!(v > 0.0)) throw std::domain_error("log: non-positive input " + std::to_string(v));
      return map_unary(x, [](double v) { return std::log(v); });
    case OpKind::softmax: {
      if (x.rank() == 0) shape_error(kind, x.shape(), "rank >= 1 required");
      const std::size_t w = x.shape().back();
      const std::size_t rows = x.numel() / w;
      Tensor out(x.shape());
      for (std::size_t r = 0; r < rows; ++r) {
        const double* row = x.ptr() + r * w;
        double* o = out.ptr() + r * w;
        const double m = *std::max_element(row, row + w);
        double z = 0.0;
        for (std::size_t c = 0; c < w; ++c) z += (o[c] = std::exp(row[c] - m));
        for (std::size_t c = 0; c < w; ++c) o[c] /= z;
      }
      return out;
    }
    case OpKind::max_last: {
      if (x.rank() == 0) shape_error(kind, x.shape(), "rank >= 1 required");
      const std::size_t w = x.shape().back();
      const std::size_t rows = x.numel() / w;
      Tensor out(Shape(x.shape().begin(), x.shape().end() - 1));
      for (std::size_t r = 0; r < rows; ++r)
        out[r] = *std::max_element(x.ptr() + r * w, x.ptr() + (r + 1) * w);
      return out;
    }
    case OpKind::segment_sum: {
      if (x.rank() != 2 || attrs.indices.size() != x.dim(0) || attrs.length == 0)
        shape_error(kind, x.shape(), "needs [E,d] input with one segment id per row");
      for (std::size_t s : attrs.indices)
        if (s >= attrs.length) shape_error(kind, x.shape(), "segment id out of range");
      const std::size_t d = x.dim(1);
      Tensor out({attrs.length, d});
      std::vector<double> bucket;
      for (std::size_t seg = 0; seg < attrs.length; ++seg) {
        for (std::size_t c = 0; c < d; ++c) {
          bucket.clear();
          for (std::size_t e = 0; e < attrs.indices.size(); ++e)
            if (attrs.indices[e] == seg) bucket.push_back(x.at(e, c));
          // Summing in sorted order makes the result independent of edge order.
          std::sort(bucket.begin(), bucket.end());
          double acc = 0.0;
          for (double v : bucket) acc += v;
          out.at(seg, c) = acc;
        }
      }
      return out;
    }
    default:
      break;
  }
  throw std::invalid_argument("forward_op: unsupported kind " + std::string(op_name(kind)));
}

namespace detail {

namespace {

void accumulate(Tensor& g, const Tensor& delta) {
  simd::kernels().axpy(1.0, delta.ptr(), g.ptr(), g.numel());
}

void reduce_rows_into(Tensor& g, const Tensor& delta) {
  const std::size_t cols = g.numel();
  const std::size_t rows = delta.numel() / cols;
  for (std::size_t r = 0; r < rows; ++r) simd::kernels().axpy(1.0, delta.ptr() + r * cols, g.ptr(), cols);
}

}  // namespace

void backward_op(OpKind kind, std::span<const Tensor* const> in, const Tensor& y, const Tensor& gy,
                 const OpAttrs& attrs, std::span<Tensor* const> g) {
  const auto& k = simd::kernels();
  switch (kind) {
    case OpKind::matmul: {
      const Tensor& a = *in[0];
      const Tensor& b = *in[1];
      const std::size_t m = a.dim(0), kk = a.dim(1), n = b.dim(1);
      if (g[0]) k.gemm_nt(gy.ptr(), b.ptr(), g[0]->ptr(), m, n, kk);
      if (g[1]) k.gemm_tn(a.ptr(), gy.ptr(), g[1]->ptr(), m, kk, n);
      return;
    }
    case OpKind::add:
    case OpKind::subtract: {
      if (g[0]) accumulate(*g[0], gy);
      if (g[1]) {
        const double sign = kind == OpKind::add ? 1.0 : -1.0;
        if (in[1]->shape() == gy.shape()) {
          k.axpy(sign, gy.ptr(), g[1]->ptr(), gy.numel());
        } else {
          const std::size_t cols = in[1]->numel();
          for (std::size_t r = 0; r < gy.numel() / cols; ++r) k.axpy(sign, gy.ptr() + r * cols, g[1]->ptr(), cols);
        }
      }
      return;
    }
    case OpKind::multiply: {
      const std::size_t n = gy.numel();
      for (std::size_t i = 0; i < n; ++i) {
        if (g[0]) (*g[0])[i] += gy[i] * (*in[1])[i];
        if (g[1]) (*g[1])[i] += gy[i] * (*in[0])[i];
      }
      return;
    }
    case OpKind::scale:
      if (g[0]) k.axpy(attrs.scalar, gy.ptr(), g[0]->ptr(), gy.numel());
      return;
    case OpKind::concat_last: {
      const std::size_t total = y.shape().back();
      const std::size_t rows = y.numel() / total;
      std::size_t offset = 0;
      for (std::size_t i = 0; i < in.size(); ++i) {
        const std::size_t w = in[i]->shape().back();
        if (g[i])
          for (std::size_t r = 0; r < rows; ++r)
            k.axpy(1.0, gy.ptr() + r * total + offset, g[i]->ptr() + r * w, w);
        offset += w;
      }
      return;
    }
    case OpKind::sum_all:
      if (g[0]) {
        const double v = gy.item();
        for (double& e : g[0]->data()) e += v;
      }
      return;
    case OpKind::sum_axis:
    case OpKind::mean_axis: {
      if (!g[0]) return;
      const AxisSplit s = split_axis(in[0]->shape(), attrs.axis);
      const double f = kind == OpKind::mean_axis ? 1.0 / double(s.dim) : 1.0;
      for (std::size_t o = 0; o < s.outer; ++o)
        for (std::size_t d = 0; d < s.dim; ++d)
          for (std::size_t i = 0; i < s.inner; ++i)
            (*g[0])[(o * s.dim + d) * s.inner + i] += f * gy[o * s.inner + i];
      return;
    }
    case OpKind::transpose:
      if (g[0])
        for (std::size_t r = 0; r < in[0]->dim(0); ++r)
          for (std::size_t c = 0; c < in[0]->dim(1); ++c) g[0]->at(r, c) += gy.at(c, r);
      return;
    case OpKind::select_rows: {
      if (!g[0]) return;
      const std::size_t width = in[0]->numel() / in[0]->dim(0);
      for (std::size_t i = 0; i < attrs.indices.size(); ++i)
        k.axpy(1.0, gy.ptr() + i * width, g[0]->ptr() + attrs.indices[i] * width, width);
      return;
    }
    case OpKind::slice_last: {
      if (!g[0]) return;
      const std::size_t w = in[0]->shape().back();
      const std::size_t rows = in[0]->numel() / w;
      for (std::size_t r = 0; r < rows; ++r)
        k.axpy(1.0, gy.ptr() + r * attrs.length, g[0]->ptr() + r * w + attrs.start, attrs.length);
      return;
    }
    case OpKind::reshape:
      if (g[0]) accumulate(*g[0], gy);
      return;
    case OpKind::tanh:
      if (g[0])
        for (std::size_t i = 0; i < gy.numel(); ++i) (*g[0])[i] += gy[i] * (1.0 - y[i] * y[i]);
      return;
    case OpKind::sigmoid:
      if (g[0])
        for (std::size_t i = 0; i < gy.numel(); ++i) (*g[0])[i] += gy[i] * y[i] * (1.0 - y[i]);
      return;
    case OpKind::relu:
      if (g[0])
        for (std::size_t i = 0; i < gy.numel(); ++i)
          if ((*in[0])[i] > 0.0) (*g[0])[i] += gy[i];
      return;
    case OpKind::leaky_relu:
      if (g[0])
        for (std::size_t i = 0; i < gy.numel(); ++i)
          (*g[0])[i] += (*in[0])[i] > 0.0 ? gy[i] : kLeakySlope * gy[i];
      return;
    case OpKind::exp:
      if (g[0])
        for (std::size_t i = 0; i < gy.numel(); ++i) (*g[0])[i] += gy[i] * y[i];
      return;
    case OpKind::log:
      if (g[0])
        for (std::size_t i = 0; i < gy.numel(); ++i) (*g[0])[i] += gy[i] / (*in[0])[i];
      return;
    case OpKind::softmax: {
      if (!g[0]) return;
      const std::size_t w = y.shape().back();
      const std::size_t rows = y.numel() / w;
      for (std::size_t r = 0; r < rows; ++r) {
        const double* yr = y.ptr() + r * w;
        const double* gr = gy.ptr() + r * w;
        const double inner = k.dot(yr, gr, w);
        double* out = g[0]->ptr() + r * w;
        for (std::size_t c = 0; c < w; ++c) out[c] += yr[c] * (gr[c] - inner);
      }
      return;
    }
    case OpKind::max_last: {
      if (!g[0]) return;
      const std::size_t w = in[0]->shape().back();
      const std::size_t rows = in[0]->numel() / w;
      for (std::size_t r = 0; r < rows; ++r) {
        const double* row = in[0]->ptr() + r * w;
        const std::size_t arg = std::size_t(std::max_element(row, row + w) - row);
        (*g[0])[r * w + arg] += gy[r];
      }
      return;
    }
    case OpKind::segment_sum: {
      if (!g[0]) return;
      const std::size_t d = in[0]->dim(1);
      for (std::size_t e = 0; e < attrs.indices.size(); ++e)
        k.axpy(1.0, gy.ptr() + attrs.indices[e] * d, g[0]->ptr() + e * d, d);
      return;
    }
  }
}

}  // namespace detail
}  // namespace openteam::tensor
