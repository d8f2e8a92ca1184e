#include "openteam/tensor/tape.hpp"

#include <stdexcept>
#include <string>

namespace openteam::tensor {

const Tensor& Var::value() const {
  if (!tape_) throw std::logic_error("value() on an unbound Var");
  return tape_->value(id_);
}

bool Var::requires_grad() const { return tape_ && tape_->requires_grad(id_); }

Tensor Gradients::get(Var v) const {
  if (const Tensor* t = find(v)) return *t;
  return Tensor(v.shape());
}

const Tensor* Gradients::find(Var v) const {
  if (v.id() < present_.size() && present_[v.id()]) return &grads_[v.id()];
  return nullptr;
}

const Tensor& Tape::value(std::uint32_t id) const { return nodes_.at(id).value(); }

Var Tape::push_input(Tensor owned, const Tensor* borrowed, bool requires_grad) {
  Node node;
  node.is_input = true;
  node.requires_grad = requires_grad;
  node.owned = std::move(owned);
  node.borrowed = borrowed;
  nodes_.push_back(std::move(node));
  return Var(this, std::uint32_t(nodes_.size() - 1));
}

Var Tape::leaf(Tensor value) { return push_input(std::move(value), nullptr, true); }

Var Tape::leaf_ref(const Tensor& value) { return push_input(Tensor(), &value, true); }

Var Tape::constant(Tensor value) { return push_input(std::move(value), nullptr, false); }

Var Tape::apply(OpKind kind, std::initializer_list<Var> inputs, OpAttrs attrs) {
  return apply(kind, std::span<const Var>(inputs.begin(), inputs.size()), std::move(attrs));
}

Var Tape::apply(OpKind kind, std::span<const Var> inputs, OpAttrs attrs) {
  std::vector<const Tensor*> values;
  values.reserve(inputs.size());
  Node node;
  node.kind = kind;
  node.inputs.reserve(inputs.size());
  for (const Var& v : inputs) {
    if (v.tape() != this)
      throw std::invalid_argument(std::string(op_name(kind)) + ": input belongs to a different tape");
    values.push_back(&nodes_[v.id()].value());
    node.inputs.push_back(v.id());
    node.requires_grad = node.requires_grad || nodes_[v.id()].requires_grad;
  }
  node.owned = forward_op(kind, values, attrs);
  node.attrs = std::move(attrs);
  nodes_.push_back(std::move(node));
  return Var(this, std::uint32_t(nodes_.size() - 1));
}

Gradients Tape::backward(Var loss) const {
  if (loss.tape() != this) throw std::invalid_argument("backward: loss belongs to a different tape");
  const Tensor& lv = nodes_[loss.id()].value();
  if (lv.rank() != 0)
    throw std::invalid_argument("backward: loss must be a scalar, got shape " + shape_str(lv.shape()));

  Gradients out;
  const std::size_t n = loss.id() + 1;
  out.grads_.resize(n);
  out.present_.assign(n, false);
  if (!nodes_[loss.id()].requires_grad) return out;

  auto ensure = [&](std::uint32_t id) -> Tensor& {
    if (!out.present_[id]) {
      out.grads_[id] = Tensor(nodes_[id].value().shape());
      out.present_[id] = true;
    }
    return out.grads_[id];
  };
  ensure(loss.id())[0] = 1.0;

  std::vector<const Tensor*> in_values;
  std::vector<Tensor*> in_grads;
  for (std::uint32_t id = loss.id() + 1; id-- > 0;) {
    const Node& node = nodes_[id];
    if (node.is_input || !node.requires_grad || !out.present_[id]) continue;
    in_values.clear();
    in_grads.clear();
    for (std::uint32_t src : node.inputs) {
      in_values.push_back(&nodes_[src].value());
      in_grads.push_back(nodes_[src].requires_grad ? &ensure(src) : nullptr);
    }
    detail::backward_op(node.kind, in_values, node.value(), out.grads_[id], node.attrs, in_grads);
  }
  // Intermediate gradients are not part of the contract; keep only inputs.
  for (std::uint32_t id = 0; id < n; ++id)
    if (!nodes_[id].is_input && out.present_[id]) {
      out.present_[id] = false;
      out.grads_[id] = Tensor();
    }
  return out;
}

namespace {

Tape& tape_of(Var v) {
  if (!v.tape()) throw std::invalid_argument("operation on an unbound Var");
  return *v.tape();
}

Var unary(OpKind kind, Var a, OpAttrs attrs = {}) { return tape_of(a).apply(kind, {a}, std::move(attrs)); }

}  // namespace

Var matmul(Var a, Var b) { return tape_of(a).apply(OpKind::matmul, {a, b}); }
Var operator+(Var a, Var b) { return tape_of(a).apply(OpKind::add, {a, b}); }
Var operator-(Var a, Var b) { return tape_of(a).apply(OpKind::subtract, {a, b}); }
Var operator*(Var a, Var b) { return tape_of(a).apply(OpKind::multiply, {a, b}); }

Var scale(Var a, double s) {
  OpAttrs attrs;
  attrs.scalar = s;
  return unary(OpKind::scale, a, std::move(attrs));
}

Var concat_last(std::span<const Var> parts) {
  if (parts.empty()) throw std::invalid_argument("concat_last: needs at least one input");
  return tape_of(parts[0]).apply(OpKind::concat_last, parts);
}

Var concat_last(std::initializer_list<Var> parts) {
  return concat_last(std::span<const Var>(parts.begin(), parts.size()));
}

Var sum(Var a) { return unary(OpKind::sum_all, a); }

Var sum_axis(Var a, std::size_t axis) {
  OpAttrs attrs;
  attrs.axis = axis;
  return unary(OpKind::sum_axis, a, std::move(attrs));
}

Var mean_axis(Var a, std::size_t axis) {
  OpAttrs attrs;
  attrs.axis = axis;
  return unary(OpKind::mean_axis, a, std::move(attrs));
}

Var transpose(Var a) { return unary(OpKind::transpose, a); }

Var select_rows(Var a, std::vector<std::size_t> indices) {
  OpAttrs attrs;
  attrs.indices = std::move(indices);
  return unary(OpKind::select_rows, a, std::move(attrs));
}

Var slice_last(Var a, std::size_t start, std::size_t length) {
  OpAttrs attrs;
  attrs.start = start;
  attrs.length = length;
  return unary(OpKind::slice_last, a, std::move(attrs));
}

Var reshape(Var a, Shape shape) {
  OpAttrs attrs;
  attrs.shape = std::move(shape);
  return unary(OpKind::reshape, a, std::move(attrs));
}

Var tanh(Var a) { return unary(OpKind::tanh, a); }
Var sigmoid(Var a) { return unary(OpKind::sigmoid, a); }
Var relu(Var a) { return unary(OpKind::relu, a); }
Var leaky_relu(Var a) { return unary(OpKind::leaky_relu, a); }
Var exp(Var a) { return unary(OpKind::exp, a); }
Var log(Var a) { return unary(OpKind::log, a); }
Var softmax(Var a) { return unary(OpKind::softmax, a); }
Var max_last(Var a) { return unary(OpKind::max_last, a); }

Var segment_sum(Var a, std::vector<std::size_t> segment_ids, std::size_t segments) {
  OpAttrs attrs;
  attrs.indices = std::move(segment_ids);
  attrs.length = segments;
  return unary(OpKind::segment_sum, a, std::move(attrs));
}

}  // namespace openteam::tensor
