#include "openteam/nn/param_store.hpp"

#include <stdexcept>

#include "openteam/simd/kernels.hpp"

namespace openteam::nn {

void ParamStore::add(std::string name, Tensor value) {
  if (index_.contains(name)) throw std::invalid_argument("duplicate parameter name: " + name);
  index_.emplace(name, entries_.size());
  entries_.push_back({std::move(name), std::move(value)});
}

bool ParamStore::contains(std::string_view name) const { return index_.contains(std::string(name)); }

const Tensor& ParamStore::get(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) throw std::out_of_range("unknown parameter: " + std::string(name));
  return entries_[it->second].value;
}

Tensor& ParamStore::get_mut(std::string_view name) {
  return const_cast<Tensor&>(static_cast<const ParamStore&>(*this).get(name));
}

void ParamStore::merge(const ParamStore& other) {
  for (const auto& e : other.entries_) add(e.name, e.value);
}

std::size_t ParamStore::numel() const {
  std::size_t n = 0;
  for (const auto& e : entries_) n += e.value.numel();
  return n;
}

bool ParamStore::same_layout(const ParamStore& other) const {
  if (entries_.size() != other.entries_.size()) return false;
  for (std::size_t i = 0; i < entries_.size(); ++i)
    if (entries_[i].name != other.entries_[i].name ||
        entries_[i].value.shape() != other.entries_[i].value.shape())
      return false;
  return true;
}

BoundParams::BoundParams(tensor::Tape& tape, const ParamStore& store, bool trainable)
    : tape_(&tape), store_(&store) {
  vars_.reserve(store.size());
  for (const auto& e : store.entries()) {
    index_.emplace(e.name, vars_.size());
    vars_.push_back(trainable ? tape.leaf_ref(e.value) : tape.constant(e.value));
  }
}

Var BoundParams::operator[](std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) throw std::out_of_range("parameter not bound: " + std::string(name));
  return vars_[it->second];
}

GradMap BoundParams::grads(const tensor::Gradients& g) const {
  GradMap out;
  for (std::size_t i = 0; i < vars_.size(); ++i) out.emplace(store_->entries()[i].name, g.get(vars_[i]));
  return out;
}

void BoundParams::accumulate(const tensor::Gradients& g, GradMap& into) const {
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    const Tensor* grad = g.find(vars_[i]);
    if (!grad) continue;
    const std::string& name = store_->entries()[i].name;
    auto it = into.find(name);
    if (it == into.end()) {
      into.emplace(name, *grad);
    } else {
      simd::kernels().axpy(1.0, grad->ptr(), it->second.ptr(), grad->numel());
    }
  }
}

}  // namespace openteam::nn
