#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "openteam/tensor/tape.hpp"

namespace openteam::nn {

using tensor::Shape;
using tensor::Tensor;
using tensor::Var;
using Rng = std::mt19937_64;

// Gradients keyed by parameter name.
using GradMap = std::map<std::string, Tensor, std::less<>>;

// Named parameters in insertion order. Names are unique and shapes are fixed
// once added.
class ParamStore {
 public:
  struct Entry {
    std::string name;
    Tensor value;
    bool operator==(const Entry&) const = default;
  };

  void add(std::string name, Tensor value);
  bool contains(std::string_view name) const;
  const Tensor& get(std::string_view name) const;
  Tensor& get_mut(std::string_view name);

  // Copies every entry of `other` into this store (names must be new).
  void merge(const ParamStore& other);

  std::size_t size() const { return entries_.size(); }
  std::size_t numel() const;
  bool empty() const { return entries_.empty(); }
  const std::vector<Entry>& entries() const { return entries_; }
  std::vector<Entry>& entries() { return entries_; }

  // Equal names, order and shapes.
  bool same_layout(const ParamStore& other) const;

  bool operator==(const ParamStore& other) const { return entries_ == other.entries_; }

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

// A ParamStore placed on a tape, either as differentiable leaves or as constants.
class BoundParams {
 public:
  BoundParams(tensor::Tape& tape, const ParamStore& store, bool trainable = true);

  Var operator[](std::string_view name) const;
  tensor::Tape& tape() const { return *tape_; }

  // Gradients of every bound parameter (zeros where the loss does not depend on it).
  GradMap grads(const tensor::Gradients& g) const;
  // Adds gradients into an accumulator, creating entries as needed.
  void accumulate(const tensor::Gradients& g, GradMap& into) const;

 private:
  tensor::Tape* tape_;
  const ParamStore* store_;
  std::vector<Var> vars_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace openteam::nn
