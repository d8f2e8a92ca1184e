#pragma once

#include <functional>
#include <span>
#include <vector>

#include "openteam/tensor/tape.hpp"

namespace openteam::tensor {

// A scalar-valued function of one or more tensors, expressed on a tape.
using MultiScalarFn = std::function<Var(Tape&, std::span<const Var>)>;
using ScalarFn = std::function<Var(Tape&, Var)>;

// Max over all coordinates of |analytic - central| / max(1, |analytic|, |central|),
// with central differences of step eps.
double grad_check(const MultiScalarFn& f, std::span<const Tensor> inputs, double eps = 1e-5);
double grad_check(const ScalarFn& f, const Tensor& x, double eps = 1e-5);

}  // namespace openteam::tensor
