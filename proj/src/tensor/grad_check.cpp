#include "openteam/tensor/grad_check.hpp"

#include <algorithm>
#include <cmath>

namespace openteam::tensor {

namespace {

double evaluate(const MultiScalarFn& f, std::span<const Tensor> inputs) {
  Tape tape;
  std::vector<Var> vars;
  vars.reserve(inputs.size());
  for (const Tensor& t : inputs) vars.push_back(tape.constant(t));
  return f(tape, vars).value().item();
}

}  // namespace

double grad_check(const MultiScalarFn& f, std::span<const Tensor> inputs, double eps) {
  std::vector<Tensor> analytic;
  {
    Tape tape;
    std::vector<Var> vars;
    for (const Tensor& t : inputs) vars.push_back(tape.leaf(t));
    const Var out = f(tape, vars);
    const Gradients g = tape.backward(out);
    for (const Var& v : vars) analytic.push_back(g.get(v));
  }

  std::vector<Tensor> probe(inputs.begin(), inputs.end());
  double worst = 0.0;
  for (std::size_t t = 0; t < probe.size(); ++t) {
    for (std::size_t i = 0; i < probe[t].numel(); ++i) {
      const double x0 = probe[t][i];
      probe[t][i] = x0 + eps;
      const double up = evaluate(f, probe);
      probe[t][i] = x0 - eps;
      const double down = evaluate(f, probe);
      probe[t][i] = x0;
      const double central = (up - down) / (2.0 * eps);
      const double a = analytic[t][i];
      const double denom = std::max({1.0, std::abs(a), std::abs(central)});
      worst = std::max(worst, std::abs(a - central) / denom);
    }
  }
  return worst;
}

double grad_check(const ScalarFn& f, const Tensor& x, double eps) {
  MultiScalarFn wrapped = [&f](Tape& tape, std::span<const Var> vars) { return f(tape, vars[0]); };
  return grad_check(wrapped, std::span<const Tensor>(&x, 1), eps);
}

}  // namespace openteam::tensor
