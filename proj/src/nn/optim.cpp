#include "openteam/nn/optim.hpp"

#include <cmath>
#include <stdexcept>

#include "openteam/simd/kernels.hpp"

namespace openteam::nn {

void adam_step(ParamStore& params, const GradMap& grads, AdamState& state) {
  for (const auto& [name, g] : grads) {
    if (!params.contains(name)) throw std::invalid_argument("adam_step: gradient for unknown parameter " + name);
    if (params.get(name).shape() != g.shape())
      throw std::invalid_argument("adam_step: shape mismatch for " + name + ": parameter " +
                                  tensor::shape_str(params.get(name).shape()) + " vs gradient " +
                                  tensor::shape_str(g.shape()));
  }
  state.step += 1;
  const AdamConfig& c = state.config;
  const double t = double(state.step);
  const simd::AdamCoeffs coeffs{c.lr, c.beta1, c.beta2, c.eps, 1.0 - std::pow(c.beta1, t),
                                1.0 - std::pow(c.beta2, t)};
  const auto& k = simd::kernels();
  for (auto& entry : params.entries()) {
    auto it = grads.find(entry.name);
    if (it == grads.end()) continue;
    if (!state.first_moment.contains(entry.name)) {
      state.first_moment.add(entry.name, Tensor(entry.value.shape()));
      state.second_moment.add(entry.name, Tensor(entry.value.shape()));
    }
    Tensor& m = state.first_moment.get_mut(entry.name);
    Tensor& v = state.second_moment.get_mut(entry.name);
    k.adam(entry.value.ptr(), m.ptr(), v.ptr(), it->second.ptr(), entry.value.numel(), coeffs);
  }
}

void polyak_update(ParamStore& target, const ParamStore& online, double alpha) {
  if (!target.same_layout(online)) throw std::invalid_argument("polyak_update: stores have different layouts");
  const auto& k = simd::kernels();
  for (std::size_t i = 0; i < target.size(); ++i) {
    auto& t = target.entries()[i].value;
    k.lerp(t.ptr(), online.entries()[i].value.ptr(), alpha, t.numel());
  }
}

}  // namespace openteam::nn
