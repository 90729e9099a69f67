#include "hsinr/adam.hpp"

#include <cmath>
#include <string>

#include "hsinr/error.hpp"

namespace hsinr {

template <class Scalar>
void adam_step(AdamState<Scalar>& state, std::span<Scalar> params, std::span<const Scalar> grads) {
  const std::size_t n = params.size();
  if (grads.size() != n || state.m.size() != n || state.v.size() != n) {
    throw ArgumentError("adam_step: params, grads and moments must have equal length");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(grads[i])) {
      throw NumericError("non-finite gradient at parameter " + std::to_string(i) + " (step " +
                         std::to_string(state.step + 1) + ")");
    }
  }

  ++state.step;
  const auto t = static_cast<double>(state.step);
  const auto b1 = static_cast<Scalar>(state.beta1);
  const auto b2 = static_cast<Scalar>(state.beta2);
  const auto c1 = static_cast<Scalar>(1.0 - std::pow(state.beta1, t));
  const auto c2 = static_cast<Scalar>(1.0 - std::pow(state.beta2, t));
  const auto lr = static_cast<Scalar>(state.lr);
  const auto eps = static_cast<Scalar>(state.eps);

  for (std::size_t i = 0; i < n; ++i) {
    const Scalar g = grads[i];
    state.m[i] = b1 * state.m[i] + (Scalar(1) - b1) * g;
    state.v[i] = b2 * state.v[i] + (Scalar(1) - b2) * g * g;
    const Scalar m_hat = state.m[i] / c1;
    const Scalar v_hat = state.v[i] / c2;
    params[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
  }
}

template void adam_step(AdamState<float>&, std::span<float>, std::span<const float>);
template void adam_step(AdamState<double>&, std::span<double>, std::span<const double>);

}  // namespace hsinr
