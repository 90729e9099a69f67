#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace hsinr {

inline constexpr double kDefaultLearningRate = 2e-4;

// Adam with bias correction. No schedule, decay or clipping.
template <class Scalar>
struct AdamState {
  std::uint64_t step = 0;
  std::vector<Scalar> m;
  std::vector<Scalar> v;
  double lr = kDefaultLearningRate;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  AdamState() = default;
  explicit AdamState(std::size_t n, double learning_rate = kDefaultLearningRate)
      : m(n, Scalar(0)), v(n, Scalar(0)), lr(learning_rate) {}
};

// One update of params in place. Throws NumericError, leaving state and params
// untouched, if any gradient is NaN or infinite.
template <class Scalar>
void adam_step(AdamState<Scalar>& state, std::span<Scalar> params, std::span<const Scalar> grads);

}  // namespace hsinr
