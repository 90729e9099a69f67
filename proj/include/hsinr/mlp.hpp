#pragma once

// Forward evaluation and exact reverse-mode gradients for the sine MLP family.
// Rows of every matrix are samples; columns are features.

#include <span>
#include <vector>

#include <Eigen/Core>

#include "hsinr/siren.hpp"

namespace hsinr {

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <class Scalar>
struct Batch {
  Matrix<Scalar> inputs;   // n x in_dim coordinates in [-1, 1]
  Matrix<Scalar> targets;  // n x out_dim reflectances
};

template <class Scalar>
struct LossAndGrad {
  Scalar loss;
  std::vector<Scalar> grads;  // canonical ParamVector order
};

// y = x * W^T + b, broadcast per row.
template <class Scalar>
Matrix<Scalar> affine_forward(const LayerParams<Scalar>& layer, const Matrix<Scalar>& x);

// Elementwise sin(w0 * z).
template <class Scalar>
Matrix<Scalar> sine_forward(const Matrix<Scalar>& z, Scalar w0);

// n_hidden sine-activated affine layers, then a linear head. Outputs are not clipped.
template <class Scalar>
Matrix<Scalar> mlp_forward(const SirenSpec& spec, std::span<const Scalar> params,
                           const Matrix<Scalar>& inputs);

// Mean of squared errors over all n*out_dim entries, summed in storage order.
template <class Scalar>
Scalar mse_loss(const Matrix<Scalar>& outputs, const Matrix<Scalar>& targets);

template <class Scalar>
LossAndGrad<Scalar> mlp_loss_and_grad(const SirenSpec& spec, std::span<const Scalar> params,
                                      const Batch<Scalar>& batch);

// Reusable buffers for repeated loss-and-gradient evaluation of one network
// shape. Results are identical to mlp_loss_and_grad; only allocations differ.
template <class Scalar>
class GradientEvaluator {
 public:
  explicit GradientEvaluator(const SirenSpec& spec);

  // Writes dL/dparams into grads (length param_count) and returns the loss.
  Scalar operator()(std::span<const Scalar> params, const Batch<Scalar>& batch,
                    std::span<Scalar> grads);

 private:
  SirenSpec spec_;
  std::vector<LayerShape> shapes_;
  std::vector<Matrix<Scalar>> acts_;
  std::vector<Matrix<Scalar>> phases_;
  Matrix<Scalar> out_;
  Matrix<Scalar> delta_;
  Matrix<Scalar> dact_;
};

// Central finite differences of mse_loss(mlp_forward(...)) per parameter.
// Gradient-check oracle; costs two forward passes per parameter.
template <class Scalar>
std::vector<Scalar> numeric_gradient(const SirenSpec& spec, std::span<const Scalar> params,
                                     const Batch<Scalar>& batch, Scalar eps);

}  // namespace hsinr
