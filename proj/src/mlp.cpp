#include "hsinr/mlp.hpp"

#include <string>

#include "hsinr/error.hpp"

namespace hsinr {

namespace {

template <class Scalar>
using RowMat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <class Scalar>
Eigen::Map<const RowMat<Scalar>> weights_of(std::span<const Scalar> params, const LayerShape& s) {
  return {params.data() + s.offset, static_cast<Eigen::Index>(s.fan_out),
          static_cast<Eigen::Index>(s.fan_in)};
}

template <class Scalar>
Eigen::Map<const Vec<Scalar>> biases_of(std::span<const Scalar> params, const LayerShape& s) {
  return {params.data() + s.bias_offset(), static_cast<Eigen::Index>(s.fan_out)};
}

void check_inputs(const SirenSpec& spec, const std::vector<LayerShape>& shapes,
                  std::size_t param_len, Eigen::Index input_cols) {
  if (param_len != shapes.back().end()) {
    throw ArgumentError("parameter vector has " + std::to_string(param_len) +
                        " entries, spec needs " + std::to_string(shapes.back().end()));
  }
  if (input_cols != spec.in_dim) {
    throw ArgumentError("inputs have " + std::to_string(input_cols) + " columns, spec expects " +
                        std::to_string(spec.in_dim));
  }
}

}  // namespace

template <class Scalar>
Matrix<Scalar> affine_forward(const LayerParams<Scalar>& layer, const Matrix<Scalar>& x) {
  if (x.cols() != layer.weights.cols() || layer.biases.size() != layer.weights.rows()) {
    throw ArgumentError("affine_forward: input has " + std::to_string(x.cols()) +
                        " columns, layer fan_in is " + std::to_string(layer.weights.cols()));
  }
  Matrix<Scalar> y = x * layer.weights.transpose();
  y.rowwise() += layer.biases.transpose();
  return y;
}

template <class Scalar>
Matrix<Scalar> sine_forward(const Matrix<Scalar>& z, Scalar w0) {
  return (w0 * z.array()).sin().matrix();
}

template <class Scalar>
Matrix<Scalar> mlp_forward(const SirenSpec& spec, std::span<const Scalar> params,
                           const Matrix<Scalar>& inputs) {
  const auto shapes = layer_shapes(spec);
  check_inputs(spec, shapes, params.size(), inputs.cols());
  const auto w0 = static_cast<Scalar>(spec.w0);

  Matrix<Scalar> act = inputs;
  for (std::size_t l = 0; l < shapes.size(); ++l) {
    Matrix<Scalar> z = act * weights_of(params, shapes[l]).transpose();
    z.rowwise() += biases_of(params, shapes[l]).transpose();
    if (l + 1 < shapes.size()) {
      act = (w0 * z.array()).sin().matrix();
    } else {
      act = std::move(z);
    }
  }
  return act;
}

template <class Scalar>
Scalar mse_loss(const Matrix<Scalar>& outputs, const Matrix<Scalar>& targets) {
  if (outputs.rows() != targets.rows() || outputs.cols() != targets.cols()) {
    throw ArgumentError("mse_loss: outputs and targets differ in shape");
  }
  const Scalar* a = outputs.data();
  const Scalar* b = targets.data();
  const auto n = static_cast<std::size_t>(outputs.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    sum += d * d;
  }
  return static_cast<Scalar>(sum / static_cast<double>(n));
}

template <class Scalar>
GradientEvaluator<Scalar>::GradientEvaluator(const SirenSpec& spec)
    : spec_(spec), shapes_(layer_shapes(spec)), acts_(shapes_.size()), phases_(shapes_.size() - 1) {}

template <class Scalar>
Scalar GradientEvaluator<Scalar>::operator()(std::span<const Scalar> params,
                                             const Batch<Scalar>& batch, std::span<Scalar> grads) {
  check_inputs(spec_, shapes_, params.size(), batch.inputs.cols());
  if (grads.size() != params.size()) throw ArgumentError("gradient buffer has the wrong length");
  if (batch.targets.rows() != batch.inputs.rows() || batch.targets.cols() != spec_.out_dim) {
    throw ArgumentError("batch targets must be " + std::to_string(batch.inputs.rows()) + "x" +
                        std::to_string(spec_.out_dim));
  }
  if (batch.inputs.rows() < 1) throw ArgumentError("empty batch");
  const auto w0 = static_cast<Scalar>(spec_.w0);
  const std::size_t depth = shapes_.size();

  // acts_[l] is the input to layer l; phases_[l] = w0 * z_l for hidden layers.
  acts_[0] = batch.inputs;
  for (std::size_t l = 0; l < depth; ++l) {
    Matrix<Scalar>& z = l + 1 < depth ? phases_[l] : out_;
    z.noalias() = acts_[l] * weights_of(params, shapes_[l]).transpose();
    z.rowwise() += biases_of(params, shapes_[l]).transpose();
    if (l + 1 < depth) {
      z *= w0;
      acts_[l + 1] = z.array().sin().matrix();
    }
  }
  const Scalar loss = mse_loss(out_, batch.targets);

  const auto count = static_cast<Scalar>(out_.size());
  delta_ = (out_ - batch.targets) * (Scalar(2) / count);  // dL/dz of the head
  for (std::size_t l = depth; l-- > 0;) {
    const auto& s = shapes_[l];
    Eigen::Map<RowMat<Scalar>> dw(grads.data() + s.offset, static_cast<Eigen::Index>(s.fan_out),
                                  static_cast<Eigen::Index>(s.fan_in));
    Eigen::Map<Vec<Scalar>> db(grads.data() + s.bias_offset(),
                               static_cast<Eigen::Index>(s.fan_out));
    dw.noalias() = delta_.transpose() * acts_[l];
    db = delta_.colwise().sum().transpose();
    if (l == 0) break;
    dact_.noalias() = delta_ * weights_of(params, s);
    delta_ = (dact_.array() * (w0 * phases_[l - 1].array().cos())).matrix();
  }
  return loss;
}

template <class Scalar>
LossAndGrad<Scalar> mlp_loss_and_grad(const SirenSpec& spec, std::span<const Scalar> params,
                                      const Batch<Scalar>& batch) {
  GradientEvaluator<Scalar> eval(spec);
  LossAndGrad<Scalar> result;
  result.grads.assign(params.size(), Scalar(0));
  result.loss = eval(params, batch, result.grads);
  return result;
}

template <class Scalar>
std::vector<Scalar> numeric_gradient(const SirenSpec& spec, std::span<const Scalar> params,
                                     const Batch<Scalar>& batch, Scalar eps) {
  if (!(eps > Scalar(0))) throw ArgumentError("numeric_gradient: eps must be positive");
  std::vector<Scalar> probe(params.begin(), params.end());
  std::vector<Scalar> grads(params.size());
  auto loss_at = [&] {
    return mse_loss(mlp_forward<Scalar>(spec, probe, batch.inputs), batch.targets);
  };
  for (std::size_t i = 0; i < probe.size(); ++i) {
    const Scalar saved = probe[i];
    probe[i] = saved + eps;
    const Scalar plus = loss_at();
    probe[i] = saved - eps;
    const Scalar minus = loss_at();
    probe[i] = saved;
    grads[i] = (plus - minus) / (Scalar(2) * eps);
  }
  return grads;
}

#define HSINR_INSTANTIATE(T)                                                                     \
  template Matrix<T> affine_forward(const LayerParams<T>&, const Matrix<T>&);                  \
  template Matrix<T> sine_forward(const Matrix<T>&, T);                                        \
  template Matrix<T> mlp_forward(const SirenSpec&, std::span<const T>, const Matrix<T>&);      \
  template T mse_loss(const Matrix<T>&, const Matrix<T>&);                                     \
  template LossAndGrad<T> mlp_loss_and_grad(const SirenSpec&, std::span<const T>,              \
                                            const Batch<T>&);                                  \
  template std::vector<T> numeric_gradient(const SirenSpec&, std::span<const T>, const Batch<T>&, \
                                           T);

HSINR_INSTANTIATE(float)
HSINR_INSTANTIATE(double)

template class GradientEvaluator<float>;
template class GradientEvaluator<double>;

#undef HSINR_INSTANTIATE

}  // namespace hsinr
