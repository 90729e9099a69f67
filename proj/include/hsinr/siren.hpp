#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace hsinr {

// Frequency scale of the sine activations. Not stored in encoded files; it is
// a constant of format version 1.
inline constexpr double kDefaultW0 = 30.0;

// Shape of a coordinate MLP: in_dim inputs, n_hidden sine layers of
// hidden_width units, then a linear head with out_dim outputs.
struct SirenSpec {
  int in_dim = 2;
  int n_hidden = 1;
  int hidden_width = 1;
  int out_dim = 1;
  double w0 = kDefaultW0;

  // Throws ArgumentError on a non-positive field.
  void validate() const;
  bool operator==(const SirenSpec&) const = default;
};

// Flat, canonically ordered parameters: for each layer from input to output,
// weights row-major (fan_out x fan_in) followed by biases. This order is part
// of the file format.
using ParamVector = std::vector<float>;

struct LayerShape {
  std::size_t fan_in;
  std::size_t fan_out;
  std::size_t offset;  // start of this layer's weights in the ParamVector

  std::size_t weight_count() const { return fan_in * fan_out; }
  std::size_t bias_offset() const { return offset + weight_count(); }
  std::size_t end() const { return bias_offset() + fan_out; }
};

std::vector<LayerShape> layer_shapes(const SirenSpec& spec);

// Weights plus biases of every layer.
std::size_t param_count(const SirenSpec& spec);

// Half-width of the uniform init interval for layer `index`.
double init_bound(const SirenSpec& spec, std::size_t index);

// First layer uniform on (-1/fan_in, 1/fan_in); later layers on
// (-sqrt(6/fan_in)/w0, sqrt(6/fan_in)/w0). Biases share their layer's interval.
ParamVector init_params(const SirenSpec& spec, std::uint64_t seed);

template <class Scalar>
struct LayerParams {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> weights;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> biases;
};

template <class Scalar>
std::vector<LayerParams<Scalar>> unflatten(const SirenSpec& spec, std::span<const Scalar> params);

template <class Scalar>
std::vector<Scalar> flatten(std::span<const LayerParams<Scalar>> layers);

}  // namespace hsinr
