#include "hsinr/siren.hpp"

#include <cmath>
#include <string>

#include "hsinr/error.hpp"
#include "hsinr/random.hpp"

namespace hsinr {

void SirenSpec::validate() const {
  if (in_dim < 1 || n_hidden < 1 || hidden_width < 1 || out_dim < 1 || !(w0 > 0.0)) {
    throw ArgumentError("invalid network spec: in_dim=" + std::to_string(in_dim) +
                        " n_hidden=" + std::to_string(n_hidden) +
                        " hidden_width=" + std::to_string(hidden_width) +
                        " out_dim=" + std::to_string(out_dim));
  }
}

std::vector<LayerShape> layer_shapes(const SirenSpec& spec) {
  spec.validate();
  std::vector<LayerShape> shapes;
  shapes.reserve(static_cast<std::size_t>(spec.n_hidden) + 1);
  std::size_t offset = 0;
  std::size_t fan_in = static_cast<std::size_t>(spec.in_dim);
  for (int l = 0; l <= spec.n_hidden; ++l) {
    const std::size_t fan_out = l == spec.n_hidden ? static_cast<std::size_t>(spec.out_dim)
                                                   : static_cast<std::size_t>(spec.hidden_width);
    shapes.push_back({fan_in, fan_out, offset});
    offset = shapes.back().end();
    fan_in = fan_out;
  }
  return shapes;
}

std::size_t param_count(const SirenSpec& spec) { return layer_shapes(spec).back().end(); }

double init_bound(const SirenSpec& spec, std::size_t index) {
  const auto shapes = layer_shapes(spec);
  const double fan_in = static_cast<double>(shapes.at(index).fan_in);
  if (index == 0) return 1.0 / fan_in;
  return std::sqrt(6.0 / fan_in) / spec.w0;
}

ParamVector init_params(const SirenSpec& spec, std::uint64_t seed) {
  const auto shapes = layer_shapes(spec);
  ParamVector params(shapes.back().end());
  auto eng = rnd::make_engine(seed, 0x5155);

  for (std::size_t l = 0; l < shapes.size(); ++l) {
    const double bound = init_bound(spec, l);
    // Open interval: redraw anything that lands on (or rounds onto) an endpoint.
    auto draw = [&] {
      for (;;) {
        const auto v = static_cast<float>(bound * (2.0 * rnd::uniform01(eng) - 1.0));
        if (std::abs(static_cast<double>(v)) < bound) return v;
      }
    };
    for (std::size_t i = shapes[l].offset; i < shapes[l].end(); ++i) params[i] = draw();
  }
  return params;
}

template <class Scalar>
std::vector<LayerParams<Scalar>> unflatten(const SirenSpec& spec, std::span<const Scalar> params) {
  const auto shapes = layer_shapes(spec);
  if (params.size() != shapes.back().end()) {
    throw ArgumentError("parameter vector has " + std::to_string(params.size()) +
                        " entries, spec needs " + std::to_string(shapes.back().end()));
  }
  std::vector<LayerParams<Scalar>> layers;
  layers.reserve(shapes.size());
  for (const auto& s : shapes) {
    using RowMat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    LayerParams<Scalar> layer;
    layer.weights = Eigen::Map<const RowMat>(params.data() + s.offset,
                                             static_cast<Eigen::Index>(s.fan_out),
                                             static_cast<Eigen::Index>(s.fan_in));
    layer.biases =
        Eigen::Map<const Vec>(params.data() + s.bias_offset(), static_cast<Eigen::Index>(s.fan_out));
    layers.push_back(std::move(layer));
  }
  return layers;
}

template <class Scalar>
std::vector<Scalar> flatten(std::span<const LayerParams<Scalar>> layers) {
  std::vector<Scalar> out;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& layer = layers[l];
    if (layer.biases.size() != layer.weights.rows()) {
      throw ArgumentError("layer " + std::to_string(l) + " has " +
                          std::to_string(layer.biases.size()) + " biases for " +
                          std::to_string(layer.weights.rows()) + " outputs");
    }
    if (l > 0 && layer.weights.cols() != layers[l - 1].weights.rows()) {
      throw ArgumentError("layer " + std::to_string(l) + " fan_in does not match previous fan_out");
    }
    // weights is row-major, so its storage already is the canonical order
    out.insert(out.end(), layer.weights.data(), layer.weights.data() + layer.weights.size());
    out.insert(out.end(), layer.biases.data(), layer.biases.data() + layer.biases.size());
  }
  return out;
}

template std::vector<LayerParams<float>> unflatten(const SirenSpec&, std::span<const float>);
template std::vector<LayerParams<double>> unflatten(const SirenSpec&, std::span<const double>);
template std::vector<float> flatten(std::span<const LayerParams<float>>);
template std::vector<double> flatten(std::span<const LayerParams<double>>);

}  // namespace hsinr
