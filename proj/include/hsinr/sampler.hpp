#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hsinr/cube.hpp"
#include "hsinr/mlp.hpp"

namespace hsinr {

// Pixel-center coordinates on [-1, 1]^2 in row-major pixel order. Row p of
// coords is (x, y) of pixel p = row * width + col.
struct CoordGrid {
  std::size_t width = 0;
  std::size_t height = 0;
  Matrix<float> coords;  // (width*height) x 2

  std::size_t size() const { return width * height; }
};

// Column j maps to -1 + 2j/(width-1), or 0 when width == 1; rows likewise.
CoordGrid build_grid(std::size_t width, std::size_t height);

// Windowed random subset of pixels used for one training epoch.
struct SampleConfig {
  std::size_t window = 3;  // side length of the square tile
  double rate = 0.5;       // fraction of each tile drawn, in (0, 1]
  std::uint64_t seed = 0;
  bool resample_each_epoch = true;

  void validate() const;
};

// Pixels drawn from a window x window tile holding `tile_pixels` pixels:
// round-half-up of rate * tile_pixels, at least one.
std::size_t tile_sample_count(double rate, std::size_t tile_pixels);

// Tiles the image into window x window blocks (ragged at the right and bottom
// edges) and draws tile_sample_count distinct pixels uniformly from each.
// Deterministic in (cfg.seed, epoch); epoch is ignored in fixed-subset mode.
// Returned indices are sorted.
std::vector<std::uint32_t> sample_indices(std::size_t width, std::size_t height,
                                          const SampleConfig& cfg, std::uint64_t epoch);

Batch<float> gather_batch(const HyperCube& cube, const CoordGrid& grid,
                          std::span<const std::uint32_t> indices);

// Every pixel, in pixel order.
Batch<float> full_batch(const HyperCube& cube, const CoordGrid& grid);

}  // namespace hsinr
