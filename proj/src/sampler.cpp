#include "hsinr/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hsinr/error.hpp"
#include "hsinr/random.hpp"

namespace hsinr {

namespace {

float axis_coord(std::size_t i, std::size_t n) {
  if (n == 1) return 0.0f;
  if (i + 1 == n) return 1.0f;
  return static_cast<float>(-1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n - 1));
}

}  // namespace

CoordGrid build_grid(std::size_t width, std::size_t height) {
  if (width == 0 || height == 0) throw ArgumentError("grid dimensions must be positive");
  CoordGrid grid;
  grid.width = width;
  grid.height = height;
  grid.coords.resize(static_cast<Eigen::Index>(width * height), 2);
  for (std::size_t y = 0; y < height; ++y) {
    const float yc = axis_coord(y, height);
    for (std::size_t x = 0; x < width; ++x) {
      const auto p = static_cast<Eigen::Index>(y * width + x);
      grid.coords(p, 0) = axis_coord(x, width);
      grid.coords(p, 1) = yc;
    }
  }
  return grid;
}

void SampleConfig::validate() const {
  if (window < 1) throw ArgumentError("sample window must be >= 1");
  if (!(rate > 0.0 && rate <= 1.0)) {
    throw ArgumentError("sample rate must lie in (0, 1], got " + std::to_string(rate));
  }
}

std::size_t tile_sample_count(double rate, std::size_t tile_pixels) {
  const auto k = static_cast<std::size_t>(std::floor(rate * static_cast<double>(tile_pixels) + 0.5));
  return std::clamp<std::size_t>(k, 1, tile_pixels);
}

std::vector<std::uint32_t> sample_indices(std::size_t width, std::size_t height,
                                          const SampleConfig& cfg, std::uint64_t epoch) {
  cfg.validate();
  if (width == 0 || height == 0) throw ArgumentError("image dimensions must be positive");
  auto eng = rnd::make_engine(cfg.seed, cfg.resample_each_epoch ? epoch + 1 : 0);

  std::vector<std::uint32_t> out;
  out.reserve(static_cast<std::size_t>(std::ceil(cfg.rate * width * height)) + width + height);
  std::vector<std::uint32_t> tile;
  for (std::size_t y0 = 0; y0 < height; y0 += cfg.window) {
    const std::size_t y1 = std::min(height, y0 + cfg.window);
    for (std::size_t x0 = 0; x0 < width; x0 += cfg.window) {
      const std::size_t x1 = std::min(width, x0 + cfg.window);
      tile.clear();
      for (std::size_t y = y0; y < y1; ++y)
        for (std::size_t x = x0; x < x1; ++x) tile.push_back(static_cast<std::uint32_t>(y * width + x));

      // partial Fisher-Yates: the first k slots become the draw
      const std::size_t k = tile_sample_count(cfg.rate, tile.size());
      for (std::size_t i = 0; i < k; ++i) {
        const auto j = i + rnd::uniform_below(eng, tile.size() - i);
        std::swap(tile[i], tile[j]);
      }
      out.insert(out.end(), tile.begin(), tile.begin() + static_cast<std::ptrdiff_t>(k));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Batch<float> gather_batch(const HyperCube& cube, const CoordGrid& grid,
                          std::span<const std::uint32_t> indices) {
  if (grid.width != cube.width() || grid.height != cube.height()) {
    throw ArgumentError("grid and cube dimensions differ");
  }
  const auto n = static_cast<Eigen::Index>(indices.size());
  const auto bands = static_cast<Eigen::Index>(cube.bands());
  const std::size_t pixels = cube.pixels();
  Batch<float> batch;
  batch.inputs.resize(n, 2);
  batch.targets.resize(n, bands);
  for (Eigen::Index r = 0; r < n; ++r) {
    const std::uint32_t p = indices[static_cast<std::size_t>(r)];
    if (p >= pixels) {
      throw ArgumentError("pixel index " + std::to_string(p) + " out of range (" +
                          std::to_string(pixels) + " pixels)");
    }
    batch.inputs(r, 0) = grid.coords(p, 0);
    batch.inputs(r, 1) = grid.coords(p, 1);
  }
  const auto data = cube.data();
  for (Eigen::Index k = 0; k < bands; ++k) {
    const float* band = data.data() + static_cast<std::size_t>(k) * pixels;
    for (Eigen::Index r = 0; r < n; ++r) batch.targets(r, k) = band[indices[static_cast<std::size_t>(r)]];
  }
  return batch;
}

Batch<float> full_batch(const HyperCube& cube, const CoordGrid& grid) {
  if (grid.width != cube.width() || grid.height != cube.height()) {
    throw ArgumentError("grid and cube dimensions differ");
  }
  Batch<float> batch;
  batch.inputs = grid.coords;
  // BSQ storage is exactly a column-major pixels x bands matrix
  batch.targets = Eigen::Map<const Matrix<float>>(cube.data().data(),
                                                  static_cast<Eigen::Index>(cube.pixels()),
                                                  static_cast<Eigen::Index>(cube.bands()));
  return batch;
}

}  // namespace hsinr
