#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

namespace hsinr {

// Raw-value range of a cube before normalization.
struct ScaleInfo {
  float raw_min = 0.0f;
  float raw_max = 1.0f;

  float range() const { return raw_max - raw_min; }
  bool operator==(const ScaleInfo&) const = default;
};

// Dimensions carried by the .hdr sidecar.
struct CubeHeader {
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t bands = 0;

  bool operator==(const CubeHeader&) const = default;
};

// A width x height x bands array of reflectances, band-sequential:
// element (x, y, k) lives at k*width*height + y*width + x.
class HyperCube {
 public:
  HyperCube(std::size_t width, std::size_t height, std::size_t bands);
  HyperCube(std::size_t width, std::size_t height, std::size_t bands, std::vector<float> data);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t bands() const { return bands_; }
  std::size_t pixels() const { return width_ * height_; }
  std::size_t size() const { return data_.size(); }
  CubeHeader header() const { return {width_, height_, bands_}; }

  std::span<float> data() { return data_; }
  std::span<const float> data() const { return data_; }

  std::span<float> band(std::size_t k) { return {data_.data() + k * pixels(), pixels()}; }
  std::span<const float> band(std::size_t k) const {
    return {data_.data() + k * pixels(), pixels()};
  }

  float& at(std::size_t x, std::size_t y, std::size_t k) {
    return data_[k * pixels() + y * width_ + x];
  }
  float at(std::size_t x, std::size_t y, std::size_t k) const {
    return data_[k * pixels() + y * width_ + x];
  }

  // (min, max) over all elements.
  ScaleInfo value_range() const;

  bool same_shape(const HyperCube& other) const {
    return width_ == other.width_ && height_ == other.height_ && bands_ == other.bands_;
  }

  // Bitwise equality of shape and contents.
  bool operator==(const HyperCube& other) const;

 private:
  std::size_t width_;
  std::size_t height_;
  std::size_t bands_;
  std::vector<float> data_;
};

// Sidecar path for a data file: same stem, ".hdr" extension.
std::filesystem::path header_path_for(const std::filesystem::path& data_path);

CubeHeader read_header(const std::filesystem::path& path);
void write_header(const std::filesystem::path& path, const CubeHeader& header);

// Reads f32le BSQ samples; the file size must match the header exactly.
HyperCube load_cube(const std::filesystem::path& data_path, const CubeHeader& header);
// Reads the header from the sidecar next to data_path.
HyperCube load_cube(const std::filesystem::path& data_path);
// Writes data_path and its sidecar.
void save_cube(const std::filesystem::path& data_path, const HyperCube& cube);

// Global min-max normalization to [0, 1]. A constant cube maps to zeros.
std::pair<HyperCube, ScaleInfo> normalize(const HyperCube& cube);
HyperCube denormalize(const HyperCube& cube, const ScaleInfo& scale);
// Applies an existing scale (used to compare a reconstruction in the
// original's normalized space).
HyperCube apply_scale(const HyperCube& cube, const ScaleInfo& scale);

enum class SynthKind { smooth_gradient, band_sinusoid, random };

SynthKind parse_synth_kind(std::string_view name);

// Deterministic desk-scale test cubes, values in [0, 1].
HyperCube synth_cube(SynthKind kind, std::size_t width, std::size_t height, std::size_t bands,
                     std::uint64_t seed);

}  // namespace hsinr
