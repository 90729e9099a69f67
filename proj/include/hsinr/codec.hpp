#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <variant>
#include <vector>

#include "hsinr/cube.hpp"
#include "hsinr/siren.hpp"

namespace hsinr {

enum class Precision : std::uint8_t { full32, half16 };

inline constexpr std::size_t bits_per_param(Precision p) { return p == Precision::half16 ? 16 : 32; }

inline constexpr std::uint8_t kFormatVersion = 1;
inline constexpr std::size_t kHeaderBytes = 17;  // magic, version, shape fields, q, bpp, reserved
inline constexpr std::size_t kScaleBytes = 8;

// The compressed artifact: image and network shape, the normalization range,
// and the parameters at 32 or 16 bits each.
struct EncodedImage {
  std::uint16_t width = 0;
  std::uint16_t height = 0;
  std::uint16_t bands = 0;
  std::uint8_t n_hidden = 0;
  std::uint8_t hidden_width = 0;
  ScaleInfo scale;
  std::variant<std::vector<float>, std::vector<std::uint16_t>> payload;

  bool quantized() const { return std::holds_alternative<std::vector<std::uint16_t>>(payload); }
  Precision precision() const { return quantized() ? Precision::half16 : Precision::full32; }
  std::size_t param_count() const;
  SirenSpec spec() const;
  // Parameters as used for inference (dequantized when q = 1).
  ParamVector parameters() const;
  // Bytes of the serialized form.
  std::size_t file_size() const;
};

// Builds an EncodedImage, quantizing when precision is half16. Throws
// ArgumentError when a field does not fit its on-disk width.
EncodedImage make_encoded(const SirenSpec& spec, std::size_t width, std::size_t height,
                          const ScaleInfo& scale, std::span<const float> params,
                          Precision precision);

std::vector<std::uint8_t> serialize(const EncodedImage& enc);
// Throws FormatError on bad magic, unsupported version, inconsistent header or
// a payload whose length disagrees with the header.
EncodedImage deserialize(std::span<const std::uint8_t> bytes);

void write_encoded(const std::filesystem::path& path, const EncodedImage& enc);
EncodedImage read_encoded(const std::filesystem::path& path);

// Network evaluated on the width x height grid, clipped to [0, 1]. Pixels are
// processed in fixed-size chunks, so the result does not depend on the thread
// count (threads <= 0 picks HSINR_THREADS or the hardware concurrency).
HyperCube render(const SirenSpec& spec, std::span<const float> params, std::size_t width,
                 std::size_t height, int threads = 0);

// Reconstruction in normalized [0, 1] units.
HyperCube reconstruct_normalized(const EncodedImage& enc, int threads = 0);
// Reconstruction in the original units.
HyperCube decompress(const EncodedImage& enc, int threads = 0);

int default_thread_count();

}  // namespace hsinr
