#include "hsinr/cube.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "hsinr/byteio.hpp"
#include "hsinr/error.hpp"
#include "hsinr/random.hpp"

namespace hsinr {

namespace {

void check_dims(std::size_t width, std::size_t height, std::size_t bands) {
  if (width == 0 || height == 0 || bands == 0) {
    throw ArgumentError("cube dimensions must be positive, got " + std::to_string(width) + "x" +
                        std::to_string(height) + "x" + std::to_string(bands));
  }
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::size_t parse_dim(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(value, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != value.size() || value.empty() || value[0] == '-') {
    throw FormatError("header key '" + key + "' is not a non-negative integer: '" + value + "'");
  }
  return static_cast<std::size_t>(v);
}

}  // namespace

HyperCube::HyperCube(std::size_t width, std::size_t height, std::size_t bands)
    : width_(width), height_(height), bands_(bands) {
  check_dims(width, height, bands);
  data_.assign(width * height * bands, 0.0f);
}

HyperCube::HyperCube(std::size_t width, std::size_t height, std::size_t bands,
                     std::vector<float> data)
    : width_(width), height_(height), bands_(bands), data_(std::move(data)) {
  check_dims(width, height, bands);
  if (data_.size() != width * height * bands) {
    throw ArgumentError("cube data length " + std::to_string(data_.size()) + " != " +
                        std::to_string(width * height * bands));
  }
}

ScaleInfo HyperCube::value_range() const {
  const auto [lo, hi] = std::minmax_element(data_.begin(), data_.end());
  return {*lo, *hi};
}

bool HyperCube::operator==(const HyperCube& other) const {
  if (!same_shape(other)) return false;
  return std::equal(data_.begin(), data_.end(), other.data_.begin(), [](float a, float b) {
    return std::bit_cast<std::uint32_t>(a) == std::bit_cast<std::uint32_t>(b);
  });
}

std::filesystem::path header_path_for(const std::filesystem::path& data_path) {
  auto p = data_path;
  p.replace_extension(".hdr");
  return p;
}

CubeHeader read_header(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open header " + path.string());

  CubeHeader header;
  bool have_w = false, have_h = false, have_b = false;
  std::string line;
  while (std::getline(in, line)) {
    const auto text = trim(line);
    if (text.empty() || text[0] == '#' || text == "ENVI") continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw FormatError("malformed header line: '" + text + "'");
    const auto key = trim(std::string_view(text).substr(0, eq));
    const auto value = trim(std::string_view(text).substr(eq + 1));
    if (key == "width" || key == "samples") {
      header.width = parse_dim(key, value);
      have_w = true;
    } else if (key == "height" || key == "lines") {
      header.height = parse_dim(key, value);
      have_h = true;
    } else if (key == "bands") {
      header.bands = parse_dim(key, value);
      have_b = true;
    } else if (key == "interleave") {
      if (value != "bsq") throw FormatError("unsupported interleave '" + value + "'");
    } else if (key == "dtype") {
      if (value != "f32le") throw FormatError("unsupported dtype '" + value + "'");
    }
  }
  if (!have_w || !have_h || !have_b) {
    throw FormatError("header " + path.string() + " lacks width, height or bands");
  }
  return header;
}

void write_header(const std::filesystem::path& path, const CubeHeader& header) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write header " + path.string());
  out << "width = " << header.width << "\n"
      << "height = " << header.height << "\n"
      << "bands = " << header.bands << "\n"
      << "interleave = bsq\n"
      << "dtype = f32le\n";
  if (!out) throw IoError("failed writing header " + path.string());
}

HyperCube load_cube(const std::filesystem::path& data_path, const CubeHeader& header) {
  check_dims(header.width, header.height, header.bands);
  std::ifstream in(data_path, std::ios::binary);
  if (!in) throw IoError("cannot open cube " + data_path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("failed reading cube " + data_path.string());

  const std::size_t count = header.width * header.height * header.bands;
  if (bytes.size() != count * 4) {
    throw FormatError("cube size mismatch for " + data_path.string() + ": expected " +
                      std::to_string(count * 4) + " bytes, found " +
                      std::to_string(bytes.size()));
  }
  std::vector<float> data(count);
  for (std::size_t i = 0; i < count; ++i) data[i] = byteio::get_f32(bytes, 4 * i);
  return HyperCube(header.width, header.height, header.bands, std::move(data));
}

HyperCube load_cube(const std::filesystem::path& data_path) {
  return load_cube(data_path, read_header(header_path_for(data_path)));
}

void save_cube(const std::filesystem::path& data_path, const HyperCube& cube) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(cube.size() * 4);
  for (float v : cube.data()) byteio::put_f32(bytes, v);

  std::ofstream out(data_path, std::ios::binary);
  if (!out) throw IoError("cannot write cube " + data_path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing cube " + data_path.string());
  write_header(header_path_for(data_path), cube.header());
}

std::pair<HyperCube, ScaleInfo> normalize(const HyperCube& cube) {
  const ScaleInfo scale = cube.value_range();
  return {apply_scale(cube, scale), scale};
}

HyperCube apply_scale(const HyperCube& cube, const ScaleInfo& scale) {
  HyperCube out(cube.width(), cube.height(), cube.bands());
  const double lo = scale.raw_min;
  const double span = static_cast<double>(scale.raw_max) - lo;
  auto src = cube.data();
  auto dst = out.data();
  if (span <= 0.0) {
    std::fill(dst.begin(), dst.end(), 0.0f);
    return out;
  }
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = static_cast<float>((src[i] - lo) / span);
  }
  return out;
}

HyperCube denormalize(const HyperCube& cube, const ScaleInfo& scale) {
  HyperCube out(cube.width(), cube.height(), cube.bands());
  const double lo = scale.raw_min;
  const double span = static_cast<double>(scale.raw_max) - lo;
  auto src = cube.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = static_cast<float>(src[i] * span + lo);
  }
  return out;
}

SynthKind parse_synth_kind(std::string_view name) {
  if (name == "smooth-gradient") return SynthKind::smooth_gradient;
  if (name == "band-sinusoid") return SynthKind::band_sinusoid;
  if (name == "random") return SynthKind::random;
  throw ArgumentError("unknown synth kind '" + std::string(name) + "'");
}

HyperCube synth_cube(SynthKind kind, std::size_t width, std::size_t height, std::size_t bands,
                     std::uint64_t seed) {
  HyperCube cube(width, height, bands);
  auto eng = rnd::make_engine(seed, static_cast<std::uint64_t>(kind));
  const double wx = width > 1 ? static_cast<double>(width - 1) : 1.0;
  const double hy = height > 1 ? static_cast<double>(height - 1) : 1.0;

  switch (kind) {
    case SynthKind::smooth_gradient:
      for (std::size_t k = 0; k < bands; ++k)
        for (std::size_t y = 0; y < height; ++y)
          for (std::size_t x = 0; x < width; ++x) {
            const double v = (x / wx + y / hy + static_cast<double>(k) / bands) / 3.0;
            cube.at(x, y, k) = static_cast<float>(std::clamp(v, 0.0, 1.0));
          }
      break;
    case SynthKind::band_sinusoid: {
      constexpr double two_pi = 2.0 * std::numbers::pi;
      for (std::size_t k = 0; k < bands; ++k) {
        const double fx = 1.0 + static_cast<double>(k % 3);
        const double fy = 1.0 + static_cast<double>((k / 3) % 2);
        const double phase_x = two_pi * rnd::uniform01(eng);
        const double phase_y = two_pi * rnd::uniform01(eng);
        for (std::size_t y = 0; y < height; ++y)
          for (std::size_t x = 0; x < width; ++x) {
            const double v = 0.5 + 0.25 * std::sin(two_pi * fx * x / width + phase_x) +
                             0.25 * std::sin(two_pi * fy * y / height + phase_y);
            cube.at(x, y, k) = static_cast<float>(std::clamp(v, 0.0, 1.0));
          }
      }
      break;
    }
    case SynthKind::random:
      for (float& v : cube.data()) v = static_cast<float>(rnd::uniform01(eng));
      break;
  }
  return cube;
}

}  // namespace hsinr
