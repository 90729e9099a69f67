#include "hsinr/codec.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <string>
#include <thread>

#include "hsinr/byteio.hpp"
#include "hsinr/error.hpp"
#include "hsinr/half.hpp"
#include "hsinr/mlp.hpp"
#include "hsinr/sampler.hpp"

namespace hsinr {

namespace {

constexpr std::uint8_t kMagic[4] = {'H', 'S', 'I', 'N'};
constexpr std::size_t kRenderChunk = 4096;

template <class T>
T narrow_field(std::size_t value, const char* name) {
  if (value == 0 || value > std::numeric_limits<T>::max()) {
    throw ArgumentError(std::string(name) + " = " + std::to_string(value) +
                        " does not fit the encoded header (1.." +
                        std::to_string(std::numeric_limits<T>::max()) + ")");
  }
  return static_cast<T>(value);
}

}  // namespace

std::size_t EncodedImage::param_count() const { return hsinr::param_count(spec()); }

SirenSpec EncodedImage::spec() const {
  SirenSpec s;
  s.n_hidden = n_hidden;
  s.hidden_width = hidden_width;
  s.out_dim = bands;
  return s;
}

ParamVector EncodedImage::parameters() const {
  if (const auto* half = std::get_if<std::vector<std::uint16_t>>(&payload)) {
    return dequantize(*half);
  }
  return std::get<std::vector<float>>(payload);
}

std::size_t EncodedImage::file_size() const {
  return kHeaderBytes + kScaleBytes + param_count() * bits_per_param(precision()) / 8;
}

EncodedImage make_encoded(const SirenSpec& spec, std::size_t width, std::size_t height,
                          const ScaleInfo& scale, std::span<const float> params,
                          Precision precision) {
  spec.validate();
  if (spec.in_dim != 2) throw ArgumentError("encoded networks take 2 input coordinates");
  if (spec.w0 != kDefaultW0) throw ArgumentError("encoded networks use the fixed w0 = 30");
  EncodedImage enc;
  enc.width = narrow_field<std::uint16_t>(width, "width");
  enc.height = narrow_field<std::uint16_t>(height, "height");
  enc.bands = narrow_field<std::uint16_t>(static_cast<std::size_t>(spec.out_dim), "bands");
  enc.n_hidden = narrow_field<std::uint8_t>(static_cast<std::size_t>(spec.n_hidden), "n_hidden");
  enc.hidden_width =
      narrow_field<std::uint8_t>(static_cast<std::size_t>(spec.hidden_width), "hidden_width");
  enc.scale = scale;
  if (params.size() != param_count(spec)) {
    throw ArgumentError("parameter vector has " + std::to_string(params.size()) +
                        " entries, spec needs " + std::to_string(param_count(spec)));
  }
  if (precision == Precision::half16) {
    enc.payload = quantize(params);
  } else {
    enc.payload = std::vector<float>(params.begin(), params.end());
  }
  return enc;
}

std::vector<std::uint8_t> serialize(const EncodedImage& enc) {
  const std::size_t n = enc.param_count();
  const bool q = enc.quantized();
  const std::size_t payload_len = q ? std::get<1>(enc.payload).size() : std::get<0>(enc.payload).size();
  if (payload_len != n) {
    throw ArgumentError("payload holds " + std::to_string(payload_len) + " parameters, header implies " +
                        std::to_string(n));
  }

  std::vector<std::uint8_t> out;
  out.reserve(enc.file_size());
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  byteio::put_u8(out, kFormatVersion);
  byteio::put_u16(out, enc.width);
  byteio::put_u16(out, enc.height);
  byteio::put_u16(out, enc.bands);
  byteio::put_u8(out, enc.n_hidden);
  byteio::put_u8(out, enc.hidden_width);
  byteio::put_u8(out, q ? 1 : 0);
  byteio::put_u8(out, static_cast<std::uint8_t>(bits_per_param(enc.precision())));
  byteio::put_u16(out, 0);  // reserved
  byteio::put_f32(out, enc.scale.raw_min);
  byteio::put_f32(out, enc.scale.raw_max);
  if (q) {
    for (std::uint16_t h : std::get<1>(enc.payload)) byteio::put_u16(out, h);
  } else {
    for (float v : std::get<0>(enc.payload)) byteio::put_f32(out, v);
  }
  return out;
}

EncodedImage deserialize(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || !std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin())) {
    throw FormatError("bad magic: not an HSIN file");
  }
  if (bytes.size() < kHeaderBytes + kScaleBytes) {
    throw FormatError("truncated header: expected at least " +
                      std::to_string(kHeaderBytes + kScaleBytes) + " bytes, found " +
                      std::to_string(bytes.size()));
  }
  if (bytes[4] != kFormatVersion) {
    throw FormatError("unsupported version " + std::to_string(bytes[4]));
  }

  EncodedImage enc;
  enc.width = byteio::get_u16(bytes, 5);
  enc.height = byteio::get_u16(bytes, 7);
  enc.bands = byteio::get_u16(bytes, 9);
  enc.n_hidden = bytes[11];
  enc.hidden_width = bytes[12];
  const std::uint8_t q = bytes[13];
  const std::uint8_t bpp = bytes[14];
  const std::uint16_t reserved = byteio::get_u16(bytes, 15);
  if (enc.width == 0 || enc.height == 0 || enc.bands == 0 || enc.n_hidden == 0 ||
      enc.hidden_width == 0) {
    throw FormatError("header has a zero dimension");
  }
  if (q > 1) throw FormatError("invalid quantization flag " + std::to_string(q));
  enc.scale.raw_min = byteio::get_f32(bytes, kHeaderBytes);
  enc.scale.raw_max = byteio::get_f32(bytes, kHeaderBytes + 4);

  const std::size_t n = enc.param_count();
  const std::size_t width_bytes = q ? 2 : 4;
  const std::size_t expected = kHeaderBytes + kScaleBytes + n * width_bytes;
  if (bytes.size() != expected) {
    throw FormatError("payload length mismatch: expected " + std::to_string(expected) +
                      " bytes, found " + std::to_string(bytes.size()));
  }
  if (bpp != width_bytes * 8) {
    throw FormatError("bits-per-parameter " + std::to_string(bpp) + " contradicts q=" +
                      std::to_string(q));
  }
  if (reserved != 0) throw FormatError("reserved header bytes are not zero");
  if (!(enc.scale.raw_max >= enc.scale.raw_min)) throw FormatError("invalid scale range");

  const std::size_t base = kHeaderBytes + kScaleBytes;
  if (q) {
    std::vector<std::uint16_t> halves(n);
    for (std::size_t i = 0; i < n; ++i) halves[i] = byteio::get_u16(bytes, base + 2 * i);
    enc.payload = std::move(halves);
  } else {
    std::vector<float> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = byteio::get_f32(bytes, base + 4 * i);
    enc.payload = std::move(values);
  }
  return enc;
}

void write_encoded(const std::filesystem::path& path, const EncodedImage& enc) {
  const auto bytes = serialize(enc);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

EncodedImage read_encoded(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("failed reading " + path.string());
  return deserialize(bytes);
}

int default_thread_count() {
  if (const char* env = std::getenv("HSINR_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

HyperCube render(const SirenSpec& spec, std::span<const float> params, std::size_t width,
                 std::size_t height, int threads) {
  if (params.size() != param_count(spec)) {
    throw ArgumentError("parameter vector has " + std::to_string(params.size()) +
                        " entries, spec needs " + std::to_string(param_count(spec)));
  }
  const CoordGrid grid = build_grid(width, height);
  const std::size_t pixels = grid.size();
  const auto bands = static_cast<std::size_t>(spec.out_dim);
  HyperCube cube(width, height, bands);
  auto out = cube.data();

  const std::size_t chunks = (pixels + kRenderChunk - 1) / kRenderChunk;
  auto render_chunk = [&](std::size_t c) {
    const std::size_t begin = c * kRenderChunk;
    const std::size_t count = std::min(kRenderChunk, pixels - begin);
    const Matrix<float> inputs = grid.coords.middleRows(static_cast<Eigen::Index>(begin),
                                                        static_cast<Eigen::Index>(count));
    const Matrix<float> y = mlp_forward<float>(spec, params, inputs);
    for (std::size_t k = 0; k < bands; ++k)
      for (std::size_t r = 0; r < count; ++r)
        out[k * pixels + begin + r] =
            std::clamp(y(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)), 0.0f, 1.0f);
  };

  if (threads <= 0) threads = default_thread_count();
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), chunks);
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) render_chunk(c);
    return cube;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t c = t; c < chunks; c += workers) render_chunk(c);
    });
  }
  pool.clear();
  return cube;
}

HyperCube reconstruct_normalized(const EncodedImage& enc, int threads) {
  return render(enc.spec(), enc.parameters(), enc.width, enc.height, threads);
}

HyperCube decompress(const EncodedImage& enc, int threads) {
  return denormalize(reconstruct_normalized(enc, threads), enc.scale);
}

}  // namespace hsinr
