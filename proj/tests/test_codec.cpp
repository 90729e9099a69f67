#include <bit>
#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "hsinr/codec.hpp"
#include "hsinr/error.hpp"
#include "hsinr/half.hpp"
#include "test_util.hpp"

using namespace hsinr;

namespace {

SirenSpec make_spec(int n_hidden, int width, int out) {
  SirenSpec s;
  s.n_hidden = n_hidden;
  s.hidden_width = width;
  s.out_dim = out;
  return s;
}

EncodedImage sample_image(Precision precision, int bands = 3) {
  const auto spec = make_spec(2, 6, bands);
  return make_encoded(spec, 5, 4, {-2.0f, 7.5f}, init_params(spec, 3), precision);
}

}  // namespace

// Expected bits produced by numpy's float32 -> float16 cast.
TEST_CASE("float_to_half against a reference table") {
  struct Row {
    float in;
    std::uint16_t bits;
    float out;
  };
  const Row table[] = {
      {0.0f, 0x0000, 0.0f},
      {-0.0f, 0x8000, -0.0f},
      {1.0f, 0x3c00, 1.0f},
      {-2.0f, 0xc000, -2.0f},
      {1e-8f, 0x0000, 0.0f},  // below 2^-25: rounds to zero
      {6e-8f, 0x0001, 5.960464477539063e-08f},
      {5.960464477539063e-08f, 0x0001, 5.960464477539063e-08f},
      {2.9802322387695312e-08f, 0x0000, 0.0f},  // exactly half the smallest subnormal: ties to even
      {2.980232594040899e-08f, 0x0001, 5.960464477539063e-08f},
      {1e-5f, 0x00a8, 1.0013580322265625e-05f},
      {-3.14159265f, 0xc248, -3.140625f},
      {0.1f, 0x2e66, 0.0999755859375f},
      {65504.0f, 0x7bff, 65504.0f},
      {65519.0f, 0x7bff, 65504.0f},
      {1.00048828125f, 0x3c00, 1.0f},  // tie, rounds down to even
      {1.00146484375f, 0x3c02, 1.001953125f},  // tie, rounds up to even
      {0.333333333f, 0x3555, 0.333251953125f},
      {6.103515625e-05f, 0x0400, 6.103515625e-05f},
      {6.1e-05f, 0x03ff, 6.097555160522461e-05f},
      {1234.5678f, 0x64d3, 1235.0f},
  };
  for (const auto& row : table) {
    CAPTURE(row.in);
    CHECK(float_to_half(row.in) == row.bits);
    CHECK(test::same_bits(half_to_float(row.bits), row.out));
  }
  CHECK(float_to_half(65520.0f) == 0x7c00);
  CHECK(float_to_half(-std::numeric_limits<float>::infinity()) == 0xfc00);
  CHECK(std::isnan(half_to_float(float_to_half(std::numeric_limits<float>::quiet_NaN()))));
}

TEST_CASE("every finite half survives widening and narrowing") {
  for (std::uint32_t bits = 0; bits < 0x10000; ++bits) {
    const auto h = static_cast<std::uint16_t>(bits);
    if ((h & 0x7c00) == 0x7c00) continue;
    CHECK_MESSAGE(float_to_half(half_to_float(h)) == h, bits);
  }
}

TEST_CASE("half rounding error is within half an ulp") {
  std::mt19937 rng(19);
  std::uniform_real_distribution<float> mant(-1.0f, 1.0f);
  std::uniform_int_distribution<int> expo(-14, 15);
  for (int i = 0; i < 100000; ++i) {
    const float v = std::ldexp(mant(rng), expo(rng));
    if (std::abs(v) < 6.103515625e-05f || std::abs(v) > kHalfMax) continue;
    const float back = half_to_float(float_to_half(v));
    CHECK(std::abs(back - v) <= std::ldexp(std::abs(v), -11));
  }
}

TEST_CASE("quantize rejects values outside the half range") {
  const std::vector<float> ok{0.0f, 1.0f, -2.0f, 65504.0f};
  const auto q = quantize(ok);
  CHECK(dequantize(q) == ok);

  const std::vector<float> big{0.5f, 1.0f, 70000.0f};
  try {
    quantize(big);
    FAIL("expected overflow");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("parameter 2") != std::string::npos);
  }
  const std::vector<float> nan{std::numeric_limits<float>::quiet_NaN()};
  CHECK_THROWS_AS(quantize(nan), NumericError);
}

TEST_CASE("header layout for an Indian Pines sized network") {
  const auto spec = make_spec(15, 40, 220);
  const std::vector<float> params(param_count(spec), 0.25f);
  const auto enc = make_encoded(spec, 145, 145, {0.0f, 1.0f}, params, Precision::full32);
  const auto bytes = serialize(enc);
  REQUIRE(bytes.size() == 17 + 8 + 32100 * 4);
  CHECK(enc.file_size() == bytes.size());
  const std::uint8_t prefix[17] = {'H', 'S', 'I', 'N', 1, 145, 0, 145, 0, 220, 0, 15, 40, 0, 32, 0, 0};
  for (int i = 0; i < 17; ++i) CHECK(bytes[i] == prefix[i]);
  // scale 0.0f, 1.0f little-endian
  const std::uint8_t scale[8] = {0, 0, 0, 0, 0x00, 0x00, 0x80, 0x3f};
  for (int i = 0; i < 8; ++i) CHECK(bytes[17 + i] == scale[i]);
  // 0.25f = 0x3e800000
  CHECK(bytes[25] == 0x00);
  CHECK(bytes[28] == 0x3e);
  CHECK(bytes[27] == 0x80);

  const auto half = make_encoded(spec, 145, 145, {0.0f, 1.0f}, params, Precision::half16);
  const auto hb = serialize(half);
  CHECK(hb.size() == 25 + 32100 * 2);
  CHECK(hb[13] == 1);
  CHECK(hb[14] == 16);
  CHECK(bytes.size() - hb.size() == 2 * 32100);
}

TEST_CASE("serialize round trip") {
  for (auto precision : {Precision::full32, Precision::half16}) {
    const auto enc = sample_image(precision);
    const auto bytes = serialize(enc);
    const auto back = deserialize(bytes);
    CHECK(serialize(back) == bytes);
    CHECK(back.spec() == enc.spec());
    CHECK(back.width == 5);
    CHECK(back.height == 4);
    CHECK(back.scale == enc.scale);
    CHECK(back.quantized() == (precision == Precision::half16));
  }
}

TEST_CASE("deserialize guards") {
  auto bytes = serialize(sample_image(Precision::full32));

  SUBCASE("bad magic") {
    bytes[0] = 'X';
    CHECK_THROWS_WITH_AS(deserialize(bytes), doctest::Contains("bad magic"), FormatError);
  }
  SUBCASE("version") {
    bytes[4] = 2;
    CHECK_THROWS_WITH_AS(deserialize(bytes), doctest::Contains("version"), FormatError);
  }
  SUBCASE("q flipped on a 32-bit payload") {
    bytes[13] = 1;
    CHECK_THROWS_WITH_AS(deserialize(bytes), doctest::Contains("length mismatch"), FormatError);
  }
  SUBCASE("truncated payload reports expected and actual sizes") {
    const auto full = bytes.size();
    bytes.pop_back();
    CHECK_THROWS_WITH_AS(deserialize(bytes),
                         doctest::Contains(("expected " + std::to_string(full) + " bytes, found " +
                                            std::to_string(full - 1))
                                               .c_str()),
                         FormatError);
  }
  SUBCASE("trailing bytes") {
    bytes.push_back(0);
    CHECK_THROWS_AS(deserialize(bytes), FormatError);
  }
  SUBCASE("truncated header") {
    bytes.resize(10);
    CHECK_THROWS_AS(deserialize(bytes), FormatError);
  }
  SUBCASE("bpp contradicts q") {
    bytes[14] = 16;
    CHECK_THROWS_AS(deserialize(bytes), FormatError);
  }
  SUBCASE("reserved bytes") {
    bytes[16] = 1;
    CHECK_THROWS_AS(deserialize(bytes), FormatError);
  }
  SUBCASE("zero dimension") {
    bytes[11] = 0;
    CHECK_THROWS_AS(deserialize(bytes), FormatError);
  }
}

TEST_CASE("make_encoded field limits") {
  const auto spec = make_spec(1, 2, 1);
  const auto p = init_params(spec, 0);
  CHECK_THROWS_AS(make_encoded(spec, 70000, 1, {}, p, Precision::full32), ArgumentError);
  CHECK_THROWS_AS(make_encoded(make_spec(1, 256, 1), 4, 4, {}, init_params(make_spec(1, 256, 1), 0),
                               Precision::full32),
                  ArgumentError);
  CHECK_THROWS_AS(make_encoded(spec, 4, 4, {}, std::vector<float>(3), Precision::full32),
                  ArgumentError);
  auto odd = spec;
  odd.w0 = 10.0;
  CHECK_THROWS_AS(make_encoded(odd, 4, 4, {}, p, Precision::full32), ArgumentError);
}

TEST_CASE("file round trip") {
  test::TempDir dir("codec");
  const auto enc = sample_image(Precision::half16);
  write_encoded(dir / "x.hsin", enc);
  CHECK(std::filesystem::file_size(dir / "x.hsin") == enc.file_size());
  CHECK(serialize(read_encoded(dir / "x.hsin")) == serialize(enc));
  CHECK_THROWS_AS(read_encoded(dir / "missing.hsin"), IoError);
}

TEST_CASE("decompress shape, range and determinism") {
  const auto enc = sample_image(Precision::full32, 4);
  const auto a = decompress(enc);
  CHECK(a.width() == 5);
  CHECK(a.height() == 4);
  CHECK(a.bands() == 4);
  CHECK(a == decompress(enc));
  for (float v : a.data()) {
    CHECK(v >= -2.0f);
    CHECK(v <= 7.5f);
  }
  const auto n = reconstruct_normalized(enc);
  for (float v : n.data()) {
    CHECK(v >= 0.0f);
    CHECK(v <= 1.0f);
  }
  CHECK(denormalize(n, enc.scale) == a);
}

TEST_CASE("half payload decodes from its dequantized parameters") {
  const auto spec = make_spec(2, 8, 3);
  const auto p = init_params(spec, 12);
  const auto enc = make_encoded(spec, 9, 7, {0.0f, 1.0f}, p, Precision::half16);
  const auto widened = dequantize(quantize(p));
  CHECK(enc.parameters() == widened);
  CHECK(reconstruct_normalized(enc) == render(spec, widened, 9, 7));
}

TEST_CASE("render is independent of the thread count") {
  const auto spec = make_spec(2, 16, 5);
  auto p = init_params(spec, 2);
  for (auto& v : p) v *= 4.0f;  // push outputs across the clip bounds
  const auto one = render(spec, p, 130, 71, 1);
  CHECK(one == render(spec, p, 130, 71, 3));
  CHECK(one == render(spec, p, 130, 71, 8));
}
