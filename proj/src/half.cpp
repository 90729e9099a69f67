#include "hsinr/half.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "hsinr/error.hpp"

namespace hsinr {

std::uint16_t float_to_half(float value) {
  const auto x = std::bit_cast<std::uint32_t>(value);
  const auto sign = static_cast<std::uint16_t>((x >> 16) & 0x8000u);
  const std::uint32_t abs = x & 0x7fffffffu;

  if (abs >= 0x7f800000u) {  // inf or NaN
    const std::uint16_t nan_bits = abs > 0x7f800000u ? 0x0200u | ((abs >> 13) & 0x03ffu) : 0u;
    return static_cast<std::uint16_t>(sign | 0x7c00u | nan_bits);
  }
  if (abs >= 0x477ff000u) return static_cast<std::uint16_t>(sign | 0x7c00u);  // >= 65520
  if (abs < 0x38800000u) {                                                   // < 2^-14
    if (abs <= 0x33000000u) return sign;                                     // <= 2^-25
    const std::uint32_t exponent = abs >> 23;
    const std::uint32_t mantissa = (abs & 0x007fffffu) | 0x00800000u;
    const std::uint32_t shift = 126u - exponent;  // 14..24
    std::uint32_t half = mantissa >> shift;
    const std::uint32_t rest = mantissa & ((1u << shift) - 1u);
    const std::uint32_t halfway = 1u << (shift - 1u);
    if (rest > halfway || (rest == halfway && (half & 1u))) ++half;
    return static_cast<std::uint16_t>(sign | half);
  }
  std::uint32_t half = (abs >> 13) - (112u << 10);
  const std::uint32_t rest = abs & 0x1fffu;
  if (rest > 0x1000u || (rest == 0x1000u && (half & 1u))) ++half;
  return static_cast<std::uint16_t>(sign | half);
}

float half_to_float(std::uint16_t bits) {
  const std::uint32_t sign = static_cast<std::uint32_t>(bits & 0x8000u) << 16;
  const std::uint32_t exponent = (bits >> 10) & 0x1fu;
  const std::uint32_t mantissa = bits & 0x03ffu;

  if (exponent == 0x1fu) return std::bit_cast<float>(sign | 0x7f800000u | (mantissa << 13));
  if (exponent == 0) {
    // subnormal (or zero): mantissa * 2^-24 is exact in binary32
    const float magnitude = std::ldexp(static_cast<float>(mantissa), -24);
    return sign ? -magnitude : magnitude;
  }
  return std::bit_cast<float>(sign | ((exponent + 112u) << 23) | (mantissa << 13));
}

std::vector<std::uint16_t> quantize(std::span<const float> params) {
  std::vector<std::uint16_t> out(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    const float v = params[i];
    if (!std::isfinite(v) || std::abs(v) > kHalfMax) {
      throw NumericError("parameter " + std::to_string(i) + " (" + std::to_string(v) +
                         ") is outside the half-precision range");
    }
    out[i] = float_to_half(v);
  }
  return out;
}

std::vector<float> dequantize(std::span<const std::uint16_t> halves) {
  std::vector<float> out(halves.size());
  for (std::size_t i = 0; i < halves.size(); ++i) out[i] = half_to_float(halves[i]);
  return out;
}

}  // namespace hsinr
