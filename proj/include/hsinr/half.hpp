#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace hsinr {

inline constexpr float kHalfMax = 65504.0f;

// IEEE-754 binary32 -> binary16, round to nearest even. Values beyond the
// half range become infinity, NaN stays NaN.
std::uint16_t float_to_half(float value);

// Exact widening.
float half_to_float(std::uint16_t bits);

// Throws NumericError naming the first parameter that is non-finite or whose
// magnitude exceeds kHalfMax.
std::vector<std::uint16_t> quantize(std::span<const float> params);
std::vector<float> dequantize(std::span<const std::uint16_t> halves);

}  // namespace hsinr
