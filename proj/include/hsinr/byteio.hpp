#pragma once

// Little-endian primitives shared by the raw cube reader and the bitstream.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hsinr::byteio {

inline void put_u8(std::vector<std::uint8_t>& out, std::uint8_t v) { out.push_back(v); }

inline void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

inline void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) {
    out.push_back(static_cast<std::uint8_t>((v >> shift) & 0xff));
  }
}

inline void put_f32(std::vector<std::uint8_t>& out, float v) {
  put_u32(out, std::bit_cast<std::uint32_t>(v));
}

inline std::uint16_t get_u16(std::span<const std::uint8_t> in, std::size_t pos) {
  return static_cast<std::uint16_t>(in[pos] | (in[pos + 1] << 8));
}

inline std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t pos) {
  return static_cast<std::uint32_t>(in[pos]) | (static_cast<std::uint32_t>(in[pos + 1]) << 8) |
         (static_cast<std::uint32_t>(in[pos + 2]) << 16) |
         (static_cast<std::uint32_t>(in[pos + 3]) << 24);
}

inline float get_f32(std::span<const std::uint8_t> in, std::size_t pos) {
  return std::bit_cast<float>(get_u32(in, pos));
}

}  // namespace hsinr::byteio
