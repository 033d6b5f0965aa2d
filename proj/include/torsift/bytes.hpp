// Copyright (c) 2026 The torsift authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace torsift {

using byte_span = std::span<const uint8_t>;
using byte_vec = std::vector<uint8_t>;

inline uint16_t read_u16le(const uint8_t* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

inline uint32_t read_u32le(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

inline uint64_t read_u64le(const uint8_t* p) {
  return static_cast<uint64_t>(read_u32le(p)) | (static_cast<uint64_t>(read_u32le(p + 4)) << 32);
}

inline int32_t read_i32le(const uint8_t* p) {
  return static_cast<int32_t>(read_u32le(p));
}

inline void put_u16le(byte_vec& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v & 0xFF));
  out.push_back(static_cast<uint8_t>(v >> 8));
}

inline void put_u32le(byte_vec& out, uint32_t v) {
  put_u16le(out, static_cast<uint16_t>(v & 0xFFFF));
  put_u16le(out, static_cast<uint16_t>(v >> 16));
}

inline void put_u64le(byte_vec& out, uint64_t v) {
  put_u32le(out, static_cast<uint32_t>(v & 0xFFFFFFFFu));
  put_u32le(out, static_cast<uint32_t>(v >> 32));
}

inline void write_u32le_at(uint8_t* p, uint32_t v) {
  p[0] = static_cast<uint8_t>(v & 0xFF);
  p[1] = static_cast<uint8_t>((v >> 8) & 0xFF);
  p[2] = static_cast<uint8_t>((v >> 16) & 0xFF);
  p[3] = static_cast<uint8_t>((v >> 24) & 0xFF);
}

std::string to_hex(byte_span bytes);
byte_vec from_hex(std::string_view hex);  // throws invalid_config on malformed input

inline constexpr size_t npos = static_cast<size_t>(-1);

/// First occurrence of needle in hay at or after `from`; npos when absent.
size_t find_bytes(byte_span hay, byte_span needle, size_t from = 0);

}  // namespace torsift
