// Copyright (c) 2026 The torsift authors
// SPDX-License-Identifier: Apache-2.0

#include "torsift/bytes.hpp"

#include <cstring>

#include "torsift/errors.hpp"

namespace torsift {

std::string to_hex(byte_span bytes) {
  static const char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (uint8_t b : bytes) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xF]);
  }
  return out;
}

static int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

byte_vec from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) raise(errc::invalid_config, "hex string has odd length");
  byte_vec out;
  out.reserve(hex.size() / 2);
  for (size_t i = 0; i < hex.size(); i += 2) {
    int hi = hex_nibble(hex[i]);
    int lo = hex_nibble(hex[i + 1]);
    if (hi < 0 || lo < 0) raise(errc::invalid_config, "invalid hex digit");
    out.push_back(static_cast<uint8_t>((hi << 4) | lo));
  }
  return out;
}

size_t find_bytes(byte_span hay, byte_span needle, size_t from) {
  if (needle.empty() || needle.size() > hay.size()) return npos;
  const size_t last = hay.size() - needle.size();
  size_t pos = from;
  while (pos <= last) {
    const void* p = std::memchr(hay.data() + pos, needle[0], last - pos + 1);
    if (p == nullptr) return npos;
    pos = static_cast<size_t>(static_cast<const uint8_t*>(p) - hay.data());
    if (std::memcmp(hay.data() + pos, needle.data(), needle.size()) == 0) return pos;
    ++pos;
  }
  return npos;
}

}  // namespace torsift
