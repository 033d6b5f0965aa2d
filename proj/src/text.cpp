// Copyright (c) 2026 The torsift authors
// SPDX-License-Identifier: Apache-2.0

#include "torsift/text.hpp"

#include <cstdint>

#include "torsift/errors.hpp"

namespace torsift {

const char* encoding_name(StringEncoding e) {
  return e == StringEncoding::utf16le ? "utf16le" : "utf8";
}

bool ascii_iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (ascii_lower(a[i]) != ascii_lower(b[i])) return false;
  }
  return true;
}

bool contains_ci(std::string_view hay, std::string_view needle) {
  if (needle.empty()) return true;
  if (needle.size() > hay.size()) return false;
  for (size_t i = 0; i + needle.size() <= hay.size(); ++i) {
    if (ascii_iequals(hay.substr(i, needle.size()), needle)) return true;
  }
  return false;
}

namespace {

constexpr uint32_t kReplacementLimit = 0x10FFFF;

// Decodes one UTF-8 code point at s[i]; advances i. Returns false on
// malformed input (overlong forms, bad continuations, surrogates).
bool next_utf8(std::string_view s, size_t& i, uint32_t& cp) {
  const auto byte = [&](size_t k) { return static_cast<uint8_t>(s[k]); };
  uint8_t b0 = byte(i);
  if (b0 < 0x80) {
    cp = b0;
    i += 1;
    return true;
  }
  auto cont = [&](size_t k) { return k < s.size() && (byte(k) & 0xC0) == 0x80; };
  if ((b0 & 0xE0) == 0xC0) {
    if (!cont(i + 1)) return false;
    cp = (static_cast<uint32_t>(b0 & 0x1F) << 6) | (byte(i + 1) & 0x3F);
    if (cp < 0x80) return false;
    i += 2;
    return true;
  }
  if ((b0 & 0xF0) == 0xE0) {
    if (!cont(i + 1) || !cont(i + 2)) return false;
    cp = (static_cast<uint32_t>(b0 & 0x0F) << 12) |
         (static_cast<uint32_t>(byte(i + 1) & 0x3F) << 6) | (byte(i + 2) & 0x3F);
    if (cp < 0x800 || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
    i += 3;
    return true;
  }
  if ((b0 & 0xF8) == 0xF0) {
    if (!cont(i + 1) || !cont(i + 2) || !cont(i + 3)) return false;
    cp = (static_cast<uint32_t>(b0 & 0x07) << 18) |
         (static_cast<uint32_t>(byte(i + 1) & 0x3F) << 12) |
         (static_cast<uint32_t>(byte(i + 2) & 0x3F) << 6) | (byte(i + 3) & 0x3F);
    if (cp < 0x10000 || cp > kReplacementLimit) return false;
    i += 4;
    return true;
  }
  return false;
}

}  // namespace

void utf8_append(std::string& out, uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

byte_vec utf8_to_utf16le(std::string_view s) {
  byte_vec out;
  out.reserve(s.size() * 2);
  size_t i = 0;
  while (i < s.size()) {
    uint32_t cp = 0;
    if (!next_utf8(s, i, cp)) raise(errc::decode_error, "invalid UTF-8 input");
    if (cp < 0x10000) {
      out.push_back(static_cast<uint8_t>(cp & 0xFF));
      out.push_back(static_cast<uint8_t>(cp >> 8));
    } else {
      uint32_t v = cp - 0x10000;
      uint16_t hi = static_cast<uint16_t>(0xD800 | (v >> 10));
      uint16_t lo = static_cast<uint16_t>(0xDC00 | (v & 0x3FF));
      out.push_back(static_cast<uint8_t>(hi & 0xFF));
      out.push_back(static_cast<uint8_t>(hi >> 8));
      out.push_back(static_cast<uint8_t>(lo & 0xFF));
      out.push_back(static_cast<uint8_t>(lo >> 8));
    }
  }
  return out;
}

std::optional<std::string> utf16le_to_utf8(byte_span b) {
  if (b.size() % 2 != 0) return std::nullopt;
  std::string out;
  out.reserve(b.size() / 2);
  for (size_t i = 0; i < b.size(); i += 2) {
    uint16_t u = read_u16le(b.data() + i);
    if (u >= 0xD800 && u <= 0xDBFF) {
      if (i + 3 >= b.size()) return std::nullopt;
      uint16_t lo = read_u16le(b.data() + i + 2);
      if (lo < 0xDC00 || lo > 0xDFFF) return std::nullopt;
      uint32_t cp = 0x10000 + ((static_cast<uint32_t>(u - 0xD800) << 10) | (lo - 0xDC00));
      utf8_append(out, cp);
      i += 2;
    } else if (u >= 0xDC00 && u <= 0xDFFF) {
      return std::nullopt;  // unpaired low surrogate
    } else {
      utf8_append(out, u);
    }
  }
  return out;
}

std::optional<std::string> utf8_validate(byte_span b) {
  std::string_view s(reinterpret_cast<const char*>(b.data()), b.size());
  size_t i = 0;
  uint32_t cp = 0;
  while (i < s.size()) {
    if (!next_utf8(s, i, cp)) return std::nullopt;
  }
  return std::string(s);
}

bool has_control_chars(std::string_view utf8) {
  size_t i = 0;
  uint32_t cp = 0;
  while (i < utf8.size()) {
    if (!next_utf8(utf8, i, cp)) return true;  // malformed counts as garbage
    if (cp < 0x20) return true;
  }
  return false;
}

bool utf16le_span_acceptable(byte_span b) {
  if (b.empty()) return true;
  if (b.size() % 2 != 0) return false;
  auto decoded = utf16le_to_utf8(b);
  if (!decoded || has_control_chars(*decoded)) return false;
  // Windows-origin text carries at least one zero byte per span; this is
  // what separates UTF-16LE from even-length single-byte text.
  for (uint8_t v : b) {
    if (v == 0x00) return true;
  }
  return false;
}

bool utf8_span_acceptable(byte_span b) {
  if (b.empty()) return true;
  auto decoded = utf8_validate(b);
  return decoded && !has_control_chars(*decoded);
}

}  // namespace torsift
