// Copyright (c) 2026 The torsift authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "torsift/bytes.hpp"

namespace torsift {

/// Encodings a decoded shellactivities string field can carry.
enum class StringEncoding { utf16le, utf8 };

const char* encoding_name(StringEncoding e);

inline char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

bool ascii_iequals(std::string_view a, std::string_view b);
bool contains_ci(std::string_view hay, std::string_view needle);

/// UTF-8 text to UTF-16LE bytes. Throws decode_error on invalid UTF-8.
byte_vec utf8_to_utf16le(std::string_view s);

/// UTF-16LE bytes to UTF-8. nullopt on odd length or unpaired surrogates.
std::optional<std::string> utf16le_to_utf8(byte_span b);

/// Validate bytes as UTF-8; returns the string or nullopt.
std::optional<std::string> utf8_validate(byte_span b);

/// True when the UTF-8 string contains a code point below U+0020.
bool has_control_chars(std::string_view utf8);

/// Appends one code point, UTF-8 encoded.
void utf8_append(std::string& out, uint32_t cp);

// Encoding detection for delimiter-bounded string spans. UTF-16LE is
// accepted when every span has even length, decodes without unpaired
// surrogates or control characters, and carries at least one zero byte
// (Windows-origin text always does); otherwise UTF-8 is attempted under
// the same control-character rule.
bool utf16le_span_acceptable(byte_span b);
bool utf8_span_acceptable(byte_span b);

}  // namespace torsift
