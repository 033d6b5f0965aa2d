// Copyright (c) 2026 The torsift authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "torsift/bytes.hpp"
#include "torsift/errors.hpp"
#include "torsift/filetime.hpp"
#include "torsift/text.hpp"

namespace torsift::shellact {

// Signatures of the shellactivities binary layout, in stream order.
inline constexpr uint8_t kLogMagic[4] = {0x02, 0x00, 0x00, 0x00};
inline constexpr uint8_t kRecordHeader[2] = {0xD2, 0x14};
inline constexpr uint8_t kMidMarker[8] = {0xC6, 0x1F, 0xD2, 0x83, 0x10, 0xD2, 0x23, 0x0B};
inline constexpr uint8_t kNameDelim[2] = {0xD2, 0x28};
inline constexpr uint8_t kTitleDelim[2] = {0xC6, 0x32};
inline constexpr uint8_t kTrailerDelim[2] = {0xC6, 0x3C};
inline constexpr uint8_t kTrailerConst[4] = {0xEA, 0xF2, 0xE9, 0x01};
inline constexpr uint8_t kRecordFooter[4] = {0xCA, 0x50, 0x00, 0x00};

inline constexpr size_t kLogHeaderSize = 0x18;
inline constexpr std::array<uint8_t, 8> kDefaultHeaderValues = {0x43, 0x42, 0x01, 0x00,
                                                                0xCB, 0x0A, 0x0A, 0x14};
// C632 + a5(5) + EAF2E901 + C63C + b5(5) + EAF2E901 + CA500000
inline constexpr size_t kRecordTrailerSize = 26;

/// One decoded browsing-tab record.
struct ShellActivityRecord {
  uint8_t type_byte = 0;  // byte after the 0xD214 header; meaning unknown, kept verbatim
  std::string exe_path;
  std::string exe_name;
  uint8_t d228_byte = 0;  // the variable byte after the 0xD228 delimiter
  std::string page_title;
  std::array<uint8_t, 5> trailer_a5{};  // unknown field after 0xC632, kept raw
  std::array<uint8_t, 5> trailer_b5{};  // unknown field after 0xC63C, kept raw
  StringEncoding encoding = StringEncoding::utf16le;

  // Set when neither encoding decoded the string spans; the raw spans below
  // then carry the evidence and the string fields stay empty.
  bool undecoded = false;
  byte_vec exe_path_raw;
  byte_vec exe_name_raw;
  byte_vec page_title_raw;

  // Extent within the parsed blob: [start_offset, end_offset).
  uint64_t start_offset = 0;
  uint64_t end_offset = 0;

  /// Field-for-field equality ignoring extents (generator inputs carry none).
  bool same_fields(const ShellActivityRecord& o) const;
};

struct TrailingSpan {
  uint64_t offset = 0;
  byte_vec bytes;
};

/// Parse of a whole shellactivities value blob.
struct ShellActivityLog {
  uint64_t header_timestamp_raw = 0;            // FILETIME at blob offset 4
  std::array<uint8_t, 8> header_values{};       // blob offsets 0x10..0x17, semantics unknown
  std::vector<ShellActivityRecord> records;
  std::vector<TrailingSpan> trailing;           // unparsed spans, in blob order
  std::vector<std::string> warnings;            // one per quarantined mid-blob span
};

struct RecordParse {
  bool ok = false;
  errc err = errc::ok;  // no_record_header or delimiter_not_found when !ok
  std::string err_detail;
  ShellActivityRecord record;
  uint64_t next_offset = 0;  // one past the footer on success
};

/// Parses one record at `offset`. Non-throwing; failures are data, not faults.
RecordParse parse_record(byte_span blob, uint64_t offset);

/// Parses header plus records, quarantining unparseable spans into `trailing`.
/// Throws too_short (blob < 0x18) and bad_header (magic mismatch).
ShellActivityLog parse_shellactivities(byte_span blob);

enum class BrowserKind { TorStandard, TorPortable, FirefoxOther, Unknown };

const char* browser_kind_name(BrowserKind k);

struct BrowserAttribution {
  BrowserKind kind = BrowserKind::Unknown;
  std::optional<std::string> username;
  std::optional<char> drive_letter;
  std::optional<std::string> install_dir;  // path up to and including "Tor Browser"
};

/// Total, deterministic rule table over the executable path.
BrowserAttribution classify_path(std::string_view exe_path);

inline BrowserAttribution classify_record(const ShellActivityRecord& r) {
  return classify_path(r.exe_path);
}

struct SuffixStrip {
  std::string clean;
  std::optional<std::string> suffix;
};

/// Removes the longest matching suffix from the configured set.
SuffixStrip strip_browser_suffix(std::string_view title,
                                 std::span<const std::string> suffixes);
SuffixStrip strip_browser_suffix(std::string_view title);  // default suffix set

/// Non-gating check of the type byte against the path length.
struct TypeByteHint {
  bool matches_encoded_len = false;  // type_byte == encoded byte length of exe_path
  bool matches_char_count = false;   // type_byte == decoded character count
};
TypeByteHint type_byte_hint(const ShellActivityRecord& r);

/// Best-effort reading of a 5-byte trailer as 1 tag byte + the low half of an
/// 8-byte FILETIME completed by the 0xEAF2E901 constant. Returns a value only
/// when the result lands in a plausible year window; never asserted as evidence.
std::optional<UtcTime> trailer_timestamp_hint(const std::array<uint8_t, 5>& trailer);

}  // namespace torsift::shellact
