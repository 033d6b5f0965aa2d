// Copyright (c) 2026 The torsift authors
// SPDX-License-Identifier: Apache-2.0
//
// Decoder for the binary layout of the shellactivities registry value.
// The blob is a 0x18-byte header followed by delimiter-bounded records:
//
//   header:  02 00 00 00 | FILETIME(8) | 00 00 00 00 | values(8)
//   record:  D2 14 | type(1) | exe_path | C6 1F D2 83 10 D2 23 0B |
//            exe_name | D2 28 | byte(1) | page_title |
//            C6 32 | 5 bytes | EA F2 E9 01 | C6 3C | 5 bytes | EA F2 E9 01 |
//            CA 50 00 00

#include "torsift/shellact.hpp"

#include <algorithm>
#include <cstring>

namespace torsift::shellact {

namespace {

constexpr byte_span sig(const uint8_t* p, size_t n) { return byte_span(p, n); }

bool starts_with(byte_span blob, size_t at, byte_span pat) {
  return at + pat.size() <= blob.size() &&
         std::memcmp(blob.data() + at, pat.data(), pat.size()) == 0;
}

// The 26 fixed trailer bytes that follow the page title:
// C632 a5(5) EAF2E901 C63C b5(5) EAF2E901 CA500000.
bool trailer_valid(byte_span blob, size_t at) {
  if (at + kRecordTrailerSize > blob.size()) return false;
  return starts_with(blob, at, sig(kTitleDelim, 2)) &&
         starts_with(blob, at + 7, sig(kTrailerConst, 4)) &&
         starts_with(blob, at + 11, sig(kTrailerDelim, 2)) &&
         starts_with(blob, at + 18, sig(kTrailerConst, 4)) &&
         starts_with(blob, at + 22, sig(kRecordFooter, 4));
}

struct SpanSet {
  byte_span path, name, title;
};

// Applies the encoding policy to the three string spans of one record.
// UTF-16LE first; UTF-8 fallback; raw preservation when neither fits.
void decode_strings(const SpanSet& spans, ShellActivityRecord& rec) {
  const byte_span all[3] = {spans.path, spans.name, spans.title};
  bool utf16_ok = true;
  for (auto s : all) utf16_ok = utf16_ok && utf16le_span_acceptable(s);
  if (utf16_ok) {
    rec.encoding = StringEncoding::utf16le;
    rec.exe_path = *utf16le_to_utf8(spans.path);
    rec.exe_name = *utf16le_to_utf8(spans.name);
    rec.page_title = *utf16le_to_utf8(spans.title);
    return;
  }
  bool utf8_ok = true;
  for (auto s : all) utf8_ok = utf8_ok && utf8_span_acceptable(s);
  if (utf8_ok) {
    rec.encoding = StringEncoding::utf8;
    rec.exe_path = *utf8_validate(spans.path);
    rec.exe_name = *utf8_validate(spans.name);
    rec.page_title = *utf8_validate(spans.title);
    return;
  }
  rec.undecoded = true;
  rec.exe_path_raw.assign(spans.path.begin(), spans.path.end());
  rec.exe_name_raw.assign(spans.name.begin(), spans.name.end());
  rec.page_title_raw.assign(spans.title.begin(), spans.title.end());
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  size_t start = 0;
  while (start <= path.size()) {
    size_t sep = path.find('\\', start);
    if (sep == std::string_view::npos) {
      parts.emplace_back(path.substr(start));
      break;
    }
    parts.emplace_back(path.substr(start, sep - start));
    start = sep + 1;
  }
  return parts;
}

bool is_drive_component(std::string_view c) {
  return c.size() == 2 && c[1] == ':' &&
         ((c[0] >= 'A' && c[0] <= 'Z') || (c[0] >= 'a' && c[0] <= 'z'));
}

}  // namespace

bool ShellActivityRecord::same_fields(const ShellActivityRecord& o) const {
  return type_byte == o.type_byte && exe_path == o.exe_path && exe_name == o.exe_name &&
         d228_byte == o.d228_byte && page_title == o.page_title && trailer_a5 == o.trailer_a5 &&
         trailer_b5 == o.trailer_b5 && encoding == o.encoding && undecoded == o.undecoded &&
         exe_path_raw == o.exe_path_raw && exe_name_raw == o.exe_name_raw &&
         page_title_raw == o.page_title_raw;
}

RecordParse parse_record(byte_span blob, uint64_t offset) {
  RecordParse out;
  const size_t at = static_cast<size_t>(offset);
  if (at >= blob.size() || !starts_with(blob, at, sig(kRecordHeader, 2))) {
    out.err = errc::no_record_header;
    out.err_detail = "bytes at offset are not 0xD214";
    return out;
  }
  size_t pos = at + 2;
  if (pos >= blob.size()) {
    out.err = errc::delimiter_not_found;
    out.err_detail = "record truncated after header";
    return out;
  }
  ShellActivityRecord rec;
  rec.type_byte = blob[pos++];

  // Marker scans stop at the next 0xD214: a record's own markers contain no
  // such pair, so a malformed span never swallows the record that follows it.
  const size_t next_header = find_bytes(blob, sig(kRecordHeader, 2), pos);
  const size_t limit = next_header == npos ? blob.size() : next_header;
  const byte_span scan_area = blob.first(limit);

  const size_t mid = find_bytes(scan_area, sig(kMidMarker, 8), pos);
  if (mid == npos) {
    out.err = errc::delimiter_not_found;
    out.err_detail = "mid marker 0xC61FD28310D2230B not found";
    return out;
  }
  byte_span path_span = blob.subspan(pos, mid - pos);
  pos = mid + 8;

  const size_t name_end = find_bytes(scan_area, sig(kNameDelim, 2), pos);
  if (name_end == npos) {
    out.err = errc::delimiter_not_found;
    out.err_detail = "delimiter 0xD228 not found";
    return out;
  }
  byte_span name_span = blob.subspan(pos, name_end - pos);
  pos = name_end + 2;
  if (pos >= limit) {
    out.err = errc::delimiter_not_found;
    out.err_detail = "record truncated at 0xD228 byte";
    return out;
  }
  rec.d228_byte = blob[pos++];

  // The title runs to the first 0xC632 whose fixed trailer validates; this
  // skips 0xC632 byte pairs that happen to occur inside the title.
  size_t title_end = pos;
  while (true) {
    title_end = find_bytes(scan_area, sig(kTitleDelim, 2), title_end);
    if (title_end == npos) {
      out.err = errc::delimiter_not_found;
      out.err_detail = "title delimiter 0xC632 with valid trailer not found";
      return out;
    }
    if (trailer_valid(blob, title_end)) break;
    ++title_end;
  }
  byte_span title_span = blob.subspan(pos, title_end - pos);
  std::copy_n(blob.data() + title_end + 2, 5, rec.trailer_a5.begin());
  std::copy_n(blob.data() + title_end + 13, 5, rec.trailer_b5.begin());

  decode_strings({path_span, name_span, title_span}, rec);
  rec.start_offset = offset;
  rec.end_offset = title_end + kRecordTrailerSize;

  out.ok = true;
  out.record = std::move(rec);
  out.next_offset = out.record.end_offset;
  return out;
}

ShellActivityLog parse_shellactivities(byte_span blob) {
  if (blob.size() < 4) raise(errc::too_short, "blob shorter than the 4-byte magic");
  if (std::memcmp(blob.data(), kLogMagic, 4) != 0) {
    raise(errc::bad_header, "magic is not 0x02000000");
  }
  if (blob.size() < kLogHeaderSize) {
    raise(errc::too_short, "blob shorter than the 0x18-byte header");
  }

  ShellActivityLog log;
  log.header_timestamp_raw = read_u64le(blob.data() + 4);
  std::copy_n(blob.data() + 0x10, 8, log.header_values.begin());

  size_t pos = kLogHeaderSize;
  while (pos < blob.size()) {
    size_t next = find_bytes(blob, sig(kRecordHeader, 2), pos);
    if (next == npos) {
      log.trailing.push_back({pos, byte_vec(blob.begin() + pos, blob.end())});
      break;
    }
    if (next > pos) {
      // Bytes between records that no record claimed.
      log.trailing.push_back({pos, byte_vec(blob.begin() + pos, blob.begin() + next)});
      log.warnings.push_back("unparsed span at offset " + std::to_string(pos) + " (" +
                             std::to_string(next - pos) + " bytes)");
      pos = next;
      continue;
    }
    RecordParse rp = parse_record(blob, pos);
    if (rp.ok) {
      log.records.push_back(std::move(rp.record));
      pos = static_cast<size_t>(rp.next_offset);
      continue;
    }
    // Quarantine this span up to the next candidate header.
    size_t resume = find_bytes(blob, sig(kRecordHeader, 2), pos + 2);
    size_t span_end = (resume == npos) ? blob.size() : resume;
    log.trailing.push_back({pos, byte_vec(blob.begin() + pos, blob.begin() + span_end)});
    log.warnings.push_back("record at offset " + std::to_string(pos) +
                           " failed to parse: " + rp.err_detail);
    pos = span_end;
  }
  return log;
}

const char* browser_kind_name(BrowserKind k) {
  switch (k) {
    case BrowserKind::TorStandard: return "tor_standard";
    case BrowserKind::TorPortable: return "tor_portable";
    case BrowserKind::FirefoxOther: return "firefox_other";
    case BrowserKind::Unknown: return "unknown";
  }
  return "unknown";
}

BrowserAttribution classify_path(std::string_view exe_path) {
  BrowserAttribution attr;
  const auto parts = split_path(exe_path);
  if (parts.empty() || exe_path.empty()) return attr;

  int tor_index = -1;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (ascii_iequals(parts[i], "Tor Browser")) {
      tor_index = static_cast<int>(i);
      break;
    }
  }
  const bool ends_firefox = ascii_iequals(parts.back(), "firefox.exe");
  const bool has_drive = is_drive_component(parts.front());

  if (tor_index < 0) {
    if (ends_firefox) attr.kind = BrowserKind::FirefoxOther;
    return attr;
  }
  if (!ends_firefox) return attr;  // a Tor Browser segment alone stays Unknown

  if (has_drive) {
    char d = parts.front()[0];
    attr.drive_letter = (d >= 'a' && d <= 'z') ? static_cast<char>(d - 'a' + 'A') : d;
  }
  std::string install;
  for (int i = 0; i <= tor_index; ++i) {
    if (i > 0) install += '\\';
    install += parts[static_cast<size_t>(i)];
  }
  attr.install_dir = install;

  if (has_drive && parts.size() > 3 && ascii_iequals(parts[1], "Users") && !parts[2].empty() &&
      tor_index > 2) {
    attr.kind = BrowserKind::TorStandard;
    attr.username = parts[2];
  } else {
    attr.kind = BrowserKind::TorPortable;
  }
  return attr;
}

namespace {
const std::vector<std::string> kDefaultSuffixes = {" - Tor Browser"};
}

SuffixStrip strip_browser_suffix(std::string_view title,
                                 std::span<const std::string> suffixes) {
  const std::string* best = nullptr;
  for (const auto& s : suffixes) {
    if (s.empty() || s.size() > title.size()) continue;
    if (title.substr(title.size() - s.size()) == s) {
      if (best == nullptr || s.size() > best->size()) best = &s;
    }
  }
  if (best == nullptr) return {std::string(title), std::nullopt};
  return {std::string(title.substr(0, title.size() - best->size())), *best};
}

SuffixStrip strip_browser_suffix(std::string_view title) {
  return strip_browser_suffix(title, kDefaultSuffixes);
}

TypeByteHint type_byte_hint(const ShellActivityRecord& r) {
  TypeByteHint hint;
  size_t encoded_len = 0;
  size_t char_count = 0;
  if (r.undecoded) {
    encoded_len = r.exe_path_raw.size();
    char_count = encoded_len;
  } else {
    encoded_len = (r.encoding == StringEncoding::utf16le)
                      ? utf8_to_utf16le(r.exe_path).size()
                      : r.exe_path.size();
    // UTF-8 continuation bytes do not start a character.
    for (char c : r.exe_path) {
      if ((static_cast<uint8_t>(c) & 0xC0) != 0x80) ++char_count;
    }
  }
  hint.matches_encoded_len = (encoded_len == r.type_byte);
  hint.matches_char_count = (char_count == r.type_byte);
  return hint;
}

std::optional<UtcTime> trailer_timestamp_hint(const std::array<uint8_t, 5>& trailer) {
  // Candidate: 1 tag byte, then trailer[1..5) as the low half of a FILETIME
  // whose high half is the 0xEAF2E901 constant that follows in the stream.
  uint8_t candidate[8];
  std::copy_n(trailer.begin() + 1, 4, candidate);
  std::copy_n(kTrailerConst, 4, candidate + 4);
  const uint64_t raw = read_u64le(candidate);
  if (raw >= kFiletimeYear10000) return std::nullopt;
  UtcTime t = filetime_to_utc(raw);
  if (t.year < 1995 || t.year > 2035) return std::nullopt;
  return t;
}

}  // namespace torsift::shellact
