// Copyright (c) 2026 The torsift authors
// SPDX-License-Identifier: Apache-2.0

#include "torsift/synth.hpp"

#include <algorithm>
#include <cstring>
#include <random>

#include "torsift/carve.hpp"
#include "torsift/errors.hpp"

namespace torsift::synth {

using shellact::ShellActivityRecord;

namespace {

struct Sig {
  const uint8_t* data;
  size_t size;
};

// Record-structure signatures a string span must never encode.
constexpr Sig kSignatures[] = {
    {shellact::kRecordHeader, 2}, {shellact::kMidMarker, 8},   {shellact::kNameDelim, 2},
    {shellact::kTitleDelim, 2},   {shellact::kTrailerDelim, 2}, {shellact::kTrailerConst, 4},
    {shellact::kRecordFooter, 4},
};

void check_span_clean(byte_span span, const char* field) {
  for (const auto& s : kSignatures) {
    if (find_bytes(span, byte_span(s.data, s.size)) != npos) {
      raise(errc::delimiter_collision,
            std::string(field) + " encodes bytes containing a structure signature");
    }
  }
}

byte_vec encode_field(const std::string& text, StringEncoding enc) {
  if (enc == StringEncoding::utf16le) return utf8_to_utf16le(text);
  return byte_vec(text.begin(), text.end());
}

}  // namespace

byte_vec encode_record(const ShellActivityRecord& r) {
  byte_vec path_bytes, name_bytes, title_bytes;
  if (r.undecoded) {
    path_bytes = r.exe_path_raw;
    name_bytes = r.exe_name_raw;
    title_bytes = r.page_title_raw;
    if (utf16le_span_acceptable(path_bytes) && utf16le_span_acceptable(name_bytes) &&
        utf16le_span_acceptable(title_bytes)) {
      raise(errc::encoding_ambiguous, "raw spans would re-decode as UTF-16LE");
    }
    if (utf8_span_acceptable(path_bytes) && utf8_span_acceptable(name_bytes) &&
        utf8_span_acceptable(title_bytes)) {
      raise(errc::encoding_ambiguous, "raw spans would re-decode as UTF-8");
    }
  } else {
    path_bytes = encode_field(r.exe_path, r.encoding);
    name_bytes = encode_field(r.exe_name, r.encoding);
    title_bytes = encode_field(r.page_title, r.encoding);
    const bool utf16_detectable = utf16le_span_acceptable(path_bytes) &&
                                  utf16le_span_acceptable(name_bytes) &&
                                  utf16le_span_acceptable(title_bytes);
    if (r.encoding == StringEncoding::utf16le && !utf16_detectable) {
      raise(errc::encoding_ambiguous,
            "UTF-16LE spans not recoverable by the decoder (need a zero byte per "
            "non-empty span and no control characters)");
    }
    if (r.encoding == StringEncoding::utf8 && utf16_detectable) {
      raise(errc::encoding_ambiguous,
            "UTF-8 spans would be taken for UTF-16LE by the decoder");
    }
  }
  check_span_clean(path_bytes, "exe_path");
  check_span_clean(name_bytes, "exe_name");
  check_span_clean(title_bytes, "page_title");

  byte_vec out;
  out.reserve(path_bytes.size() + name_bytes.size() + title_bytes.size() + 64);
  out.insert(out.end(), shellact::kRecordHeader, shellact::kRecordHeader + 2);
  out.push_back(r.type_byte);
  out.insert(out.end(), path_bytes.begin(), path_bytes.end());
  out.insert(out.end(), shellact::kMidMarker, shellact::kMidMarker + 8);
  out.insert(out.end(), name_bytes.begin(), name_bytes.end());
  out.insert(out.end(), shellact::kNameDelim, shellact::kNameDelim + 2);
  out.push_back(r.d228_byte);
  out.insert(out.end(), title_bytes.begin(), title_bytes.end());
  out.insert(out.end(), shellact::kTitleDelim, shellact::kTitleDelim + 2);
  out.insert(out.end(), r.trailer_a5.begin(), r.trailer_a5.end());
  out.insert(out.end(), shellact::kTrailerConst, shellact::kTrailerConst + 4);
  out.insert(out.end(), shellact::kTrailerDelim, shellact::kTrailerDelim + 2);
  out.insert(out.end(), r.trailer_b5.begin(), r.trailer_b5.end());
  out.insert(out.end(), shellact::kTrailerConst, shellact::kTrailerConst + 4);
  out.insert(out.end(), shellact::kRecordFooter, shellact::kRecordFooter + 4);
  return out;
}

byte_vec build_shellactivities_blob(const UtcTime& header_time,
                                    std::span<const ShellActivityRecord> records) {
  return build_shellactivities_blob(header_time, records, shellact::kDefaultHeaderValues);
}

byte_vec build_shellactivities_blob(const UtcTime& header_time,
                                    std::span<const ShellActivityRecord> records,
                                    const std::array<uint8_t, 8>& header_values) {
  byte_vec out;
  out.insert(out.end(), shellact::kLogMagic, shellact::kLogMagic + 4);
  put_u64le(out, utc_to_filetime(header_time));
  out.insert(out.end(), {0x00, 0x00, 0x00, 0x00});
  out.insert(out.end(), header_values.begin(), header_values.end());
  for (const auto& r : records) {
    byte_vec rec = encode_record(r);
    out.insert(out.end(), rec.begin(), rec.end());
  }
  return out;
}

Plant Plant::text(uint64_t offset, std::string_view text, StringEncoding enc, bool guard) {
  Plant p;
  p.offset = offset;
  p.kind = "text";
  p.note = std::string(text);
  const size_t guard_len = guard ? (enc == StringEncoding::utf16le ? 2 : 1) : 0;
  byte_vec body = enc == StringEncoding::utf16le
                      ? utf8_to_utf16le(text)
                      : byte_vec(text.begin(), text.end());
  p.payload.assign(guard_len, 0x00);
  p.payload.insert(p.payload.end(), body.begin(), body.end());
  p.payload.insert(p.payload.end(), guard_len, 0x00);
  p.artifact_offset = offset + guard_len;
  return p;
}

Plant Plant::bytes(uint64_t offset, byte_vec raw, std::string note) {
  Plant p;
  p.offset = offset;
  p.kind = "bytes";
  p.payload = std::move(raw);
  p.artifact_offset = offset;
  p.note = std::move(note);
  return p;
}

Plant Plant::record(uint64_t offset, const ShellActivityRecord& rec) {
  Plant p;
  p.offset = offset;
  p.kind = "record";
  p.payload = encode_record(rec);
  p.artifact_offset = offset;
  p.note = rec.page_title;
  return p;
}

Plant Plant::blob(uint64_t offset, const UtcTime& header_time,
                  std::span<const ShellActivityRecord> records) {
  Plant p;
  p.offset = offset;
  p.kind = "blob";
  p.payload = build_shellactivities_blob(header_time, records);
  p.artifact_offset = offset;
  return p;
}

namespace {

struct Interval {
  uint64_t begin, end;
};

bool fully_inside(const std::vector<Interval>& plants, uint64_t begin, uint64_t end) {
  for (const auto& iv : plants) {
    if (begin >= iv.begin && end <= iv.end) return true;
  }
  return false;
}

bool position_inside(const std::vector<Interval>& plants, uint64_t pos) {
  for (const auto& iv : plants) {
    if (pos >= iv.begin && pos < iv.end) return true;
  }
  return false;
}

// Case-insensitive (ASCII letters) byte templates in both encodings.
struct BytePattern {
  byte_vec lower, upper;
};

BytePattern make_pattern(std::string_view text, bool utf16) {
  BytePattern p;
  auto push = [&](char lo, char up) {
    p.lower.push_back(static_cast<uint8_t>(lo));
    p.upper.push_back(static_cast<uint8_t>(up));
    if (utf16) {
      p.lower.push_back(0x00);
      p.upper.push_back(0x00);
    }
  };
  for (char c : text) {
    char lo = ascii_lower(c);
    char up = (lo >= 'a' && lo <= 'z') ? static_cast<char>(lo - 'a' + 'A') : lo;
    push(lo, up);
  }
  return p;
}

bool match_at(byte_span hay, size_t pos, const BytePattern& p) {
  if (pos + p.lower.size() > hay.size()) return false;
  for (size_t i = 0; i < p.lower.size(); ++i) {
    uint8_t b = hay[pos + i];
    if (b != p.lower[i] && b != p.upper[i]) return false;
  }
  return true;
}

// Next position in [from, limit) holding byte a or byte b.
size_t next_candidate(byte_span s, size_t from, uint8_t a, uint8_t b, size_t limit) {
  if (from >= limit) return npos;
  const uint8_t* base = s.data();
  const void* pa = std::memchr(base + from, a, limit - from);
  const size_t ia = pa ? static_cast<size_t>(static_cast<const uint8_t*>(pa) - base) : npos;
  if (a == b) return ia;
  const size_t b_end = (ia == npos) ? limit : ia;
  if (b_end > from) {
    const void* pb = std::memchr(base + from, b, b_end - from);
    if (pb) return static_cast<size_t>(static_cast<const uint8_t*>(pb) - base);
  }
  return ia;
}

}  // namespace

byte_vec plant_in_noise(const PlantManifest& manifest) {
  return plant_in_noise(manifest, SignatureDb::defaults());
}

byte_vec plant_in_noise(const PlantManifest& manifest, const SignatureDb& db) {
  std::vector<Interval> intervals;
  intervals.reserve(manifest.plants.size());
  for (const auto& plant : manifest.plants) {
    uint64_t end = plant.offset + plant.payload.size();
    if (end > manifest.stream_length || end < plant.offset) {
      raise(errc::overlap, "plant extends past the stream length");
    }
    intervals.push_back({plant.offset, end});
  }
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& a, const Interval& b) { return a.begin < b.begin; });
  for (size_t i = 1; i < intervals.size(); ++i) {
    if (intervals[i].begin < intervals[i - 1].end) {
      raise(errc::overlap, "plants overlap");
    }
  }

  byte_vec stream(manifest.stream_length);
  std::mt19937_64 rng(manifest.seed);
  size_t i = 0;
  for (; i + 8 <= stream.size(); i += 8) {
    uint64_t v = rng();
    std::memcpy(stream.data() + i, &v, 8);
  }
  for (; i < stream.size(); ++i) stream[i] = static_cast<uint8_t>(rng());

  for (const auto& plant : manifest.plants) {
    std::copy(plant.payload.begin(), plant.payload.end(), stream.begin() + plant.offset);
  }

  // Noise regions must stay free of every signature the scans look for.
  std::vector<BytePattern> patterns;
  auto add_text = [&](const std::string& s) {
    if (s.empty()) return;
    patterns.push_back(make_pattern(s, false));
    patterns.push_back(make_pattern(s, true));
  };
  for (const auto& s : db.keywords) add_text(s);
  for (const auto& s : db.process_names) add_text(s);
  for (const auto& s : db.path_patterns) add_text(s);
  add_text("http://");
  add_text("https://");
  const byte_vec header(shellact::kRecordHeader, shellact::kRecordHeader + 2);
  const byte_vec footer(shellact::kRecordFooter, shellact::kRecordFooter + 4);
  patterns.push_back({header, header});
  patterns.push_back({footer, footer});

  byte_span view(stream);
  for (int pass = 0; pass < 64; ++pass) {
    bool patched = false;
    for (const auto& pat : patterns) {
      if (pat.lower.size() > stream.size()) continue;
      const size_t limit = stream.size() - pat.lower.size() + 1;
      size_t pos = 0;
      while ((pos = next_candidate(view, pos, pat.lower[0], pat.upper[0], limit)) != npos) {
        if (match_at(view, pos, pat)) {
          const uint64_t end = pos + pat.lower.size();
          if (!fully_inside(intervals, pos, end)) {  // inside a plant it is intended
            for (uint64_t k = pos; k < end; ++k) {
              if (!position_inside(intervals, k)) {
                stream[k] = static_cast<uint8_t>(rng());
                patched = true;
                break;
              }
            }
          }
        }
        ++pos;
      }
    }
    if (!patched) return stream;
  }
  raise(errc::internal, "noise rejection sampling did not converge");
}

}  // namespace torsift::synth
