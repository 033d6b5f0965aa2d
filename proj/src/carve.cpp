// Copyright (c) 2026 The torsift authors
// SPDX-License-Identifier: Apache-2.0
//
// Signature, keyword, URL and endpoint scanning over raw byte streams, plus
// record carving by the 0xD214 / 0xCA500000 delimiters. All scans work on a
// window of the stream with absolute offsets, so a chunked scan with enough
// margin merges to exactly the single-pass result.

#include "torsift/carve.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <future>
#include <set>
#include <tuple>

#include "torsift/errors.hpp"

namespace torsift::carve {

namespace {

// extension caps, in characters
constexpr size_t kMaxPathChars = 512;
constexpr size_t kMaxUrlChars = 2048;

size_t unit_size(Encoding e) { return e == Encoding::utf16le ? 2 : 1; }

struct BytePattern {
  std::string keyword;
  Encoding enc = Encoding::ascii;
  byte_vec lower, upper;  // per-byte alternatives (ASCII case folding)
};

BytePattern make_pattern(std::string_view text, Encoding enc) {
  BytePattern p;
  p.keyword = std::string(text);
  p.enc = enc;
  byte_vec encoded = enc == Encoding::utf16le ? utf8_to_utf16le(text)
                                              : byte_vec(text.begin(), text.end());
  p.lower.reserve(encoded.size());
  p.upper.reserve(encoded.size());
  const size_t step = unit_size(enc);
  for (size_t i = 0; i < encoded.size(); ++i) {
    uint8_t b = encoded[i];
    // Only the low byte of an ASCII code unit folds case.
    const bool is_char_byte = step == 1 || (i % 2 == 0 && encoded[i + 1] == 0x00);
    uint8_t lo = b, up = b;
    if (is_char_byte && b >= 'A' && b <= 'Z') {
      lo = static_cast<uint8_t>(b - 'A' + 'a');
      up = b;
    } else if (is_char_byte && b >= 'a' && b <= 'z') {
      lo = b;
      up = static_cast<uint8_t>(b - 'a' + 'A');
    }
    p.lower.push_back(lo);
    p.upper.push_back(up);
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

template <typename Fn>
void for_each_match(byte_span view, const BytePattern& p, Fn&& fn) {
  if (p.lower.empty() || p.lower.size() > view.size()) return;
  const size_t limit = view.size() - p.lower.size() + 1;
  size_t pos = 0;
  while ((pos = next_candidate(view, pos, p.lower[0], p.upper[0], limit)) != npos) {
    if (match_at(view, pos, p)) fn(pos);
    ++pos;
  }
}

// Decoded characters of view[lo, hi) with the local offset of each.
struct Decoded {
  std::vector<uint32_t> cps;    // 0xFFFFFFFF marks an undecodable unit
  std::vector<size_t> offsets;  // local byte offset of each character
};

constexpr uint32_t kBadCp = 0xFFFFFFFFu;

Decoded decode_region(byte_span view, size_t lo, size_t hi, Encoding enc) {
  Decoded d;
  if (enc == Encoding::ascii) {
    d.cps.reserve(hi - lo);
    d.offsets.reserve(hi - lo);
    for (size_t i = lo; i < hi; ++i) {
      d.cps.push_back(view[i]);
      d.offsets.push_back(i);
    }
    return d;
  }
  size_t i = lo;
  while (i + 1 < hi) {
    const uint16_t u = read_u16le(view.data() + i);
    if (u >= 0xD800 && u <= 0xDBFF && i + 3 < hi) {
      const uint16_t v = read_u16le(view.data() + i + 2);
      if (v >= 0xDC00 && v <= 0xDFFF) {
        d.cps.push_back(0x10000 + ((static_cast<uint32_t>(u - 0xD800) << 10) | (v - 0xDC00)));
        d.offsets.push_back(i);
        i += 4;
        continue;
      }
    }
    d.cps.push_back((u >= 0xD800 && u <= 0xDFFF) ? kBadCp : u);
    d.offsets.push_back(i);
    i += 2;
  }
  return d;
}

std::string printable_context(byte_span view, size_t anchor, size_t pat_len, size_t radius,
                              Encoding enc) {
  const size_t step = unit_size(enc);
  size_t lo = anchor > radius ? anchor - radius : 0;
  if (enc == Encoding::utf16le) lo += (anchor - lo) % 2;  // keep code-unit parity
  size_t hi = std::min(view.size(), anchor + pat_len + radius);
  Decoded d = decode_region(view, lo, hi, enc);
  std::string out;
  out.reserve(d.cps.size());
  for (uint32_t cp : d.cps) {
    if (cp >= 0x20 && cp != 0x7F && cp != kBadCp) {
      utf8_append(out, cp);
    } else {
      out.push_back('.');
    }
  }
  return out;
}

std::string decode_exact(byte_span view, size_t pos, size_t len, Encoding enc) {
  byte_span span = view.subspan(pos, len);
  if (enc == Encoding::ascii) return std::string(span.begin(), span.end());
  auto s = utf16le_to_utf8(span);
  return s ? *s : std::string();
}

bool path_char(uint32_t cp) {
  if (cp < 0x20 || cp == 0x7F || cp == kBadCp) return false;
  switch (cp) {
    case '<': case '>': case '"': case '|': case '?': case '*': return false;
    default: return true;
  }
}

bool url_char(uint32_t cp) {
  if (cp > 0x7E || cp < 0x21) return false;
  const char c = static_cast<char>(cp);
  if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9')) return true;
  return std::strchr("-._~:/?#[]@!$&'()*+,;=%", c) != nullptr;
}

// ---- per-window scanning with absolute offsets ----

struct CarveCandidate {
  uint64_t offset = 0;  // absolute
  bool parse_ok = false;
  shellact::ShellActivityRecord record;  // offsets absolute when parse_ok
  uint64_t end_offset = 0;               // one past footer (or raw-span end)
  byte_vec raw;                          // raw span when !parse_ok
};

struct Pieces {
  std::vector<KeywordHit> keywords;
  std::vector<PathHit> paths;
  std::vector<UrlHit> urls;
  std::vector<EndpointHit> endpoints;
  std::vector<CarveCandidate> candidates;
};

struct Window {
  byte_span view;          // bytes [base, base + view.size()) of the stream
  uint64_t base = 0;
  uint64_t stride_begin = 0;  // hits are attributed to [stride_begin, stride_end)
  uint64_t stride_end = 0;
};

bool in_stride(const Window& w, uint64_t absolute) {
  return absolute >= w.stride_begin && absolute < w.stride_end;
}

void scan_keywords_into(const Window& w, std::span<const BytePattern> patterns, size_t radius,
                        std::vector<KeywordHit>& out) {
  for (const auto& p : patterns) {
    for_each_match(w.view, p, [&](size_t pos) {
      const uint64_t abs_off = w.base + pos;
      if (!in_stride(w, abs_off)) return;
      KeywordHit hit;
      hit.keyword = p.keyword;
      hit.offset = abs_off;
      hit.encoding = p.enc;
      hit.matched = decode_exact(w.view, pos, p.lower.size(), p.enc);
      hit.context = printable_context(w.view, pos, p.lower.size(), radius, p.enc);
      out.push_back(std::move(hit));
    });
  }
}

void scan_paths_into(const Window& w, std::span<const BytePattern> anchors,
                     std::vector<PathHit>& out) {
  std::set<std::tuple<uint64_t, std::string, int>> seen;
  for (const auto& anchor : anchors) {
    const size_t step = unit_size(anchor.enc);
    for_each_match(w.view, anchor, [&](size_t pos) {
      if (!in_stride(w, w.base + pos)) return;
      const size_t span_chars = kMaxPathChars;
      size_t lo = pos > span_chars * step ? pos - span_chars * step : 0;
      if (anchor.enc == Encoding::utf16le) lo += (pos - lo) % 2;
      const size_t hi = std::min(w.view.size(), pos + anchor.lower.size() + span_chars * step);
      Decoded d = decode_region(w.view, lo, hi, anchor.enc);
      // locate the anchor's first character
      size_t anchor_idx = npos;
      for (size_t i = 0; i < d.offsets.size(); ++i) {
        if (d.offsets[i] == pos) {
          anchor_idx = i;
          break;
        }
      }
      if (anchor_idx == npos) return;
      size_t left = anchor_idx;
      while (left > 0 && path_char(d.cps[left - 1]) && anchor_idx - left < kMaxPathChars) {
        --left;
      }
      size_t right = anchor_idx;
      while (right < d.cps.size() && path_char(d.cps[right]) &&
             right - anchor_idx < kMaxPathChars) {
        ++right;
      }
      // the path starts at the rightmost drive spec "X:\" at or left of the anchor
      size_t start = npos;
      for (size_t i = anchor_idx + 1; i-- > left;) {
        if (i + 2 < right && d.cps[i] < 0x80 &&
            (((d.cps[i] | 0x20) >= 'a') && ((d.cps[i] | 0x20) <= 'z')) && d.cps[i + 1] == ':' &&
            d.cps[i + 2] == '\\') {
          start = i;
          break;
        }
      }
      if (start == npos) return;
      std::string path;
      for (size_t i = start; i < right; ++i) utf8_append(path, d.cps[i]);
      PathHit hit;
      hit.path = std::move(path);
      hit.offset = w.base + d.offsets[start];
      hit.encoding = anchor.enc;
      hit.attribution = shellact::classify_path(hit.path);
      auto key = std::make_tuple(hit.offset, hit.path, static_cast<int>(hit.encoding));
      if (seen.insert(key).second) out.push_back(std::move(hit));
    });
  }
}

void scan_urls_into(const Window& w, std::span<const BytePattern> schemes,
                    std::vector<UrlHit>& out) {
  for (const auto& scheme : schemes) {
    const size_t step = unit_size(scheme.enc);
    for_each_match(w.view, scheme, [&](size_t pos) {
      if (!in_stride(w, w.base + pos)) return;
      const size_t tail_begin = pos + scheme.lower.size();
      const size_t hi = std::min(w.view.size(), tail_begin + kMaxUrlChars * step);
      Decoded d = decode_region(w.view, tail_begin, hi, scheme.enc);
      size_t n = 0;
      while (n < d.cps.size() && url_char(d.cps[n]) && n < kMaxUrlChars) ++n;
      if (n == 0) return;  // "http://" followed by nothing legal
      std::string url = decode_exact(w.view, pos, scheme.lower.size(), scheme.enc);
      for (size_t i = 0; i < n; ++i) utf8_append(url, d.cps[i]);
      out.push_back({std::move(url), w.base + pos, scheme.enc});
    });
  }
}

struct QuadMatch {
  std::string address;
  std::optional<uint16_t> port;
  size_t begin_idx = 0;  // character indices into a Decoded region
  size_t end_idx = 0;    // one past the last consumed character
};

bool digit(uint32_t cp) { return cp >= '0' && cp <= '9'; }

// a.b.c.d with octets 0..255 and optional :port, delimited from longer runs.
std::optional<QuadMatch> parse_quad(const Decoded& d, size_t at) {
  if (at > 0 && (digit(d.cps[at - 1]) || d.cps[at - 1] == '.')) return std::nullopt;
  size_t i = at;
  unsigned octets[4] = {0, 0, 0, 0};
  std::string text;
  for (int o = 0; o < 4; ++o) {
    if (o > 0) {
      if (i >= d.cps.size() || d.cps[i] != '.') return std::nullopt;
      text.push_back('.');
      ++i;
    }
    size_t len = 0;
    unsigned value = 0;
    while (i < d.cps.size() && digit(d.cps[i]) && len < 3) {
      value = value * 10 + (d.cps[i] - '0');
      text.push_back(static_cast<char>(d.cps[i]));
      ++i;
      ++len;
    }
    if (len == 0 || value > 255) return std::nullopt;
    octets[o] = value;
  }
  QuadMatch m;
  m.begin_idx = at;
  m.end_idx = i;
  // reject members of longer dotted chains: "1.2.3.4.5"
  if (i < d.cps.size() && digit(d.cps[i])) return std::nullopt;
  if (i + 1 < d.cps.size() && d.cps[i] == '.' && digit(d.cps[i + 1])) return std::nullopt;
  if (i < d.cps.size() && d.cps[i] == ':') {
    size_t j = i + 1;
    uint64_t port = 0;
    size_t len = 0;
    while (j < d.cps.size() && digit(d.cps[j]) && len < 5) {
      port = port * 10 + (d.cps[j] - '0');
      ++j;
      ++len;
    }
    if (len > 0 && port >= 1 && port <= 65535 && (j >= d.cps.size() || !digit(d.cps[j]))) {
      m.port = static_cast<uint16_t>(port);
      m.end_idx = j;
    }
  }
  m.address = text;
  return m;
}

void scan_endpoints_into(const Window& w, std::span<const BytePattern> obfs4_patterns,
                         size_t window, std::vector<EndpointHit>& out) {
  for (const auto& p : obfs4_patterns) {
    for_each_match(w.view, p, [&](size_t pos) {
      const uint64_t anchor_abs = w.base + pos;
      if (!in_stride(w, anchor_abs)) return;
      const size_t kw_end = pos + p.lower.size();
      size_t lo = pos > window ? pos - window : 0;
      if (p.enc == Encoding::utf16le) lo += (pos - lo) % 2;
      const size_t hi = std::min(w.view.size(), kw_end + window);
      Decoded d = decode_region(w.view, lo, hi, p.enc);
      for (size_t i = 0; i < d.cps.size(); ++i) {
        if (!digit(d.cps[i])) continue;
        auto quad = parse_quad(d, i);
        if (!quad) continue;
        const uint64_t addr_begin = w.base + d.offsets[quad->begin_idx];
        const size_t end_char = quad->end_idx;
        const uint64_t addr_end =
            w.base + (end_char < d.offsets.size()
                          ? d.offsets[end_char]
                          : (d.offsets.empty() ? lo : d.offsets.back() + unit_size(p.enc)));
        EndpointHit hit;
        hit.address = quad->address;
        hit.port = quad->port;
        hit.anchor_offset = anchor_abs;
        hit.offset = addr_begin;
        hit.encoding = p.enc;
        const uint64_t kw_end_abs = w.base + kw_end;
        if (addr_begin >= kw_end_abs) {
          hit.distance = addr_begin - kw_end_abs;
        } else if (addr_end <= anchor_abs) {
          hit.distance = anchor_abs - addr_end;
        } else {
          hit.distance = 0;
        }
        out.push_back(std::move(hit));
        i = quad->end_idx;  // no overlapping quads from one anchor
      }
    });
  }
}

void scan_records_into(const Window& w, size_t max_record_len,
                       std::vector<CarveCandidate>& out) {
  const byte_span header(shellact::kRecordHeader, 2);
  const byte_span footer(shellact::kRecordFooter, 4);
  size_t pos = 0;
  while (true) {
    pos = find_bytes(w.view, header, pos);
    if (pos == npos) break;
    const uint64_t abs_off = w.base + pos;
    if (!in_stride(w, abs_off)) {
      if (abs_off >= w.stride_end) break;
      ++pos;
      continue;
    }
    const size_t bound = std::min(w.view.size() - pos, max_record_len);
    byte_span window = w.view.subspan(pos, bound);
    CarveCandidate cand;
    cand.offset = abs_off;
    shellact::RecordParse rp = shellact::parse_record(window, 0);
    if (rp.ok) {
      cand.parse_ok = true;
      cand.record = std::move(rp.record);
      cand.record.start_offset = abs_off;
      cand.record.end_offset = abs_off + rp.next_offset;
      cand.end_offset = cand.record.end_offset;
    } else {
      const size_t f = find_bytes(window, footer);
      const size_t span_len = f == npos ? bound : f + 4;
      cand.end_offset = abs_off + span_len;
      cand.raw.assign(window.begin(), window.begin() + span_len);
    }
    out.push_back(std::move(cand));
    ++pos;
  }
}

// ---- merge ----

void sort_keyword_hits(std::vector<KeywordHit>& hits) {
  std::sort(hits.begin(), hits.end(), [](const KeywordHit& a, const KeywordHit& b) {
    if (a.offset != b.offset) return a.offset < b.offset;
    if (a.keyword != b.keyword) return a.keyword < b.keyword;
    return static_cast<int>(a.encoding) < static_cast<int>(b.encoding);
  });
}

std::vector<CarvedRecord> resolve_candidates(std::vector<CarveCandidate>& candidates) {
  std::sort(candidates.begin(), candidates.end(),
            [](const CarveCandidate& a, const CarveCandidate& b) { return a.offset < b.offset; });
  std::vector<CarvedRecord> out;
  uint64_t cursor = 0;
  for (auto& cand : candidates) {
    if (cand.offset < cursor) continue;  // consumed by a preceding complete record
    CarvedRecord rec;
    rec.source_offset = cand.offset;
    if (cand.parse_ok) {
      rec.complete = true;
      rec.record = std::move(cand.record);
      cursor = cand.end_offset;
    } else {
      rec.complete = false;
      rec.raw = std::move(cand.raw);
      cursor = cand.offset + 2;
    }
    out.push_back(std::move(rec));
  }
  return out;
}

struct PatternSet {
  std::vector<BytePattern> keywords;
  std::vector<BytePattern> anchors;
  std::vector<BytePattern> schemes;
  std::vector<BytePattern> obfs4;
};

PatternSet build_patterns(const SignatureDb& db) {
  PatternSet ps;
  std::vector<std::string> kw = db.keywords;
  for (const auto& p : db.process_names) {
    if (std::find(kw.begin(), kw.end(), p) == kw.end()) kw.push_back(p);
  }
  for (const auto& k : kw) {
    if (k.empty()) continue;
    ps.keywords.push_back(make_pattern(k, Encoding::ascii));
    ps.keywords.push_back(make_pattern(k, Encoding::utf16le));
  }
  for (const auto& a : db.path_patterns) {
    if (a.empty()) continue;
    ps.anchors.push_back(make_pattern(a, Encoding::ascii));
    ps.anchors.push_back(make_pattern(a, Encoding::utf16le));
  }
  for (const char* s : {"http://", "https://"}) {
    ps.schemes.push_back(make_pattern(s, Encoding::ascii));
    ps.schemes.push_back(make_pattern(s, Encoding::utf16le));
  }
  ps.obfs4.push_back(make_pattern("obfs4", Encoding::ascii));
  ps.obfs4.push_back(make_pattern("obfs4", Encoding::utf16le));
  return ps;
}

Pieces scan_window(const Window& w, const PatternSet& ps, const ScanOptions& opts) {
  Pieces pieces;
  scan_keywords_into(w, ps.keywords, opts.context_radius, pieces.keywords);
  scan_paths_into(w, ps.anchors, pieces.paths);
  scan_urls_into(w, ps.schemes, pieces.urls);
  scan_endpoints_into(w, ps.obfs4, opts.endpoint_window, pieces.endpoints);
  scan_records_into(w, opts.max_record_len, pieces.candidates);
  return pieces;
}

void append_pieces(Pieces& all, Pieces&& part) {
  auto mv = [](auto& dst, auto& src) {
    dst.insert(dst.end(), std::make_move_iterator(src.begin()),
               std::make_move_iterator(src.end()));
  };
  mv(all.keywords, part.keywords);
  mv(all.paths, part.paths);
  mv(all.urls, part.urls);
  mv(all.endpoints, part.endpoints);
  mv(all.candidates, part.candidates);
}

ScanReport finalize(Pieces&& all) {
  ScanReport report;
  sort_keyword_hits(all.keywords);
  std::sort(all.paths.begin(), all.paths.end(), [](const PathHit& a, const PathHit& b) {
    if (a.offset != b.offset) return a.offset < b.offset;
    if (a.path != b.path) return a.path < b.path;
    return static_cast<int>(a.encoding) < static_cast<int>(b.encoding);
  });
  all.paths.erase(std::unique(all.paths.begin(), all.paths.end(),
                              [](const PathHit& a, const PathHit& b) {
                                return a.offset == b.offset && a.path == b.path &&
                                       a.encoding == b.encoding;
                              }),
                  all.paths.end());
  std::sort(all.urls.begin(), all.urls.end(), [](const UrlHit& a, const UrlHit& b) {
    if (a.offset != b.offset) return a.offset < b.offset;
    return static_cast<int>(a.encoding) < static_cast<int>(b.encoding);
  });
  std::sort(all.endpoints.begin(), all.endpoints.end(),
            [](const EndpointHit& a, const EndpointHit& b) {
              if (a.anchor_offset != b.anchor_offset) return a.anchor_offset < b.anchor_offset;
              return a.offset < b.offset;
            });
  report.keyword_hits = std::move(all.keywords);
  report.path_hits = std::move(all.paths);
  report.url_hits = std::move(all.urls);
  report.endpoint_hits = std::move(all.endpoints);
  report.records = resolve_candidates(all.candidates);
  return report;
}

size_t left_margin_for(const ScanOptions& opts) {
  return std::max<size_t>(16384, 2 * opts.context_radius + 2 * opts.endpoint_window + 64);
}

size_t right_margin_for(const ScanOptions& opts) {
  return opts.max_record_len + left_margin_for(opts);
}

}  // namespace

const char* scan_encoding_name(Encoding e) {
  return e == Encoding::ascii ? "ascii" : "utf16le";
}

std::vector<KeywordHit> keyword_scan(byte_span stream, std::span<const std::string> keywords,
                                     EncodingSet encodings, size_t context_radius) {
  std::vector<BytePattern> patterns;
  for (const auto& k : keywords) {
    if (k.empty()) continue;
    if (encodings.ascii) patterns.push_back(make_pattern(k, Encoding::ascii));
    if (encodings.utf16le) patterns.push_back(make_pattern(k, Encoding::utf16le));
  }
  Window w{stream, 0, 0, stream.size()};
  std::vector<KeywordHit> hits;
  scan_keywords_into(w, patterns, context_radius, hits);
  sort_keyword_hits(hits);
  return hits;
}

std::vector<CarvedRecord> carve_shellactivity_records(byte_span stream, size_t max_record_len) {
  if (max_record_len == 0) raise(errc::invalid_config, "max_record_len must be positive");
  Window w{stream, 0, 0, stream.size()};
  std::vector<CarveCandidate> candidates;
  scan_records_into(w, max_record_len, candidates);
  return resolve_candidates(candidates);
}

std::vector<PathHit> find_tor_paths(byte_span stream) {
  const std::vector<std::string> anchors = {"Tor Browser"};
  return find_tor_paths(stream, anchors);
}

std::vector<PathHit> find_tor_paths(byte_span stream, std::span<const std::string> anchors) {
  std::vector<BytePattern> patterns;
  for (const auto& a : anchors) {
    if (a.empty()) continue;
    patterns.push_back(make_pattern(a, Encoding::ascii));
    patterns.push_back(make_pattern(a, Encoding::utf16le));
  }
  Window w{stream, 0, 0, stream.size()};
  std::vector<PathHit> hits;
  scan_paths_into(w, patterns, hits);
  std::sort(hits.begin(), hits.end(),
            [](const PathHit& a, const PathHit& b) { return a.offset < b.offset; });
  return hits;
}

std::vector<EndpointHit> find_obfs4_endpoints(byte_span stream, size_t window) {
  if (window == 0) raise(errc::invalid_config, "window must be positive");
  std::vector<BytePattern> patterns;
  patterns.push_back(make_pattern("obfs4", Encoding::ascii));
  patterns.push_back(make_pattern("obfs4", Encoding::utf16le));
  Window w{stream, 0, 0, stream.size()};
  std::vector<EndpointHit> hits;
  scan_endpoints_into(w, patterns, window, hits);
  return hits;
}

std::vector<UrlHit> find_urls(byte_span stream) {
  std::vector<BytePattern> patterns;
  for (const char* s : {"http://", "https://"}) {
    patterns.push_back(make_pattern(s, Encoding::ascii));
    patterns.push_back(make_pattern(s, Encoding::utf16le));
  }
  Window w{stream, 0, 0, stream.size()};
  std::vector<UrlHit> hits;
  scan_urls_into(w, patterns, hits);
  std::sort(hits.begin(), hits.end(),
            [](const UrlHit& a, const UrlHit& b) { return a.offset < b.offset; });
  return hits;
}

ScanReport scan_buffer(byte_span stream, const SignatureDb& db, const ScanOptions& opts) {
  PatternSet ps = build_patterns(db);
  Window w{stream, 0, 0, stream.size()};
  return finalize(scan_window(w, ps, opts));
}

ScanReport scan_buffer_chunked(byte_span stream, const SignatureDb& db,
                               const ScanOptions& opts, size_t chunk_count) {
  if (chunk_count == 0) raise(errc::invalid_config, "chunk_count must be positive");
  PatternSet ps = build_patterns(db);
  const size_t stride = (stream.size() + chunk_count - 1) / chunk_count;
  const size_t left = left_margin_for(opts);
  const size_t right = right_margin_for(opts);

  std::vector<Window> windows;
  for (size_t c = 0; c < chunk_count; ++c) {
    const uint64_t sb = static_cast<uint64_t>(c) * stride;
    if (sb >= stream.size()) break;
    const uint64_t se = std::min<uint64_t>(sb + stride, stream.size());
    const uint64_t vb = sb > left ? sb - left : 0;
    const uint64_t ve = std::min<uint64_t>(se + right, stream.size());
    windows.push_back({stream.subspan(vb, ve - vb), vb, sb, se});
  }

  std::vector<Pieces> parts(windows.size());
  if (opts.threads > 1 && windows.size() > 1) {
    std::vector<std::future<Pieces>> futures;
    futures.reserve(windows.size());
    for (const auto& w : windows) {
      futures.push_back(
          std::async(std::launch::async, [&, w]() { return scan_window(w, ps, opts); }));
    }
    for (size_t i = 0; i < futures.size(); ++i) parts[i] = futures[i].get();
  } else {
    for (size_t i = 0; i < windows.size(); ++i) parts[i] = scan_window(windows[i], ps, opts);
  }
  Pieces all;
  for (auto& p : parts) append_pieces(all, std::move(p));
  return finalize(std::move(all));
}

ScanReport scan_file(const std::string& path, const SignatureDb& db, const ScanOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(errc::io, "cannot open file: " + path);
  in.seekg(0, std::ios::end);
  const uint64_t total = static_cast<uint64_t>(in.tellg());
  const size_t left = left_margin_for(opts);
  const size_t right = right_margin_for(opts);
  const size_t stride = std::max<size_t>(opts.chunk_size, 1u << 16);

  PatternSet ps = build_patterns(db);
  Pieces all;
  byte_vec buffer;
  for (uint64_t sb = 0; sb < total; sb += stride) {
    const uint64_t se = std::min<uint64_t>(sb + stride, total);
    const uint64_t vb = sb > left ? sb - left : 0;
    const uint64_t ve = std::min<uint64_t>(se + right, total);
    buffer.resize(ve - vb);
    in.seekg(static_cast<std::streamoff>(vb));
    in.read(reinterpret_cast<char*>(buffer.data()), static_cast<std::streamsize>(buffer.size()));
    if (!in) raise(errc::io, "read error: " + path);
    Window w{byte_span(buffer), vb, sb, se};
    append_pieces(all, scan_window(w, ps, opts));
  }
  if (total == 0) return ScanReport{};
  return finalize(std::move(all));
}

}  // namespace torsift::carve
