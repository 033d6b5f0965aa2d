// Copyright (c) 2026 The torsift authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "torsift/bytes.hpp"
#include "torsift/shellact.hpp"
#include "torsift/signature_db.hpp"

namespace torsift::carve {

/// Byte-stream encodings the scanners match against.
enum class Encoding { ascii, utf16le };

const char* scan_encoding_name(Encoding e);

struct KeywordHit {
  std::string keyword;   // as searched
  uint64_t offset = 0;   // where its encoded form begins
  Encoding encoding = Encoding::ascii;
  std::string matched;   // occurrence as decoded from the stream (original case)
  std::string context;   // decoded window around the hit
};

struct PathHit {
  std::string path;
  uint64_t offset = 0;   // of the drive letter
  Encoding encoding = Encoding::ascii;
  shellact::BrowserAttribution attribution;
};

struct UrlHit {
  std::string url;
  uint64_t offset = 0;
  Encoding encoding = Encoding::ascii;
};

struct EndpointHit {
  std::string address;               // dotted quad
  std::optional<uint16_t> port;
  uint64_t anchor_offset = 0;        // offset of the associated "obfs4" keyword
  uint64_t offset = 0;               // offset of the address text
  uint64_t distance = 0;             // byte gap between keyword and address text
  Encoding encoding = Encoding::ascii;
};

struct CarvedRecord {
  uint64_t source_offset = 0;        // stream bytes here begin 0xD2 0x14
  bool complete = false;             // footer found and record parsed
  std::optional<shellact::ShellActivityRecord> record;
  byte_vec raw;                      // raw span for incomplete carves
};

struct ScanOptions {
  size_t context_radius = 128;       // bytes each side of a keyword hit
  size_t max_record_len = 64 * 1024;
  size_t endpoint_window = 256;      // bytes around an obfs4 hit
  size_t chunk_size = 8u << 20;      // streaming chunk stride
  unsigned threads = 1;
};

struct EncodingSet {
  bool ascii = true;
  bool utf16le = true;
};

/// Every occurrence of every keyword in every requested encoding,
/// case-insensitive over ASCII letters, sorted by offset; overlapping
/// occurrences are all reported.
std::vector<KeywordHit> keyword_scan(byte_span stream,
                                     std::span<const std::string> keywords,
                                     EncodingSet encodings = {},
                                     size_t context_radius = 128);

/// Carves records by their 0xD214 header / 0xCA500000 footer. Parse
/// failures become complete=false raw spans; scanning resumes after a
/// consumed record, or two bytes past a failed header.
std::vector<CarvedRecord> carve_shellactivity_records(byte_span stream,
                                                      size_t max_record_len = 64 * 1024);

/// Drive-rooted paths containing one of the anchor segments (default
/// "Tor Browser"), in both encodings, classified via the rule table.
std::vector<PathHit> find_tor_paths(byte_span stream);
std::vector<PathHit> find_tor_paths(byte_span stream,
                                    std::span<const std::string> anchors);

/// IPv4 endpoints textually near an "obfs4" keyword hit.
std::vector<EndpointHit> find_obfs4_endpoints(byte_span stream, size_t window = 256);

/// http:// and https:// URLs in both encodings.
std::vector<UrlHit> find_urls(byte_span stream);

/// All scans over one stream.
struct ScanReport {
  std::vector<KeywordHit> keyword_hits;
  std::vector<PathHit> path_hits;
  std::vector<UrlHit> url_hits;
  std::vector<EndpointHit> endpoint_hits;
  std::vector<CarvedRecord> records;
};

ScanReport scan_buffer(byte_span stream, const SignatureDb& db, const ScanOptions& opts = {});

/// Chunked scan with overlap; results are identical to scan_buffer for any
/// chunk count (tested). threads > 1 scans chunks concurrently.
ScanReport scan_buffer_chunked(byte_span stream, const SignatureDb& db,
                               const ScanOptions& opts, size_t chunk_count);

/// Streaming file scan in bounded memory (chunk + overlap resident at a time).
/// Throws io when the file cannot be read.
ScanReport scan_file(const std::string& path, const SignatureDb& db,
                     const ScanOptions& opts = {});

}  // namespace torsift::carve
