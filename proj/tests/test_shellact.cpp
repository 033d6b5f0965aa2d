// Copyright (c) 2026 The torsift authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>

#include "filetime_oracle.hpp"
#include "test_util.hpp"
#include "torsift/shellact.hpp"
#include "torsift/synth.hpp"

using namespace torsift;
using namespace torsift::shellact;

namespace {

byte_vec header_only_blob() {
  // 02 00 00 00 | FILETIME | 00 00 00 00 | 43 42 01 00 CB 0A 0A 14
  byte_vec blob = {0x02, 0x00, 0x00, 0x00};
  put_u64le(blob, oracle::filetime_of(2018, 4, 3, 14, 9, 47));
  blob.insert(blob.end(), {0x00, 0x00, 0x00, 0x00});
  blob.insert(blob.end(), {0x43, 0x42, 0x01, 0x00, 0xCB, 0x0A, 0x0A, 0x14});
  return blob;
}

}  // namespace

TEST_CASE("header-only blob decodes the embedded timestamp") {
  byte_vec blob = header_only_blob();
  REQUIRE(blob.size() == kLogHeaderSize);
  ShellActivityLog log = parse_shellactivities(blob);
  CHECK(log.header_timestamp_raw == 131672381870000000ull);
  CHECK(format_utc(filetime_to_utc(log.header_timestamp_raw)) == "2018-04-03T14:09:47Z");
  CHECK(log.header_values == kDefaultHeaderValues);
  CHECK(log.records.empty());
  CHECK(log.trailing.empty());
  CHECK(log.warnings.empty());

  // the synth encoder emits exactly these bytes for an empty record list
  byte_vec built = synth::build_shellactivities_blob(UtcTime{2018, 4, 3, 14, 9, 47, 0}, {});
  CHECK(built == blob);
}

TEST_CASE("header errors") {
  byte_vec bad = header_only_blob();
  bad[0] = 0x01;
  CHECK(testutil::thrown_code([&] { parse_shellactivities(bad); }) == errc::bad_header);

  byte_vec tiny = {0x02, 0x00, 0x00, 0x00, 0x01};
  CHECK(testutil::thrown_code([&] { parse_shellactivities(tiny); }) == errc::too_short);
  CHECK(testutil::thrown_code([&] { parse_shellactivities(byte_vec{0x02}); }) ==
        errc::too_short);
}

TEST_CASE("record with the leaked browser path and title decodes verbatim") {
  auto rec = testutil::paper_record();
  byte_vec blob =
      synth::build_shellactivities_blob(UtcTime{2018, 4, 3, 14, 9, 47, 0}, {&rec, 1});
  ShellActivityLog log = parse_shellactivities(blob);
  REQUIRE(log.records.size() == 1);
  const auto& parsed = log.records[0];
  CHECK(parsed.exe_path == testutil::kStandardTorPath);
  CHECK(parsed.exe_name == "firefox.exe");
  CHECK(parsed.page_title == testutil::kSoundcloudTitle);
  CHECK(parsed.encoding == StringEncoding::utf16le);
  CHECK(parsed.type_byte == 0x39);
  CHECK(parsed.start_offset == kLogHeaderSize);
  CHECK(parsed.end_offset == blob.size());

  // 0x39 is the path's character count, not its UTF-16 byte count
  auto hint = type_byte_hint(parsed);
  CHECK(hint.matches_char_count);
  CHECK(!hint.matches_encoded_len);

  // raw extent starts with the header pair and ends with the footer
  CHECK(blob[parsed.start_offset] == 0xD2);
  CHECK(blob[parsed.start_offset + 1] == 0x14);
  CHECK(blob[parsed.end_offset - 4] == 0xCA);
  CHECK(blob[parsed.end_offset - 3] == 0x50);
}

TEST_CASE("parse_record rejects a non-header offset") {
  byte_vec bytes = {0x00, 0x00, 0x01, 0x02};
  auto rp = parse_record(bytes, 0);
  CHECK(!rp.ok);
  CHECK(rp.err == errc::no_record_header);
}

TEST_CASE("round trip: parse(build(records)) == records") {
  testutil::RecordGen gen(0x5eed0002);
  for (int iter = 0; iter < 200; ++iter) {
    auto records = gen.random_records(1, 8);
    byte_vec blob = synth::build_shellactivities_blob(UtcTime{2020, 1, 2, 3, 4, 5, 0}, records);
    ShellActivityLog log = parse_shellactivities(blob);
    REQUIRE(log.records.size() == records.size());
    for (size_t i = 0; i < records.size(); ++i) {
      CAPTURE(iter);
      CAPTURE(i);
      CHECK(log.records[i].same_fields(records[i]));
    }
    CHECK(log.trailing.empty());
    CHECK(log.warnings.empty());
  }
}

TEST_CASE("lossless decomposition: header + extents + trailing reconstruct the blob") {
  testutil::RecordGen gen(0x5eed0003);
  auto records = gen.random_records(3, 6);
  byte_vec blob = synth::build_shellactivities_blob(UtcTime{2019, 6, 1, 0, 0, 0, 0}, records);
  // splice unparseable spans between records: after the header and at the end
  byte_vec spliced(blob.begin(), blob.begin() + kLogHeaderSize);
  byte_vec junk = {0xD2, 0x14, 0x41, 0x42, 0x43};  // header with no structure behind it
  spliced.insert(spliced.end(), junk.begin(), junk.end());
  spliced.insert(spliced.end(), blob.begin() + kLogHeaderSize, blob.end());
  byte_vec tail = {0x01, 0x02, 0x03};
  spliced.insert(spliced.end(), tail.begin(), tail.end());

  ShellActivityLog log = parse_shellactivities(spliced);
  CHECK(log.records.size() == records.size());
  CHECK(!log.warnings.empty());

  // reassemble: header, then records and trailing spans sorted by offset
  struct Piece {
    uint64_t offset;
    byte_vec bytes;
  };
  std::vector<Piece> pieces;
  for (const auto& rec : log.records) {
    pieces.push_back({rec.start_offset, byte_vec(spliced.begin() + rec.start_offset,
                                                 spliced.begin() + rec.end_offset)});
  }
  for (const auto& span : log.trailing) pieces.push_back({span.offset, span.bytes});
  std::sort(pieces.begin(), pieces.end(),
            [](const Piece& a, const Piece& b) { return a.offset < b.offset; });
  byte_vec rebuilt(spliced.begin(), spliced.begin() + kLogHeaderSize);
  for (const auto& piece : pieces) {
    CHECK(rebuilt.size() == piece.offset);
    rebuilt.insert(rebuilt.end(), piece.bytes.begin(), piece.bytes.end());
  }
  CHECK(rebuilt == spliced);
}

TEST_CASE("a corrupt span never swallows the record that follows it") {
  testutil::RecordGen gen(0x5eed0004);
  auto rec = gen.random_record();
  byte_vec blob = synth::build_shellactivities_blob(UtcTime{2021, 5, 5, 5, 5, 5, 0}, {&rec, 1});
  byte_vec corrupted(blob.begin(), blob.begin() + kLogHeaderSize);
  byte_vec junk = {0xD2, 0x14, 0x99, 0x98, 0x97, 0x96};
  corrupted.insert(corrupted.end(), junk.begin(), junk.end());
  corrupted.insert(corrupted.end(), blob.begin() + kLogHeaderSize, blob.end());

  ShellActivityLog log = parse_shellactivities(corrupted);
  REQUIRE(log.records.size() == 1);
  CHECK(log.records[0].same_fields(rec));
  REQUIRE(log.trailing.size() == 1);
  CHECK(log.trailing[0].bytes == junk);
}

TEST_CASE("classification rule table") {
  auto standard = classify_path(testutil::kStandardTorPath);
  CHECK(standard.kind == BrowserKind::TorStandard);
  REQUIRE(standard.username.has_value());
  CHECK(*standard.username == "40187070");
  REQUIRE(standard.drive_letter.has_value());
  CHECK(*standard.drive_letter == 'C');
  REQUIRE(standard.install_dir.has_value());
  CHECK(*standard.install_dir == "C:\\Users\\40187070\\Desktop\\Tor Browser");

  auto portable = classify_path(testutil::kPortableTorPath);
  CHECK(portable.kind == BrowserKind::TorPortable);
  CHECK(!portable.username.has_value());
  REQUIRE(portable.drive_letter.has_value());
  CHECK(*portable.drive_letter == 'E');

  auto firefox = classify_path("C:\\Program Files\\Mozilla Firefox\\firefox.exe");
  CHECK(firefox.kind == BrowserKind::FirefoxOther);

  CHECK(classify_path("C:\\Windows\\notepad.exe").kind == BrowserKind::Unknown);
  CHECK(classify_path("").kind == BrowserKind::Unknown);
  // case-insensitive matching
  CHECK(classify_path("c:\\users\\x\\desktop\\TOR BROWSER\\browser\\FIREFOX.EXE").kind ==
        BrowserKind::TorStandard);
}

TEST_CASE("classification invariant: tor kinds imply the Tor Browser segment") {
  testutil::RecordGen gen(0x5eed0005);
  for (int i = 0; i < 500; ++i) {
    std::string path = gen.random_string(1, 60);
    auto attr = classify_path(path);
    if (attr.kind == BrowserKind::TorStandard || attr.kind == BrowserKind::TorPortable) {
      CHECK(contains_ci(path, "Tor Browser"));
    }
  }
  // totality: never throws, always yields one of the four kinds
  CHECK(classify_path("\\\\\\").kind == BrowserKind::Unknown);
}

TEST_CASE("title suffix strip") {
  auto hit = strip_browser_suffix(testutil::kSoundcloudTitle);
  REQUIRE(hit.suffix.has_value());
  CHECK(*hit.suffix == " - Tor Browser");
  CHECK(hit.clean ==
        "Monolake Live at Ego D\u00fcsseldorf June 5 1999 by monolake | Free Listening on "
        "SoundCloud");
  auto miss = strip_browser_suffix("plain title");
  CHECK(!miss.suffix.has_value());
  CHECK(miss.clean == "plain title");
  auto empty = strip_browser_suffix("");
  CHECK(!empty.suffix.has_value());
  CHECK(empty.clean.empty());

  const std::vector<std::string> suffixes = {" - Tor Browser",
                                             " \u2014 Mozilla Firefox (Private Browsing)"};
  auto ff = strip_browser_suffix(
      "Example \u2014 Mozilla Firefox (Private Browsing)", suffixes);
  REQUIRE(ff.suffix.has_value());
  CHECK(ff.clean == "Example");
}

TEST_CASE("trailer timestamp hint stays silent for the observed constants") {
  // with the trailing constant as high half, candidate instants land decades
  // after the data; the hint must not manufacture a timestamp
  CHECK(!trailer_timestamp_hint({0x01, 0x02, 0x03, 0x04, 0x05}).has_value());
  CHECK(!trailer_timestamp_hint({0xFF, 0xFF, 0xFF, 0xFF, 0xFF}).has_value());
}

TEST_CASE("undecodable string spans are preserved raw") {
  // hand-built record whose string spans defeat both decoders: odd length
  // kills UTF-16LE, a lone continuation byte kills UTF-8
  byte_vec rec = {0xD2, 0x14, 0x39};
  rec.push_back(0x82);  // exe_path span
  rec.insert(rec.end(), kMidMarker, kMidMarker + 8);
  rec.push_back(0x83);  // exe_name span
  rec.insert(rec.end(), {0xD2, 0x28, 0x01});
  rec.push_back(0x81);  // page_title span
  rec.insert(rec.end(), {0xC6, 0x32, 1, 2, 3, 4, 5});
  rec.insert(rec.end(), kTrailerConst, kTrailerConst + 4);
  rec.insert(rec.end(), {0xC6, 0x3C, 6, 7, 8, 9, 10});
  rec.insert(rec.end(), kTrailerConst, kTrailerConst + 4);
  rec.insert(rec.end(), kRecordFooter, kRecordFooter + 4);

  auto rp = parse_record(rec, 0);
  REQUIRE(rp.ok);
  CHECK(rp.record.undecoded);
  CHECK(rp.record.exe_path.empty());
  CHECK(rp.record.exe_path_raw == byte_vec{0x82});
  CHECK(rp.record.exe_name_raw == byte_vec{0x83});
  CHECK(rp.record.page_title_raw == byte_vec{0x81});
  CHECK(rp.next_offset == rec.size());
}
