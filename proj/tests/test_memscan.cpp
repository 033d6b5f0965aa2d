// Copyright (c) 2026 The torsift authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "test_util.hpp"
#include "torsift/memscan.hpp"
#include "torsift/synth.hpp"

using namespace torsift;
using namespace torsift::memscan;

namespace {

byte_vec image_with(std::vector<synth::Plant> plants, uint64_t seed) {
  synth::PlantManifest m;
  m.seed = seed;
  m.stream_length = 1 << 20;
  m.plants = std::move(plants);
  return synth::plant_in_noise(m);
}

}  // namespace

TEST_CASE("verdict rule table is a pure function of the hit sets") {
  // tor path alone confirms
  CHECK(verdict_for(1, 0, 0, 0) == Verdict::TorConfirmed);
  // both tor.exe and obfs4proxy.exe confirm
  CHECK(verdict_for(0, 0, 1, 1) == Verdict::TorConfirmed);
  CHECK(verdict_for(0, 5, 2, 3) == Verdict::TorConfirmed);
  // firefox with no tor evidence at all
  CHECK(verdict_for(0, 2, 0, 0) == Verdict::FirefoxOnly);
  // tor.exe without corroboration is inconclusive, not firefox-only
  CHECK(verdict_for(0, 1, 1, 0) == Verdict::NoIndicators);
  CHECK(verdict_for(0, 0, 0, 1) == Verdict::NoIndicators);
  CHECK(verdict_for(0, 0, 0, 0) == Verdict::NoIndicators);
}

TEST_CASE("full tor footprint confirms and surfaces the username") {
  auto image = image_with(
      {synth::Plant::text(1000, "tor.exe", StringEncoding::utf8),
       synth::Plant::text(2000, "obfs4proxy.exe", StringEncoding::utf16le),
       synth::Plant::text(3000, testutil::kStandardTorPath, StringEncoding::utf16le),
       synth::Plant::text(5000, "firefox.exe", StringEncoding::utf8),
       synth::Plant::text(6000, "firefox.exe", StringEncoding::utf16le)},
      201);
  auto mf = scan_memory_image(image, SignatureDb::defaults());
  CHECK(mf.verdict == Verdict::TorConfirmed);
  REQUIRE(mf.tor_path_hits.size() == 1);
  REQUIRE(mf.tor_path_hits[0].attribution.username.has_value());
  CHECK(*mf.tor_path_hits[0].attribution.username == "40187070");
  // two firefox.exe occurrences show up as a count, phrased as presence
  CHECK(mf.process_name_hits.at("firefox.exe").size() == 3);  // path plant contains one too
  CHECK(mf.process_name_hits.at("tor.exe").size() == 1);
  CHECK(mf.process_name_hits.at("obfs4proxy.exe").size() == 1);
  bool phrased_as_presence = false;
  for (const auto& note : mf.notes) {
    CHECK(note.find("running") == std::string::npos);
    if (note.find("present") != std::string::npos) phrased_as_presence = true;
  }
  CHECK(phrased_as_presence);
}

TEST_CASE("firefox-only image") {
  auto image = image_with({synth::Plant::text(4096, "firefox.exe", StringEncoding::utf8)}, 202);
  auto mf = scan_memory_image(image, SignatureDb::defaults());
  CHECK(mf.verdict == Verdict::FirefoxOnly);
  CHECK(mf.tor_path_hits.empty());
}

TEST_CASE("empty stream has no indicators") {
  byte_vec empty;
  auto mf = scan_memory_image(empty, SignatureDb::defaults());
  CHECK(mf.verdict == Verdict::NoIndicators);
  CHECK(mf.tor_path_hits.empty());
  for (const auto& [name, offsets] : mf.process_name_hits) CHECK(offsets.empty());
}

TEST_CASE("scan equals the composition of its constituent scans") {
  auto image = image_with(
      {synth::Plant::text(1000, "tor.exe", StringEncoding::utf8),
       synth::Plant::text(9000, testutil::kPortableTorPath, StringEncoding::utf8)},
      203);
  const auto db = SignatureDb::defaults();
  auto mf = scan_memory_image(image, db);
  auto keyword_hits = carve::keyword_scan(image, db.process_names);
  auto path_hits = carve::find_tor_paths(image, db.path_patterns);
  size_t total = 0;
  for (const auto& [name, offsets] : mf.process_name_hits) total += offsets.size();
  CHECK(total == keyword_hits.size());
  CHECK(mf.tor_path_hits.size() == path_hits.size());
  CHECK(mf.verdict == Verdict::TorConfirmed);  // path hit alone confirms
}
