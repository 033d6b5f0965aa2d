// Copyright (c) 2026 The torsift authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <json.hpp>

#include "test_util.hpp"
#include "torsift/pipeline.hpp"
#include "torsift/synth.hpp"

using namespace torsift;
using namespace torsift::pipeline;

namespace {

const UtcTime kReportTime{2026, 1, 2, 3, 4, 5, 0};

byte_vec fixture_hive(bool with_audio = true) {
  shellact::ShellActivityRecord standard = testutil::paper_record();
  shellact::ShellActivityRecord portable = testutil::paper_record();
  portable.exe_path = testutil::kPortableTorPath;
  portable.page_title = "Nike Air Force 1 | eBay - Tor Browser";
  byte_vec blob = synth::build_shellactivities_blob(UtcTime{2018, 4, 3, 14, 9, 47, 0},
                                                    std::vector{standard, portable});
  std::vector<synth::HiveEntry> entries = {
      {testutil::kShellactivitiesKeyPath, {{"Data", hive::REG_BINARY, blob}}}};
  if (with_audio) {
    entries.push_back(
        {testutil::kAudioKeyPath,
         {{"{device}", hive::REG_BINARY,
           utf8_to_utf16le("\\Device\\...\\Tor Browser\\Browser\\firefox.exe")}}});
  }
  return synth::build_minimal_hive(entries);
}

byte_vec fixture_memory() {
  synth::PlantManifest m;
  m.seed = 301;
  m.stream_length = 1 << 20;
  m.plants = {
      synth::Plant::text(1000, "tor.exe", StringEncoding::utf8),
      synth::Plant::text(2000, "obfs4proxy.exe", StringEncoding::utf8),
      synth::Plant::text(3000, testutil::kStandardTorPath, StringEncoding::utf16le),
  };
  return synth::plant_in_noise(m);
}

byte_vec fixture_raw() {
  synth::PlantManifest m;
  m.seed = 302;
  m.stream_length = 1 << 20;
  m.plants = {
      synth::Plant::text(4096, "obfs4 192.0.2.7:443", StringEncoding::utf8),
      synth::Plant::text(9000, testutil::kPortableTorPath, StringEncoding::utf16le),
      synth::Plant::text(20000, "https://soundcloud.com/monolake/liveego1999",
                         StringEncoding::utf8),
  };
  return synth::plant_in_noise(m);
}

std::vector<CaseSource> full_case() {
  return {
      CaseSource::from_bytes("hive1", SourceRole::Hive, fixture_hive()),
      CaseSource::from_bytes("mem1", SourceRole::Memory, fixture_memory()),
      CaseSource::from_bytes("raw1", SourceRole::Raw, fixture_raw()),
  };
}

bool has_category(const ForensicReport& r, Category c) {
  for (const auto& f : r.findings) {
    if (f.category == c) return true;
  }
  return false;
}

const Finding* finding_with_text(const ForensicReport& r, Category c, const std::string& text) {
  for (const auto& f : r.findings) {
    if (f.category != c) continue;
    for (const auto& ev : f.evidence) {
      if (ev.text.find(text) != std::string::npos) return &f;
    }
  }
  return nullptr;
}

}  // namespace

TEST_CASE("full methodology run over the synthesized case") {
  auto sources = full_case();
  auto report = run_methodology(sources, SignatureDb::defaults(), "case-001", kReportTime);

  CHECK(report.case_id == "case-001");
  CHECK(report.generated_at == "2026-01-02T03:04:05Z");
  REQUIRE(report.inputs.size() == 3);
  for (const auto& input : report.inputs) {
    CHECK(input.sha256.size() == 64);
    CHECK(input.length > 0);
  }

  CHECK(has_category(report, Category::TorPresence));
  CHECK(has_category(report, Category::TorPortableMode));
  CHECK(has_category(report, Category::BrowsingActivity));
  CHECK(has_category(report, Category::BridgingEndpoint));
  CHECK(has_category(report, Category::AudioCorroboration));

  // both planted titles surface as browsing activity
  CHECK(finding_with_text(report, Category::BrowsingActivity,
                          "Monolake Live at Ego D\u00fcsseldorf June 5 1999") != nullptr);
  CHECK(finding_with_text(report, Category::BrowsingActivity, "Nike Air Force 1") != nullptr);
  // the bridging endpoint carries the planted address
  CHECK(finding_with_text(report, Category::BridgingEndpoint, "192.0.2.7:443") != nullptr);
  // username surfaces from the memory path hit
  const Finding* presence = finding_with_text(report, Category::TorPresence, "40187070");
  CHECK(presence != nullptr);

  // the portable path appears in two sources, so it must be corroborated
  const Finding* portable =
      finding_with_text(report, Category::TorPortableMode, testutil::kPortableTorPath);
  REQUIRE(portable != nullptr);
  CHECK(portable->confidence == Confidence::Corroborated);

  // every finding carries evidence
  for (const auto& f : report.findings) CHECK(!f.evidence.empty());

  // findings are ordered by category
  for (size_t i = 1; i < report.findings.size(); ++i) {
    CHECK(static_cast<int>(report.findings[i - 1].category) <=
          static_cast<int>(report.findings[i].category));
  }

  SUBCASE("evidence re-validation passes and detects tampering") {
    auto rv = revalidate(report, sources);
    CHECK(rv.ok);
    CHECK(rv.failures.empty());

    auto tampered = sources;
    tampered[2].bytes[4097] ^= 0xFF;  // flip a byte inside the obfs4 plant
    auto rv2 = revalidate(report, tampered);
    CHECK(!rv2.ok);
    CHECK(!rv2.failures.empty());
  }

  SUBCASE("rendering is deterministic and machine output is valid json") {
    auto once = render_report(report, ReportFormat::Machine);
    auto twice = render_report(report, ReportFormat::Machine);
    CHECK(once == twice);
    auto human_once = render_report(report, ReportFormat::Human);
    auto human_twice = render_report(report, ReportFormat::Human);
    CHECK(human_once == human_twice);

    auto j = nlohmann::json::parse(once);
    CHECK(j["schema_version"] == "1");
    CHECK(j["case_id"] == "case-001");
    CHECK(j["tool_version"].get<std::string>().find("torsift") == 0);
    CHECK(j["inputs"].size() == 3);
    CHECK(j["findings"].is_array());
    CHECK(!j["findings"].empty());
    CHECK(j["skipped_steps"].is_array());
    for (const auto& fj : j["findings"]) {
      CHECK(fj.contains("category"));
      CHECK(fj.contains("confidence"));
      CHECK(!fj["evidence"].empty());
      for (const auto& ej : fj["evidence"]) {
        CHECK(ej["sha256"].get<std::string>().size() == 64);
        CHECK(ej["offset"].is_number());
      }
    }

    CHECK(human_once.find("TOR PRESENCE") != std::string::npos);
    CHECK(human_once.find("192.0.2.7") != std::string::npos);

    // a second identical run produces byte-identical output
    auto report2 = run_methodology(sources, SignatureDb::defaults(), "case-001", kReportTime);
    CHECK(render_report(report2, ReportFormat::Machine) == once);
  }

  SUBCASE("findings are monotone when a source is added") {
    std::vector<CaseSource> fewer = {sources[0]};
    auto small = run_methodology(fewer, SignatureDb::defaults(), "case-001", kReportTime);
    for (const auto& f : small.findings) {
      bool present = false;
      for (const auto& g : report.findings) {
        if (g.category == f.category && !f.evidence.empty() && !g.evidence.empty() &&
            g.evidence.front().source_id == f.evidence.front().source_id &&
            g.evidence.front().offset == f.evidence.front().offset) {
          present = true;
          break;
        }
      }
      CHECK(present);
    }
  }
}

TEST_CASE("empty case: one empty raw source") {
  std::vector<CaseSource> sources = {CaseSource::from_bytes("raw0", SourceRole::Raw, {})};
  auto report = run_methodology(sources, SignatureDb::defaults(), "empty", kReportTime);
  CHECK(report.findings.empty());
  for (const auto& s : report.skipped_steps) {
    CHECK(s.step.find("hive") == std::string::npos);  // no hive step listed: none supplied
  }
}

TEST_CASE("hive-only case records the skipped memory step") {
  std::vector<CaseSource> sources = {
      CaseSource::from_bytes("hive1", SourceRole::Hive, fixture_hive())};
  auto report = run_methodology(sources, SignatureDb::defaults(), "hive-only", kReportTime);
  bool memory_skip = false;
  for (const auto& s : report.skipped_steps) {
    if (s.step == "memory-triage" && s.reason == "no memory source supplied") {
      memory_skip = true;
    }
  }
  CHECK(memory_skip);
  CHECK(has_category(report, Category::BrowsingActivity));
}

TEST_CASE("degenerate inputs demote to skipped steps, never abort") {
  std::vector<CaseSource> sources = {
      CaseSource::from_bytes("bad-hive", SourceRole::Hive, byte_vec(64, 0)),
      CaseSource::from_bytes("raw1", SourceRole::Raw, fixture_raw()),
  };
  auto report = run_methodology(sources, SignatureDb::defaults(), "degenerate", kReportTime);
  bool hive_skipped = false;
  for (const auto& s : report.skipped_steps) {
    if (s.step == "hive-extraction:bad-hive") hive_skipped = true;
  }
  CHECK(hive_skipped);
  CHECK(has_category(report, Category::BridgingEndpoint));  // the raw source still ran
}

TEST_CASE("audio key corroboration") {
  SUBCASE("value containing the browser path fragment") {
    auto hv = hive::Hive::open(fixture_hive(true));
    auto findings = check_audio_key(hv, SignatureDb::defaults(), "hive1");
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].category == Category::AudioCorroboration);
    CHECK(findings[0].evidence[0].value_name == "{device}");
    CHECK(findings[0].evidence[0].text == "Tor Browser");
  }
  SUBCASE("absent key yields an empty list") {
    auto hv = hive::Hive::open(fixture_hive(false));
    CHECK(check_audio_key(hv, SignatureDb::defaults(), "hive1").empty());
  }
  SUBCASE("key present without the string yields an empty list") {
    std::vector<synth::HiveEntry> entries = {
        {testutil::kAudioKeyPath,
         {{"{device}", hive::REG_BINARY, utf8_to_utf16le("\\Device\\plain\\speaker")}}}};
    auto hv = hive::Hive::open(synth::build_minimal_hive(entries));
    CHECK(check_audio_key(hv, SignatureDb::defaults(), "hive1").empty());
  }
}

TEST_CASE("cloudstore absence becomes an environment note") {
  std::vector<synth::HiveEntry> entries = {{"Software\\Microsoft\\Windows", {}}};
  std::vector<CaseSource> sources = {CaseSource::from_bytes(
      "old-hive", SourceRole::Hive, synth::build_minimal_hive(entries))};
  auto report = run_methodology(sources, SignatureDb::defaults(), "old-windows", kReportTime);
  REQUIRE(has_category(report, Category::EnvironmentNote));
  const Finding* note = nullptr;
  for (const auto& f : report.findings) {
    if (f.category == Category::EnvironmentNote) note = &f;
  }
  REQUIRE(note != nullptr);
  bool mentions_cloudstore = false;
  for (const auto& a : note->annotations) {
    if (a.find("CloudStore") != std::string::npos) mentions_cloudstore = true;
  }
  CHECK(mentions_cloudstore);
  // absence evidence re-validates
  auto rv = revalidate(report, sources);
  CHECK(rv.ok);
}

TEST_CASE("signature db loading replaces fields, never merges") {
  auto db = SignatureDb::from_json_text(R"({"keywords": ["meek", "snowflake"]})");
  CHECK(db.keywords == std::vector<std::string>{"meek", "snowflake"});
  // untouched fields keep their defaults
  CHECK(db.process_names == SignatureDb::defaults().process_names);
  CHECK(db.title_suffixes == std::vector<std::string>{" - Tor Browser"});

  CHECK(testutil::thrown_code([] { SignatureDb::from_json_text("[1,2]"); }) ==
        errc::invalid_config);
  CHECK(testutil::thrown_code([] { SignatureDb::from_json_text(R"({"nope": []})"); }) ==
        errc::invalid_config);
  CHECK(testutil::thrown_code([] { SignatureDb::load_file("/no/such/file.json"); }) ==
        errc::io);

  const auto defaults = SignatureDb::defaults();
  REQUIRE(defaults.shellactivities_key_path() != nullptr);
  CHECK(contains_ci(*defaults.shellactivities_key_path(), "shellactivities"));
  REQUIRE(defaults.audio_key_path() != nullptr);
  CHECK(contains_ci(*defaults.audio_key_path(), "PolicyConfig"));
}

TEST_CASE("locale markers annotate matching titles") {
  shellact::ShellActivityRecord rec = testutil::paper_record();
  rec.page_title = "moog mother 32 - Google Suche - Tor Browser";
  byte_vec blob =
      synth::build_shellactivities_blob(UtcTime{2018, 4, 3, 14, 9, 47, 0}, {&rec, 1});
  std::vector<synth::HiveEntry> entries = {
      {testutil::kShellactivitiesKeyPath, {{"Data", hive::REG_BINARY, blob}}}};
  std::vector<CaseSource> sources = {
      CaseSource::from_bytes("hive1", SourceRole::Hive, synth::build_minimal_hive(entries))};

  auto db = SignatureDb::from_json_text(R"({"locale_markers": ["Suche"]})");
  auto report = run_methodology(sources, db, "locale", kReportTime);
  const Finding* f = finding_with_text(report, Category::BrowsingActivity, "Suche");
  REQUIRE(f != nullptr);
  bool annotated = false;
  for (const auto& a : f->annotations) {
    if (a.find("locale marker: Suche") != std::string::npos) annotated = true;
  }
  CHECK(annotated);

  // without the wordlist there is no locale annotation
  auto plain = run_methodology(sources, SignatureDb::defaults(), "locale", kReportTime);
  const Finding* g = finding_with_text(plain, Category::BrowsingActivity, "Suche");
  REQUIRE(g != nullptr);
  for (const auto& a : g->annotations) {
    CHECK(a.find("locale marker") == std::string::npos);
  }
}

TEST_CASE("firefox private-browsing records classify as firefox activity") {
  shellact::ShellActivityRecord rec = testutil::paper_record();
  rec.exe_path = "C:\\Program Files\\Mozilla Firefox\\firefox.exe";
  rec.page_title = "Monolake Live at Ego | SoundCloud";
  byte_vec blob =
      synth::build_shellactivities_blob(UtcTime{2018, 4, 3, 14, 9, 47, 0}, {&rec, 1});
  std::vector<synth::HiveEntry> entries = {
      {testutil::kShellactivitiesKeyPath, {{"Data", hive::REG_BINARY, blob}}}};
  std::vector<CaseSource> sources = {
      CaseSource::from_bytes("hive1", SourceRole::Hive, synth::build_minimal_hive(entries))};
  auto report = run_methodology(sources, SignatureDb::defaults(), "ff", kReportTime);
  CHECK(has_category(report, Category::FirefoxPrivateActivity));
  CHECK(!has_category(report, Category::TorPresence));
}

TEST_CASE("shellactivities located through the name-search fallback") {
  // same leaf value under a non-standard parent path
  shellact::ShellActivityRecord rec = testutil::paper_record();
  byte_vec blob =
      synth::build_shellactivities_blob(UtcTime{2018, 4, 3, 14, 9, 47, 0}, {&rec, 1});
  std::vector<synth::HiveEntry> entries = {
      {"Software\\Odd\\$$windows.data.taskflow.shellactivities\\Current",
       {{"Data", hive::REG_BINARY, blob}}}};
  std::vector<CaseSource> sources = {
      CaseSource::from_bytes("hive1", SourceRole::Hive, synth::build_minimal_hive(entries))};
  auto report = run_methodology(sources, SignatureDb::defaults(), "fallback", kReportTime);
  CHECK(has_category(report, Category::BrowsingActivity));
  CHECK(has_category(report, Category::TorPresence));
}
