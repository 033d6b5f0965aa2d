// Copyright (c) 2026 The torsift authors
// SPDX-License-Identifier: Apache-2.0
//
// Exercises the shared-library C surface end to end: handles, error codes,
// buffer ownership, and the JSON payloads the CLI consumes.

#include <doctest.h>

#include <cstdio>
#include <string>

#include <json.hpp>

#include "test_util.hpp"
#include "torsift/hive.hpp"
#include "torsift/synth.hpp"
#include "torsift/torsift.h"

using namespace torsift;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name, const byte_vec& bytes) : path(name) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    REQUIRE(f != nullptr);
    if (!bytes.empty()) std::fwrite(bytes.data(), 1, bytes.size(), f);
    std::fclose(f);
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("version, status names and argument validation") {
  CHECK(std::string(torsift_version()).find("torsift") == 0);
  CHECK(std::string(torsift_status_name(TORSIFT_OK)) == "ok");
  CHECK(std::string(torsift_status_name(TORSIFT_ERR_CONFIG)) == "invalid_config");
  CHECK(std::string(torsift_status_name(999)) == "unknown");

  CHECK(torsift_db_default(nullptr) == TORSIFT_ERR_INVALID_ARG);
  CHECK(std::string(torsift_last_error()).size() > 0);
  torsift_hive* hv = nullptr;
  CHECK(torsift_hive_open_file(nullptr, &hv) == TORSIFT_ERR_INVALID_ARG);
}

TEST_CASE("db handles") {
  torsift_db* db = nullptr;
  REQUIRE(torsift_db_default(&db) == TORSIFT_OK);
  char* json = nullptr;
  REQUIRE(torsift_db_json(db, &json) == TORSIFT_OK);
  auto j = nlohmann::json::parse(json);
  CHECK(j["process_names"].size() == 3);
  CHECK(j["keywords"][0] == "Tor Browser");
  torsift_free(json);
  torsift_db_free(db);

  torsift_db* missing = nullptr;
  CHECK(torsift_db_load("/no/such/db.json", &missing) == TORSIFT_ERR_IO);
  CHECK(missing == nullptr);
}

TEST_CASE("hive surface over builder-produced bytes") {
  auto rec = testutil::paper_record();
  byte_vec blob =
      synth::build_shellactivities_blob(UtcTime{2018, 4, 3, 14, 9, 47, 0}, {&rec, 1});
  std::vector<synth::HiveEntry> entries = {
      {testutil::kShellactivitiesKeyPath, {{"Data", hive::REG_BINARY, blob}}}};
  byte_vec image = synth::build_minimal_hive(entries);

  torsift_hive* hv = nullptr;
  REQUIRE(torsift_hive_open_bytes(image.data(), image.size(), &hv) == TORSIFT_OK);

  char* ls = nullptr;
  REQUIRE(torsift_hive_ls(hv, "", &ls) == TORSIFT_OK);
  auto lj = nlohmann::json::parse(ls);
  CHECK(lj["subkeys"].size() == 1);
  CHECK(lj["subkeys"][0]["name"] == "Software");
  torsift_free(ls);

  char* found = nullptr;
  REQUIRE(torsift_hive_find_keys(hv, "shellactivities", &found) == TORSIFT_OK);
  auto fj = nlohmann::json::parse(found);
  REQUIRE(fj["paths"].size() == 1);
  torsift_free(found);

  uint8_t* data = nullptr;
  size_t len = 0;
  REQUIRE(torsift_hive_read_value(hv, testutil::kShellactivitiesKeyPath, "Data", &data,
                                  &len) == TORSIFT_OK);
  CHECK(byte_vec(data, data + len) == blob);

  char* parsed = nullptr;
  REQUIRE(torsift_shellact_parse(data, len, TORSIFT_FORMAT_MACHINE, &parsed) == TORSIFT_OK);
  auto pj = nlohmann::json::parse(parsed);
  CHECK(pj["header_timestamp"] == "2018-04-03T14:09:47Z");
  REQUIRE(pj["records"].size() == 1);
  CHECK(pj["records"][0]["exe_path"] == testutil::kStandardTorPath);
  CHECK(pj["records"][0]["attribution"]["kind"] == "tor_standard");
  CHECK(pj["records"][0]["attribution"]["username"] == "40187070");
  torsift_free(parsed);
  torsift_free(data);

  CHECK(torsift_hive_ls(hv, "No\\Such\\Key", &ls) == TORSIFT_ERR_NOT_FOUND);
  torsift_hive_free(hv);

  torsift_hive* bad = nullptr;
  byte_vec junk(100, 0);
  CHECK(torsift_hive_open_bytes(junk.data(), junk.size(), &bad) == TORSIFT_ERR_MALFORMED);
  CHECK(std::string(torsift_last_error()).find("base block") != std::string::npos);
}

TEST_CASE("shellact parse error mapping") {
  byte_vec bad = {0x01, 0x00, 0x00, 0x00};
  char* out = nullptr;
  CHECK(torsift_shellact_parse(bad.data(), bad.size(), TORSIFT_FORMAT_MACHINE, &out) ==
        TORSIFT_ERR_BAD_HEADER);
}

TEST_CASE("file-based carve, memscan and the full case run") {
  synth::PlantManifest mraw;
  mraw.seed = 401;
  mraw.stream_length = 1 << 19;
  mraw.plants = {
      synth::Plant::text(4096, "obfs4 192.0.2.7:443", StringEncoding::utf8),
      synth::Plant::text(9000, testutil::kPortableTorPath, StringEncoding::utf16le),
  };
  TempFile raw("capi_raw.bin", synth::plant_in_noise(mraw));

  synth::PlantManifest mmem;
  mmem.seed = 402;
  mmem.stream_length = 1 << 19;
  mmem.plants = {
      synth::Plant::text(1000, "tor.exe", StringEncoding::utf8),
      synth::Plant::text(2000, "obfs4proxy.exe", StringEncoding::utf8),
  };
  TempFile mem("capi_mem.bin", synth::plant_in_noise(mmem));

  auto rec = testutil::paper_record();
  byte_vec blob =
      synth::build_shellactivities_blob(UtcTime{2018, 4, 3, 14, 9, 47, 0}, {&rec, 1});
  std::vector<synth::HiveEntry> entries = {
      {testutil::kShellactivitiesKeyPath, {{"Data", hive::REG_BINARY, blob}}}};
  TempFile hive_file("capi_hive.dat", synth::build_minimal_hive(entries));

  struct torsift_scan_options opts;
  torsift_scan_options_init(&opts);
  CHECK(opts.max_record_len == 64 * 1024);

  char* carved = nullptr;
  REQUIRE(torsift_carve_file(raw.path.c_str(), nullptr, &opts, TORSIFT_FORMAT_MACHINE,
                             &carved) == TORSIFT_OK);
  auto cj = nlohmann::json::parse(carved);
  CHECK(cj["endpoint_hits"].size() == 1);
  CHECK(cj["path_hits"].size() == 1);
  torsift_free(carved);

  char* triage = nullptr;
  REQUIRE(torsift_memscan_file(mem.path.c_str(), nullptr, &opts, TORSIFT_FORMAT_MACHINE,
                               &triage) == TORSIFT_OK);
  auto tj = nlohmann::json::parse(triage);
  CHECK(tj["verdict"] == "tor_confirmed");
  torsift_free(triage);

  const std::string config = std::string("{\"case_id\": \"capi-case\", \"sources\": [") +
                             "{\"id\": \"hive1\", \"role\": \"hive\", \"path\": \"" +
                             hive_file.path + "\"}," +
                             "{\"id\": \"mem1\", \"role\": \"memory\", \"path\": \"" + mem.path +
                             "\"}," + "{\"id\": \"raw1\", \"role\": \"raw\", \"path\": \"" +
                             raw.path + "\"}]}";
  char* report = nullptr;
  REQUIRE(torsift_run_case(config.c_str(), ".", nullptr, nullptr, "2026-01-02T03:04:05Z",
                           &opts, TORSIFT_FORMAT_MACHINE, &report) == TORSIFT_OK);
  auto rj = nlohmann::json::parse(report);
  CHECK(rj["case_id"] == "capi-case");
  CHECK(rj["inputs"].size() == 3);
  CHECK(!rj["findings"].empty());
  char* report2 = nullptr;
  REQUIRE(torsift_run_case(config.c_str(), ".", nullptr, nullptr, "2026-01-02T03:04:05Z",
                           &opts, TORSIFT_FORMAT_MACHINE, &report2) == TORSIFT_OK);
  CHECK(std::string(report) == report2);  // byte-identical reruns
  torsift_free(report);
  torsift_free(report2);

  // missing report time is a usage error: determinism is not optional
  char* nope = nullptr;
  CHECK(torsift_run_case(config.c_str(), ".", nullptr, nullptr, nullptr, &opts,
                         TORSIFT_FORMAT_MACHINE, &nope) == TORSIFT_ERR_INVALID_ARG);
}

TEST_CASE("synth through the C surface") {
  const char* blob_manifest = R"({"time": "2018-04-03T14:09:47Z", "records": []})";
  uint8_t* data = nullptr;
  size_t len = 0;
  REQUIRE(torsift_synth("blob", blob_manifest, nullptr, &data, &len) == TORSIFT_OK);
  CHECK(len == 0x18);
  CHECK(data[0] == 0x02);
  torsift_free(data);

  CHECK(torsift_synth("nonsense", "{}", nullptr, &data, &len) == TORSIFT_ERR_CONFIG);

  const char* noise_manifest = R"({"seed": 9, "length": 65536, "plants": [
    {"offset": 4096, "kind": "text", "encoding": "ascii", "text": "obfs4"}]})";
  REQUIRE(torsift_synth("noise", noise_manifest, nullptr, &data, &len) == TORSIFT_OK);
  CHECK(len == 65536);
  torsift_free(data);

  const char* hive_manifest = R"({"entries": [{"path": "Software", "values": []}]})";
  REQUIRE(torsift_synth("hive", hive_manifest, nullptr, &data, &len) == TORSIFT_OK);
  CHECK(len >= 8192);
  CHECK(data[0] == 'r');
  torsift_free(data);
}
