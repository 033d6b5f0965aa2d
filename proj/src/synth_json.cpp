// Copyright (c) 2026 The torsift authors
// SPDX-License-Identifier: Apache-2.0
//
// Fixture descriptions as flat JSON manifests, so every binary test input
// is regenerable and auditable instead of being a checked-in blob.

#include <json.hpp>

#include "torsift/errors.hpp"
#include "torsift/synth.hpp"

namespace torsift::synth {

namespace {

using nlohmann::json;

json parse_object(std::string_view text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    raise(errc::invalid_config, std::string(what) + " is not a JSON object");
  }
  return j;
}

StringEncoding encoding_from(const json& j, const char* field, StringEncoding fallback) {
  if (!j.contains(field)) return fallback;
  const std::string name = j.at(field).get<std::string>();
  if (name == "utf16le") return StringEncoding::utf16le;
  if (name == "utf8" || name == "ascii") return StringEncoding::utf8;
  raise(errc::invalid_config, std::string("unknown encoding: ") + name);
}

uint8_t byte_field(const json& j, const char* field, uint8_t fallback) {
  if (!j.contains(field)) return fallback;
  const auto v = j.at(field).get<uint64_t>();
  if (v > 0xFF) raise(errc::invalid_config, std::string(field) + " must fit one byte");
  return static_cast<uint8_t>(v);
}

std::array<uint8_t, 5> five_bytes(const json& j, const char* field,
                                  const std::array<uint8_t, 5>& fallback) {
  if (!j.contains(field)) return fallback;
  byte_vec raw = from_hex(j.at(field).get<std::string>());
  if (raw.size() != 5) raise(errc::invalid_config, std::string(field) + " must be 5 bytes");
  std::array<uint8_t, 5> out{};
  std::copy(raw.begin(), raw.end(), out.begin());
  return out;
}

shellact::ShellActivityRecord record_from(const json& j) {
  shellact::ShellActivityRecord rec;
  rec.encoding = encoding_from(j, "encoding", StringEncoding::utf16le);
  rec.exe_path = j.value("exe_path", std::string());
  rec.exe_name = j.value("exe_name", std::string());
  rec.page_title = j.value("page_title", std::string());
  // Default type byte mirrors the observed length relationship.
  const uint8_t default_type =
      static_cast<uint8_t>(std::min<size_t>(rec.exe_path.size(), 0xFF));
  rec.type_byte = byte_field(j, "type_byte", default_type);
  rec.d228_byte = byte_field(j, "d228_byte", 0x01);
  rec.trailer_a5 = five_bytes(j, "trailer_a5", {0x10, 0x21, 0x32, 0x43, 0x54});
  rec.trailer_b5 = five_bytes(j, "trailer_b5", {0x65, 0x76, 0x07, 0x18, 0x29});
  return rec;
}

UtcTime time_from(const json& j, const char* field) {
  const std::string text = j.value(field, std::string("2018-04-03T14:09:47Z"));
  auto t = parse_utc(text);
  if (!t) raise(errc::invalid_config, "unparseable instant: " + text);
  return *t;
}

byte_vec blob_from(const json& j) {
  std::vector<shellact::ShellActivityRecord> records;
  if (j.contains("records")) {
    for (const auto& r : j.at("records")) records.push_back(record_from(r));
  }
  std::array<uint8_t, 8> values = shellact::kDefaultHeaderValues;
  if (j.contains("values_hex")) {
    byte_vec raw = from_hex(j.at("values_hex").get<std::string>());
    if (raw.size() != 8) raise(errc::invalid_config, "values_hex must be 8 bytes");
    std::copy(raw.begin(), raw.end(), values.begin());
  }
  return build_shellactivities_blob(time_from(j, "time"), records, values);
}

}  // namespace

byte_vec blob_from_json_text(std::string_view json_text) {
  return blob_from(parse_object(json_text, "blob manifest"));
}

std::vector<HiveEntry> hive_entries_from_json_text(std::string_view json_text) {
  json j = parse_object(json_text, "hive manifest");
  if (!j.contains("entries") || !j["entries"].is_array()) {
    raise(errc::invalid_config, "hive manifest needs an entries array");
  }
  std::vector<HiveEntry> entries;
  for (const auto& e : j["entries"]) {
    HiveEntry entry;
    entry.path = e.value("path", std::string());
    if (e.contains("values")) {
      for (const auto& v : e.at("values")) {
        HiveValue value;
        value.name = v.value("name", std::string());
        value.reg_type = v.value("type", 3u);
        if (v.contains("data_hex")) {
          value.data = from_hex(v.at("data_hex").get<std::string>());
        } else if (v.contains("data_text_utf16")) {
          value.data = utf8_to_utf16le(v.at("data_text_utf16").get<std::string>());
        } else if (v.contains("blob")) {
          value.data = blob_from(v.at("blob"));
        }
        entry.values.push_back(std::move(value));
      }
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

PlantManifest manifest_from_json_text(std::string_view json_text) {
  json j = parse_object(json_text, "plant manifest");
  PlantManifest m;
  m.seed = j.value("seed", 0ull);
  if (!j.contains("length")) raise(errc::invalid_config, "plant manifest needs a length");
  m.stream_length = j.at("length").get<uint64_t>();
  if (j.contains("plants")) {
    for (const auto& p : j.at("plants")) {
      if (!p.contains("offset")) raise(errc::invalid_config, "plant needs an offset");
      const uint64_t offset = p.at("offset").get<uint64_t>();
      const std::string kind = p.value("kind", std::string("text"));
      if (kind == "text") {
        const StringEncoding enc = encoding_from(p, "encoding", StringEncoding::utf8);
        m.plants.push_back(Plant::text(offset, p.at("text").get<std::string>(), enc,
                                       p.value("guard", true)));
      } else if (kind == "bytes") {
        m.plants.push_back(Plant::bytes(offset, from_hex(p.at("hex").get<std::string>())));
      } else if (kind == "record") {
        m.plants.push_back(Plant::record(offset, record_from(p)));
      } else if (kind == "blob") {
        m.plants.push_back(Plant::bytes(offset, blob_from(p), "blob"));
      } else {
        raise(errc::invalid_config, "unknown plant kind: " + kind);
      }
    }
  }
  return m;
}

}  // namespace torsift::synth
