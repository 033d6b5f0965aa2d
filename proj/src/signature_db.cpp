// Copyright (c) 2026 The torsift authors
// SPDX-License-Identifier: Apache-2.0

#include "torsift/signature_db.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "torsift/errors.hpp"
#include "torsift/text.hpp"

namespace torsift {

namespace {

constexpr const char* kShellactivitiesPath =
    "Software\\Microsoft\\Windows\\CurrentVersion\\CloudStore\\Store\\Cache\\DefaultAccount"
    "\\$$windows.data.taskflow.shellactivities\\Current";
constexpr const char* kAudioPolicyConfigPath =
    "Software\\Microsoft\\InternetExplorer\\LowRegistry\\Audio\\PolicyConfig\\PropertyStore";

std::vector<std::string> string_list(const nlohmann::json& j, const char* field) {
  std::vector<std::string> out;
  const auto& arr = j.at(field);
  if (!arr.is_array()) raise(errc::invalid_config, std::string(field) + " must be an array");
  for (const auto& item : arr) {
    if (!item.is_string()) {
      raise(errc::invalid_config, std::string(field) + " entries must be strings");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

}  // namespace

SignatureDb SignatureDb::defaults() {
  SignatureDb db;
  db.process_names = {"firefox.exe", "tor.exe", "obfs4proxy.exe"};
  db.path_patterns = {"Tor Browser"};
  db.keywords = {"Tor Browser", "obfs4"};
  db.title_suffixes = {" - Tor Browser"};
  db.registry_key_paths = {kShellactivitiesPath, kAudioPolicyConfigPath};
  db.locale_markers = {};
  return db;
}

SignatureDb SignatureDb::from_json_text(std::string_view json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    raise(errc::invalid_config, "signature db is not a JSON object");
  }
  SignatureDb db = defaults();
  // A present field replaces the default list outright.
  if (j.contains("process_names")) db.process_names = string_list(j, "process_names");
  if (j.contains("path_patterns")) db.path_patterns = string_list(j, "path_patterns");
  if (j.contains("keywords")) db.keywords = string_list(j, "keywords");
  if (j.contains("title_suffixes")) db.title_suffixes = string_list(j, "title_suffixes");
  if (j.contains("registry_key_paths")) {
    db.registry_key_paths = string_list(j, "registry_key_paths");
  }
  if (j.contains("locale_markers")) db.locale_markers = string_list(j, "locale_markers");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "process_names" && key != "path_patterns" && key != "keywords" &&
        key != "title_suffixes" && key != "registry_key_paths" && key != "locale_markers") {
      raise(errc::invalid_config, "unknown signature db field: " + key);
    }
  }
  return db;
}

SignatureDb SignatureDb::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(errc::io, "cannot open signature db: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string SignatureDb::to_json_text() const {
  nlohmann::ordered_json j;
  j["process_names"] = process_names;
  j["path_patterns"] = path_patterns;
  j["keywords"] = keywords;
  j["title_suffixes"] = title_suffixes;
  j["registry_key_paths"] = registry_key_paths;
  j["locale_markers"] = locale_markers;
  return j.dump(2) + "\n";
}

const std::string* SignatureDb::shellactivities_key_path() const {
  for (const auto& p : registry_key_paths) {
    if (contains_ci(p, "shellactivities")) return &p;
  }
  return registry_key_paths.empty() ? nullptr : &registry_key_paths.front();
}

const std::string* SignatureDb::audio_key_path() const {
  for (const auto& p : registry_key_paths) {
    if (contains_ci(p, "policyconfig")) return &p;
  }
  return nullptr;
}

}  // namespace torsift
