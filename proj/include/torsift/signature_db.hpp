// Copyright (c) 2026 The torsift authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

namespace torsift {

/// Indicator set driving the scans and the methodology run. The defaults
/// are the built-in Tor Browser Bundle signature set; a loaded file
/// replaces whole fields, it never merges into them.
struct SignatureDb {
  std::vector<std::string> process_names;
  std::vector<std::string> path_patterns;    // path anchor segments, e.g. "Tor Browser"
  std::vector<std::string> keywords;
  std::vector<std::string> title_suffixes;
  std::vector<std::string> registry_key_paths;  // shellactivities path, audio PolicyConfig path
  std::vector<std::string> locale_markers;   // optional wordlist annotating page titles

  static SignatureDb defaults();

  /// Defaults overlaid with per-field replacements from a JSON file.
  /// Throws io (unreadable) or invalid_config (bad JSON / wrong shapes).
  static SignatureDb load_file(const std::string& path);
  static SignatureDb from_json_text(std::string_view json_text);

  std::string to_json_text() const;

  /// registry_key_paths entry containing "shellactivities", else nullptr.
  const std::string* shellactivities_key_path() const;
  /// registry_key_paths entry containing "policyconfig", else nullptr.
  const std::string* audio_key_path() const;
};

}  // namespace torsift
