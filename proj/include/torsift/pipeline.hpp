// Copyright (c) 2026 The torsift authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "torsift/bytes.hpp"
#include "torsift/carve.hpp"
#include "torsift/filetime.hpp"
#include "torsift/hive.hpp"
#include "torsift/signature_db.hpp"

namespace torsift::pipeline {

inline constexpr const char* kSchemaVersion = "1";
inline constexpr const char* kToolVersion = "torsift 0.1.0";

enum class Category {
  TorPresence,
  TorPortableMode,
  BrowsingActivity,
  BridgingEndpoint,
  AudioCorroboration,
  FirefoxPrivateActivity,
  EnvironmentNote,
};

enum class Confidence { SingleSource, Corroborated };

const char* category_name(Category c);
const char* confidence_name(Confidence c);

/// One re-derivable pointer into a case source.
struct EvidenceRef {
  enum class Kind { Stream, Registry, RegistryAbsent };
  std::string source_id;
  Kind kind = Kind::Stream;
  uint64_t offset = 0;       // stream offset, or offset within the value data
  uint64_t length = 0;
  std::string key_path;      // registry kinds only
  std::string value_name;
  std::string sha256;        // of the located bytes (empty-span digest for absences)
  // How `text` re-derives from the located bytes: "ascii" / "utf16le"
  // (decode the span), "record" (parse a record, compare its page title),
  // or "" for digest-only evidence.
  std::string decode;
  std::string text;          // decoded text at the location
};

struct Finding {
  Category category = Category::EnvironmentNote;
  Confidence confidence = Confidence::SingleSource;
  std::vector<EvidenceRef> evidence;        // never empty
  std::vector<std::string> timestamps;      // formatted UTC instants
  std::vector<std::string> annotations;     // locale markers, parser warnings
};

enum class SourceRole { Hive, Memory, Raw };

const char* role_name(SourceRole r);

/// A case input; file-backed, or memory-backed when bytes are set (tests).
struct CaseSource {
  std::string id;
  SourceRole role = SourceRole::Raw;
  std::string path;
  byte_vec bytes;
  bool in_memory = false;

  static CaseSource from_file(std::string id, SourceRole role, std::string path);
  static CaseSource from_bytes(std::string id, SourceRole role, byte_vec bytes);

  uint64_t size() const;
  byte_vec read_span(uint64_t offset, uint64_t length) const;  // throws io / out_of_range
  std::string content_sha256() const;
};

struct SkippedStep {
  std::string step;
  std::string reason;
};

struct ForensicReport {
  std::string schema_version = kSchemaVersion;
  std::string case_id;
  std::string tool_version = kToolVersion;
  std::string generated_at;  // an input, never a clock read
  struct Input {
    std::string source_id;
    std::string role;
    std::string sha256;
    uint64_t length = 0;
  };
  std::vector<Input> inputs;
  std::vector<Finding> findings;
  std::vector<SkippedStep> skipped_steps;
};

/// Executes the methodology over the case sources: memory triage, hive
/// shellactivities extraction and classification, audio-key corroboration,
/// raw-stream scans, environment notes. Per-source failures demote that
/// source to a skipped step; the run never aborts wholesale. Deterministic
/// given (sources, db, case_id, report_time).
ForensicReport run_methodology(std::span<const CaseSource> sources, const SignatureDb& db,
                               const std::string& case_id, const UtcTime& report_time,
                               const carve::ScanOptions& opts = {});

/// AudioCorroboration findings from the PolicyConfig PropertyStore key;
/// an absent key yields an empty list.
std::vector<Finding> check_audio_key(const hive::Hive& hv, const SignatureDb& db,
                                     const std::string& source_id);

enum class ReportFormat { Human, Machine };

/// Deterministic rendering; machine format is schema-versioned JSON.
std::string render_report(const ForensicReport& report, ReportFormat format);

struct Revalidation {
  bool ok = true;
  std::vector<std::string> failures;
};

/// Re-reads every evidence entry from its source and re-checks digest and text.
Revalidation revalidate(const ForensicReport& report, std::span<const CaseSource> sources);

/// Case-config JSON: {"case_id": ..., "sources": [{"id", "role", "path"}]}.
/// Relative paths resolve against base_dir. Throws invalid_config / io.
struct CaseConfig {
  std::string case_id;
  std::vector<CaseSource> sources;
};
CaseConfig load_case_config(std::string_view json_text, const std::string& base_dir);

}  // namespace torsift::pipeline
