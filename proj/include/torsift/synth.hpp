// Copyright (c) 2026 The torsift authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "torsift/bytes.hpp"
#include "torsift/filetime.hpp"
#include "torsift/shellact.hpp"
#include "torsift/signature_db.hpp"

namespace torsift::synth {

/// Encodes one record per the blob layout. Throws delimiter_collision when a
/// string encodes bytes containing a signature, and encoding_ambiguous when
/// the parser's detection policy would not recover the requested encoding.
byte_vec encode_record(const shellact::ShellActivityRecord& record);

/// Exact inverse of parse_shellactivities on valid record lists.
byte_vec build_shellactivities_blob(const UtcTime& header_time,
                                    std::span<const shellact::ShellActivityRecord> records);
byte_vec build_shellactivities_blob(const UtcTime& header_time,
                                    std::span<const shellact::ShellActivityRecord> records,
                                    const std::array<uint8_t, 8>& header_values);

// ---- minimal hive builder ----

struct HiveValue {
  std::string name;  // "" = default value
  uint32_t reg_type = 3;
  byte_vec data;
};

struct HiveEntry {
  std::string path;  // backslash-separated, "" addresses the root
  std::vector<HiveValue> values;
};

enum class SubkeyListKind { lf, lh, li };

struct HiveBuildOptions {
  SubkeyListKind list_kind = SubkeyListKind::lf;
  // Split subkey lists into an ri tree when a key has more children than this.
  uint32_t ri_split_threshold = 256;
  // Hive bin capacity in bytes (multiple of 4096). Small values force
  // multi-bin layouts; cells larger than one bin get a dedicated bin.
  uint32_t bin_capacity = 4096;
  uint32_t minor_version = 5;
};

/// Structurally valid REGF image containing exactly the given keys/values;
/// big-data cells are used automatically for values above one cell's worth.
byte_vec build_minimal_hive(std::span<const HiveEntry> entries,
                            const HiveBuildOptions& opts = {});

// ---- noise planting ----

struct Plant {
  uint64_t offset = 0;       // where payload is copied
  byte_vec payload;
  std::string kind;          // "text", "bytes", "record", "blob"
  uint64_t artifact_offset = 0;  // where the artifact proper begins (inside guards)
  std::string note;

  /// Text plant with NUL guard bytes on both sides so extensions and
  /// crossings terminate deterministically at the plant boundary.
  static Plant text(uint64_t offset, std::string_view text, StringEncoding enc,
                    bool guard = true);
  static Plant bytes(uint64_t offset, byte_vec raw, std::string note = {});
  static Plant record(uint64_t offset, const shellact::ShellActivityRecord& rec);
  static Plant blob(uint64_t offset, const UtcTime& header_time,
                    std::span<const shellact::ShellActivityRecord> records);
};

struct PlantManifest {
  uint64_t seed = 0;
  uint64_t stream_length = 0;
  std::vector<Plant> plants;
};

/// Deterministic seeded noise with payloads copied at their offsets. Noise
/// regions are rejection-patched until they contain no occurrence of any db
/// signature (either encoding, case-insensitive), no URL scheme prefix, and
/// neither the record header nor footer byte sequences. Throws overlap for
/// overlapping or out-of-bounds plants.
byte_vec plant_in_noise(const PlantManifest& manifest);
byte_vec plant_in_noise(const PlantManifest& manifest, const SignatureDb& db);

// ---- manifest / fixture descriptions in JSON (used by the CLI) ----

PlantManifest manifest_from_json_text(std::string_view json_text);
std::vector<HiveEntry> hive_entries_from_json_text(std::string_view json_text);

/// {"time": "...", "values_hex"?: ..., "records": [...]} -> blob bytes.
byte_vec blob_from_json_text(std::string_view json_text);

}  // namespace torsift::synth
