// Copyright (c) 2026 The torsift authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "torsift/bytes.hpp"

namespace torsift::hive {

// Registry value types used here; others pass through numerically.
inline constexpr uint32_t REG_NONE = 0;
inline constexpr uint32_t REG_SZ = 1;
inline constexpr uint32_t REG_BINARY = 3;
inline constexpr uint32_t REG_DWORD = 4;

const char* reg_type_name(uint32_t t);

struct KeyNode {
  std::string name;            // on-disk spelling
  uint64_t last_written_raw = 0;
  uint32_t subkey_count = 0;
  uint32_t value_count = 0;
  uint32_t cell_offset = 0;    // relative to the hive bins area
  uint32_t subkey_list_offset = 0xFFFFFFFFu;
  uint32_t value_list_offset = 0xFFFFFFFFu;
};

struct ValueRecord {
  std::string name;            // empty string denotes the default value
  uint32_t reg_type = REG_NONE;
  uint32_t data_length = 0;
  bool inline_data = false;    // data lives in the vk offset field
  std::array<uint8_t, 4> inline_bytes{};
  uint32_t data_cell = 0xFFFFFFFFu;
  uint32_t vk_cell = 0;
};

/// Read-only REGF parser covering the cells NTUSER.DAT navigation needs:
/// key nodes, value lists, value records, subkey lists (lf/lh/li/ri) and
/// big-data records. All offsets are validated before dereference; the
/// image is never mutated and may be shared across threads after open.
class Hive {
 public:
  /// Throws malformed_hive (short image, bad magic, root not a key node)
  /// or truncated_hive (a hive bin extent exceeds image bounds).
  static Hive open(byte_vec image);

  struct Header {
    uint32_t sequence_primary = 0;
    uint32_t sequence_secondary = 0;
    uint32_t major_version = 0;
    uint32_t minor_version = 0;
    uint32_t root_cell_offset = 0;  // relative to the hive bins area
    uint32_t bins_size = 0;
  };

  const Header& header() const { return header_; }
  byte_span raw() const { return image_; }
  /// (absolute file offset, size) per hive bin.
  const std::vector<std::pair<uint64_t, uint64_t>>& hive_bins() const { return bins_; }

  KeyNode root_key() const;

  /// Backslash-separated path relative to the root; matching is
  /// case-insensitive; "" resolves to the root itself.
  /// Throws key_not_found or malformed_cell.
  KeyNode get_key(std::string_view path) const;

  /// Immediate children in on-disk order. Throws malformed_cell.
  std::vector<KeyNode> subkeys(const KeyNode& key) const;

  std::vector<ValueRecord> values(const KeyNode& key) const;

  /// Case-insensitive lookup; empty name selects the default value.
  std::optional<ValueRecord> find_value(const KeyNode& key, std::string_view name) const;

  /// Exactly data_length bytes, reassembling big-data segments in order.
  /// Throws truncated_hive when data extends past bounds.
  byte_vec value_data(const ValueRecord& value) const;

  struct KeySearch {
    std::vector<std::string> paths;     // full paths of matching keys
    std::vector<std::string> warnings;  // subtrees skipped due to corruption
  };

  /// Depth-first walk of the whole hive; case-insensitive substring match.
  /// Corrupt subtrees are recorded and skipped, never fatal.
  KeySearch find_keys_matching(std::string_view fragment) const;

 private:
  Hive() = default;

  byte_span cell_payload(uint32_t cell_offset) const;  // bounds-checked
  KeyNode parse_key(uint32_t cell_offset) const;
  ValueRecord parse_value(uint32_t cell_offset) const;
  void collect_subkey_cells(uint32_t list_offset, std::vector<uint32_t>& out,
                            int depth) const;

  byte_vec image_;
  Header header_;
  std::vector<std::pair<uint64_t, uint64_t>> bins_;
};

}  // namespace torsift::hive
