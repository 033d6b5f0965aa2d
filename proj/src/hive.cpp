// Copyright (c) 2026 The torsift authors
// SPDX-License-Identifier: Apache-2.0
//
// Read-only REGF parser. Every offset is validated against the image before
// dereference; references use the on-disk convention of offsets relative to
// the hive bins area (file offset 4096), pointing at a cell's size field.

#include "torsift/hive.hpp"

#include <algorithm>
#include <cstring>
#include <set>

#include "torsift/errors.hpp"
#include "torsift/text.hpp"

namespace torsift::hive {

namespace {

constexpr uint32_t kInvalid = 0xFFFFFFFFu;
constexpr size_t kBaseBlockSize = 4096;
constexpr size_t kBigDataSegment = 16344;
constexpr int kMaxDepth = 512;

std::string component_to_string(byte_span name_bytes, bool compressed) {
  if (compressed) {
    // "compressed" names are stored as single bytes; treat as Latin-1.
    std::string out;
    out.reserve(name_bytes.size());
    for (uint8_t b : name_bytes) {
      if (b < 0x80) {
        out.push_back(static_cast<char>(b));
      } else {
        out.push_back(static_cast<char>(0xC0 | (b >> 6)));
        out.push_back(static_cast<char>(0x80 | (b & 0x3F)));
      }
    }
    return out;
  }
  auto decoded = utf16le_to_utf8(name_bytes);
  if (!decoded) raise(errc::malformed_cell, "key or value name is not valid UTF-16LE");
  return *decoded;
}

}  // namespace

const char* reg_type_name(uint32_t t) {
  switch (t) {
    case REG_NONE: return "REG_NONE";
    case REG_SZ: return "REG_SZ";
    case 2: return "REG_EXPAND_SZ";
    case REG_BINARY: return "REG_BINARY";
    case REG_DWORD: return "REG_DWORD";
    case 7: return "REG_MULTI_SZ";
    case 11: return "REG_QWORD";
    default: return "REG_OTHER";
  }
}

Hive Hive::open(byte_vec image) {
  if (image.size() < kBaseBlockSize) {
    raise(errc::malformed_hive, "image shorter than the 4096-byte base block");
  }
  if (std::memcmp(image.data(), "regf", 4) != 0) {
    raise(errc::malformed_hive, "missing regf signature");
  }
  Hive hv;
  hv.image_ = std::move(image);
  const uint8_t* base = hv.image_.data();
  hv.header_.sequence_primary = read_u32le(base + 4);
  hv.header_.sequence_secondary = read_u32le(base + 8);
  hv.header_.major_version = read_u32le(base + 20);
  hv.header_.minor_version = read_u32le(base + 24);
  hv.header_.root_cell_offset = read_u32le(base + 36);
  hv.header_.bins_size = read_u32le(base + 40);
  if (hv.header_.major_version != 1) {
    raise(errc::malformed_hive,
          "unsupported REGF major version " + std::to_string(hv.header_.major_version));
  }

  // Enumerate hive bins up to the declared bins size.
  uint64_t pos = kBaseBlockSize;
  const uint64_t bins_end = kBaseBlockSize + hv.header_.bins_size;
  while (pos < bins_end) {
    if (pos + 32 > hv.image_.size()) {
      raise(errc::truncated_hive, "hive bin header extends past image bounds");
    }
    const uint8_t* hb = hv.image_.data() + pos;
    if (std::memcmp(hb, "hbin", 4) != 0) {
      raise(errc::malformed_hive, "missing hbin signature at offset " + std::to_string(pos));
    }
    const uint32_t size = read_u32le(hb + 8);
    if (size == 0 || size % 4096 != 0) {
      raise(errc::malformed_hive, "hive bin with invalid size " + std::to_string(size));
    }
    if (pos + size > hv.image_.size()) {
      raise(errc::truncated_hive, "hive bin extent exceeds image bounds");
    }
    hv.bins_.emplace_back(pos, size);
    pos += size;
  }

  // The root cell must resolve to a key node.
  byte_span root = hv.cell_payload(hv.header_.root_cell_offset);
  if (root.size() < 76 || root[0] != 'n' || root[1] != 'k') {
    raise(errc::malformed_hive, "root cell is not a key node");
  }
  return hv;
}

byte_span Hive::cell_payload(uint32_t cell_offset) const {
  if (cell_offset == kInvalid) raise(errc::malformed_cell, "reference to invalid cell");
  const uint64_t file_off = kBaseBlockSize + static_cast<uint64_t>(cell_offset);
  if (file_off + 4 > image_.size()) {
    raise(errc::truncated_hive, "cell offset past image bounds");
  }
  const int32_t size_field = read_i32le(image_.data() + file_off);
  const uint64_t size =
      size_field < 0 ? static_cast<uint64_t>(-static_cast<int64_t>(size_field))
                     : static_cast<uint64_t>(size_field);
  if (size < 8) raise(errc::malformed_cell, "cell smaller than the minimum size");
  if (file_off + size > image_.size()) {
    raise(errc::truncated_hive, "cell extends past image bounds");
  }
  return byte_span(image_.data() + file_off + 4, size - 4);
}

KeyNode Hive::parse_key(uint32_t cell_offset) const {
  byte_span cell = cell_payload(cell_offset);
  if (cell.size() < 76 || cell[0] != 'n' || cell[1] != 'k') {
    raise(errc::malformed_cell, "expected a key node cell");
  }
  const uint16_t flags = read_u16le(cell.data() + 2);
  const uint16_t name_len = read_u16le(cell.data() + 72);
  if (76u + name_len > cell.size()) {
    raise(errc::malformed_cell, "key name extends past its cell");
  }
  KeyNode key;
  key.name = component_to_string(cell.subspan(76, name_len), (flags & 0x0020) != 0);
  key.last_written_raw = read_u64le(cell.data() + 4);
  key.subkey_count = read_u32le(cell.data() + 20);
  key.value_count = read_u32le(cell.data() + 36);
  key.cell_offset = cell_offset;
  key.subkey_list_offset = read_u32le(cell.data() + 28);
  key.value_list_offset = read_u32le(cell.data() + 40);
  return key;
}

KeyNode Hive::root_key() const { return parse_key(header_.root_cell_offset); }

void Hive::collect_subkey_cells(uint32_t list_offset, std::vector<uint32_t>& out,
                                int depth) const {
  if (depth > kMaxDepth) raise(errc::malformed_cell, "subkey list nesting too deep");
  byte_span cell = cell_payload(list_offset);
  if (cell.size() < 4) raise(errc::malformed_cell, "subkey list cell too small");
  const char c0 = static_cast<char>(cell[0]);
  const char c1 = static_cast<char>(cell[1]);
  const uint16_t count = read_u16le(cell.data() + 2);
  if (c0 == 'r' && c1 == 'i') {
    if (4u + count * 4u > cell.size()) {
      raise(errc::malformed_cell, "ri list entries extend past their cell");
    }
    for (uint16_t i = 0; i < count; ++i) {
      collect_subkey_cells(read_u32le(cell.data() + 4 + i * 4), out, depth + 1);
    }
    return;
  }
  size_t entry_size = 0;
  if ((c0 == 'l' && c1 == 'f') || (c0 == 'l' && c1 == 'h')) {
    entry_size = 8;
  } else if (c0 == 'l' && c1 == 'i') {
    entry_size = 4;
  } else {
    raise(errc::malformed_cell, "unknown subkey list signature");
  }
  if (4u + count * entry_size > cell.size()) {
    raise(errc::malformed_cell, "subkey list entries extend past their cell");
  }
  for (uint16_t i = 0; i < count; ++i) {
    out.push_back(read_u32le(cell.data() + 4 + i * entry_size));
  }
}

std::vector<KeyNode> Hive::subkeys(const KeyNode& key) const {
  std::vector<KeyNode> out;
  if (key.subkey_count == 0 || key.subkey_list_offset == kInvalid) return out;
  std::vector<uint32_t> cells;
  collect_subkey_cells(key.subkey_list_offset, cells, 0);
  out.reserve(cells.size());
  for (uint32_t off : cells) out.push_back(parse_key(off));
  return out;
}

KeyNode Hive::get_key(std::string_view path) const {
  KeyNode current = root_key();
  std::string_view rest = path;
  while (!rest.empty()) {
    const size_t sep = rest.find('\\');
    std::string_view comp = sep == std::string_view::npos ? rest : rest.substr(0, sep);
    rest = sep == std::string_view::npos ? std::string_view{} : rest.substr(sep + 1);
    if (comp.empty()) continue;  // tolerate doubled separators
    bool found = false;
    for (const KeyNode& child : subkeys(current)) {
      if (ascii_iequals(child.name, comp)) {
        current = child;
        found = true;
        break;
      }
    }
    if (!found) {
      raise(errc::key_not_found, "no key named '" + std::string(comp) + "' in path");
    }
  }
  return current;
}

ValueRecord Hive::parse_value(uint32_t cell_offset) const {
  byte_span cell = cell_payload(cell_offset);
  if (cell.size() < 20 || cell[0] != 'v' || cell[1] != 'k') {
    raise(errc::malformed_cell, "expected a value record cell");
  }
  const uint16_t name_len = read_u16le(cell.data() + 2);
  const uint32_t size_field = read_u32le(cell.data() + 4);
  const uint16_t flags = read_u16le(cell.data() + 16);
  if (20u + name_len > cell.size()) {
    raise(errc::malformed_cell, "value name extends past its cell");
  }
  ValueRecord v;
  v.name = name_len == 0 ? std::string()
                         : component_to_string(cell.subspan(20, name_len), (flags & 1) != 0);
  v.reg_type = read_u32le(cell.data() + 12);
  v.data_length = size_field & 0x7FFFFFFFu;
  v.inline_data = (size_field & 0x80000000u) != 0;
  v.vk_cell = cell_offset;
  if (v.inline_data) {
    if (v.data_length > 4) raise(errc::malformed_cell, "inline value longer than 4 bytes");
    std::copy_n(cell.data() + 8, 4, v.inline_bytes.begin());
  } else {
    v.data_cell = read_u32le(cell.data() + 8);
  }
  return v;
}

std::vector<ValueRecord> Hive::values(const KeyNode& key) const {
  std::vector<ValueRecord> out;
  if (key.value_count == 0 || key.value_list_offset == kInvalid) return out;
  byte_span list = cell_payload(key.value_list_offset);
  if (static_cast<uint64_t>(key.value_count) * 4 > list.size()) {
    raise(errc::malformed_cell, "value list extends past its cell");
  }
  out.reserve(key.value_count);
  for (uint32_t i = 0; i < key.value_count; ++i) {
    out.push_back(parse_value(read_u32le(list.data() + i * 4)));
  }
  return out;
}

std::optional<ValueRecord> Hive::find_value(const KeyNode& key, std::string_view name) const {
  for (const ValueRecord& v : values(key)) {
    if (ascii_iequals(v.name, name)) return v;
  }
  return std::nullopt;
}

byte_vec Hive::value_data(const ValueRecord& value) const {
  if (value.data_length == 0) return {};
  if (value.inline_data) {
    return byte_vec(value.inline_bytes.begin(), value.inline_bytes.begin() + value.data_length);
  }
  byte_span cell = cell_payload(value.data_cell);
  if (value.data_length > kBigDataSegment && cell.size() >= 8 && cell[0] == 'd' &&
      cell[1] == 'b') {
    // big data: segment list of data cells, each carrying up to 16344 bytes
    const uint16_t segment_count = read_u16le(cell.data() + 2);
    byte_span seglist = cell_payload(read_u32le(cell.data() + 4));
    if (static_cast<uint64_t>(segment_count) * 4 > seglist.size()) {
      raise(errc::truncated_hive, "big-data segment list extends past its cell");
    }
    byte_vec out;
    out.reserve(value.data_length);
    uint64_t remaining = value.data_length;
    for (uint16_t i = 0; i < segment_count && remaining > 0; ++i) {
      byte_span seg = cell_payload(read_u32le(seglist.data() + i * 4));
      const uint64_t take = std::min<uint64_t>({remaining, seg.size(), kBigDataSegment});
      out.insert(out.end(), seg.begin(), seg.begin() + take);
      remaining -= take;
    }
    if (remaining > 0) {
      raise(errc::truncated_hive, "big-data segments shorter than the declared length");
    }
    return out;
  }
  if (value.data_length > cell.size()) {
    raise(errc::truncated_hive, "value data extends past its cell");
  }
  return byte_vec(cell.begin(), cell.begin() + value.data_length);
}

Hive::KeySearch Hive::find_keys_matching(std::string_view fragment) const {
  KeySearch result;
  struct Frame {
    KeyNode key;
    std::string path;  // "" for the root
  };
  std::vector<Frame> stack;
  std::set<uint32_t> visited;
  stack.push_back({root_key(), ""});
  visited.insert(header_.root_cell_offset);
  while (!stack.empty()) {
    Frame frame = std::move(stack.back());
    stack.pop_back();
    std::vector<KeyNode> children;
    try {
      children = subkeys(frame.key);
    } catch (const error& e) {
      result.warnings.push_back("skipped subtree under '" + frame.path + "': " + e.what());
      continue;
    }
    // Children are pushed in reverse so the walk emits on-disk order.
    for (auto it = children.rbegin(); it != children.rend(); ++it) {
      std::string child_path =
          frame.path.empty() ? it->name : frame.path + "\\" + it->name;
      if (!visited.insert(it->cell_offset).second) {
        result.warnings.push_back("cycle detected at '" + child_path + "'");
        continue;
      }
      if (contains_ci(it->name, fragment)) result.paths.push_back(child_path);
      stack.push_back({*it, std::move(child_path)});
    }
  }
  // A stack-based DFS emits siblings in order but visits subtrees LIFO;
  // normalize to a stable lexicographic-by-position order.
  std::sort(result.paths.begin(), result.paths.end());
  return result;
}

}  // namespace torsift::hive
