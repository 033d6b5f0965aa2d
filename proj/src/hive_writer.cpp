// Copyright (c) 2026 The torsift authors
// SPDX-License-Identifier: Apache-2.0
//
// Minimal REGF writer: base block + hive bins holding nk/vk cells, value
// lists, lf/lh/li/ri subkey lists and db big-data records. Offsets stored
// in cells are relative to the start of the hive bins area and point at a
// cell's size field, as on disk.

#include <cstring>
#include <memory>

#include "torsift/bytes.hpp"
#include "torsift/errors.hpp"
#include "torsift/synth.hpp"
#include "torsift/text.hpp"

namespace torsift::synth {

namespace {

constexpr uint32_t kInvalid = 0xFFFFFFFFu;
constexpr size_t kBigDataSegment = 16344;  // max value bytes per data cell

size_t align8(size_t v) { return (v + 7) & ~size_t{7}; }
uint32_t align4096(uint32_t v) { return (v + 4095u) & ~uint32_t{4095}; }

bool is_ascii(std::string_view s) {
  for (char c : s) {
    if (static_cast<uint8_t>(c) >= 0x80) return false;
  }
  return true;
}

class Arena {
 public:
  size_t add(byte_vec payload) {
    cells_.push_back(Cell{std::move(payload), 0});
    return cells_.size() - 1;
  }

  // After layout, write cells_[target]'s offset into cells_[cell] at pos.
  void patch(size_t cell, size_t pos, size_t target) { patches_.push_back({cell, pos, target}); }

  byte_vec finish(size_t root_cell, const HiveBuildOptions& opts) {
    const uint32_t capacity = std::max(align4096(opts.bin_capacity), 4096u);

    struct Bin {
      uint32_t offset = 0;
      uint32_t size = 0;
    };
    std::vector<Bin> bins;
    uint32_t used = 0;  // within current bin, header included

    for (auto& cell : cells_) {
      const uint32_t cell_size = static_cast<uint32_t>(align8(4 + cell.payload.size()));
      if (bins.empty() || used + cell_size > bins.back().size) {
        const uint32_t next_off = bins.empty() ? 0 : bins.back().offset + bins.back().size;
        const uint32_t size = std::max(capacity, align4096(32 + cell_size));
        bins.push_back({next_off, size});
        used = 32;
      }
      cell.offset = bins.back().offset + used;
      used += cell_size;
    }
    if (bins.empty()) bins.push_back({0, 4096});
    const uint32_t bins_total = bins.back().offset + bins.back().size;

    byte_vec image(4096 + bins_total, 0);

    // base block
    std::memcpy(image.data(), "regf", 4);
    write_u32le_at(image.data() + 4, 1);   // primary sequence
    write_u32le_at(image.data() + 8, 1);   // secondary sequence
    write_u32le_at(image.data() + 20, 1);  // major
    write_u32le_at(image.data() + 24, opts.minor_version);
    write_u32le_at(image.data() + 28, 0);  // file type: primary
    write_u32le_at(image.data() + 32, 1);  // file format: direct memory load
    write_u32le_at(image.data() + 36, cells_[root_cell].offset);
    write_u32le_at(image.data() + 40, bins_total);
    write_u32le_at(image.data() + 44, 1);  // clustering factor
    const char16_t name[] = u"torsift";
    std::memcpy(image.data() + 48, name, sizeof(name) - 2);
    uint32_t checksum = 0;
    for (size_t i = 0; i < 508; i += 4) checksum ^= read_u32le(image.data() + i);
    if (checksum == 0) checksum = 1;
    if (checksum == kInvalid) checksum = 0xFFFFFFFEu;
    write_u32le_at(image.data() + 508, checksum);

    // bin headers
    for (const auto& bin : bins) {
      uint8_t* p = image.data() + 4096 + bin.offset;
      std::memcpy(p, "hbin", 4);
      write_u32le_at(p + 4, bin.offset);
      write_u32le_at(p + 8, bin.size);
    }

    // cells, each preceded by its negative (allocated) size
    size_t bin_idx = 0;
    uint32_t cursor = 32;  // track free space per bin for trailing free cells
    for (size_t ci = 0; ci < cells_.size(); ++ci) {
      const auto& cell = cells_[ci];
      while (bin_idx + 1 < bins.size() && cell.offset >= bins[bin_idx + 1].offset) {
        finish_bin(image, bins[bin_idx], cursor);
        ++bin_idx;
        cursor = 32;
      }
      const uint32_t cell_size = static_cast<uint32_t>(align8(4 + cell.payload.size()));
      uint8_t* p = image.data() + 4096 + cell.offset;
      write_u32le_at(p, static_cast<uint32_t>(-static_cast<int32_t>(cell_size)));
      std::memcpy(p + 4, cell.payload.data(), cell.payload.size());
      cursor = cell.offset - bins[bin_idx].offset + cell_size;
    }
    finish_bin(image, bins[bin_idx], cursor);
    for (size_t b = bin_idx + 1; b < bins.size(); ++b) finish_bin(image, bins[b], 32);

    for (const auto& pt : patches_) {
      uint8_t* p = image.data() + 4096 + cells_[pt.cell].offset + 4 + pt.pos;
      write_u32le_at(p, cells_[pt.target].offset);
    }
    return image;
  }

 private:
  struct Cell {
    byte_vec payload;
    uint32_t offset;
  };
  struct Patch {
    size_t cell, pos, target;
  };

  template <typename Bin>
  static void finish_bin(byte_vec& image, const Bin& bin, uint32_t used) {
    if (used < bin.size) {
      uint8_t* p = image.data() + 4096 + bin.offset + used;
      write_u32le_at(p, bin.size - used);  // positive size: free cell
    }
  }

  std::vector<Cell> cells_;
  std::vector<Patch> patches_;
};

struct KeyTmp {
  std::string name;
  std::vector<std::unique_ptr<KeyTmp>> children;
  std::vector<HiveValue> values;
};

KeyTmp* find_or_add(KeyTmp* node, std::string_view comp) {
  for (auto& c : node->children) {
    if (ascii_iequals(c->name, comp)) return c.get();
  }
  node->children.push_back(std::make_unique<KeyTmp>());
  node->children.back()->name = std::string(comp);
  return node->children.back().get();
}

byte_vec encode_name(std::string_view name, bool& compressed) {
  compressed = is_ascii(name);
  if (compressed) return byte_vec(name.begin(), name.end());
  return utf8_to_utf16le(name);
}

size_t emit_value(Arena& arena, const HiveValue& value) {
  bool compressed = false;
  byte_vec name = encode_name(value.name, compressed);

  byte_vec vk;
  vk.reserve(20 + name.size());
  vk.push_back('v');
  vk.push_back('k');
  put_u16le(vk, static_cast<uint16_t>(name.size()));

  size_t data_cell = SIZE_MAX;
  size_t db_cell = SIZE_MAX;
  if (value.data.size() <= 4) {
    put_u32le(vk, 0x80000000u | static_cast<uint32_t>(value.data.size()));
    uint8_t inline_bytes[4] = {0, 0, 0, 0};
    if (!value.data.empty()) std::memcpy(inline_bytes, value.data.data(), value.data.size());
    vk.insert(vk.end(), inline_bytes, inline_bytes + 4);
  } else if (value.data.size() <= kBigDataSegment) {
    put_u32le(vk, static_cast<uint32_t>(value.data.size()));
    data_cell = arena.add(value.data);
    put_u32le(vk, 0);  // patched below
  } else {
    put_u32le(vk, static_cast<uint32_t>(value.data.size()));
    std::vector<size_t> segments;
    for (size_t from = 0; from < value.data.size(); from += kBigDataSegment) {
      const size_t len = std::min(kBigDataSegment, value.data.size() - from);
      segments.push_back(
          arena.add(byte_vec(value.data.begin() + from, value.data.begin() + from + len)));
    }
    byte_vec seglist;
    for (size_t i = 0; i < segments.size(); ++i) put_u32le(seglist, 0);
    const size_t seglist_cell = arena.add(std::move(seglist));
    for (size_t i = 0; i < segments.size(); ++i) {
      arena.patch(seglist_cell, i * 4, segments[i]);
    }
    byte_vec db;
    db.push_back('d');
    db.push_back('b');
    put_u16le(db, static_cast<uint16_t>(segments.size()));
    put_u32le(db, 0);  // patched below
    db_cell = arena.add(std::move(db));
    arena.patch(db_cell, 4, seglist_cell);
    put_u32le(vk, 0);  // patched below
  }
  put_u32le(vk, value.reg_type);
  put_u16le(vk, compressed ? 0x0001 : 0x0000);
  put_u16le(vk, 0);
  vk.insert(vk.end(), name.begin(), name.end());

  const size_t vk_cell = arena.add(std::move(vk));
  if (data_cell != SIZE_MAX) arena.patch(vk_cell, 8, data_cell);
  if (db_cell != SIZE_MAX) arena.patch(vk_cell, 8, db_cell);
  return vk_cell;
}

uint32_t lh_hash(std::string_view name) {
  uint32_t h = 0;
  for (char c : name) {
    char u = (c >= 'a' && c <= 'z') ? static_cast<char>(c - 'a' + 'A') : c;
    h = h * 37u + static_cast<uint8_t>(u);
  }
  return h;
}

size_t emit_subkey_list(Arena& arena, const std::vector<std::pair<size_t, std::string>>& kids,
                        SubkeyListKind kind) {
  byte_vec list;
  const char* sig = kind == SubkeyListKind::lf ? "lf" : kind == SubkeyListKind::lh ? "lh" : "li";
  list.push_back(static_cast<uint8_t>(sig[0]));
  list.push_back(static_cast<uint8_t>(sig[1]));
  put_u16le(list, static_cast<uint16_t>(kids.size()));
  std::vector<std::pair<size_t, size_t>> offsets;  // (pos in payload, target cell)
  for (const auto& [cell, name] : kids) {
    offsets.emplace_back(list.size(), cell);
    put_u32le(list, 0);
    if (kind == SubkeyListKind::lf) {
      uint8_t hint[4] = {0, 0, 0, 0};
      std::memcpy(hint, name.data(), std::min<size_t>(4, name.size()));
      list.insert(list.end(), hint, hint + 4);
    } else if (kind == SubkeyListKind::lh) {
      put_u32le(list, lh_hash(name));
    }
  }
  const size_t cell = arena.add(std::move(list));
  for (const auto& [pos, target] : offsets) arena.patch(cell, pos, target);
  return cell;
}

size_t emit_key(Arena& arena, const KeyTmp& key, bool is_root, const HiveBuildOptions& opts) {
  std::vector<std::pair<size_t, std::string>> kids;
  kids.reserve(key.children.size());
  for (const auto& child : key.children) {
    kids.emplace_back(emit_key(arena, *child, false, opts), child->name);
  }

  size_t subkey_list_cell = SIZE_MAX;
  if (!kids.empty()) {
    if (kids.size() > opts.ri_split_threshold) {
      std::vector<size_t> chunks;
      for (size_t from = 0; from < kids.size(); from += opts.ri_split_threshold) {
        const size_t len = std::min<size_t>(opts.ri_split_threshold, kids.size() - from);
        std::vector<std::pair<size_t, std::string>> part(kids.begin() + from,
                                                         kids.begin() + from + len);
        chunks.push_back(emit_subkey_list(arena, part, opts.list_kind));
      }
      byte_vec ri;
      ri.push_back('r');
      ri.push_back('i');
      put_u16le(ri, static_cast<uint16_t>(chunks.size()));
      for (size_t i = 0; i < chunks.size(); ++i) put_u32le(ri, 0);
      subkey_list_cell = arena.add(std::move(ri));
      for (size_t i = 0; i < chunks.size(); ++i) {
        arena.patch(subkey_list_cell, 4 + i * 4, chunks[i]);
      }
    } else {
      subkey_list_cell = emit_subkey_list(arena, kids, opts.list_kind);
    }
  }

  size_t value_list_cell = SIZE_MAX;
  if (!key.values.empty()) {
    std::vector<size_t> vks;
    vks.reserve(key.values.size());
    for (const auto& v : key.values) vks.push_back(emit_value(arena, v));
    byte_vec list;
    for (size_t i = 0; i < vks.size(); ++i) put_u32le(list, 0);
    value_list_cell = arena.add(std::move(list));
    for (size_t i = 0; i < vks.size(); ++i) arena.patch(value_list_cell, i * 4, vks[i]);
  }

  bool compressed = false;
  byte_vec name = encode_name(key.name, compressed);
  byte_vec nk(76, 0);
  nk[0] = 'n';
  nk[1] = 'k';
  uint16_t flags = 0;
  if (compressed) flags |= 0x0020;
  if (is_root) flags |= 0x0004 | 0x0008;
  nk[2] = static_cast<uint8_t>(flags & 0xFF);
  nk[3] = static_cast<uint8_t>(flags >> 8);
  write_u32le_at(nk.data() + 16, kInvalid);  // parent; patched by the parent key
  write_u32le_at(nk.data() + 20, static_cast<uint32_t>(kids.size()));
  write_u32le_at(nk.data() + 28, kInvalid);
  write_u32le_at(nk.data() + 32, kInvalid);
  write_u32le_at(nk.data() + 36, static_cast<uint32_t>(key.values.size()));
  write_u32le_at(nk.data() + 40, kInvalid);
  write_u32le_at(nk.data() + 44, kInvalid);
  write_u32le_at(nk.data() + 48, kInvalid);
  nk[72] = static_cast<uint8_t>(name.size() & 0xFF);
  nk[73] = static_cast<uint8_t>(name.size() >> 8);
  nk.insert(nk.end(), name.begin(), name.end());

  const size_t nk_cell = arena.add(std::move(nk));
  if (subkey_list_cell != SIZE_MAX) arena.patch(nk_cell, 28, subkey_list_cell);
  if (value_list_cell != SIZE_MAX) arena.patch(nk_cell, 40, value_list_cell);
  for (const auto& [child_cell, child_name] : kids) {
    arena.patch(child_cell, 16, nk_cell);
  }
  return nk_cell;
}

}  // namespace

byte_vec build_minimal_hive(std::span<const HiveEntry> entries, const HiveBuildOptions& opts) {
  KeyTmp root;
  root.name = "ROOT";
  for (const auto& entry : entries) {
    KeyTmp* node = &root;
    if (!entry.path.empty()) {
      std::string_view rest = entry.path;
      while (!rest.empty()) {
        const size_t sep = rest.find('\\');
        std::string_view comp = sep == std::string_view::npos ? rest : rest.substr(0, sep);
        if (comp.empty()) raise(errc::invalid_config, "empty path component: " + entry.path);
        node = find_or_add(node, comp);
        rest = sep == std::string_view::npos ? std::string_view{} : rest.substr(sep + 1);
      }
    }
    for (const auto& v : entry.values) node->values.push_back(v);
  }

  Arena arena;
  const size_t root_cell = emit_key(arena, root, true, opts);
  return arena.finish(root_cell, opts);
}

}  // namespace torsift::synth
