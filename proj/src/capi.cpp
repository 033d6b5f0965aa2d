// Copyright (c) 2026 The torsift authors
// SPDX-License-Identifier: Apache-2.0
//
// extern "C" surface of libtorsift. Exceptions never cross the boundary;
// they map to status codes plus a thread-local message.

#include "torsift/torsift.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include <json.hpp>

#include "torsift/carve.hpp"
#include "torsift/errors.hpp"
#include "torsift/filetime.hpp"
#include "torsift/hive.hpp"
#include "torsift/memscan.hpp"
#include "torsift/pipeline.hpp"
#include "torsift/shellact.hpp"
#include "torsift/signature_db.hpp"
#include "torsift/synth.hpp"

using namespace torsift;

struct torsift_db {
  SignatureDb db;
};

struct torsift_hive {
  hive::Hive hv;
};

namespace {

thread_local std::string t_last_error;

torsift_status status_from(errc code) {
  switch (code) {
    case errc::ok: return TORSIFT_OK;
    case errc::io: return TORSIFT_ERR_IO;
    case errc::malformed_hive:
    case errc::malformed_cell: return TORSIFT_ERR_MALFORMED;
    case errc::truncated_hive: return TORSIFT_ERR_TRUNCATED;
    case errc::key_not_found:
    case errc::no_record_header:
    case errc::delimiter_not_found: return TORSIFT_ERR_NOT_FOUND;
    case errc::bad_header:
    case errc::too_short: return TORSIFT_ERR_BAD_HEADER;
    case errc::decode_error:
    case errc::encoding_ambiguous: return TORSIFT_ERR_DECODE;
    case errc::out_of_range: return TORSIFT_ERR_RANGE;
    case errc::delimiter_collision: return TORSIFT_ERR_COLLISION;
    case errc::overlap: return TORSIFT_ERR_OVERLAP;
    case errc::invalid_config: return TORSIFT_ERR_CONFIG;
    case errc::internal: return TORSIFT_ERR_INTERNAL;
  }
  return TORSIFT_ERR_INTERNAL;
}

template <typename Fn>
torsift_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const error& e) {
    t_last_error = e.what();
    return status_from(e.code());
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return TORSIFT_ERR_INTERNAL;
  } catch (...) {
    t_last_error = "unknown error";
    return TORSIFT_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) return nullptr;
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

torsift_status out_string(const std::string& s, char** out) {
  *out = dup_string(s);
  if (*out == nullptr) {
    t_last_error = "allocation failed";
    return TORSIFT_ERR_INTERNAL;
  }
  return TORSIFT_OK;
}

torsift_status out_bytes(const byte_vec& b, uint8_t** data_out, size_t* len_out) {
  uint8_t* out = static_cast<uint8_t*>(std::malloc(b.empty() ? 1 : b.size()));
  if (out == nullptr) {
    t_last_error = "allocation failed";
    return TORSIFT_ERR_INTERNAL;
  }
  if (!b.empty()) std::memcpy(out, b.data(), b.size());
  *data_out = out;
  *len_out = b.size();
  return TORSIFT_OK;
}

torsift_status invalid_arg(const char* why) {
  t_last_error = why;
  return TORSIFT_ERR_INVALID_ARG;
}

carve::ScanOptions scan_options_from(const torsift_scan_options* opts) {
  carve::ScanOptions out;
  if (opts == nullptr) return out;
  if (opts->chunk_size > 0) out.chunk_size = static_cast<size_t>(opts->chunk_size);
  if (opts->max_record_len > 0) out.max_record_len = static_cast<size_t>(opts->max_record_len);
  if (opts->context_radius > 0) out.context_radius = static_cast<size_t>(opts->context_radius);
  if (opts->endpoint_window > 0) {
    out.endpoint_window = static_cast<size_t>(opts->endpoint_window);
  }
  if (opts->threads > 0) out.threads = opts->threads;
  return out;
}

const SignatureDb& db_or_default(const torsift_db* db) {
  static const SignatureDb defaults = SignatureDb::defaults();
  return db == nullptr ? defaults : db->db;
}

nlohmann::ordered_json record_json(const shellact::ShellActivityRecord& rec) {
  nlohmann::ordered_json j;
  j["offset"] = rec.start_offset;
  j["end_offset"] = rec.end_offset;
  j["type_byte"] = rec.type_byte;
  j["d228_byte"] = rec.d228_byte;
  j["encoding"] = rec.undecoded ? "raw" : encoding_name(rec.encoding);
  if (rec.undecoded) {
    j["exe_path_hex"] = to_hex(rec.exe_path_raw);
    j["exe_name_hex"] = to_hex(rec.exe_name_raw);
    j["page_title_hex"] = to_hex(rec.page_title_raw);
  } else {
    j["exe_path"] = rec.exe_path;
    j["exe_name"] = rec.exe_name;
    j["page_title"] = rec.page_title;
    const auto strip = shellact::strip_browser_suffix(rec.page_title);
    if (strip.suffix) {
      j["clean_title"] = strip.clean;
      j["title_suffix"] = *strip.suffix;
    }
  }
  j["trailer_a5_hex"] = to_hex(rec.trailer_a5);
  j["trailer_b5_hex"] = to_hex(rec.trailer_b5);
  const auto attribution = shellact::classify_record(rec);
  nlohmann::ordered_json aj;
  aj["kind"] = shellact::browser_kind_name(attribution.kind);
  if (attribution.username) aj["username"] = *attribution.username;
  if (attribution.drive_letter) aj["drive"] = std::string(1, *attribution.drive_letter);
  if (attribution.install_dir) aj["install_dir"] = *attribution.install_dir;
  j["attribution"] = std::move(aj);
  const auto hint = shellact::type_byte_hint(rec);
  j["type_byte_matches_path_length"] = hint.matches_encoded_len || hint.matches_char_count;
  return j;
}

std::string shellact_human(const shellact::ShellActivityLog& log) {
  std::string out;
  uint64_t ts = log.header_timestamp_raw;
  out += "shellactivities log\n";
  out += "  header timestamp: ";
  if (ts < kFiletimeYear10000) {
    out += format_utc(filetime_to_utc(ts));
  } else {
    out += "(out of range: " + std::to_string(ts) + ")";
  }
  out += "\n  header values:    " + to_hex(log.header_values) + "\n";
  out += "  records:          " + std::to_string(log.records.size()) + "\n\n";
  size_t i = 0;
  for (const auto& rec : log.records) {
    const auto attribution = shellact::classify_record(rec);
    out += "record " + std::to_string(i++) + " @" + std::to_string(rec.start_offset) + "\n";
    if (rec.undecoded) {
      out += "  (strings undecoded; raw hex preserved)\n";
      out += "  title hex: " + to_hex(rec.page_title_raw) + "\n";
    } else {
      out += "  exe:   " + rec.exe_path + "\n";
      out += "  title: " + rec.page_title + "\n";
    }
    out += std::string("  attribution: ") + shellact::browser_kind_name(attribution.kind);
    if (attribution.username) out += " user=" + *attribution.username;
    if (attribution.drive_letter) out += std::string(" drive=") + *attribution.drive_letter;
    out += "\n";
  }
  for (const auto& w : log.warnings) out += "warning: " + w + "\n";
  return out;
}

nlohmann::ordered_json scan_report_json(const carve::ScanReport& report) {
  nlohmann::ordered_json j;
  j["keyword_hits"] = nlohmann::ordered_json::array();
  for (const auto& hit : report.keyword_hits) {
    nlohmann::ordered_json h;
    h["keyword"] = hit.keyword;
    h["offset"] = hit.offset;
    h["encoding"] = carve::scan_encoding_name(hit.encoding);
    h["matched"] = hit.matched;
    h["context"] = hit.context;
    j["keyword_hits"].push_back(std::move(h));
  }
  j["path_hits"] = nlohmann::ordered_json::array();
  for (const auto& hit : report.path_hits) {
    nlohmann::ordered_json h;
    h["path"] = hit.path;
    h["offset"] = hit.offset;
    h["encoding"] = carve::scan_encoding_name(hit.encoding);
    h["attribution"] = shellact::browser_kind_name(hit.attribution.kind);
    if (hit.attribution.username) h["username"] = *hit.attribution.username;
    if (hit.attribution.drive_letter) {
      h["drive"] = std::string(1, *hit.attribution.drive_letter);
    }
    j["path_hits"].push_back(std::move(h));
  }
  j["url_hits"] = nlohmann::ordered_json::array();
  for (const auto& hit : report.url_hits) {
    nlohmann::ordered_json h;
    h["url"] = hit.url;
    h["offset"] = hit.offset;
    h["encoding"] = carve::scan_encoding_name(hit.encoding);
    j["url_hits"].push_back(std::move(h));
  }
  j["endpoint_hits"] = nlohmann::ordered_json::array();
  for (const auto& hit : report.endpoint_hits) {
    nlohmann::ordered_json h;
    h["address"] = hit.address;
    if (hit.port) h["port"] = *hit.port;
    h["anchor_offset"] = hit.anchor_offset;
    h["offset"] = hit.offset;
    h["distance"] = hit.distance;
    h["encoding"] = carve::scan_encoding_name(hit.encoding);
    j["endpoint_hits"].push_back(std::move(h));
  }
  j["records"] = nlohmann::ordered_json::array();
  for (const auto& rec : report.records) {
    nlohmann::ordered_json h;
    h["offset"] = rec.source_offset;
    h["complete"] = rec.complete;
    if (rec.complete && rec.record) {
      h["record"] = record_json(*rec.record);
    } else {
      h["raw_length"] = rec.raw.size();
      h["raw_prefix_hex"] = to_hex(byte_span(rec.raw).subspan(0, std::min<size_t>(64, rec.raw.size())));
    }
    j["records"].push_back(std::move(h));
  }
  return j;
}

std::string scan_report_human(const carve::ScanReport& report) {
  std::string out;
  out += "keyword hits: " + std::to_string(report.keyword_hits.size()) + "\n";
  for (const auto& hit : report.keyword_hits) {
    out += "  @" + std::to_string(hit.offset) + " [" +
           carve::scan_encoding_name(hit.encoding) + "] " + hit.matched + "\n";
  }
  out += "tor paths: " + std::to_string(report.path_hits.size()) + "\n";
  for (const auto& hit : report.path_hits) {
    out += "  @" + std::to_string(hit.offset) + " [" +
           carve::scan_encoding_name(hit.encoding) + "] " + hit.path + " (" +
           shellact::browser_kind_name(hit.attribution.kind) + ")\n";
  }
  out += "urls: " + std::to_string(report.url_hits.size()) + "\n";
  for (const auto& hit : report.url_hits) {
    out += "  @" + std::to_string(hit.offset) + " " + hit.url + "\n";
  }
  out += "obfs4 endpoints: " + std::to_string(report.endpoint_hits.size()) + "\n";
  for (const auto& hit : report.endpoint_hits) {
    out += "  @" + std::to_string(hit.offset) + " " + hit.address;
    if (hit.port) out += ":" + std::to_string(*hit.port);
    out += " (anchor @" + std::to_string(hit.anchor_offset) + ")\n";
  }
  out += "carved records: " + std::to_string(report.records.size()) + "\n";
  for (const auto& rec : report.records) {
    out += "  @" + std::to_string(rec.source_offset) +
           (rec.complete ? " complete" : " incomplete");
    if (rec.complete && rec.record && !rec.record->undecoded) {
      out += " title: " + rec.record->page_title;
    }
    out += "\n";
  }
  return out;
}

}  // namespace

extern "C" {

const char* torsift_version(void) { return pipeline::kToolVersion; }

const char* torsift_status_name(int status) {
  switch (status) {
    case TORSIFT_OK: return "ok";
    case TORSIFT_ERR_IO: return "io_error";
    case TORSIFT_ERR_MALFORMED: return "malformed";
    case TORSIFT_ERR_TRUNCATED: return "truncated";
    case TORSIFT_ERR_NOT_FOUND: return "not_found";
    case TORSIFT_ERR_BAD_HEADER: return "bad_header";
    case TORSIFT_ERR_DECODE: return "decode_error";
    case TORSIFT_ERR_RANGE: return "out_of_range";
    case TORSIFT_ERR_COLLISION: return "delimiter_collision";
    case TORSIFT_ERR_OVERLAP: return "overlap";
    case TORSIFT_ERR_CONFIG: return "invalid_config";
    case TORSIFT_ERR_INVALID_ARG: return "invalid_argument";
    case TORSIFT_ERR_INTERNAL: return "internal";
    default: return "unknown";
  }
}

const char* torsift_last_error(void) { return t_last_error.c_str(); }

void torsift_free(void* ptr) { std::free(ptr); }

torsift_status torsift_db_default(torsift_db** out) {
  if (out == nullptr) return invalid_arg("out is NULL");
  return guarded([&] {
    *out = new torsift_db{SignatureDb::defaults()};
    return TORSIFT_OK;
  });
}

torsift_status torsift_db_load(const char* path, torsift_db** out) {
  if (path == nullptr || out == nullptr) return invalid_arg("path/out is NULL");
  return guarded([&] {
    *out = new torsift_db{SignatureDb::load_file(path)};
    return TORSIFT_OK;
  });
}

void torsift_db_free(torsift_db* db) { delete db; }

torsift_status torsift_db_json(const torsift_db* db, char** json_out) {
  if (db == nullptr || json_out == nullptr) return invalid_arg("db/json_out is NULL");
  return guarded([&] { return out_string(db->db.to_json_text(), json_out); });
}

torsift_status torsift_hive_open_file(const char* path, torsift_hive** out) {
  if (path == nullptr || out == nullptr) return invalid_arg("path/out is NULL");
  return guarded([&] {
    std::FILE* f = std::fopen(path, "rb");
    if (f == nullptr) raise(errc::io, std::string("cannot open file: ") + path);
    byte_vec image;
    uint8_t buf[65536];
    size_t n = 0;
    while ((n = std::fread(buf, 1, sizeof(buf), f)) > 0) {
      image.insert(image.end(), buf, buf + n);
    }
    const bool failed = std::ferror(f) != 0;
    std::fclose(f);
    if (failed) raise(errc::io, std::string("read error: ") + path);
    *out = new torsift_hive{hive::Hive::open(std::move(image))};
    return TORSIFT_OK;
  });
}

torsift_status torsift_hive_open_bytes(const uint8_t* data, size_t len, torsift_hive** out) {
  if ((data == nullptr && len > 0) || out == nullptr) return invalid_arg("data/out is NULL");
  return guarded([&] {
    *out = new torsift_hive{hive::Hive::open(byte_vec(data, data + len))};
    return TORSIFT_OK;
  });
}

void torsift_hive_free(torsift_hive* hive) { delete hive; }

torsift_status torsift_hive_ls(torsift_hive* hive, const char* key_path, char** json_out) {
  if (hive == nullptr || key_path == nullptr || json_out == nullptr) {
    return invalid_arg("hive/key_path/json_out is NULL");
  }
  return guarded([&] {
    const hive::KeyNode key = hive->hv.get_key(key_path);
    nlohmann::ordered_json j;
    j["path"] = key_path;
    j["name"] = key.name;
    j["subkey_count"] = key.subkey_count;
    j["value_count"] = key.value_count;
    if (key.last_written_raw < kFiletimeYear10000) {
      j["last_written"] = format_utc(filetime_to_utc(key.last_written_raw));
    }
    j["subkeys"] = nlohmann::ordered_json::array();
    for (const auto& child : hive->hv.subkeys(key)) {
      nlohmann::ordered_json cj;
      cj["name"] = child.name;
      cj["subkey_count"] = child.subkey_count;
      cj["value_count"] = child.value_count;
      j["subkeys"].push_back(std::move(cj));
    }
    j["values"] = nlohmann::ordered_json::array();
    for (const auto& value : hive->hv.values(key)) {
      nlohmann::ordered_json vj;
      vj["name"] = value.name;
      vj["type"] = hive::reg_type_name(value.reg_type);
      vj["length"] = value.data_length;
      j["values"].push_back(std::move(vj));
    }
    return out_string(j.dump(2) + "\n", json_out);
  });
}

torsift_status torsift_hive_read_value(torsift_hive* hive, const char* key_path,
                                       const char* value_name, uint8_t** data_out,
                                       size_t* len_out) {
  if (hive == nullptr || key_path == nullptr || value_name == nullptr || data_out == nullptr ||
      len_out == nullptr) {
    return invalid_arg("hive/key_path/value_name/out is NULL");
  }
  return guarded([&] {
    const hive::KeyNode key = hive->hv.get_key(key_path);
    auto value = hive->hv.find_value(key, value_name);
    if (!value) raise(errc::key_not_found, std::string("no value named '") + value_name + "'");
    return out_bytes(hive->hv.value_data(*value), data_out, len_out);
  });
}

torsift_status torsift_hive_find_keys(torsift_hive* hive, const char* fragment,
                                      char** json_out) {
  if (hive == nullptr || fragment == nullptr || json_out == nullptr) {
    return invalid_arg("hive/fragment/json_out is NULL");
  }
  return guarded([&] {
    auto search = hive->hv.find_keys_matching(fragment);
    nlohmann::ordered_json j;
    j["fragment"] = fragment;
    j["paths"] = search.paths;
    j["warnings"] = search.warnings;
    return out_string(j.dump(2) + "\n", json_out);
  });
}

void torsift_scan_options_init(struct torsift_scan_options* opts) {
  if (opts == nullptr) return;
  const carve::ScanOptions defaults;
  opts->chunk_size = defaults.chunk_size;
  opts->max_record_len = defaults.max_record_len;
  opts->context_radius = defaults.context_radius;
  opts->endpoint_window = defaults.endpoint_window;
  opts->threads = defaults.threads;
}

torsift_status torsift_shellact_parse(const uint8_t* blob, size_t len, int format, char** out) {
  if ((blob == nullptr && len > 0) || out == nullptr) return invalid_arg("blob/out is NULL");
  return guarded([&] {
    const auto log = shellact::parse_shellactivities(byte_span(blob, len));
    if (format == TORSIFT_FORMAT_HUMAN) return out_string(shellact_human(log), out);
    nlohmann::ordered_json j;
    if (log.header_timestamp_raw < kFiletimeYear10000) {
      j["header_timestamp"] = format_utc(filetime_to_utc(log.header_timestamp_raw));
    }
    j["header_timestamp_raw"] = log.header_timestamp_raw;
    j["header_values_hex"] = to_hex(log.header_values);
    j["records"] = nlohmann::ordered_json::array();
    for (const auto& rec : log.records) j["records"].push_back(record_json(rec));
    j["trailing_spans"] = nlohmann::ordered_json::array();
    for (const auto& span : log.trailing) {
      nlohmann::ordered_json sj;
      sj["offset"] = span.offset;
      sj["length"] = span.bytes.size();
      sj["hex"] = to_hex(byte_span(span.bytes).subspan(0, std::min<size_t>(64, span.bytes.size())));
      j["trailing_spans"].push_back(std::move(sj));
    }
    j["warnings"] = log.warnings;
    return out_string(j.dump(2) + "\n", out);
  });
}

torsift_status torsift_carve_file(const char* path, const torsift_db* db,
                                  const struct torsift_scan_options* opts, int format,
                                  char** out) {
  if (path == nullptr || out == nullptr) return invalid_arg("path/out is NULL");
  return guarded([&] {
    const auto report = carve::scan_file(path, db_or_default(db), scan_options_from(opts));
    if (format == TORSIFT_FORMAT_HUMAN) return out_string(scan_report_human(report), out);
    return out_string(scan_report_json(report).dump(2) + "\n", out);
  });
}

torsift_status torsift_memscan_file(const char* path, const torsift_db* db,
                                    const struct torsift_scan_options* opts, int format,
                                    char** out) {
  if (path == nullptr || out == nullptr) return invalid_arg("path/out is NULL");
  return guarded([&] {
    const auto mf =
        memscan::scan_memory_file(path, db_or_default(db), scan_options_from(opts));
    if (format == TORSIFT_FORMAT_HUMAN) {
      std::string text = std::string("verdict: ") + memscan::verdict_name(mf.verdict) + "\n";
      for (const auto& note : mf.notes) text += "  " + note + "\n";
      return out_string(text, out);
    }
    nlohmann::ordered_json j;
    j["verdict"] = memscan::verdict_name(mf.verdict);
    j["process_name_hits"] = nlohmann::ordered_json::object();
    for (const auto& [indicator, offsets] : mf.process_name_hits) {
      j["process_name_hits"][indicator] = offsets;
    }
    j["tor_path_hits"] = nlohmann::ordered_json::array();
    for (const auto& hit : mf.tor_path_hits) {
      nlohmann::ordered_json h;
      h["path"] = hit.path;
      h["offset"] = hit.offset;
      h["encoding"] = carve::scan_encoding_name(hit.encoding);
      h["attribution"] = shellact::browser_kind_name(hit.attribution.kind);
      if (hit.attribution.username) h["username"] = *hit.attribution.username;
      j["tor_path_hits"].push_back(std::move(h));
    }
    j["notes"] = mf.notes;
    return out_string(j.dump(2) + "\n", out);
  });
}

torsift_status torsift_run_case(const char* case_config_json, const char* base_dir,
                                const torsift_db* db, const char* case_id,
                                const char* report_time_utc,
                                const struct torsift_scan_options* opts, int format,
                                char** out) {
  if (case_config_json == nullptr || out == nullptr) {
    return invalid_arg("case_config_json/out is NULL");
  }
  if (report_time_utc == nullptr) return invalid_arg("report_time_utc is required");
  return guarded([&] {
    auto config = pipeline::load_case_config(case_config_json,
                                             base_dir == nullptr ? "" : base_dir);
    auto when = parse_utc(report_time_utc);
    if (!when) raise(errc::invalid_config, "unparseable report time");
    const std::string id = case_id != nullptr ? case_id : config.case_id;
    const auto report = pipeline::run_methodology(config.sources, db_or_default(db), id, *when,
                                                  scan_options_from(opts));
    return out_string(pipeline::render_report(report, format == TORSIFT_FORMAT_HUMAN
                                                          ? pipeline::ReportFormat::Human
                                                          : pipeline::ReportFormat::Machine),
                      out);
  });
}

torsift_status torsift_synth(const char* kind, const char* manifest_json, const torsift_db* db,
                             uint8_t** data_out, size_t* len_out) {
  if (kind == nullptr || manifest_json == nullptr || data_out == nullptr ||
      len_out == nullptr) {
    return invalid_arg("kind/manifest_json/out is NULL");
  }
  return guarded([&] {
    const std::string what = kind;
    if (what == "blob") {
      return out_bytes(synth::blob_from_json_text(manifest_json), data_out, len_out);
    }
    if (what == "hive") {
      const auto entries = synth::hive_entries_from_json_text(manifest_json);
      return out_bytes(synth::build_minimal_hive(entries), data_out, len_out);
    }
    if (what == "noise") {
      const auto manifest = synth::manifest_from_json_text(manifest_json);
      return out_bytes(synth::plant_in_noise(manifest, db_or_default(db)), data_out, len_out);
    }
    raise(errc::invalid_config, "unknown synth kind: " + what);
  });
}

}  // extern "C"
