// Copyright (c) 2026 The torsift authors
// SPDX-License-Identifier: Apache-2.0
//
// torsift command-line tool. Core functionality comes from the libtorsift
// C API; this file only parses arguments, shuttles files, and prints.
//
// Exit codes: 0 = ran; 2 = input unreadable; 3 = invalid configuration.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "torsift/torsift.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitConfig = 3;

int exit_code_for(torsift_status status) {
  switch (status) {
    case TORSIFT_OK:
      return kExitOk;
    case TORSIFT_ERR_CONFIG:
    case TORSIFT_ERR_INVALID_ARG:
    case TORSIFT_ERR_RANGE:
    case TORSIFT_ERR_COLLISION:
    case TORSIFT_ERR_OVERLAP:
      return kExitConfig;
    default:
      return kExitInput;
  }
}

int report_error(torsift_status status) {
  std::cerr << "torsift: " << torsift_status_name(status) << ": " << torsift_last_error()
            << "\n";
  return exit_code_for(status);
}

struct StringOut {
  char* ptr = nullptr;
  ~StringOut() { torsift_free(ptr); }
};

struct BytesOut {
  uint8_t* ptr = nullptr;
  size_t len = 0;
  ~BytesOut() { torsift_free(ptr); }
};

struct DbHandle {
  torsift_db* ptr = nullptr;
  ~DbHandle() { torsift_db_free(ptr); }
};

struct HiveHandle {
  torsift_hive* ptr = nullptr;
  ~HiveHandle() { torsift_hive_free(ptr); }
};

bool read_file(const std::string& path, std::vector<uint8_t>& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  in.seekg(0, std::ios::end);
  const auto size = in.tellg();
  in.seekg(0);
  out.resize(static_cast<size_t>(size));
  if (size > 0) in.read(reinterpret_cast<char*>(out.data()), size);
  return static_cast<bool>(in);
}

bool write_output(const std::string& path, const void* data, size_t len) {
  if (path.empty() || path == "-") {
    std::fwrite(data, 1, len, stdout);
    return true;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(len));
  return static_cast<bool>(out);
}

std::string now_utc() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Globals {
  std::string db_path;
  std::string format = "human";
  std::string case_id;
  std::string report_time;
  uint64_t chunk_size = 0;
  uint64_t max_record_len = 0;

  int format_flag() const {
    return format == "machine" ? TORSIFT_FORMAT_MACHINE : TORSIFT_FORMAT_HUMAN;
  }

  torsift_scan_options scan_options() const {
    torsift_scan_options opts;
    torsift_scan_options_init(&opts);
    if (chunk_size > 0) opts.chunk_size = chunk_size;
    if (max_record_len > 0) opts.max_record_len = max_record_len;
    return opts;
  }

  int load_db(DbHandle& db) const {
    const torsift_status status = db_path.empty()
                                      ? torsift_db_default(&db.ptr)
                                      : torsift_db_load(db_path.c_str(), &db.ptr);
    return status == TORSIFT_OK ? kExitOk : report_error(status);
  }
};

int open_hive(const std::string& path, HiveHandle& hive) {
  const torsift_status status = torsift_hive_open_file(path.c_str(), &hive.ptr);
  return status == TORSIFT_OK ? kExitOk : report_error(status);
}

void print_key_listing(const nlohmann::json& j) {
  std::cout << "key " << j["path"].get<std::string>() << "\n";
  std::cout << "  name:    " << j["name"].get<std::string>() << "\n";
  if (j.contains("last_written")) {
    std::cout << "  written: " << j["last_written"].get<std::string>() << "\n";
  }
  std::cout << "  subkeys: " << j["subkey_count"] << "  values: " << j["value_count"] << "\n";
  for (const auto& k : j["subkeys"]) {
    std::cout << "  [key]   " << k["name"].get<std::string>() << " (" << k["subkey_count"]
              << " subkeys, " << k["value_count"] << " values)\n";
  }
  for (const auto& v : j["values"]) {
    const std::string name = v["name"].get<std::string>();
    std::cout << "  [value] " << (name.empty() ? "(default)" : name) << " "
              << v["type"].get<std::string>() << " " << v["length"] << " bytes\n";
  }
}

int cmd_hive_ls(const Globals& g, const std::string& hive_path, const std::string& key) {
  HiveHandle hive;
  if (int rc = open_hive(hive_path, hive)) return rc;
  StringOut out;
  const torsift_status status = torsift_hive_ls(hive.ptr, key.c_str(), &out.ptr);
  if (status != TORSIFT_OK) return report_error(status);
  if (g.format_flag() == TORSIFT_FORMAT_MACHINE) {
    std::cout << out.ptr;
  } else {
    print_key_listing(nlohmann::json::parse(out.ptr));
  }
  return kExitOk;
}

int cmd_hive_export(const Globals& g, const std::string& hive_path, const std::string& key,
                    const std::string& value, const std::string& out_path) {
  (void)g;
  HiveHandle hive;
  if (int rc = open_hive(hive_path, hive)) return rc;
  BytesOut data;
  const torsift_status status =
      torsift_hive_read_value(hive.ptr, key.c_str(), value.c_str(), &data.ptr, &data.len);
  if (status != TORSIFT_OK) return report_error(status);
  if (!write_output(out_path, data.ptr, data.len)) {
    std::cerr << "torsift: cannot write " << out_path << "\n";
    return kExitInput;
  }
  if (!out_path.empty() && out_path != "-") {
    std::cerr << "wrote " << data.len << " bytes to " << out_path << "\n";
  }
  return kExitOk;
}

int cmd_hive_find(const Globals& g, const std::string& hive_path, const std::string& fragment) {
  HiveHandle hive;
  if (int rc = open_hive(hive_path, hive)) return rc;
  StringOut out;
  const torsift_status status = torsift_hive_find_keys(hive.ptr, fragment.c_str(), &out.ptr);
  if (status != TORSIFT_OK) return report_error(status);
  if (g.format_flag() == TORSIFT_FORMAT_MACHINE) {
    std::cout << out.ptr;
  } else {
    auto j = nlohmann::json::parse(out.ptr);
    for (const auto& p : j["paths"]) std::cout << p.get<std::string>() << "\n";
    for (const auto& w : j["warnings"]) {
      std::cerr << "warning: " << w.get<std::string>() << "\n";
    }
  }
  return kExitOk;
}

// Candidate shellactivities blobs inside a hive: the db's published key path
// first, then any key whose name contains "shellactivities" and its children.
int parse_blob_from_hive(const Globals& g, const std::string& path) {
  HiveHandle hive;
  if (int rc = open_hive(path, hive)) return rc;
  DbHandle db;
  if (int rc = g.load_db(db)) return rc;

  std::vector<std::string> candidates;
  {
    StringOut db_json;
    if (torsift_db_json(db.ptr, &db_json.ptr) == TORSIFT_OK) {
      auto j = nlohmann::json::parse(db_json.ptr);
      for (const auto& p : j["registry_key_paths"]) {
        const auto text = p.get<std::string>();
        if (text.find("shellactivities") != std::string::npos) candidates.push_back(text);
      }
    }
  }
  {
    StringOut found;
    if (torsift_hive_find_keys(hive.ptr, "shellactivities", &found.ptr) == TORSIFT_OK) {
      auto j = nlohmann::json::parse(found.ptr);
      for (const auto& p : j["paths"]) {
        const auto base = p.get<std::string>();
        candidates.push_back(base);
        StringOut ls;
        if (torsift_hive_ls(hive.ptr, base.c_str(), &ls.ptr) == TORSIFT_OK) {
          auto lj = nlohmann::json::parse(ls.ptr);
          for (const auto& child : lj["subkeys"]) {
            candidates.push_back(base + "\\" + child["name"].get<std::string>());
          }
        }
      }
    }
  }

  for (const auto& key : candidates) {
    StringOut ls;
    if (torsift_hive_ls(hive.ptr, key.c_str(), &ls.ptr) != TORSIFT_OK) continue;
    auto lj = nlohmann::json::parse(ls.ptr);
    for (const auto& v : lj["values"]) {
      BytesOut data;
      const std::string value_name = v["name"].get<std::string>();
      if (torsift_hive_read_value(hive.ptr, key.c_str(), value_name.c_str(), &data.ptr,
                                  &data.len) != TORSIFT_OK) {
        continue;
      }
      StringOut parsed;
      if (torsift_shellact_parse(data.ptr, data.len, g.format_flag(), &parsed.ptr) ==
          TORSIFT_OK) {
        std::cerr << "decoded value \"" << value_name << "\" of key " << key << "\n";
        std::cout << parsed.ptr;
        return kExitOk;
      }
    }
  }
  std::cerr << "torsift: no shellactivities blob found in " << path << "\n";
  return kExitInput;
}

int cmd_shellact_parse(const Globals& g, const std::string& path) {
  std::vector<uint8_t> bytes;
  if (!read_file(path, bytes)) {
    std::cerr << "torsift: cannot read " << path << "\n";
    return kExitInput;
  }
  if (bytes.size() >= 4 && bytes[0] == 'r' && bytes[1] == 'e' && bytes[2] == 'g' &&
      bytes[3] == 'f') {
    return parse_blob_from_hive(g, path);
  }
  StringOut out;
  const torsift_status status =
      torsift_shellact_parse(bytes.data(), bytes.size(), g.format_flag(), &out.ptr);
  if (status != TORSIFT_OK) return report_error(status);
  std::cout << out.ptr;
  return kExitOk;
}

int cmd_carve(const Globals& g, const std::string& image) {
  DbHandle db;
  if (int rc = g.load_db(db)) return rc;
  const auto opts = g.scan_options();
  StringOut out;
  const torsift_status status =
      torsift_carve_file(image.c_str(), db.ptr, &opts, g.format_flag(), &out.ptr);
  if (status != TORSIFT_OK) return report_error(status);
  std::cout << out.ptr;
  return kExitOk;
}

int cmd_memscan(const Globals& g, const std::string& dump) {
  DbHandle db;
  if (int rc = g.load_db(db)) return rc;
  const auto opts = g.scan_options();
  StringOut out;
  const torsift_status status =
      torsift_memscan_file(dump.c_str(), db.ptr, &opts, g.format_flag(), &out.ptr);
  if (status != TORSIFT_OK) return report_error(status);
  std::cout << out.ptr;
  return kExitOk;
}

int cmd_report(const Globals& g, const std::string& config_path, const std::string& out_path) {
  std::vector<uint8_t> config_bytes;
  if (!read_file(config_path, config_bytes)) {
    std::cerr << "torsift: cannot read " << config_path << "\n";
    return kExitInput;
  }
  const std::string config(config_bytes.begin(), config_bytes.end());
  std::string base_dir = ".";
  const auto slash = config_path.find_last_of('/');
  if (slash != std::string::npos) base_dir = config_path.substr(0, slash);

  DbHandle db;
  if (int rc = g.load_db(db)) return rc;
  const auto opts = g.scan_options();
  const std::string when = g.report_time.empty() ? now_utc() : g.report_time;
  StringOut out;
  const torsift_status status = torsift_run_case(
      config.c_str(), base_dir.c_str(), db.ptr, g.case_id.empty() ? nullptr : g.case_id.c_str(),
      when.c_str(), &opts, g.format_flag(), &out.ptr);
  if (status != TORSIFT_OK) return report_error(status);
  if (!write_output(out_path, out.ptr, std::string(out.ptr).size())) {
    std::cerr << "torsift: cannot write " << out_path << "\n";
    return kExitInput;
  }
  return kExitOk;
}

int cmd_synth(const Globals& g, const std::string& kind, const std::string& manifest_path,
              const std::string& out_path) {
  std::vector<uint8_t> manifest_bytes;
  if (!read_file(manifest_path, manifest_bytes)) {
    std::cerr << "torsift: cannot read " << manifest_path << "\n";
    return kExitInput;
  }
  const std::string manifest(manifest_bytes.begin(), manifest_bytes.end());
  DbHandle db;
  if (int rc = g.load_db(db)) return rc;
  BytesOut data;
  const torsift_status status =
      torsift_synth(kind.c_str(), manifest.c_str(), db.ptr, &data.ptr, &data.len);
  if (status != TORSIFT_OK) return report_error(status);
  if (!write_output(out_path, data.ptr, data.len)) {
    std::cerr << "torsift: cannot write " << out_path << "\n";
    return kExitInput;
  }
  if (!out_path.empty() && out_path != "-") {
    std::cerr << "wrote " << data.len << " bytes to " << out_path << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tor Browser Bundle artifact triage toolkit"};
  app.set_version_flag("--version", std::string(torsift_version()));
  app.require_subcommand(1);

  Globals g;
  app.add_option("--db", g.db_path, "signature database JSON (per-field override of defaults)");
  app.add_option("--format", g.format, "output format")
      ->check(CLI::IsMember({"human", "machine"}))
      ->capture_default_str();
  app.add_option("--case-id", g.case_id, "case identifier for reports");
  app.add_option("--report-time", g.report_time,
                 "report creation instant, e.g. 2026-01-02T03:04:05Z (defaults to now; pin it "
                 "for reproducible reports)");
  app.add_option("--chunk-size", g.chunk_size, "streaming scan stride in bytes");
  app.add_option("--max-record-len", g.max_record_len, "record carve bound in bytes");

  // hive
  auto* hive_cmd = app.add_subcommand("hive", "navigate a registry hive and extract values");
  hive_cmd->require_subcommand(1);
  std::string hive_path, key_path, value_name, out_path, fragment;

  auto* ls = hive_cmd->add_subcommand("ls", "list a key's subkeys and values");
  ls->add_option("hive", hive_path, "hive file")->required();
  ls->add_option("key", key_path, "key path (default: root)");

  auto* get = hive_cmd->add_subcommand("get", "show a key");
  get->add_option("hive", hive_path, "hive file")->required();
  get->add_option("key", key_path, "key path")->required();

  auto* exp = hive_cmd->add_subcommand("export", "write raw value data");
  exp->add_option("hive", hive_path, "hive file")->required();
  exp->add_option("key", key_path, "key path")->required();
  exp->add_option("--value", value_name, "value name (default: the default value)");
  exp->add_option("-o,--out", out_path, "output file (default: stdout)");

  auto* find = hive_cmd->add_subcommand("find", "find keys by name fragment");
  find->add_option("hive", hive_path, "hive file")->required();
  find->add_option("fragment", fragment, "case-insensitive name fragment")->required();

  // shellact
  auto* shellact_cmd = app.add_subcommand("shellact", "decode shellactivities blobs");
  shellact_cmd->require_subcommand(1);
  std::string blob_path;
  auto* parse = shellact_cmd->add_subcommand(
      "parse", "decode records from a raw blob or straight from a hive");
  parse->add_option("input", blob_path, "blob file or hive file (auto-detected)")->required();

  // carve / memscan
  std::string image_path, dump_path;
  auto* carve_cmd = app.add_subcommand("carve", "scan a raw image for artifacts");
  carve_cmd->add_option("image", image_path, "raw image file")->required();
  auto* memscan_cmd = app.add_subcommand("memscan", "triage a memory image");
  memscan_cmd->add_option("dump", dump_path, "memory dump / pagefile / hiberfil")->required();

  // report
  std::string case_path, report_out;
  auto* report_cmd = app.add_subcommand("report", "run the full methodology over a case");
  report_cmd->add_option("case", case_path, "case config JSON")->required();
  report_cmd->add_option("-o,--out", report_out, "output file (default: stdout)");

  // synth
  std::string synth_kind, manifest_path, synth_out;
  auto* synth_cmd = app.add_subcommand("synth", "generate test fixtures from a manifest");
  synth_cmd->add_option("kind", synth_kind, "blob | hive | noise")
      ->required()
      ->check(CLI::IsMember({"blob", "hive", "noise"}));
  synth_cmd->add_option("--manifest", manifest_path, "fixture manifest JSON")->required();
  synth_cmd->add_option("-o,--out", synth_out, "output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  if (ls->parsed()) return cmd_hive_ls(g, hive_path, key_path);
  if (get->parsed()) return cmd_hive_ls(g, hive_path, key_path);
  if (exp->parsed()) return cmd_hive_export(g, hive_path, key_path, value_name, out_path);
  if (find->parsed()) return cmd_hive_find(g, hive_path, fragment);
  if (parse->parsed()) return cmd_shellact_parse(g, blob_path);
  if (carve_cmd->parsed()) return cmd_carve(g, image_path);
  if (memscan_cmd->parsed()) return cmd_memscan(g, dump_path);
  if (report_cmd->parsed()) return cmd_report(g, case_path, report_out);
  if (synth_cmd->parsed()) return cmd_synth(g, synth_kind, manifest_path, synth_out);
  return kExitConfig;
}
