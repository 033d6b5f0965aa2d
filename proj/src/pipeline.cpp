// Copyright (c) 2026 The torsift authors
// SPDX-License-Identifier: Apache-2.0
//
// The investigative pipeline: memory triage, hive shellactivities
// extraction, audio-key corroboration, raw-stream scanning, and the
// assembly of findings with re-derivable evidence. Per-source failures
// become skipped steps; the run never aborts wholesale.

#include "torsift/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "torsift/digest.hpp"
#include "torsift/errors.hpp"
#include "torsift/memscan.hpp"
#include "torsift/shellact.hpp"
#include "torsift/text.hpp"

namespace torsift::pipeline {

namespace {

constexpr size_t kMaxEvidencePerFinding = 32;

byte_vec load_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(errc::io, "cannot open file: " + path);
  in.seekg(0, std::ios::end);
  const auto size = in.tellg();
  in.seekg(0);
  byte_vec out(static_cast<size_t>(size));
  if (size > 0) {
    in.read(reinterpret_cast<char*>(out.data()), size);
    if (!in) raise(errc::io, "read error: " + path);
  }
  return out;
}

const char* scan_decode_name(carve::Encoding e) {
  return e == carve::Encoding::ascii ? "ascii" : "utf16le";
}

size_t encoded_text_len(const std::string& text, carve::Encoding e) {
  return e == carve::Encoding::utf16le ? utf8_to_utf16le(text).size() : text.size();
}

struct Builder {
  const SignatureDb& db;
  std::vector<Finding> findings;
  std::vector<SkippedStep> skipped;

  void skip(std::string step, std::string reason) {
    skipped.push_back({std::move(step), std::move(reason)});
  }

  Finding& add(Category cat) {
    findings.push_back({});
    findings.back().category = cat;
    return findings.back();
  }

  void annotate_locale(Finding& f, const std::string& title) {
    for (const auto& marker : db.locale_markers) {
      if (!marker.empty() && contains_ci(title, marker)) {
        f.annotations.push_back("locale marker: " + marker);
      }
    }
  }
};

EvidenceRef stream_evidence(const CaseSource& src, uint64_t offset, uint64_t length,
                            std::string decode, std::string text) {
  EvidenceRef ev;
  ev.source_id = src.id;
  ev.kind = EvidenceRef::Kind::Stream;
  ev.offset = offset;
  ev.length = length;
  ev.sha256 = sha256_hex(src.read_span(offset, length));
  ev.decode = std::move(decode);
  ev.text = std::move(text);
  return ev;
}

EvidenceRef registry_evidence(const CaseSource& src, const std::string& key_path,
                              const std::string& value_name, uint64_t offset, byte_span bytes,
                              std::string decode, std::string text) {
  EvidenceRef ev;
  ev.source_id = src.id;
  ev.kind = EvidenceRef::Kind::Registry;
  ev.key_path = key_path;
  ev.value_name = value_name;
  ev.offset = offset;
  ev.length = bytes.size();
  ev.sha256 = sha256_hex(bytes);
  ev.decode = std::move(decode);
  ev.text = std::move(text);
  return ev;
}

// ---- memory sources ----

// An indicator hit's offset comes from either encoding; probe the stream
// to rebuild the matching evidence span and its decoded text.
EvidenceRef indicator_evidence(const CaseSource& src, const std::string& indicator,
                               uint64_t offset) {
  const uint64_t avail = src.size() - offset;
  const uint64_t ascii_len = std::min<uint64_t>(indicator.size(), avail);
  byte_vec probe = src.read_span(offset, ascii_len);
  std::string probe_text(probe.begin(), probe.end());
  if (probe.size() == indicator.size() && ascii_iequals(probe_text, indicator)) {
    return stream_evidence(src, offset, indicator.size(), "ascii", probe_text);
  }
  const uint64_t len = std::min<uint64_t>(encoded_text_len(indicator, carve::Encoding::utf16le),
                                          avail);
  byte_vec span = src.read_span(offset, len);
  auto text = utf16le_to_utf8(span);
  return stream_evidence(src, offset, len, "utf16le", text ? *text : std::string());
}

void run_memory_source(Builder& b, const CaseSource& src, const carve::ScanOptions& opts) {
  memscan::MemoryFindings mf;
  try {
    mf = src.in_memory ? memscan::scan_memory_image(src.bytes, b.db, opts)
                       : memscan::scan_memory_file(src.path, b.db, opts);
  } catch (const error& e) {
    b.skip("memory-triage:" + src.id, e.what());
    return;
  }

  if (mf.verdict == memscan::Verdict::TorConfirmed) {
    std::vector<EvidenceRef> evidence;
    for (const auto& [indicator, offsets] : mf.process_name_hits) {
      if (ascii_iequals(indicator, "firefox.exe")) continue;
      for (uint64_t off : offsets) {
        if (evidence.size() >= kMaxEvidencePerFinding) break;
        evidence.push_back(indicator_evidence(src, indicator, off));
      }
    }
    for (const auto& hit : mf.tor_path_hits) {
      if (evidence.size() >= kMaxEvidencePerFinding) break;
      evidence.push_back(stream_evidence(src, hit.offset,
                                         encoded_text_len(hit.path, hit.encoding),
                                         scan_decode_name(hit.encoding), hit.path));
    }
    if (!evidence.empty()) {
      Finding& f = b.add(Category::TorPresence);
      f.evidence = std::move(evidence);
      f.annotations = mf.notes;
    }
  }

  for (const auto& hit : mf.tor_path_hits) {
    if (hit.attribution.kind == shellact::BrowserKind::TorPortable) {
      Finding& f = b.add(Category::TorPortableMode);
      f.evidence.push_back(stream_evidence(src, hit.offset,
                                           encoded_text_len(hit.path, hit.encoding),
                                           scan_decode_name(hit.encoding), hit.path));
    }
  }

  if (mf.verdict == memscan::Verdict::FirefoxOnly) {
    const auto it = std::find_if(
        mf.process_name_hits.begin(), mf.process_name_hits.end(),
        [](const auto& kv) { return ascii_iequals(kv.first, "firefox.exe"); });
    if (it != mf.process_name_hits.end() && !it->second.empty()) {
      Finding& f = b.add(Category::EnvironmentNote);
      f.evidence.push_back(indicator_evidence(src, it->first, it->second.front()));
      f.annotations.push_back(
          "firefox.exe indicator present without Tor corroboration; a plain Firefox "
          "installation cannot be ruled out");
    }
  }
}

// ---- hive sources ----

struct LocatedBlob {
  std::string key_path;
  std::string value_name;
  byte_vec data;
};

void emit_record_findings(Builder& b, const CaseSource& src, const LocatedBlob& blob,
                          const shellact::ShellActivityLog& log) {
  std::vector<std::string> timestamps;
  if (log.header_timestamp_raw < kFiletimeYear10000) {
    timestamps.push_back(format_utc(filetime_to_utc(log.header_timestamp_raw)));
  }
  bool tor_standard_seen = false;
  bool tor_portable_seen = false;
  std::vector<EvidenceRef> standard_evidence;
  std::vector<EvidenceRef> portable_evidence;

  for (const auto& rec : log.records) {
    const byte_span extent = byte_span(blob.data).subspan(
        rec.start_offset, rec.end_offset - rec.start_offset);
    const auto attribution = shellact::classify_record(rec);
    const auto strip = shellact::strip_browser_suffix(rec.page_title, b.db.title_suffixes);

    Finding* activity = nullptr;
    switch (attribution.kind) {
      case shellact::BrowserKind::TorStandard:
      case shellact::BrowserKind::TorPortable:
        activity = &b.add(Category::BrowsingActivity);
        break;
      case shellact::BrowserKind::FirefoxOther:
        activity = &b.add(Category::FirefoxPrivateActivity);
        break;
      case shellact::BrowserKind::Unknown:
        activity = &b.add(Category::BrowsingActivity);
        break;
    }
    activity->timestamps = timestamps;
    activity->evidence.push_back(registry_evidence(src, blob.key_path, blob.value_name,
                                                   rec.start_offset, extent, "record",
                                                   rec.page_title));
    if (strip.suffix) {
      activity->annotations.push_back("title suffix: " + *strip.suffix);
      activity->annotations.push_back("clean title: " + strip.clean);
    }
    if (!rec.exe_path.empty()) {
      activity->annotations.push_back("executable: " + rec.exe_path);
    }
    if (rec.undecoded) {
      activity->annotations.push_back("strings undecoded; raw title bytes: " +
                                      to_hex(rec.page_title_raw));
    }
    activity->annotations.push_back(std::string("attribution: ") +
                                    shellact::browser_kind_name(attribution.kind));
    b.annotate_locale(*activity, rec.page_title);

    EvidenceRef path_ev = registry_evidence(src, blob.key_path, blob.value_name,
                                            rec.start_offset, extent, "record-path",
                                            rec.exe_path);
    if (attribution.kind == shellact::BrowserKind::TorStandard) {
      tor_standard_seen = true;
      if (standard_evidence.size() < kMaxEvidencePerFinding) {
        standard_evidence.push_back(std::move(path_ev));
      }
    } else if (attribution.kind == shellact::BrowserKind::TorPortable) {
      tor_portable_seen = true;
      if (portable_evidence.size() < kMaxEvidencePerFinding) {
        portable_evidence.push_back(std::move(path_ev));
      }
    }
  }

  if (tor_standard_seen) {
    Finding& f = b.add(Category::TorPresence);
    f.evidence = std::move(standard_evidence);
    f.timestamps = timestamps;
    for (const auto& rec : log.records) {
      const auto attribution = shellact::classify_record(rec);
      if (attribution.kind == shellact::BrowserKind::TorStandard) {
        f.annotations.push_back("executable path: " + rec.exe_path);
        if (attribution.username) f.annotations.push_back("username: " + *attribution.username);
        break;
      }
    }
  }
  if (tor_portable_seen) {
    Finding& f = b.add(Category::TorPortableMode);
    f.evidence = std::move(portable_evidence);
    f.timestamps = timestamps;
    for (const auto& rec : log.records) {
      const auto attribution = shellact::classify_record(rec);
      if (attribution.kind == shellact::BrowserKind::TorPortable) {
        f.annotations.push_back("executable path: " + rec.exe_path);
        if (attribution.drive_letter) {
          f.annotations.push_back(std::string("drive: ") + *attribution.drive_letter);
        }
        break;
      }
    }
  }
}

void run_hive_source(Builder& b, const CaseSource& src, const hive::Hive& hv) {
  // Locate the shellactivities key: exact path first, then a name search.
  std::vector<std::string> key_paths;
  const std::string* exact = b.db.shellactivities_key_path();
  if (exact != nullptr) {
    try {
      hv.get_key(*exact);
      key_paths.push_back(*exact);
    } catch (const error&) {
      // fall through to the search
    }
  }
  if (key_paths.empty()) {
    auto search = hv.find_keys_matching("shellactivities");
    for (auto& w : search.warnings) {
      b.skip("hive-walk:" + src.id, w);
    }
    // The blob usually lives in a child ("Current"); search named keys and
    // one level below them.
    for (const auto& path : search.paths) {
      key_paths.push_back(path);
      try {
        for (const auto& child : hv.subkeys(hv.get_key(path))) {
          key_paths.push_back(path + "\\" + child.name);
        }
      } catch (const error&) {
        // subtree corruption was already recorded by the walk
      }
    }
  }

  if (key_paths.empty()) {
    bool cloudstore_present = true;
    try {
      hv.get_key("Software\\Microsoft\\Windows\\CurrentVersion\\CloudStore");
    } catch (const error&) {
      cloudstore_present = false;
    }
    if (!cloudstore_present) {
      Finding& f = b.add(Category::EnvironmentNote);
      EvidenceRef ev;
      ev.source_id = src.id;
      ev.kind = EvidenceRef::Kind::RegistryAbsent;
      ev.key_path = "Software\\Microsoft\\Windows\\CurrentVersion\\CloudStore";
      ev.sha256 = sha256_hex({});
      ev.text = "key absent";
      f.evidence.push_back(std::move(ev));
      f.annotations.push_back(
          "CloudStore key absent: shellactivities data only exists on Windows 10 1703 "
          "(Creators Update) and later");
    } else {
      b.skip("shellactivities-extraction:" + src.id,
             "CloudStore present but no shellactivities key found");
    }
    return;
  }

  bool parsed_any = false;
  for (const auto& key_path : key_paths) {
    hive::KeyNode key;
    try {
      key = hv.get_key(key_path);
    } catch (const error& e) {
      b.skip("shellactivities-extraction:" + src.id, e.what());
      continue;
    }
    for (const auto& value : hv.values(key)) {
      if (value.reg_type != hive::REG_BINARY) continue;
      byte_vec data;
      try {
        data = hv.value_data(value);
      } catch (const error& e) {
        b.skip("shellactivities-extraction:" + src.id, e.what());
        continue;
      }
      shellact::ShellActivityLog log;
      try {
        log = shellact::parse_shellactivities(data);
      } catch (const error&) {
        continue;  // a binary value that is not a shellactivities blob
      }
      parsed_any = true;
      LocatedBlob blob{key_path, value.name, std::move(data)};
      for (const auto& warning : log.warnings) {
        b.skip("shellactivities-parse:" + src.id, warning);
      }
      emit_record_findings(b, src, blob, log);
    }
  }
  if (!parsed_any) {
    b.skip("shellactivities-extraction:" + src.id,
           "key present but no value parsed as a shellactivities blob");
  }
}

// ---- raw sources ----

bool keyword_is_tor_indicator(const SignatureDb& db, const std::string& keyword) {
  if (ascii_iequals(keyword, "firefox.exe")) return false;
  for (const auto& k : db.keywords) {
    if (ascii_iequals(k, keyword)) return true;
  }
  return ascii_iequals(keyword, "tor.exe") || ascii_iequals(keyword, "obfs4proxy.exe");
}

void run_raw_source(Builder& b, const CaseSource& src, const carve::ScanOptions& opts) {
  carve::ScanReport report;
  try {
    report = src.in_memory ? carve::scan_buffer(src.bytes, b.db, opts)
                           : carve::scan_file(src.path, b.db, opts);
  } catch (const error& e) {
    b.skip("raw-scan:" + src.id, e.what());
    return;
  }

  // Tor-indicative keyword hits aggregate into one presence finding.
  std::vector<EvidenceRef> presence;
  for (const auto& hit : report.keyword_hits) {
    if (!keyword_is_tor_indicator(b.db, hit.keyword)) continue;
    if (presence.size() >= kMaxEvidencePerFinding) break;
    presence.push_back(stream_evidence(src, hit.offset, encoded_text_len(hit.matched, hit.encoding),
                                       scan_decode_name(hit.encoding), hit.matched));
  }
  for (const auto& hit : report.path_hits) {
    if (presence.size() >= kMaxEvidencePerFinding) break;
    presence.push_back(stream_evidence(src, hit.offset, encoded_text_len(hit.path, hit.encoding),
                                       scan_decode_name(hit.encoding), hit.path));
  }
  if (!presence.empty()) {
    Finding& f = b.add(Category::TorPresence);
    f.evidence = std::move(presence);
  }

  for (const auto& hit : report.path_hits) {
    if (hit.attribution.kind == shellact::BrowserKind::TorPortable) {
      Finding& f = b.add(Category::TorPortableMode);
      f.evidence.push_back(stream_evidence(src, hit.offset,
                                           encoded_text_len(hit.path, hit.encoding),
                                           scan_decode_name(hit.encoding), hit.path));
      if (hit.attribution.drive_letter) {
        f.annotations.push_back(std::string("drive: ") + *hit.attribution.drive_letter);
      }
    }
  }

  for (const auto& hit : report.endpoint_hits) {
    Finding& f = b.add(Category::BridgingEndpoint);
    std::string text = hit.address;
    if (hit.port) text += ":" + std::to_string(*hit.port);
    f.evidence.push_back(stream_evidence(src, hit.offset, encoded_text_len(text, hit.encoding),
                                         scan_decode_name(hit.encoding), text));
    f.annotations.push_back("obfs4 keyword at offset " + std::to_string(hit.anchor_offset) +
                            ", " + std::to_string(hit.distance) + " bytes away");
  }

  for (const auto& hit : report.url_hits) {
    Finding& f = b.add(Category::BrowsingActivity);
    f.evidence.push_back(stream_evidence(src, hit.offset, encoded_text_len(hit.url, hit.encoding),
                                         scan_decode_name(hit.encoding), hit.url));
    f.annotations.push_back("url remnant");
  }

  for (const auto& carved : report.records) {
    if (!carved.complete || !carved.record) continue;
    const auto& rec = *carved.record;
    const auto attribution = shellact::classify_record(rec);
    Finding& f = b.add(attribution.kind == shellact::BrowserKind::FirefoxOther
                           ? Category::FirefoxPrivateActivity
                           : Category::BrowsingActivity);
    f.evidence.push_back(stream_evidence(src, rec.start_offset,
                                         rec.end_offset - rec.start_offset, "record",
                                         rec.page_title));
    f.annotations.push_back("carved record");
    if (!rec.exe_path.empty()) f.annotations.push_back("executable: " + rec.exe_path);
    f.annotations.push_back(std::string("attribution: ") +
                            shellact::browser_kind_name(attribution.kind));
    b.annotate_locale(f, rec.page_title);
  }
}

// ---- corroboration and ordering ----

void upgrade_corroborated(std::vector<Finding>& findings) {
  std::map<std::string, std::set<std::string>> text_sources;
  for (const auto& f : findings) {
    for (const auto& ev : f.evidence) {
      if (!ev.text.empty()) text_sources[ev.text].insert(ev.source_id);
    }
  }
  for (auto& f : findings) {
    for (const auto& ev : f.evidence) {
      if (!ev.text.empty() && text_sources[ev.text].size() >= 2) {
        f.confidence = Confidence::Corroborated;
        break;
      }
    }
  }
}

std::string evidence_sort_key(const Finding& f) {
  if (f.evidence.empty()) return "";
  const auto& ev = f.evidence.front();
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%020llu", static_cast<unsigned long long>(ev.offset));
  return ev.source_id + "|" + ev.key_path + "|" + buf + "|" + ev.text;
}

void sort_findings(std::vector<Finding>& findings) {
  std::stable_sort(findings.begin(), findings.end(), [](const Finding& a, const Finding& b) {
    if (a.category != b.category) return static_cast<int>(a.category) < static_cast<int>(b.category);
    return evidence_sort_key(a) < evidence_sort_key(b);
  });
}

}  // namespace

// ---- CaseSource ----

CaseSource CaseSource::from_file(std::string id, SourceRole role, std::string path) {
  CaseSource src;
  src.id = std::move(id);
  src.role = role;
  src.path = std::move(path);
  src.in_memory = false;
  return src;
}

CaseSource CaseSource::from_bytes(std::string id, SourceRole role, byte_vec bytes) {
  CaseSource src;
  src.id = std::move(id);
  src.role = role;
  src.bytes = std::move(bytes);
  src.in_memory = true;
  return src;
}

uint64_t CaseSource::size() const {
  if (in_memory) return bytes.size();
  std::error_code ec;
  const auto n = std::filesystem::file_size(path, ec);
  if (ec) raise(errc::io, "cannot stat file: " + path);
  return n;
}

byte_vec CaseSource::read_span(uint64_t offset, uint64_t length) const {
  if (in_memory) {
    if (offset + length > bytes.size() || offset + length < offset) {
      raise(errc::out_of_range, "span outside source bounds");
    }
    return byte_vec(bytes.begin() + offset, bytes.begin() + offset + length);
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(errc::io, "cannot open file: " + path);
  in.seekg(0, std::ios::end);
  const uint64_t total = static_cast<uint64_t>(in.tellg());
  if (offset + length > total || offset + length < offset) {
    raise(errc::out_of_range, "span outside source bounds");
  }
  byte_vec out(static_cast<size_t>(length));
  in.seekg(static_cast<std::streamoff>(offset));
  if (length > 0) {
    in.read(reinterpret_cast<char*>(out.data()), static_cast<std::streamsize>(length));
    if (!in) raise(errc::io, "read error: " + path);
  }
  return out;
}

std::string CaseSource::content_sha256() const {
  return in_memory ? sha256_hex(bytes) : sha256_hex_file(path);
}

const char* role_name(SourceRole r) {
  switch (r) {
    case SourceRole::Hive: return "hive";
    case SourceRole::Memory: return "memory";
    case SourceRole::Raw: return "raw";
  }
  return "raw";
}

const char* category_name(Category c) {
  switch (c) {
    case Category::TorPresence: return "tor_presence";
    case Category::TorPortableMode: return "tor_portable_mode";
    case Category::BrowsingActivity: return "browsing_activity";
    case Category::BridgingEndpoint: return "bridging_endpoint";
    case Category::AudioCorroboration: return "audio_corroboration";
    case Category::FirefoxPrivateActivity: return "firefox_private_activity";
    case Category::EnvironmentNote: return "environment_note";
  }
  return "environment_note";
}

const char* confidence_name(Confidence c) {
  return c == Confidence::Corroborated ? "corroborated" : "single_source";
}

// ---- audio key ----

std::vector<Finding> check_audio_key(const hive::Hive& hv, const SignatureDb& db,
                                     const std::string& source_id) {
  std::vector<Finding> out;
  const std::string* audio_path = db.audio_key_path();
  if (audio_path == nullptr) return out;
  hive::KeyNode key;
  try {
    key = hv.get_key(*audio_path);
  } catch (const error&) {
    return out;  // absence is normal
  }
  const std::vector<std::string> needles = {"Tor Browser"};
  for (const auto& value : hv.values(key)) {
    byte_vec data;
    try {
      data = hv.value_data(value);
    } catch (const error&) {
      continue;
    }
    auto hits = carve::keyword_scan(data, needles, {}, 64);
    for (const auto& hit : hits) {
      Finding f;
      f.category = Category::AudioCorroboration;
      EvidenceRef ev;
      ev.source_id = source_id;
      ev.kind = EvidenceRef::Kind::Registry;
      ev.key_path = *audio_path;
      ev.value_name = value.name;
      ev.offset = hit.offset;
      ev.length = encoded_text_len(hit.matched, hit.encoding);
      ev.sha256 = sha256_hex(byte_span(data).subspan(hit.offset, ev.length));
      ev.decode = scan_decode_name(hit.encoding);
      ev.text = hit.matched;
      f.evidence.push_back(std::move(ev));
      f.annotations.push_back("audio PolicyConfig value references the browser path");
      out.push_back(std::move(f));
    }
  }
  return out;
}

// ---- the run ----

ForensicReport run_methodology(std::span<const CaseSource> sources, const SignatureDb& db,
                               const std::string& case_id, const UtcTime& report_time,
                               const carve::ScanOptions& opts) {
  if (sources.empty()) raise(errc::invalid_config, "at least one case source is required");

  ForensicReport report;
  report.case_id = case_id;
  report.generated_at = format_utc(report_time);

  Builder b{db, {}, {}};

  bool any_memory = false;
  for (const auto& src : sources) {
    ForensicReport::Input input;
    input.source_id = src.id;
    input.role = role_name(src.role);
    try {
      input.sha256 = src.content_sha256();
      input.length = src.size();
    } catch (const error& e) {
      b.skip("input:" + src.id, e.what());
      report.inputs.push_back(std::move(input));
      continue;
    }
    report.inputs.push_back(std::move(input));
  }

  // 1. memory triage
  for (const auto& src : sources) {
    if (src.role != SourceRole::Memory) continue;
    any_memory = true;
    run_memory_source(b, src, opts);
  }
  if (!any_memory) b.skip("memory-triage", "no memory source supplied");

  // 2. + 3. hive extraction and audio corroboration
  for (const auto& src : sources) {
    if (src.role != SourceRole::Hive) continue;
    try {
      byte_vec image = src.in_memory ? src.bytes : load_file_bytes(src.path);
      hive::Hive hv = hive::Hive::open(std::move(image));
      run_hive_source(b, src, hv);
      auto audio = check_audio_key(hv, db, src.id);
      for (auto& f : audio) b.findings.push_back(std::move(f));
    } catch (const error& e) {
      b.skip("hive-extraction:" + src.id, e.what());
    }
  }

  // 4. raw-stream scans
  for (const auto& src : sources) {
    if (src.role != SourceRole::Raw) continue;
    run_raw_source(b, src, opts);
  }

  upgrade_corroborated(b.findings);
  sort_findings(b.findings);
  report.findings = std::move(b.findings);
  report.skipped_steps = std::move(b.skipped);
  return report;
}

// ---- revalidation ----

namespace {

const CaseSource* source_by_id(std::span<const CaseSource> sources, const std::string& id) {
  for (const auto& src : sources) {
    if (src.id == id) return &src;
  }
  return nullptr;
}

std::string rederive_text(const EvidenceRef& ev, byte_span bytes) {
  if (ev.decode == "ascii") {
    return std::string(bytes.begin(), bytes.end());
  }
  if (ev.decode == "utf16le") {
    auto s = utf16le_to_utf8(bytes);
    return s ? *s : std::string();
  }
  if (ev.decode == "record") {
    auto rp = shellact::parse_record(bytes, 0);
    return rp.ok ? rp.record.page_title : std::string();
  }
  if (ev.decode == "record-path") {
    auto rp = shellact::parse_record(bytes, 0);
    return rp.ok ? rp.record.exe_path : std::string();
  }
  return ev.text;  // digest-only evidence
}

}  // namespace

Revalidation revalidate(const ForensicReport& report, std::span<const CaseSource> sources) {
  Revalidation rv;
  auto fail = [&](const EvidenceRef& ev, const std::string& why) {
    rv.ok = false;
    rv.failures.push_back("evidence in " + ev.source_id + " at offset " +
                          std::to_string(ev.offset) + ": " + why);
  };
  for (const auto& f : report.findings) {
    for (const auto& ev : f.evidence) {
      const CaseSource* src = source_by_id(sources, ev.source_id);
      if (src == nullptr) {
        fail(ev, "source not available");
        continue;
      }
      try {
        if (ev.kind == EvidenceRef::Kind::Stream) {
          byte_vec bytes = src->read_span(ev.offset, ev.length);
          if (sha256_hex(bytes) != ev.sha256) {
            fail(ev, "digest mismatch");
          } else if (rederive_text(ev, bytes) != ev.text) {
            fail(ev, "text mismatch");
          }
        } else {
          byte_vec image = src->in_memory ? src->bytes : load_file_bytes(src->path);
          hive::Hive hv = hive::Hive::open(std::move(image));
          if (ev.kind == EvidenceRef::Kind::RegistryAbsent) {
            bool absent = false;
            try {
              hv.get_key(ev.key_path);
            } catch (const error&) {
              absent = true;
            }
            if (!absent) fail(ev, "key expected absent but present");
            continue;
          }
          hive::KeyNode key = hv.get_key(ev.key_path);
          auto value = hv.find_value(key, ev.value_name);
          if (!value) {
            fail(ev, "value not found");
            continue;
          }
          byte_vec data = hv.value_data(*value);
          if (ev.offset + ev.length > data.size()) {
            fail(ev, "span outside value data");
            continue;
          }
          byte_span span = byte_span(data).subspan(ev.offset, ev.length);
          if (sha256_hex(span) != ev.sha256) {
            fail(ev, "digest mismatch");
          } else if (rederive_text(ev, span) != ev.text) {
            fail(ev, "text mismatch");
          }
        }
      } catch (const error& e) {
        fail(ev, e.what());
      }
    }
  }
  return rv;
}

}  // namespace torsift::pipeline
