// Copyright (c) 2026 The torsift authors
// SPDX-License-Identifier: Apache-2.0
//
// Memory-image triage by string and path scanning over flat bytes. No
// kernel-structure walking: string evidence survives in physical pages
// regardless of mapping, so indicators are reported as present, never as
// running processes.

#include "torsift/memscan.hpp"

#include <algorithm>

namespace torsift::memscan {

namespace {

size_t count_for(const std::map<std::string, std::vector<uint64_t>>& hits,
                 std::string_view name) {
  for (const auto& [indicator, offsets] : hits) {
    if (ascii_iequals(indicator, name)) return offsets.size();
  }
  return 0;
}

MemoryFindings build_findings(std::vector<carve::KeywordHit>&& keyword_hits,
                              std::vector<carve::PathHit>&& path_hits,
                              const SignatureDb& db) {
  MemoryFindings mf;
  for (const auto& name : db.process_names) mf.process_name_hits[name];  // keep zero counts
  for (auto& hit : keyword_hits) {
    mf.process_name_hits[hit.keyword].push_back(hit.offset);
  }
  mf.tor_path_hits = std::move(path_hits);

  mf.verdict = verdict_for(mf.tor_path_hits.size(),
                           count_for(mf.process_name_hits, "firefox.exe"),
                           count_for(mf.process_name_hits, "tor.exe"),
                           count_for(mf.process_name_hits, "obfs4proxy.exe"));

  for (const auto& [indicator, offsets] : mf.process_name_hits) {
    mf.notes.push_back(indicator + ": " + std::to_string(offsets.size()) +
                       " occurrence(s) present in the image");
  }
  for (const auto& hit : mf.tor_path_hits) {
    std::string note = "install path present: " + hit.path;
    if (hit.attribution.username) note += " (username " + *hit.attribution.username + ")";
    mf.notes.push_back(std::move(note));
  }
  const size_t tor_exe = count_for(mf.process_name_hits, "tor.exe");
  const size_t obfs4 = count_for(mf.process_name_hits, "obfs4proxy.exe");
  if (mf.verdict == Verdict::NoIndicators && (tor_exe > 0 || obfs4 > 0)) {
    mf.notes.push_back("tor-related indicator present without corroboration; not conclusive");
  }
  return mf;
}

}  // namespace

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::TorConfirmed: return "tor_confirmed";
    case Verdict::FirefoxOnly: return "firefox_only";
    case Verdict::NoIndicators: return "no_indicators";
  }
  return "no_indicators";
}

Verdict verdict_for(size_t tor_path_hits, size_t firefox_hits, size_t tor_exe_hits,
                    size_t obfs4proxy_hits) {
  if (tor_path_hits > 0 || (tor_exe_hits > 0 && obfs4proxy_hits > 0)) {
    return Verdict::TorConfirmed;
  }
  const bool any_tor_evidence = tor_path_hits > 0 || tor_exe_hits > 0 || obfs4proxy_hits > 0;
  if (firefox_hits > 0 && !any_tor_evidence) return Verdict::FirefoxOnly;
  return Verdict::NoIndicators;
}

MemoryFindings scan_memory_image(byte_span stream, const SignatureDb& db,
                                 const carve::ScanOptions& opts) {
  auto keyword_hits =
      carve::keyword_scan(stream, db.process_names, {}, opts.context_radius);
  auto path_hits = carve::find_tor_paths(stream, db.path_patterns);
  return build_findings(std::move(keyword_hits), std::move(path_hits), db);
}

MemoryFindings scan_memory_file(const std::string& path, const SignatureDb& db,
                                const carve::ScanOptions& opts) {
  // The full scan already covers process names (keyword set includes them).
  carve::ScanReport report = carve::scan_file(path, db, opts);
  std::vector<carve::KeywordHit> process_hits;
  for (auto& hit : report.keyword_hits) {
    for (const auto& name : db.process_names) {
      if (ascii_iequals(hit.keyword, name)) {
        process_hits.push_back(std::move(hit));
        break;
      }
    }
  }
  return build_findings(std::move(process_hits), std::move(report.path_hits), db);
}

}  // namespace torsift::memscan
