// Copyright (c) 2026 The torsift authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "torsift/bytes.hpp"
#include "torsift/carve.hpp"
#include "torsift/signature_db.hpp"

namespace torsift::memscan {

enum class Verdict { TorConfirmed, FirefoxOnly, NoIndicators };

const char* verdict_name(Verdict v);

struct MemoryFindings {
  std::map<std::string, std::vector<uint64_t>> process_name_hits;  // indicator -> offsets
  std::vector<carve::PathHit> tor_path_hits;
  Verdict verdict = Verdict::NoIndicators;
  std::vector<std::string> notes;  // per-indicator counts, phrased as presence not execution
};

/// Pure verdict rule: TorConfirmed iff a Tor path hit exists or both tor.exe
/// and obfs4proxy.exe indicators hit; FirefoxOnly iff firefox.exe hits exist
/// with no Tor evidence at all.
Verdict verdict_for(size_t tor_path_hits, size_t firefox_hits, size_t tor_exe_hits,
                    size_t obfs4proxy_hits);

/// String/path triage of a memory image (RAM dump, pagefile, hiberfil)
/// scanned as flat bytes; container headers included.
MemoryFindings scan_memory_image(byte_span stream, const SignatureDb& db,
                                 const carve::ScanOptions& opts = {});

/// Same, streaming from a file in bounded memory.
MemoryFindings scan_memory_file(const std::string& path, const SignatureDb& db,
                                const carve::ScanOptions& opts = {});

}  // namespace torsift::memscan
