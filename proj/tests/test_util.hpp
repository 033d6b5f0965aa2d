// Copyright (c) 2026 The torsift authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "torsift/errors.hpp"
#include "torsift/shellact.hpp"
#include "torsift/text.hpp"

namespace testutil {

template <typename F>
torsift::errc thrown_code(F&& fn) {
  try {
    fn();
  } catch (const torsift::error& e) {
    return e.code();
  }
  return torsift::errc::ok;
}

// Random strings safe for round-tripping: printable ASCII plus a few
// non-ASCII characters whose encodings collide with no structure signature.
// Every string starts with an ASCII letter so UTF-16LE stays detectable.
class RecordGen {
 public:
  explicit RecordGen(uint64_t seed) : rng_(seed) {}

  std::mt19937_64& rng() { return rng_; }

  std::string random_string(size_t min_len, size_t max_len) {
    static const std::vector<std::string> extras = {"\u00fc", "\u00df", "\u00e9",
                                                    "\u0434", "\u20ac", "\U0001F512"};
    const size_t len = min_len + rng_() % (max_len - min_len + 1);
    std::string out;
    out.push_back(static_cast<char>('A' + rng_() % 26));
    while (out.size() < len) {
      if (rng_() % 12 == 0) {
        out += extras[rng_() % extras.size()];
      } else {
        out.push_back(static_cast<char>(0x20 + rng_() % 0x5F));  // printable ASCII
      }
    }
    return out;
  }

  uint8_t safe_byte() {
    // Bytes that can never start or continue a structure signature, so
    // planted records contain exactly one 0xD214, at their head.
    while (true) {
      uint8_t b = static_cast<uint8_t>(rng_());
      if (b != 0xD2 && b != 0xCA && b != 0xC6 && b != 0xEA && b != 0x14) return b;
    }
  }

  torsift::shellact::ShellActivityRecord random_record() {
    using torsift::StringEncoding;
    torsift::shellact::ShellActivityRecord rec;
    rec.encoding = rng_() % 2 == 0 ? StringEncoding::utf16le : StringEncoding::utf8;
    const std::string exe = random_string(5, 16) + ".exe";
    rec.exe_path = "C:\\Users\\" + random_string(1, 12) + "\\Desktop\\" + exe;
    rec.exe_name = exe;
    rec.page_title = random_string(1, 80);
    rec.type_byte = static_cast<uint8_t>(0x20 + rng_() % 0x60);
    rec.d228_byte = static_cast<uint8_t>(0x01 + rng_() % 0x7F);
    for (auto& b : rec.trailer_a5) b = safe_byte();
    for (auto& b : rec.trailer_b5) b = safe_byte();
    return rec;
  }

  std::vector<torsift::shellact::ShellActivityRecord> random_records(size_t min_n,
                                                                     size_t max_n) {
    std::vector<torsift::shellact::ShellActivityRecord> out;
    const size_t n = min_n + rng_() % (max_n - min_n + 1);
    out.reserve(n);
    for (size_t i = 0; i < n; ++i) out.push_back(random_record());
    return out;
  }

 private:
  std::mt19937_64 rng_;
};

// The page title from the SoundCloud streaming step, as leaked with the
// browser suffix attached.
inline const char* kSoundcloudTitle =
    "Monolake Live at Ego D\u00fcsseldorf June 5 1999 by monolake | Free Listening on "
    "SoundCloud - Tor Browser";
inline const char* kStandardTorPath =
    "C:\\Users\\40187070\\Desktop\\Tor Browser\\Browser\\firefox.exe";
inline const char* kPortableTorPath = "E:\\Tor Browser\\Browser\\firefox.exe";
inline const char* kShellactivitiesKeyPath =
    "Software\\Microsoft\\Windows\\CurrentVersion\\CloudStore\\Store\\Cache\\DefaultAccount"
    "\\$$windows.data.taskflow.shellactivities\\Current";
inline const char* kAudioKeyPath =
    "Software\\Microsoft\\InternetExplorer\\LowRegistry\\Audio\\PolicyConfig\\PropertyStore";

inline torsift::shellact::ShellActivityRecord paper_record() {
  torsift::shellact::ShellActivityRecord rec;
  rec.encoding = torsift::StringEncoding::utf16le;
  rec.type_byte = 0x39;
  rec.exe_path = kStandardTorPath;
  rec.exe_name = "firefox.exe";
  rec.d228_byte = 0x01;
  rec.page_title = kSoundcloudTitle;
  rec.trailer_a5 = {0x01, 0x02, 0x03, 0x04, 0x05};
  rec.trailer_b5 = {0x06, 0x07, 0x08, 0x09, 0x0A};
  return rec;
}

}  // namespace testutil
