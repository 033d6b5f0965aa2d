// Copyright (c) 2026 The torsift authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace torsift {

/// Calendar instant, UTC, with a 100ns fractional part.
struct UtcTime {
  int year = 1601;
  unsigned month = 1;  // 1..12
  unsigned day = 1;    // 1..31
  unsigned hour = 0;
  unsigned minute = 0;
  unsigned second = 0;
  uint32_t fraction_100ns = 0;  // < 10'000'000

  auto operator<=>(const UtcTime&) const = default;
};

inline constexpr uint64_t kTicksPerSecond = 10'000'000ull;
/// FILETIME of 1970-01-01T00:00:00Z.
inline constexpr uint64_t kFiletimeUnixEpoch = 116444736000000000ull;
/// FILETIME of 10000-01-01T00:00:00Z; first raw value outside the supported range.
inline constexpr uint64_t kFiletimeYear10000 = 2650467744000000000ull;

/// 100ns ticks since 1601-01-01T00:00:00Z to calendar time.
/// Throws out_of_range for raw >= kFiletimeYear10000.
UtcTime filetime_to_utc(uint64_t raw);

/// Inverse of filetime_to_utc. Throws out_of_range outside years 1601..9999
/// or for out-of-range calendar fields.
uint64_t utc_to_filetime(const UtcTime& t);

/// "2018-04-03T14:09:47Z", with ".fffffff" appended when fraction is nonzero.
std::string format_utc(const UtcTime& t);

/// Parses the format emitted by format_utc (trailing Z optional).
std::optional<UtcTime> parse_utc(std::string_view s);

}  // namespace torsift
