// Copyright (c) 2026 The torsift authors
// SPDX-License-Identifier: Apache-2.0

#include "torsift/filetime.hpp"

#include <chrono>
#include <cstdio>

#include "torsift/errors.hpp"

namespace torsift {

namespace {

using days_t = std::chrono::days;
using sys_days = std::chrono::sys_days;

constexpr sys_days windows_epoch() {
  using namespace std::chrono;
  return sys_days{year{1601} / January / 1};
}

constexpr uint64_t kTicksPerDay = kTicksPerSecond * 86400ull;

}  // namespace

UtcTime filetime_to_utc(uint64_t raw) {
  if (raw >= kFiletimeYear10000) {
    raise(errc::out_of_range, "FILETIME value beyond year 9999");
  }
  using namespace std::chrono;
  const uint64_t day_count = raw / kTicksPerDay;
  const uint64_t in_day = raw % kTicksPerDay;
  const year_month_day ymd{windows_epoch() + days_t{static_cast<int64_t>(day_count)}};
  const uint64_t secs = in_day / kTicksPerSecond;
  UtcTime t;
  t.year = static_cast<int>(ymd.year());
  t.month = static_cast<unsigned>(ymd.month());
  t.day = static_cast<unsigned>(ymd.day());
  t.hour = static_cast<unsigned>(secs / 3600);
  t.minute = static_cast<unsigned>((secs / 60) % 60);
  t.second = static_cast<unsigned>(secs % 60);
  t.fraction_100ns = static_cast<uint32_t>(in_day % kTicksPerSecond);
  return t;
}

uint64_t utc_to_filetime(const UtcTime& t) {
  using namespace std::chrono;
  if (t.year < 1601 || t.year > 9999 || t.month < 1 || t.month > 12 || t.day < 1 ||
      t.hour > 23 || t.minute > 59 || t.second > 59 || t.fraction_100ns >= kTicksPerSecond) {
    raise(errc::out_of_range, "calendar fields outside the representable range");
  }
  const year_month_day ymd{year{t.year}, month{t.month}, day{t.day}};
  if (!ymd.ok()) raise(errc::out_of_range, "invalid calendar date");
  const auto day_count = sys_days{ymd} - windows_epoch();
  uint64_t ticks = static_cast<uint64_t>(day_count.count()) * kTicksPerDay;
  ticks += (static_cast<uint64_t>(t.hour) * 3600 + t.minute * 60ull + t.second) * kTicksPerSecond;
  ticks += t.fraction_100ns;
  return ticks;
}

std::string format_utc(const UtcTime& t) {
  char buf[40];
  if (t.fraction_100ns != 0) {
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02u:%02u:%02u.%07uZ", t.year, t.month,
                  t.day, t.hour, t.minute, t.second, t.fraction_100ns);
  } else {
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02u:%02u:%02uZ", t.year, t.month, t.day,
                  t.hour, t.minute, t.second);
  }
  return buf;
}

std::optional<UtcTime> parse_utc(std::string_view s) {
  UtcTime t;
  unsigned fraction = 0;
  char frac_buf[8] = {0};
  int consumed = 0;
  std::string str(s);
  int n = std::sscanf(str.c_str(), "%4d-%2u-%2uT%2u:%2u:%2u%n", &t.year, &t.month, &t.day,
                      &t.hour, &t.minute, &t.second, &consumed);
  if (n != 6) return std::nullopt;
  std::string_view rest = s.substr(static_cast<size_t>(consumed));
  if (!rest.empty() && rest.front() == '.') {
    rest.remove_prefix(1);
    size_t i = 0;
    while (i < rest.size() && i < 7 && rest[i] >= '0' && rest[i] <= '9') {
      frac_buf[i] = rest[i];
      ++i;
    }
    if (i == 0) return std::nullopt;
    rest.remove_prefix(i);
    // right-pad to 100ns units
    for (size_t k = i; k < 7; ++k) frac_buf[k] = '0';
    fraction = static_cast<unsigned>(std::strtoul(frac_buf, nullptr, 10));
  }
  if (!rest.empty()) {
    if (rest != "Z") return std::nullopt;
  }
  t.fraction_100ns = fraction;
  if (t.month < 1 || t.month > 12 || t.day < 1 || t.day > 31 || t.hour > 23 || t.minute > 59 ||
      t.second > 59) {
    return std::nullopt;
  }
  return t;
}

}  // namespace torsift
