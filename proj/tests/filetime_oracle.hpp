// Copyright (c) 2026 The torsift authors
// SPDX-License-Identifier: Apache-2.0
//
// Independent day-count oracle for FILETIME conversion. Deliberately naive:
// it iterates years and months with explicit leap rules and shares no code
// with the library implementation it checks.

#pragma once

#include <cstdint>

namespace oracle {

inline bool leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

inline int month_days(int y, int m) {
  static const int d[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  return (m == 2 && leap(y)) ? 29 : d[m - 1];
}

inline uint64_t days_since_1601(int year, int month, int day) {
  uint64_t days = 0;
  for (int y = 1601; y < year; ++y) days += leap(y) ? 366 : 365;
  for (int m = 1; m < month; ++m) days += month_days(year, m);
  return days + static_cast<uint64_t>(day - 1);
}

inline uint64_t filetime_of(int year, int month, int day, int h, int mi, int s,
                            uint32_t frac_100ns = 0) {
  const uint64_t secs =
      days_since_1601(year, month, day) * 86400ull + h * 3600ull + mi * 60ull + s;
  return secs * 10000000ull + frac_100ns;
}

struct Calendar {
  int year, month, day, hour, minute, second;
  uint32_t frac_100ns;
};

inline Calendar calendar_of(uint64_t raw) {
  Calendar c{};
  c.frac_100ns = static_cast<uint32_t>(raw % 10000000ull);
  uint64_t secs = raw / 10000000ull;
  uint64_t days = secs / 86400ull;
  const uint64_t in_day = secs % 86400ull;
  c.year = 1601;
  while (true) {
    const uint64_t ydays = leap(c.year) ? 366 : 365;
    if (days < ydays) break;
    days -= ydays;
    ++c.year;
  }
  c.month = 1;
  while (days >= static_cast<uint64_t>(month_days(c.year, c.month))) {
    days -= static_cast<uint64_t>(month_days(c.year, c.month));
    ++c.month;
  }
  c.day = static_cast<int>(days) + 1;
  c.hour = static_cast<int>(in_day / 3600);
  c.minute = static_cast<int>((in_day / 60) % 60);
  c.second = static_cast<int>(in_day % 60);
  return c;
}

}  // namespace oracle
