// Copyright (c) 2026 The torsift authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>

#include "filetime_oracle.hpp"
#include "test_util.hpp"
#include "torsift/filetime.hpp"

using namespace torsift;

TEST_CASE("filetime epoch and unix epoch") {
  UtcTime t = filetime_to_utc(0);
  CHECK(t.year == 1601);
  CHECK(t.month == 1);
  CHECK(t.day == 1);
  CHECK(t.hour == 0);
  CHECK(format_utc(t) == "1601-01-01T00:00:00Z");

  // oracle first, then the frozen constant, then the implementation
  CHECK(oracle::days_since_1601(1970, 1, 1) == 134774);
  CHECK(oracle::filetime_of(1970, 1, 1, 0, 0, 0) == 116444736000000000ull);
  UtcTime unix_epoch = filetime_to_utc(116444736000000000ull);
  CHECK(format_utc(unix_epoch) == "1970-01-01T00:00:00Z");
  CHECK(utc_to_filetime(unix_epoch) == kFiletimeUnixEpoch);
}

TEST_CASE("the decoded registry header instant round-trips") {
  const UtcTime when{2018, 4, 3, 14, 9, 47, 0};
  const uint64_t expected = oracle::filetime_of(2018, 4, 3, 14, 9, 47);
  CHECK(expected == 131672381870000000ull);
  CHECK(utc_to_filetime(when) == expected);
  CHECK(filetime_to_utc(expected) == when);
  CHECK(format_utc(when) == "2018-04-03T14:09:47Z");
}

TEST_CASE("range limits") {
  CHECK(testutil::thrown_code([] { filetime_to_utc(kFiletimeYear10000); }) ==
        errc::out_of_range);
  CHECK(testutil::thrown_code([] { filetime_to_utc(~0ull); }) == errc::out_of_range);
  // last representable instant: 9999-12-31T23:59:59.9999999
  UtcTime last = filetime_to_utc(kFiletimeYear10000 - 1);
  CHECK(last.year == 9999);
  CHECK(last.month == 12);
  CHECK(last.day == 31);
  CHECK(last.fraction_100ns == 9999999);
  CHECK(testutil::thrown_code([] { utc_to_filetime({10000, 1, 1, 0, 0, 0, 0}); }) ==
        errc::out_of_range);
  CHECK(testutil::thrown_code([] { utc_to_filetime({1600, 12, 31, 0, 0, 0, 0}); }) ==
        errc::out_of_range);
  CHECK(testutil::thrown_code([] { utc_to_filetime({2020, 2, 30, 0, 0, 0, 0}); }) ==
        errc::out_of_range);
}

TEST_CASE("conversion matches the day-count oracle on random instants") {
  std::mt19937_64 rng(0x5eed0001);
  uint64_t prev_raw = 0;
  for (int i = 0; i < 2000; ++i) {
    const uint64_t raw = rng() % kFiletimeYear10000;
    UtcTime t = filetime_to_utc(raw);
    oracle::Calendar c = oracle::calendar_of(raw);
    CHECK(t.year == c.year);
    CHECK(static_cast<int>(t.month) == c.month);
    CHECK(static_cast<int>(t.day) == c.day);
    CHECK(static_cast<int>(t.hour) == c.hour);
    CHECK(static_cast<int>(t.minute) == c.minute);
    CHECK(static_cast<int>(t.second) == c.second);
    CHECK(t.fraction_100ns == c.frac_100ns);
    CHECK(utc_to_filetime(t) == raw);  // exact inverse
    // strict monotonicity over consecutive samples
    if (raw > prev_raw) CHECK(filetime_to_utc(prev_raw) < t);
    prev_raw = raw;
  }
}

TEST_CASE("iso text parse and format") {
  auto t = parse_utc("2018-04-03T14:09:47Z");
  REQUIRE(t.has_value());
  CHECK(t->year == 2018);
  CHECK(t->fraction_100ns == 0);
  auto frac = parse_utc("2018-04-03T14:09:47.1234567Z");
  REQUIRE(frac.has_value());
  CHECK(frac->fraction_100ns == 1234567);
  CHECK(format_utc(*frac) == "2018-04-03T14:09:47.1234567Z");
  CHECK(!parse_utc("not a time").has_value());
  CHECK(!parse_utc("2018-13-01T00:00:00Z").has_value());
  auto no_z = parse_utc("2018-04-03T14:09:47");
  REQUIRE(no_z.has_value());
  CHECK(*no_z == *t);
}
