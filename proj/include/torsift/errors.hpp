// Copyright (c) 2026 The torsift authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace torsift {

enum class errc {
  ok = 0,
  io,
  malformed_hive,
  truncated_hive,
  key_not_found,
  malformed_cell,
  bad_header,
  too_short,
  no_record_header,
  delimiter_not_found,
  decode_error,
  out_of_range,
  delimiter_collision,
  encoding_ambiguous,
  overlap,
  invalid_config,
  internal,
};

const char* errc_name(errc c);

/// Exception carrying a domain error code alongside the message.
class error : public std::runtime_error {
 public:
  error(errc code, std::string msg) : std::runtime_error(std::move(msg)), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, std::string msg) {
  throw error(code, std::move(msg));
}

}  // namespace torsift
