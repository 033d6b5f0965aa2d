// Copyright (c) 2026 The torsift authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "torsift/bytes.hpp"

namespace torsift {

/// Lowercase hex SHA-256 of the given bytes.
std::string sha256_hex(byte_span bytes);

/// Streaming SHA-256 of a file's content. Throws io on read failure.
std::string sha256_hex_file(const std::string& path);

}  // namespace torsift
