// Copyright (c) 2026 The torsift authors
// SPDX-License-Identifier: Apache-2.0

#include "torsift/errors.hpp"

namespace torsift {

const char* errc_name(errc c) {
  switch (c) {
    case errc::ok: return "ok";
    case errc::io: return "io";
    case errc::malformed_hive: return "malformed_hive";
    case errc::truncated_hive: return "truncated_hive";
    case errc::key_not_found: return "key_not_found";
    case errc::malformed_cell: return "malformed_cell";
    case errc::bad_header: return "bad_header";
    case errc::too_short: return "too_short";
    case errc::no_record_header: return "no_record_header";
    case errc::delimiter_not_found: return "delimiter_not_found";
    case errc::decode_error: return "decode_error";
    case errc::out_of_range: return "out_of_range";
    case errc::delimiter_collision: return "delimiter_collision";
    case errc::encoding_ambiguous: return "encoding_ambiguous";
    case errc::overlap: return "overlap";
    case errc::invalid_config: return "invalid_config";
    case errc::internal: return "internal";
  }
  return "unknown";
}

}  // namespace torsift
