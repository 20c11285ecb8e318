// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#include "leafindex/error.hpp"

namespace leafindex {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::validation: return "validation";
    case ErrorKind::construction: return "construction";
    case ErrorKind::numerical: return "numerical";
    case ErrorKind::io: return "io";
    case ErrorKind::corrupt_cache: return "corrupt-cache";
    case ErrorKind::internal: return "internal";
  }
  return "unknown";
}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace leafindex
