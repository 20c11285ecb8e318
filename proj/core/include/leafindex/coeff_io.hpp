// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "leafindex/operator.hpp"

namespace leafindex {

// Dense coefficient file:
//   "LIXD" | u32 version | u32 ndim | u64 dims[ndim] | u8 complex |
//   f64 values (row-major, re/im interleaved when complex) | u32 crc32
// All integers and floats little-endian; the CRC covers every preceding byte.
struct DenseArray {
  std::vector<std::uint64_t> dims;
  bool is_complex = true;
  std::vector<cplx> values;

  std::uint64_t count() const;
};

inline constexpr std::uint32_t kDenseVersion = 1;

std::vector<unsigned char> encode_dense(const DenseArray& a);
// Throws ErrorKind::corrupt_cache on bad magic, version, size or checksum.
DenseArray decode_dense(const std::vector<unsigned char>& bytes);

void write_dense(const std::filesystem::path& path, const DenseArray& a);
DenseArray read_dense(const std::filesystem::path& path);

// (num_base, rows, cols) array of the per-point matrices.
DenseArray to_dense(const OperatorFamily& P);
OperatorFamily operator_from_dense(const DenseArray& a, const ModeSpace& src, const ModeSpace& dst);

}  // namespace leafindex
