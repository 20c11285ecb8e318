// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#include "leafindex/coeff_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include <fmt/format.h>
#include <zlib.h>

#include "leafindex/error.hpp"

namespace leafindex {

static_assert(std::endian::native == std::endian::little, "coefficient files assume a little-endian host");

namespace {

template <class T>
void put(std::vector<unsigned char>& out, T v) {
  unsigned char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.insert(out.end(), buf, buf + sizeof(T));
}

template <class T>
T get(const std::vector<unsigned char>& in, std::size_t& pos) {
  if (pos + sizeof(T) > in.size()) fail(ErrorKind::corrupt_cache, "dense file: truncated");
  T v;
  std::memcpy(&v, in.data() + pos, sizeof(T));
  pos += sizeof(T);
  return v;
}

std::uint32_t crc(const unsigned char* data, std::size_t n) {
  return static_cast<std::uint32_t>(::crc32(::crc32(0L, Z_NULL, 0), data, static_cast<uInt>(n)));
}

}  // namespace

std::uint64_t DenseArray::count() const {
  std::uint64_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

std::vector<unsigned char> encode_dense(const DenseArray& a) {
  if (a.count() != a.values.size()) fail(ErrorKind::internal, "dense file: dims do not match the value count");
  std::vector<unsigned char> out{'L', 'I', 'X', 'D'};
  put<std::uint32_t>(out, kDenseVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(a.dims.size()));
  for (auto d : a.dims) put<std::uint64_t>(out, d);
  put<std::uint8_t>(out, a.is_complex ? 1 : 0);
  for (const cplx& v : a.values) {
    put<double>(out, v.real());
    if (a.is_complex) put<double>(out, v.imag());
  }
  put<std::uint32_t>(out, crc(out.data(), out.size()));
  return out;
}

DenseArray decode_dense(const std::vector<unsigned char>& in) {
  if (in.size() < 4 || std::memcmp(in.data(), "LIXD", 4) != 0) fail(ErrorKind::corrupt_cache, "dense file: bad magic");
  if (in.size() < 8) fail(ErrorKind::corrupt_cache, "dense file: truncated");
  std::size_t pos = 4;
  const auto version = get<std::uint32_t>(in, pos);
  if (version != kDenseVersion)
    fail(ErrorKind::corrupt_cache, fmt::format("dense file: unsupported version {}", version));
  const auto ndim = get<std::uint32_t>(in, pos);
  if (ndim > 8) fail(ErrorKind::corrupt_cache, fmt::format("dense file: implausible rank {}", ndim));
  DenseArray a;
  for (std::uint32_t k = 0; k < ndim; ++k) a.dims.push_back(get<std::uint64_t>(in, pos));
  const auto flag = get<std::uint8_t>(in, pos);
  if (flag > 1) fail(ErrorKind::corrupt_cache, "dense file: bad complex flag");
  a.is_complex = flag == 1;
  const std::uint64_t n = a.count(), width = a.is_complex ? 16 : 8;
  if (in.size() < 4 || (in.size() - pos - 4) / width != n || (in.size() - pos - 4) % width != 0)
    fail(ErrorKind::corrupt_cache, "dense file: payload size does not match the header");
  const std::uint32_t expect = crc(in.data(), in.size() - 4);
  std::size_t tail = in.size() - 4;
  if (get<std::uint32_t>(in, tail) != expect) fail(ErrorKind::corrupt_cache, "dense file: checksum mismatch");
  a.values.resize(n);
  for (auto& v : a.values) {
    const double re = get<double>(in, pos);
    const double im = a.is_complex ? get<double>(in, pos) : 0.0;
    v = cplx(re, im);
  }
  return a;
}

void write_dense(const std::filesystem::path& path, const DenseArray& a) {
  auto bytes = encode_dense(a);
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::io, fmt::format("cannot write '{}'", path.string()));
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) fail(ErrorKind::io, fmt::format("write failed for '{}'", path.string()));
}

DenseArray read_dense(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::io, fmt::format("cannot read '{}'", path.string()));
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  try {
    return decode_dense(bytes);
  } catch (const Error& e) {
    fail(e.kind(), fmt::format("{}: {}", path.string(), e.what()));
  }
}

DenseArray to_dense(const OperatorFamily& P) {
  DenseArray a;
  const std::uint64_t rows = P.dst.size(), cols = P.src.size();
  a.dims = {static_cast<std::uint64_t>(P.num_base()), rows, cols};
  a.values.reserve(a.count());
  for (const MatC& M : P.mats)
    for (Eigen::Index i = 0; i < M.rows(); ++i)
      for (Eigen::Index j = 0; j < M.cols(); ++j) a.values.push_back(M(i, j));
  return a;
}

OperatorFamily operator_from_dense(const DenseArray& a, const ModeSpace& src, const ModeSpace& dst) {
  const auto rows = static_cast<std::uint64_t>(dst.size()), cols = static_cast<std::uint64_t>(src.size());
  if (a.dims.size() == 2 && a.dims[0] == rows && a.dims[1] == cols) {
    DenseArray b = a;
    b.dims.insert(b.dims.begin(), 1);
    return operator_from_dense(b, src, dst);
  }
  if (a.dims.size() != 3 || a.dims[1] != rows || a.dims[2] != cols)
    fail(ErrorKind::validation,
         fmt::format("coefficient file: expected (base, {}, {}) dims for the declared mode spaces", rows, cols));
  OperatorFamily P;
  P.src = src;
  P.dst = dst;
  std::size_t k = 0;
  for (std::uint64_t x = 0; x < a.dims[0]; ++x) {
    MatC M(rows, cols);
    for (std::uint64_t i = 0; i < rows; ++i)
      for (std::uint64_t j = 0; j < cols; ++j) M(i, j) = a.values[k++];
    P.mats.push_back(std::move(M));
  }
  return P;
}

}  // namespace leafindex
