// Copyright 2026 The hrtrain Authors
// SPDX-License-Identifier: Apache-2.0

#include "hrtrain/io.hpp"
#include "hrtrain/error.hpp"

#include <array>
#include <bit>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hrtrain::io {
namespace {

constexpr std::array<char, 4> kMagic = {'H', 'R', 'M', 'X'};
constexpr std::uint32_t kHrmxVersion = 1;

template <typename U>
void put_le(std::string& buf, U v) {
  for (std::size_t i = 0; i < sizeof(U); ++i)
    buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

template <typename U>
U get_le(const std::string& buf, std::size_t pos) {
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i)
    v |= static_cast<U>(static_cast<unsigned char>(buf[pos + i])) << (8 * i);
  return v;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), Errc::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

void write_file_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), Errc::IoError, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    require(static_cast<bool>(out), Errc::IoError, "short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  require(!ec, Errc::IoError, "rename to " + path.string() + " failed: " + ec.message());
}

void write_hrmx(const fs::path& path, const DenseMatrix& a) {
  std::string buf;
  buf.reserve(24 + 8 * static_cast<std::size_t>(a.size()));
  buf.append(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(buf, kHrmxVersion);
  put_le<std::uint64_t>(buf, static_cast<std::uint64_t>(a.rows()));
  put_le<std::uint64_t>(buf, static_cast<std::uint64_t>(a.cols()));
  for (Index i = 0; i < a.size(); ++i) put_le<std::uint64_t>(buf, std::bit_cast<std::uint64_t>(a.data()[i]));
  write_file_atomic(path, buf);
}

DenseMatrix read_hrmx(const fs::path& path) {
  const std::string buf = slurp(path);
  const std::string where = path.string();
  require(buf.size() >= 24, Errc::IoError, where + ": truncated HRMX header");
  require(std::equal(kMagic.begin(), kMagic.end(), buf.begin()), Errc::IoError,
          where + ": bad magic");
  const auto version = get_le<std::uint32_t>(buf, 4);
  require(version == kHrmxVersion, Errc::IoError,
          where + ": unsupported HRMX version " + std::to_string(version));
  const auto rows = get_le<std::uint64_t>(buf, 8);
  const auto cols = get_le<std::uint64_t>(buf, 16);
  require(cols == 0 || rows <= (buf.size() - 24) / 8 / cols, Errc::IoError,
          where + ": payload shorter than declared dims");
  require(buf.size() == 24 + 8 * rows * cols, Errc::IoError,
          where + ": payload length does not match declared dims");
  DenseMatrix a(static_cast<Index>(rows), static_cast<Index>(cols));
  for (Index i = 0; i < a.size(); ++i)
    a.data()[i] = std::bit_cast<double>(get_le<std::uint64_t>(buf, 24 + 8 * static_cast<std::size_t>(i)));
  return a;
}

Json read_json(const fs::path& path) {
  try {
    return Json::parse(slurp(path));
  } catch (const Json::parse_error& e) {
    throw Error(Errc::IoError, path.string() + ": " + e.what());
  }
}

void write_json(const fs::path& path, const Json& j) { write_file_atomic(path, j.dump(2) + "\n"); }

DenseMatrix as_column(const Vector& v) {
  DenseMatrix a(v.size(), 1);
  a.col(0) = v;
  return a;
}

Vector as_vector(const DenseMatrix& a) {
  require(a.cols() == 1 || a.size() == 0, Errc::DimensionMismatch, "expected a single-column matrix");
  return a.size() == 0 ? Vector() : Vector(a.col(0));
}

std::string csv_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace hrtrain::io
