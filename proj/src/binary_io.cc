// Copyright 2026 The Relgraph Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "relgraph/binary_io.h"

#include <bit>
#include <cstring>

#include "relgraph/errors.h"

namespace relgraph::binio {
namespace {

template <typename U>
void PutLe(std::ostream& out, U v) {
  char bytes[sizeof(U)];
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  }
  out.write(bytes, sizeof(U));
}

template <typename U>
U GetLe(const char* bytes) {
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    v |= static_cast<U>(static_cast<unsigned char>(bytes[i])) << (8 * i);
  }
  return v;
}

}  // namespace

void WriteU16(std::ostream& out, std::uint16_t v) { PutLe(out, v); }
void WriteU32(std::ostream& out, std::uint32_t v) { PutLe(out, v); }
void WriteF32(std::ostream& out, float v) {
  PutLe(out, std::bit_cast<std::uint32_t>(v));
}
void WriteF64(std::ostream& out, double v) {
  PutLe(out, std::bit_cast<std::uint64_t>(v));
}
void WriteF64Block(std::ostream& out, std::span<const double> values) {
  for (double v : values) WriteF64(out, v);
}
void WriteMagic(std::ostream& out, std::string_view magic) {
  out.write(magic.data(), static_cast<std::streamsize>(magic.size()));
}

void Reader::Fail(const std::string& what) const {
  throw ParseError(context_ + ": " + what + " at byte offset " +
                   std::to_string(offset_));
}

void Reader::ReadRaw(char* dst, std::size_t n, std::string_view what) {
  in_.read(dst, static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in_.gcount()) != n) {
    Fail("truncated input while reading " + std::string(what));
  }
  offset_ += n;
}

void Reader::ExpectMagic(std::string_view magic) {
  std::string got(magic.size(), '\0');
  in_.read(got.data(), static_cast<std::streamsize>(magic.size()));
  if (static_cast<std::size_t>(in_.gcount()) != magic.size() || got != magic) {
    Fail("bad magic, expected '" + std::string(magic) + "'");
  }
  offset_ += magic.size();
}

std::uint16_t Reader::ReadU16(std::string_view what) {
  char b[2];
  ReadRaw(b, 2, what);
  return GetLe<std::uint16_t>(b);
}

std::uint32_t Reader::ReadU32(std::string_view what) {
  char b[4];
  ReadRaw(b, 4, what);
  return GetLe<std::uint32_t>(b);
}

float Reader::ReadF32(std::string_view what) {
  char b[4];
  ReadRaw(b, 4, what);
  return std::bit_cast<float>(GetLe<std::uint32_t>(b));
}

double Reader::ReadF64(std::string_view what) {
  char b[8];
  ReadRaw(b, 8, what);
  return std::bit_cast<double>(GetLe<std::uint64_t>(b));
}

std::string Reader::ReadBytes(std::size_t n, std::string_view what) {
  std::string s(n, '\0');
  if (n > 0) ReadRaw(s.data(), n, what);
  return s;
}

void Reader::ReadF64Block(std::span<double> out, std::string_view what) {
  for (double& v : out) v = ReadF64(what);
}

bool Reader::AtEnd() {
  return in_.peek() == std::char_traits<char>::eof();
}

}  // namespace relgraph::binio
