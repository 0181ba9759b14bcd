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

#ifndef RELGRAPH_BINARY_IO_H_
#define RELGRAPH_BINARY_IO_H_

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>

namespace relgraph::binio {

// Little-endian writers. Every binary format in the library goes through these
// so files are byte-identical regardless of host endianness.
void WriteU16(std::ostream& out, std::uint16_t v);
void WriteU32(std::ostream& out, std::uint32_t v);
void WriteF32(std::ostream& out, float v);
void WriteF64(std::ostream& out, double v);
void WriteF64Block(std::ostream& out, std::span<const double> values);
void WriteMagic(std::ostream& out, std::string_view magic);

// Reader that tracks its byte offset so parse errors can name it.
class Reader {
 public:
  Reader(std::istream& in, std::string context)
      : in_(in), context_(std::move(context)) {}

  std::uint64_t offset() const { return offset_; }

  // Throws ParseError("<context>: <what> at byte offset N").
  [[noreturn]] void Fail(const std::string& what) const;

  void ExpectMagic(std::string_view magic);
  std::uint16_t ReadU16(std::string_view what);
  std::uint32_t ReadU32(std::string_view what);
  float ReadF32(std::string_view what);
  double ReadF64(std::string_view what);
  std::string ReadBytes(std::size_t n, std::string_view what);
  void ReadF64Block(std::span<double> out, std::string_view what);
  bool AtEnd();

 private:
  void ReadRaw(char* dst, std::size_t n, std::string_view what);

  std::istream& in_;
  std::string context_;
  std::uint64_t offset_ = 0;
};

}  // namespace relgraph::binio

#endif  // RELGRAPH_BINARY_IO_H_
