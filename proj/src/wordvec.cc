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

#include "relgraph/wordvec.h"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "relgraph/errors.h"
#include "relgraph/text_util.h"

namespace relgraph {

void EmbeddingTable::Add(std::string word, std::span<const double> vector) {
  if (vector.size() != dimension_) {
    throw DimensionError("vector for '" + word + "' has length " +
                         std::to_string(vector.size()) + ", expected " +
                         std::to_string(dimension_));
  }
  for (double v : vector) {
    if (!std::isfinite(v)) {
      throw InvalidArgument("vector for '" + word + "' is not finite");
    }
  }
  if (index_.contains(word)) {
    throw InvalidArgument("duplicate word '" + word + "'");
  }
  const std::size_t row = words_.size();
  index_.emplace(word, row);
  folded_index_.emplace(ToLowerAscii(word), row);  // keeps the first
  values_.insert(values_.end(), vector.begin(), vector.end());
  words_.push_back(std::move(word));
}

std::optional<std::span<const double>> EmbeddingTable::Find(
    std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return std::span<const double>(values_.data() + it->second * dimension_,
                                 dimension_);
}

std::optional<std::span<const double>> EmbeddingTable::FindFolded(
    std::string_view word) const {
  auto it = folded_index_.find(ToLowerAscii(word));
  if (it == folded_index_.end()) return std::nullopt;
  return std::span<const double>(values_.data() + it->second * dimension_,
                                 dimension_);
}

namespace {

bool Keep(const EmbeddingParseOptions& options, const std::string& word) {
  return !options.keep_lowercase ||
         options.keep_lowercase->contains(ToLowerAscii(word));
}

bool ParseDouble(std::string_view token, double& out) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size();
}

bool ParseSize(std::string_view token, std::size_t& out) {
  auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size();
}

struct Header {
  std::size_t count = 0;
  std::size_t dimension = 0;
};

// Returns nullopt when the line is not "count dim" with dim > 0.
std::optional<Header> ParseHeader(std::string_view line) {
  auto tokens = SplitWhitespace(line);
  Header h;
  if (tokens.size() != 2 || !ParseSize(tokens[0], h.count) ||
      !ParseSize(tokens[1], h.dimension) || h.dimension == 0) {
    return std::nullopt;
  }
  return h;
}

[[noreturn]] void LineError(std::size_t line, const std::string& what) {
  throw ParseError("word2vec text: line " + std::to_string(line) + ": " + what);
}

}  // namespace

EmbeddingTable ParseWord2VecText(std::istream& in,
                                 const EmbeddingParseOptions& options) {
  std::string line;
  if (!std::getline(in, line)) LineError(1, "missing header");
  const auto header = ParseHeader(line);
  if (!header) LineError(1, "header must be 'vocab_count dimension'");

  EmbeddingTable table(header->dimension);
  std::vector<double> values(header->dimension);
  std::size_t line_no = 1;
  std::size_t records = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    if (records == header->count) {
      LineError(line_no, "more records than the header count " +
                             std::to_string(header->count));
    }
    auto tokens = SplitWhitespace(line);
    if (tokens.size() != header->dimension + 1) {
      LineError(line_no, "dimension mismatch: expected " +
                             std::to_string(header->dimension) +
                             " values, found " +
                             std::to_string(tokens.size() - 1));
    }
    ++records;
    if (!Keep(options, tokens[0])) continue;
    for (std::size_t i = 0; i < header->dimension; ++i) {
      if (!ParseDouble(tokens[i + 1], values[i]) || !std::isfinite(values[i])) {
        LineError(line_no, "component " + std::to_string(i + 1) +
                               " is not a finite number: '" + tokens[i + 1] +
                               "'");
      }
    }
    if (table.Find(tokens[0])) {
      LineError(line_no, "duplicate word '" + tokens[0] + "'");
    }
    table.Add(std::move(tokens[0]), values);
  }
  if (records != header->count) {
    LineError(line_no, "header declares " + std::to_string(header->count) +
                           " records, found " + std::to_string(records));
  }
  return table;
}

namespace {

class ByteCursor {
 public:
  explicit ByteCursor(std::istream& in) : in_(in) {}
  std::uint64_t offset() const { return offset_; }

  [[noreturn]] void Fail(const std::string& what) const {
    throw ParseError("word2vec binary: " + what + " at byte offset " +
                     std::to_string(offset_));
  }

  int Peek() { return in_.peek(); }
  int Get() {
    const int c = in_.get();
    if (c != std::char_traits<char>::eof()) ++offset_;
    return c;
  }
  void Read(char* dst, std::size_t n, const char* what) {
    in_.read(dst, static_cast<std::streamsize>(n));
    const auto got = static_cast<std::size_t>(in_.gcount());
    offset_ += got;
    if (got != n) Fail(std::string("truncated record (") + what + ")");
  }

 private:
  std::istream& in_;
  std::uint64_t offset_ = 0;
};

}  // namespace

EmbeddingTable ParseWord2VecBinary(std::istream& in,
                                   const EmbeddingParseOptions& options) {
  ByteCursor cur(in);
  std::string header_line;
  for (;;) {
    const int c = cur.Get();
    if (c == std::char_traits<char>::eof()) {
      throw ParseError(
          "word2vec binary: missing or unterminated header at byte offset 0");
    }
    if (c == '\n') break;
    header_line.push_back(static_cast<char>(c));
    if (header_line.size() > 64) break;
  }
  const auto header = ParseHeader(header_line);
  if (!header) {
    throw ParseError(
        "word2vec binary: header must be 'vocab_count dimension' at byte "
        "offset 0");
  }

  EmbeddingTable table(header->dimension);
  std::vector<char> raw(header->dimension * 4);
  std::vector<double> values(header->dimension);
  for (std::size_t r = 0; r < header->count; ++r) {
    const std::uint64_t record_start = cur.offset();
    std::string word;
    for (;;) {
      const int c = cur.Get();
      if (c == std::char_traits<char>::eof()) {
        cur.Fail("truncated record " + std::to_string(r) + " (word)");
      }
      if (c == ' ') break;
      if (c == '\n' && word.empty()) continue;  // tolerate stray separators
      word.push_back(static_cast<char>(c));
    }
    if (word.empty()) cur.Fail("empty word in record " + std::to_string(r));
    cur.Read(raw.data(), raw.size(), "vector");
    if (cur.Peek() == '\n') cur.Get();
    if (!Keep(options, word)) continue;
    for (std::size_t i = 0; i < header->dimension; ++i) {
      std::uint32_t bits = 0;
      for (std::size_t b = 0; b < 4; ++b) {
        bits |= static_cast<std::uint32_t>(
                    static_cast<unsigned char>(raw[i * 4 + b]))
                << (8 * b);
      }
      values[i] = static_cast<double>(std::bit_cast<float>(bits));
      if (!std::isfinite(values[i])) {
        throw ParseError("word2vec binary: non-finite value in record '" +
                         word + "' at byte offset " +
                         std::to_string(record_start));
      }
    }
    if (table.Find(word)) {
      throw ParseError("word2vec binary: duplicate word '" + word +
                       "' at byte offset " + std::to_string(record_start));
    }
    table.Add(std::move(word), values);
  }
  return table;
}

EmbeddingTable LoadWord2Vec(const std::filesystem::path& path,
                            const EmbeddingParseOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  bool text = false;
  if (auto h = ParseHeader(header)) {
    auto tokens = SplitWhitespace(first);
    text = tokens.size() == h->dimension + 1;
    double v;
    for (std::size_t i = 1; text && i < tokens.size(); ++i) {
      text = ParseDouble(tokens[i], v);
    }
    if (h->count == 0) text = true;
  }
  in.clear();
  in.seekg(0);
  try {
    return text ? ParseWord2VecText(in, options)
                : ParseWord2VecBinary(in, options);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void SerializeWord2VecText(const EmbeddingTable& table, std::ostream& out) {
  out << table.size() << ' ' << table.dimension() << '\n';
  char buf[64];
  for (const auto& word : table.words()) {
    out << word;
    const std::span<const double> values = *table.Find(word);
    for (double v : values) {
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
      out << ' ' << std::string_view(buf, static_cast<std::size_t>(ptr - buf));
    }
    out << '\n';
  }
}

std::vector<double> LookupName(const EmbeddingTable& table,
                               std::string_view name, OovPolicy policy) {
  const std::string_view trimmed = Trim(name);
  if (trimmed.empty()) throw InvalidArgument("cannot look up an empty name");
  std::vector<double> sum(table.dimension(), 0.0);
  std::size_t found = 0;
  for (const auto& token : SplitWhitespace(trimmed)) {
    auto vec = table.Find(token);
    if (!vec) vec = table.FindFolded(token);
    if (!vec) continue;
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += (*vec)[i];
    ++found;
  }
  if (found == 0) {
    if (policy == OovPolicy::kError) {
      throw OutOfVocabularyError(std::string(trimmed));
    }
    std::clog << "warning: out-of-vocabulary name '" << trimmed
              << "', using the zero vector\n";
    return sum;
  }
  for (double& v : sum) v /= static_cast<double>(found);
  return sum;
}

std::vector<double> ConcatPair(std::span<const double> subject,
                               std::span<const double> object) {
  if (subject.size() != object.size()) {
    throw DimensionError("subject vector has length " +
                         std::to_string(subject.size()) +
                         " but object vector has length " +
                         std::to_string(object.size()));
  }
  std::vector<double> out;
  out.reserve(subject.size() * 2);
  out.insert(out.end(), subject.begin(), subject.end());
  out.insert(out.end(), object.begin(), object.end());
  return out;
}

std::string EmbeddingCacheToJson(
    const std::map<std::string, std::vector<double>>& cache) {
  nlohmann::json doc = nlohmann::json::object();
  for (const auto& [name, values] : cache) doc[name] = values;
  return doc.dump();
}

std::map<std::string, std::vector<double>> EmbeddingCacheFromJson(
    std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("embedding cache: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ParseError("embedding cache: top level must be an object");
  }
  std::map<std::string, std::vector<double>> out;
  for (const auto& [name, values] : doc.items()) {
    if (!values.is_array()) {
      throw ParseError("embedding cache: /" + name + " must be an array");
    }
    std::vector<double> v;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!values[i].is_number()) {
        throw ParseError("embedding cache: /" + name + "/" +
                         std::to_string(i) + " is not a number");
      }
      v.push_back(values[i].get<double>());
    }
    out.emplace(name, std::move(v));
  }
  return out;
}

}  // namespace relgraph
