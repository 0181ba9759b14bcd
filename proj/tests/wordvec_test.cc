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
#include <cstring>
#include <fstream>
#include <functional>
#include <sstream>

#include <gtest/gtest.h>

#include "relgraph/errors.h"
#include "relgraph/rng.h"
#include "test_util.h"

namespace relgraph {
namespace {

using testing::TempDir;

EmbeddingTable ParseText(const std::string& text) {
  std::istringstream in(text);
  return ParseWord2VecText(in);
}

EmbeddingTable ParseBinary(const std::string& bytes) {
  std::istringstream in(bytes);
  return ParseWord2VecBinary(in);
}

// Builds a binary word2vec payload by hand, independent of the parser.
std::string BinaryPayload(
    const std::vector<std::pair<std::string, std::vector<float>>>& records) {
  std::string out = std::to_string(records.size()) + " " +
                    std::to_string(records.empty() ? 0
                                                   : records[0].second.size()) +
                    "\n";
  for (const auto& [word, vec] : records) {
    out += word;
    out += ' ';
    for (float f : vec) {
      const auto bits = std::bit_cast<std::uint32_t>(f);
      for (int b = 0; b < 4; ++b) out += static_cast<char>((bits >> (8 * b)) & 0xff);
    }
    out += '\n';
  }
  return out;
}

std::string ErrorOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

TEST(Word2VecTextTest, ParsesValues) {
  const auto table = ParseText("2 3\nking 0.1 -0.2 3e-1\nqueen 1 2 3\n");
  EXPECT_EQ(table.dimension(), 3u);
  EXPECT_EQ(table.size(), 2u);
  const auto king = *table.Find("king");
  EXPECT_EQ(king[0], 0.1);
  EXPECT_EQ(king[1], -0.2);
  EXPECT_EQ(king[2], 0.3);
  EXPECT_FALSE(table.Find("King"));
  EXPECT_TRUE(table.FindFolded("King"));
}

TEST(Word2VecTextTest, DimensionMismatchNamesLine) {
  const auto msg = ErrorOf([] { ParseText("2 3\na 1 2 3\nb 1 2\n"); });
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
  EXPECT_NE(msg.find("dimension"), std::string::npos) << msg;
}

TEST(Word2VecTextTest, NonNumericNamesLine) {
  const auto msg = ErrorOf([] { ParseText("1 2\na 1 x\n"); });
  EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
}

TEST(Word2VecTextTest, DuplicateAndCountMismatch) {
  EXPECT_THROW(ParseText("2 1\na 1\na 2\n"), ParseError);
  EXPECT_THROW(ParseText("3 1\na 1\nb 2\n"), ParseError);
  EXPECT_THROW(ParseText("1 1\na 1\nb 2\n"), ParseError);
  EXPECT_THROW(ParseText(""), ParseError);
  EXPECT_THROW(ParseText("x y\n"), ParseError);
}

TEST(Word2VecTextTest, KeepFilterDropsOtherWords) {
  std::istringstream in("3 1\nDog 1\ncat 2\nbird 3\n");
  EmbeddingParseOptions options;
  options.keep_lowercase = std::unordered_set<std::string>{"dog", "bird"};
  const auto table = ParseWord2VecText(in, options);
  EXPECT_EQ(table.words(), (std::vector<std::string>{"Dog", "bird"}));
}

TEST(Word2VecTextTest, SerializeRoundTripsBitExactly) {
  Rng rng(3);
  EmbeddingTable table(5);
  for (int w = 0; w < 20; ++w) {
    std::vector<double> v(5);
    for (double& x : v) x = rng.Normal() * std::pow(10.0, rng.Below(20) - 10.0);
    table.Add("w" + std::to_string(w), v);
  }
  std::ostringstream out;
  SerializeWord2VecText(table, out);
  EXPECT_EQ(ParseText(out.str()), table);
}

TEST(Word2VecBinaryTest, MatchesHandEncodedFloats) {
  const std::vector<std::pair<std::string, std::vector<float>>> records = {
      {"on", {0.5f, -1.25f}}, {"traffic", {1e-3f, 7.0f}}};
  const auto table = ParseBinary(BinaryPayload(records));
  ASSERT_EQ(table.size(), 2u);
  for (const auto& [word, vec] : records) {
    const auto got = *table.Find(word);
    for (std::size_t i = 0; i < vec.size(); ++i) {
      EXPECT_EQ(got[i], static_cast<double>(vec[i]));
    }
  }
}

TEST(Word2VecBinaryTest, TruncationReportsByteOffset) {
  std::string bytes = BinaryPayload({{"a", {1.0f, 2.0f}}, {"bb", {3.0f, 4.0f}}});
  bytes.resize(bytes.size() - 3);  // drop the newline and two float bytes
  const auto msg = ErrorOf([&] { ParseBinary(bytes); });
  EXPECT_NE(msg.find("byte offset"), std::string::npos) << msg;
  // Header "2 2\n" is 4 bytes, record one is 1+1+8+1 = 11, "bb " is 3,
  // leaving 6 of the 8 vector bytes.
  EXPECT_NE(msg.find("offset 24"), std::string::npos) << msg;
}

TEST(Word2VecBinaryTest, EmptyInput) {
  const auto msg = ErrorOf([] { ParseBinary(""); });
  EXPECT_NE(msg.find("header"), std::string::npos);
  EXPECT_NE(msg.find("byte offset 0"), std::string::npos);
}

TEST(LoadWord2VecTest, SniffsFormat) {
  TempDir tmp;
  const auto bytes = BinaryPayload({{"dog", {1.0f, 2.0f}}, {"cat", {3.0f, 4.0f}}});
  { std::ofstream(tmp / "v.bin", std::ios::binary) << bytes; }
  { std::ofstream(tmp / "v.txt") << "2 2\ndog 1 2\ncat 3 4\n"; }
  EXPECT_EQ(LoadWord2Vec(tmp / "v.bin"), LoadWord2Vec(tmp / "v.txt"));
  EXPECT_THROW(LoadWord2Vec(tmp / "missing"), IoError);
}

TEST(LookupNameTest, AveragesTokensAndFoldsCase) {
  const auto table = ParseText("3 2\ntraffic 1 2\nlight 3 6\nPerson 5 5\n");
  EXPECT_EQ(LookupName(table, "traffic light"), (std::vector<double>{2, 4}));
  EXPECT_EQ(LookupName(table, "person"), (std::vector<double>{5, 5}));
  // Unknown tokens are skipped when another token resolves.
  EXPECT_EQ(LookupName(table, "red light"), (std::vector<double>{3, 6}));
}

TEST(LookupNameTest, OovPolicies) {
  const auto table = ParseText("1 2\ndog 1 2\n");
  EXPECT_THROW(LookupName(table, "zebra"), OutOfVocabularyError);
  EXPECT_EQ(LookupName(table, "zebra", OovPolicy::kZeroVector),
            (std::vector<double>{0, 0}));
  EXPECT_THROW(LookupName(table, "  "), InvalidArgument);
}

TEST(ConcatPairTest, SubjectFirst) {
  const std::vector<double> s{1, 2}, o{3, 4}, bad{1};
  EXPECT_EQ(ConcatPair(s, o), (std::vector<double>{1, 2, 3, 4}));
  EXPECT_THROW(ConcatPair(s, bad), DimensionError);
}

TEST(EmbeddingCacheTest, RoundTrip) {
  const std::map<std::string, std::vector<double>> cache = {
      {"on", {0.1, 1.0 / 3.0}}, {"next to", {-2.5, 1e-300}}};
  EXPECT_EQ(EmbeddingCacheFromJson(EmbeddingCacheToJson(cache)), cache);
  EXPECT_THROW(EmbeddingCacheFromJson("[1]"), ParseError);
}

}  // namespace
}  // namespace relgraph
