// Copyright 2026 The tokparity Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tokparity/unigram.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "tokparity/corpus.hpp"
#include "tokparity/error.hpp"

namespace tokparity {
namespace {

using testing::random_utf8;
using testing::source_path;

UnigramModel toy() {
  return parse_unigram_json(R"([["a",-1.0],["b",-1.0],["ab",-1.5]])");
}

// Best log-prob over every split of `s` into segments. A segment scores its
// piece log-prob; a single character with no single-character piece scores
// the fallback cost instead.
double brute_force(const UnigramModel& model, const std::string& s) {
  std::map<std::string, double> table;
  for (const auto& p : model.pieces()) table[p.piece] = p.log_prob;
  const std::size_t n = s.size();
  double best = -std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 0; mask < (1u << (n - 1)); ++mask) {
    double score = 0.0;
    std::size_t start = 0;
    for (std::size_t i = 1; i <= n && std::isfinite(score); ++i) {
      if (i < n && !(mask & (1u << (i - 1)))) continue;
      const std::string seg = s.substr(start, i - start);
      const auto it = table.find(seg);
      if (it != table.end()) {
        score += it->second;
      } else if (seg.size() == 1) {
        score += model.byte_fallback() ? kByteFallbackLogProb : model.unk_penalty();
      } else {
        score = -std::numeric_limits<double>::infinity();
      }
      start = i;
    }
    best = std::max(best, score);
  }
  return best;
}

UnigramModel random_toy(std::mt19937_64& rng, bool byte_fallback) {
  std::uniform_int_distribution<int> len(1, 3);
  std::uniform_int_distribution<int> letter(0, 2);
  std::uniform_real_distribution<double> lp(-6.0, -0.1);
  std::set<std::string> chosen;
  while (chosen.size() < 6) {
    std::string piece;
    const int l = len(rng);
    for (int i = 0; i < l; ++i) piece += static_cast<char>('a' + letter(rng));
    chosen.insert(piece);
  }
  std::vector<UnigramPiece> pieces;
  for (const auto& p : chosen) pieces.push_back({p, lp(rng)});
  std::shuffle(pieces.begin(), pieces.end(), rng);
  UnigramOptions options;
  options.byte_fallback = byte_fallback;
  return UnigramModel(std::move(pieces), options);
}

void for_each_abc_string(std::size_t max_len, const std::function<void(const std::string&)>& f) {
  std::vector<std::string> frontier = {""};
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<std::string> next;
    for (const auto& s : frontier) {
      for (char c : {'a', 'b', 'c'}) {
        next.push_back(s + c);
        f(next.back());
      }
    }
    frontier = std::move(next);
  }
}

TEST(UnigramLoadTest, Toy) {
  const UnigramModel model = toy();
  EXPECT_EQ(model.pieces().size(), 3u);
  EXPECT_FALSE(model.byte_fallback());
  EXPECT_DOUBLE_EQ(model.unk_penalty(), -11.5);
}

TEST(UnigramLoadTest, Errors) {
  EXPECT_THROW(parse_unigram_json(R"([["a",-1.0],["a",-2.0]])"), ValidationError);
  EXPECT_THROW(parse_unigram_json(R"([["a",1.0]])"), ValidationError);
  EXPECT_THROW(parse_unigram_json(R"([["",-1.0]])"), ValidationError);
  EXPECT_THROW(parse_unigram_json(R"([])"), ValidationError);
  EXPECT_THROW(parse_unigram_json(R"([["a"]])"), ModelLoadError);
  EXPECT_THROW(parse_unigram_json(R"({"byte_fallback":true})"), ModelLoadError);
  EXPECT_THROW(parse_unigram_json("not json"), ModelLoadError);
  EXPECT_THROW(load_unigram("/nonexistent.json"), ModelLoadError);
}

TEST(UnigramLoadTest, ObjectForm) {
  const UnigramModel model = parse_unigram_json(
      R"({"pieces":[["a",-1.0],["b",-2.0]],"byte_fallback":true})");
  EXPECT_TRUE(model.byte_fallback());
  EXPECT_EQ(model.byte_token(0), 2u);
  EXPECT_EQ(model.unk_token(), 258u);
  EXPECT_EQ(model.vocab_size(), 259u);
}

TEST(UnigramEncodeTest, ToyPrefersWholePiece) {
  const UnigramModel model = toy();
  const ScoredEncoding out = encode_unigram_scored(model, "ab");
  EXPECT_EQ(out.encoding.token_ids, std::vector<TokenId>{2});
  EXPECT_DOUBLE_EQ(out.log_prob, -1.5);
  EXPECT_EQ(encode_unigram(model, "").size(), 0u);
}

TEST(UnigramEncodeTest, UnknownCharacterIsOneToken) {
  const UnigramModel model = toy();
  const Encoding enc = encode_unigram(model, "aé");
  ASSERT_EQ(enc.size(), 2u);
  EXPECT_EQ(enc.token_ids[1], model.unk_token());
  EXPECT_EQ(enc.spans[1], (ByteSpan{1, 2}));
  EXPECT_TRUE(enc.fallback_flags[1]);
  EXPECT_EQ(decode(model, enc.token_ids), "a⁇");
}

TEST(UnigramEncodeTest, ByteFallbackPerByte) {
  const UnigramModel model = parse_unigram_json(
      R"({"pieces":[["a",-1.0]],"byte_fallback":true})");
  const Encoding enc = encode_unigram(model, "aé");
  ASSERT_EQ(enc.size(), 3u);
  EXPECT_EQ(enc.token_ids[1], model.byte_token(0xC3));
  EXPECT_EQ(enc.token_ids[2], model.byte_token(0xA9));
  EXPECT_EQ(enc.fallback_count(), 2u);
  EXPECT_EQ(decode(model, enc.token_ids), "aé");
}

TEST(UnigramEncodeTest, DummyPrefixAndSpaceSymbol) {
  UnigramOptions options;
  options.add_dummy_prefix = true;
  options.space_symbol = "▁";
  options.byte_fallback = true;
  const UnigramModel model(
      {{"▁hello", -1.0}, {"▁world", -1.0}, {"▁", -3.0}, {"x", -1.0}}, options);
  const Encoding enc = encode_unigram(model, "hello world");
  EXPECT_EQ(enc.token_ids, (std::vector<TokenId>{0, 1}));
  EXPECT_EQ(enc.spans[0], (ByteSpan{0, 5}));
  EXPECT_EQ(enc.spans[1], (ByteSpan{5, 6}));
  EXPECT_EQ(decode(model, enc.token_ids), "hello world");
  const Encoding lone = encode_unigram(model, "x");
  EXPECT_EQ(lone.token_ids, (std::vector<TokenId>{2, 3}));
  EXPECT_EQ(lone.spans[0], (ByteSpan{0, 0}));
  EXPECT_EQ(decode(model, lone.token_ids), "x");
}

TEST(UnigramEncodeTest, DecodeUnknownId) {
  const UnigramModel model = toy();
  EXPECT_THROW(decode(model, {99}), DecodeError);
  EXPECT_EQ(decode(model, {}), "");
}

TEST(UnigramEncodeTest, BruteForceUnk) {
  std::mt19937_64 rng(2026);
  for (int trial = 0; trial < 5; ++trial) {
    const UnigramModel model = random_toy(rng, false);
    for_each_abc_string(8, [&](const std::string& s) {
      ASSERT_EQ(encode_unigram_scored(model, s).log_prob, brute_force(model, s)) << s;
    });
  }
}

TEST(UnigramEncodeTest, BruteForceByteFallback) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 5; ++trial) {
    const UnigramModel model = random_toy(rng, true);
    for_each_abc_string(8, [&](const std::string& s) {
      ASSERT_EQ(encode_unigram_scored(model, s).log_prob, brute_force(model, s)) << s;
    });
  }
}

TEST(UnigramEncodeTest, MonotoneFragmentationWhenCountDominates) {
  // Equal piece scores and full single-character coverage: Viterbi
  // minimizes the count, so removing a piece cannot lower it.
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<UnigramPiece> pieces = {{"a", -1.0}, {"b", -1.0}, {"c", -1.0}};
    std::set<std::string> seen = {"a", "b", "c"};
    while (pieces.size() < 10) {
      std::string p;
      const int l = std::uniform_int_distribution<int>(2, 4)(rng);
      for (int i = 0; i < l; ++i) p += static_cast<char>('a' + rng() % 3);
      if (seen.insert(p).second) pieces.push_back({p, -1.0});
    }
    const UnigramModel full(pieces);
    for (std::size_t drop = 3; drop < pieces.size(); ++drop) {
      auto fewer = pieces;
      fewer.erase(fewer.begin() + static_cast<std::ptrdiff_t>(drop));
      const UnigramModel reduced(fewer);
      for_each_abc_string(6, [&](const std::string& s) {
        ASSERT_GE(encode_unigram(reduced, s).size(), encode_unigram(full, s).size()) << s;
      });
    }
  }
}

TEST(UnigramEncodeTest, MonotoneFragmentationCanFailForGeneralScores) {
  const UnigramModel full({{"a", -1.0}, {"b", -1.0}, {"c", -1.0}, {"ab", -0.5}, {"abc", -2.9}});
  const UnigramModel reduced({{"a", -1.0}, {"b", -1.0}, {"c", -1.0}, {"abc", -2.9}});
  EXPECT_EQ(encode_unigram(full, "abc").size(), 2u);
  EXPECT_EQ(encode_unigram(reduced, "abc").size(), 1u);
}

TEST(UnigramEncodeTest, RoundTripRandomWithByteFallback) {
  const UnigramModel model = parse_unigram_json(
      R"({"pieces":[["th",-2.0],["e",-1.5],["ال",-2.5],["🌍",-3.0]],"byte_fallback":true})");
  std::mt19937_64 rng(17);
  for (int i = 0; i < 1000; ++i) {
    const std::string text = random_utf8(rng, 24);
    ASSERT_EQ(decode(model, encode_unigram(model, text).token_ids), text);
  }
}

class MistralTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    model_ = new UnigramModel(load_unigram(source_path("models/mistral-7b-v0.1.unigram.json")));
  }
  static void TearDownTestSuite() {
    delete model_;
    model_ = nullptr;
  }
  static const UnigramModel& model() { return *model_; }

 private:
  static UnigramModel* model_;
};

UnigramModel* MistralTest::model_ = nullptr;

TEST_F(MistralTest, PublishedVocabularySize) {
  // 31741 exported pieces, 256 byte pieces, <unk> <s> </s>.
  EXPECT_EQ(model().pieces().size(), 31741u);
  EXPECT_EQ(model().pieces().size() + 256 + 3, 32000u);
  EXPECT_TRUE(model().byte_fallback());
}

TEST_F(MistralTest, RoundTripFixture) {
  const ParallelCorpus corpus = load_corpus_file(source_path("fixtures/appendix2.tsv"));
  for (std::size_t r = 0; r < corpus.rows().size(); ++r) {
    for (const LanguageCode& lang : corpus.languages()) {
      const std::string& text = corpus.text(r, lang);
      EXPECT_EQ(decode(model(), encode_unigram(model(), text).token_ids), text);
    }
  }
}

TEST_F(MistralTest, RoundTripRandom) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 1000; ++i) {
    const std::string text = random_utf8(rng, 24);
    ASSERT_EQ(decode(model(), encode_unigram(model(), text).token_ids), text);
  }
}

TEST_F(MistralTest, KnownSegmentation) {
  const Encoding enc = encode_unigram(model(), "Give a simple definition of tokenization");
  std::vector<std::string> pieces;
  for (TokenId id : enc.token_ids) pieces.push_back(model().pieces()[id].piece);
  EXPECT_EQ(pieces, (std::vector<std::string>{"▁Give", "▁a", "▁simple",
                                              "▁definition", "▁of", "▁token",
                                              "ization"}));
}

}  // namespace
}  // namespace tokparity
