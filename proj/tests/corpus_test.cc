// Copyright 2026 The nerport Authors
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

#include "nerport/corpus.h"

#include <gtest/gtest.h>

#include <random>
#include <string>
#include <vector>

#include "nerport/utf8.h"
#include "test_support.h"

namespace nerport {
namespace {

using testing::Doc;

// Independent tokenizer: classify each code point, then cut every
// whitespace-free chunk at its first and last non-punctuation character.
std::vector<Token> WalkTokenize(const std::u32string& text) {
  std::vector<Token> out;
  auto emit = [&](std::size_t s, std::size_t e) {
    out.push_back({EncodeUtf8(text.substr(s, e - s)), s, e});
  };
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (IsSpace(text[pos])) {
      ++pos;
      continue;
    }
    std::size_t end = pos;
    while (end < text.size() && !IsSpace(text[end])) ++end;
    std::size_t first = end;
    std::size_t last = end;
    for (std::size_t k = pos; k < end; ++k) {
      if (!IsPeelablePunct(text[k])) {
        if (first == end) first = k;
        last = k;
      }
    }
    if (first == end) {
      for (std::size_t k = pos; k < end; ++k) emit(k, k + 1);
    } else {
      for (std::size_t k = pos; k < first; ++k) emit(k, k + 1);
      emit(first, last + 1);
      for (std::size_t k = last + 1; k < end; ++k) emit(k, k + 1);
    }
    pos = end;
  }
  return out;
}

std::vector<std::string> Texts(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) out.push_back(t.text);
  return out;
}

TEST(TokenizeTest, PeelsEdgePunctuation) {
  const auto tokens = Tokenize(U"ER+ (positive), size 2.1 cm.");
  EXPECT_EQ(Texts(tokens),
            (std::vector<std::string>{"ER+", "(", "positive", ")", ",", "size",
                                      "2.1", "cm", "."}));
  EXPECT_EQ(tokens[2].start, 5u);
  EXPECT_EQ(tokens[2].end, 13u);
}

TEST(TokenizeTest, KeepsInnerApostropheAndSlash) {
  EXPECT_EQ(Texts(Tokenize(U"at 12 o'clock, HER2/neu")),
            (std::vector<std::string>{"at", "12", "o'clock", ",", "HER2/neu"}));
}

TEST(TokenizeTest, OffsetsCountCodePoints) {
  const auto tokens = Tokenize(U"Größe 2 cm");
  ASSERT_EQ(tokens.size(), 3u);
  EXPECT_EQ(tokens[0].text, "Gr\xc3\xb6\xc3\x9f" "e");
  EXPECT_EQ(tokens[1].start, 6u);
}

TEST(TokenizeTest, AllPunctuationChunkSplitsIntoSingles) {
  EXPECT_EQ(Texts(Tokenize(U"a ...")),
            (std::vector<std::string>{"a", ".", ".", "."}));
}

TEST(TokenizeTest, MatchesCharacterWalkOracle) {
  const std::u32string alphabet = U"aB3+-./,()'\" \n\té“";
  std::mt19937 gen(12345);
  for (int trial = 0; trial < 2000; ++trial) {
    std::u32string text;
    const int len = static_cast<int>(gen() % 24);
    for (int i = 0; i < len; ++i) text.push_back(alphabet[gen() % alphabet.size()]);
    const auto got = Tokenize(text);
    const auto want = WalkTokenize(text);
    ASSERT_EQ(got.size(), want.size()) << EncodeUtf8(text);
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_EQ(got[i].text, want[i].text);
      EXPECT_EQ(got[i].start, want[i].start);
      EXPECT_EQ(got[i].end, want[i].end);
    }
  }
}

TEST(SegmentTest, BreaksOnTerminatorBeforeCapital) {
  const std::u32string text = U"Tumor is left. Grade 2 noted. and more";
  const auto tokens = Tokenize(text);
  const auto sentences = SegmentSentences(tokens, text);
  ASSERT_EQ(sentences.size(), 2u);
  EXPECT_EQ(sentences[0].end, 4u);
  EXPECT_EQ(sentences[1].end, tokens.size());
}

TEST(SegmentTest, BreaksOnLineBreak) {
  const std::u32string text = U"stage II\nmargins clear";
  const auto sentences = SegmentSentences(Tokenize(text), text);
  ASSERT_EQ(sentences.size(), 2u);
  EXPECT_EQ(sentences[0].size(), 2u);
}

TEST(SegmentTest, EmptyTextHasNoSentences) {
  EXPECT_TRUE(SegmentSentences({}, U"").empty());
}

TEST(SurfaceTest, NormalizesWhitespaceAndAsciiCase) {
  EXPECT_EQ(NormalizeSurface("  Strongly\n  Positive "), "strongly positive");
  EXPECT_EQ(FoldCase("\xc3\x89R"), "\xc3\x89r");
}

TEST(MakeDocumentTest, DerivesSortedMentions) {
  const Document d = Doc("d", "PR negative and ER Positive",
                         {{"ER", "Hormone_receptor_type", 0},
                          {"PR", "Hormone_receptor_type", 0},
                          {"ER Positive", "Hormone_receptor_status", 0}},
                         true);
  ASSERT_EQ(d.mentions.size(), 3u);
  EXPECT_EQ(d.mentions[0].surface, "pr");
  EXPECT_EQ(d.mentions[1].surface, "er");
  EXPECT_EQ(d.mentions[2].surface, "er positive");
  EXPECT_EQ(d.mentions[2].doc_id, "d");
}

CorpusError::Kind KindOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const CorpusError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no CorpusError thrown";
  return CorpusError::Kind::kMalformed;
}

TEST(MakeDocumentTest, RejectsBadSpans) {
  const LabelSet labels = LabelSet::Default();
  auto make = [&](std::vector<RawSpan> spans, bool overlap = false) {
    return [=] {
      MakeDocument("d", DocType::kClinicalNote, U"left breast", spans, labels,
                   overlap);
    };
  };
  EXPECT_EQ(KindOf(make({{0, 12, "Cancer_laterality"}})),
            CorpusError::Kind::kOffset);
  EXPECT_EQ(KindOf(make({{4, 4, "Cancer_laterality"}})),
            CorpusError::Kind::kOffset);
  EXPECT_EQ(KindOf(make({{0, 4, "Laterality"}})),
            CorpusError::Kind::kUnknownLabel);
  EXPECT_EQ(KindOf(make({{0, 4, "Cancer_laterality"},
                         {2, 11, "Tumor_site"}})),
            CorpusError::Kind::kOverlap);
  EXPECT_NO_THROW(make({{0, 4, "Cancer_laterality"}, {2, 11, "Tumor_site"}},
                       true)());
}

TEST(BioTest, RoundTripsMentions) {
  const Document d = Doc("d", "ER positive in the upper outer quadrant .",
                         {{"ER", "Hormone_receptor_type", 0},
                          {"positive", "Hormone_receptor_status", 0},
                          {"upper outer quadrant", "Tumor_site", 0}});
  const auto tags = MentionsToBio(d);
  EXPECT_EQ(tags, (std::vector<std::string>{
                      "B-Hormone_receptor_type", "B-Hormone_receptor_status",
                      "O", "O", "B-Tumor_site", "I-Tumor_site", "I-Tumor_site",
                      "O"}));
  const auto back = BioToMentions(tags, d.tokens, d);
  ASSERT_EQ(back.size(), d.mentions.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].start, d.mentions[i].start);
    EXPECT_EQ(back[i].end, d.mentions[i].end);
    EXPECT_EQ(back[i].category, d.mentions[i].category);
    EXPECT_EQ(back[i].surface, d.mentions[i].surface);
  }
}

TEST(BioTest, OrphanInsideOpensMention) {
  const Document d = Doc("d", "grade 2 stage II", {});
  const auto m = BioToMentions(
      {"I-Cancer_grade", "I-Cancer_grade", "B-Cancer_stage", "I-Cancer_grade"},
      d.tokens, d);
  ASSERT_EQ(m.size(), 3u);
  EXPECT_EQ(m[0].surface, "grade 2");
  EXPECT_EQ(m[1].surface, "stage");
  EXPECT_EQ(m[2].surface, "ii");
}

TEST(BioTest, RejectsSplitToken) {
  const Document d = Doc("d", "HER2/neu amplified", {{"HER2", "Hormone_receptor_type", 0}});
  EXPECT_EQ(KindOf([&] { MentionsToBio(d); }), CorpusError::Kind::kTokenSplit);
}

TEST(BioTest, RejectsBadTags) {
  const Document d = Doc("d", "left", {});
  EXPECT_THROW(BioToMentions({"E-Tumor_site"}, d.tokens, d), std::invalid_argument);
  EXPECT_THROW(BioToMentions({"O", "O"}, d.tokens, d), std::invalid_argument);
}

TEST(StatsTest, CountsDocumentsTokensAndSurfaces) {
  const Corpus c = testing::CorpusOf(
      "c", {Doc("a", "Left breast. Left side", {{"Left", "Cancer_laterality", 0},
                                                 {"Left", "Cancer_laterality", 1}}),
            Doc("b", "left", {{"left", "Cancer_laterality", 0}})});
  const CorpusStats s = ComputeStats(c);
  EXPECT_EQ(s.num_documents, 2u);
  EXPECT_EQ(s.num_sentences, 3u);
  EXPECT_EQ(s.num_tokens, 6u);
  EXPECT_EQ(s.num_unique_tokens, 4u);
  const auto& lat = s.categories[*c.label_set.IndexOf("Cancer_laterality")];
  EXPECT_EQ(lat.mentions, 3u);
  EXPECT_EQ(lat.unique_surfaces, 1u);
}

}  // namespace
}  // namespace nerport
