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

#include "nerport/corpus_io.h"

#include <gtest/gtest.h>

#include <sstream>
#include <string>

#include "test_support.h"

namespace nerport {
namespace {

const char kTwoDocs[] =
    R"({"id":"a","doc_type":"pathology_report","text":"ER positive, grade 2.","entities":[{"start":0,"end":2,"label":"Hormone_receptor_type"},{"start":3,"end":11,"label":"Hormone_receptor_status"},{"start":13,"end":20,"label":"Cancer_grade"}]})"
    "\n\n"
    R"({"id":"b","doc_type":"clinical_note","text":"Größe: 2 cm","entities":[{"start":7,"end":11,"label":"Tumor_size"}]})"
    "\n";

Corpus Parse(const std::string& text, bool overlap = false) {
  std::istringstream in(text);
  return ParseCorpus(in, "test", LabelSet::Default(), LoadOptions{overlap});
}

std::size_t ErrorLine(const std::string& text) {
  try {
    Parse(text);
  } catch (const CorpusError& e) {
    return e.line();
  }
  ADD_FAILURE() << "expected a CorpusError";
  return 0;
}

TEST(CorpusIoTest, ParsesRecordsAndSkipsBlankLines) {
  const Corpus c = Parse(kTwoDocs);
  ASSERT_EQ(c.documents.size(), 2u);
  EXPECT_EQ(c.documents[0].doc_type, DocType::kPathologyReport);
  EXPECT_EQ(c.NumMentions(), 4u);
  EXPECT_EQ(c.documents[1].mentions[0].surface, "2 cm");
}

TEST(CorpusIoTest, ReportsLineNumbers) {
  const std::string good = R"({"id":"a","doc_type":"clinical_note","text":"x","entities":[]})";
  EXPECT_EQ(ErrorLine(good + "\n{not json\n"), 2u);
  EXPECT_EQ(ErrorLine(good + "\n\n" +
                      R"({"id":"b","doc_type":"clinical_note","text":"x","entities":[{"start":0,"end":5,"label":"Tumor_size"}]})"),
            3u);
  EXPECT_EQ(ErrorLine(R"({"id":"a","doc_type":"memo","text":"x","entities":[]})"), 1u);
  EXPECT_EQ(ErrorLine(R"({"id":"a","text":"x","entities":[]})"), 1u);
}

TEST(CorpusIoTest, RejectsDuplicateIds) {
  const std::string rec = R"({"id":"a","doc_type":"clinical_note","text":"x","entities":[]})";
  try {
    Parse(rec + "\n" + rec + "\n");
    FAIL();
  } catch (const CorpusError& e) {
    EXPECT_EQ(e.kind(), CorpusError::Kind::kDuplicateId);
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(CorpusIoTest, WriteThenParseIsIdentity) {
  const Corpus c = Parse(kTwoDocs);
  std::ostringstream first;
  WriteCorpus(first, c);
  const Corpus again = Parse(first.str());
  std::ostringstream second;
  WriteCorpus(second, again);
  EXPECT_EQ(first.str(), second.str());
  EXPECT_EQ(again.documents[1].text, c.documents[1].text);
}

TEST(CorpusIoTest, ConllRoundTripKeepsMentions) {
  const Corpus c = Parse(kTwoDocs);
  std::ostringstream conll;
  WriteConll(conll, c);
  EXPECT_NE(conll.str().find("#doc a pathology_report\nER\tB-Hormone_receptor_type\n"),
            std::string::npos);
  std::istringstream in(conll.str());
  const Corpus back = ReadConll(in, "conll", LabelSet::Default());
  ASSERT_EQ(back.documents.size(), c.documents.size());
  for (std::size_t d = 0; d < c.documents.size(); ++d) {
    const auto& m0 = c.documents[d].mentions;
    const auto& m1 = back.documents[d].mentions;
    ASSERT_EQ(m0.size(), m1.size());
    for (std::size_t i = 0; i < m0.size(); ++i) {
      EXPECT_EQ(m0[i].surface, m1[i].surface);
      EXPECT_EQ(m0[i].category, m1[i].category);
    }
  }
}

TEST(CorpusIoTest, LoadsBundledFixtures) {
  const Corpus gold = LoadCorpus(testing::DataPath("fixtures/eval_gold.jsonl"),
                                 LabelSet::Default());
  EXPECT_EQ(gold.documents.size(), 3u);
  EXPECT_THROW(LoadCorpus(testing::DataPath("fixtures/eval_pred.jsonl"),
                          LabelSet::Default()),
               CorpusError);
  EXPECT_NO_THROW(LoadCorpus(testing::DataPath("fixtures/eval_pred.jsonl"),
                             LabelSet::Default(), LoadOptions{true}));
  EXPECT_THROW(LoadCorpus("/nonexistent.jsonl", LabelSet::Default()),
               std::runtime_error);
}

}  // namespace
}  // namespace nerport
