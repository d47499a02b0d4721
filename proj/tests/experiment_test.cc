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

#include "nerport/experiment.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "nerport/corpus_io.h"
#include "nerport/csv.h"
#include "nerport/synthetic.h"
#include "test_support.h"

namespace nerport {
namespace {

Corpus Numbered(std::size_t n) {
  std::vector<Document> docs;
  for (std::size_t i = 0; i < n; ++i) {
    docs.push_back(testing::Doc("d" + std::to_string(i), "left", {}));
  }
  return testing::CorpusOf("c", std::move(docs));
}

TEST(SplitTest, SizesAndCoverage) {
  const Corpus c = Numbered(10);
  const CorpusSplit s = SplitCorpus(c, SplitRatios{}, 3);
  EXPECT_EQ(s.train.documents.size(), 6u);
  EXPECT_EQ(s.dev.documents.size(), 1u);
  EXPECT_EQ(s.test.documents.size(), 3u);
  std::multiset<std::string> ids;
  for (const auto* part : {&s.train, &s.dev, &s.test}) {
    for (const auto& d : part->documents) ids.insert(d.id);
  }
  EXPECT_EQ(ids.size(), 10u);
  EXPECT_EQ(std::set<std::string>(ids.begin(), ids.end()).size(), 10u);

  const CorpusSplit again = SplitCorpus(c, SplitRatios{}, 3);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(again.test.documents[i].id, s.test.documents[i].id);
  }
}

TEST(SplitTest, RejectsEmptySplits) {
  EXPECT_THROW(SplitCorpus(Numbered(10), SplitRatios{1.0, 0.0, 0.0}, 1),
               std::invalid_argument);
  EXPECT_THROW(SplitCorpus(Numbered(2), SplitRatios{}, 1), std::invalid_argument);
  EXPECT_THROW(SplitCorpus(Numbered(5), SplitRatios{}, 1), std::invalid_argument);
  EXPECT_THROW((SplitRatios{0.5, 0.2, 0.2}.Validate()), std::invalid_argument);
}

TEST(MergeTest, RenamesCollidingIds) {
  Corpus a = Numbered(2);
  a.name = "a";
  Corpus b = Numbered(1);
  b.name = "b";
  const Corpus m = MergeCorpora("m", {&a, &b});
  ASSERT_EQ(m.documents.size(), 3u);
  EXPECT_EQ(m.documents[2].id, "b:d0");
}

TEST(ConfigTest, ParsesAndRoundTrips) {
  std::istringstream in(R"({"site_a":"a.jsonl","site_b":"b.jsonl","runs":3,
    "seed":42,"modes":["strict"],"strategies":["fine_tune","local_train"],
    "split":{"train":0.5,"dev":0.2,"test":0.3},"train":{"iterations":7},
    "finetune_mode":"pooled","idf_variant":"standard","permutation":true})");
  const ExperimentConfig c = ParseExperimentConfig(in);
  EXPECT_EQ(c.runs, 3);
  EXPECT_EQ(c.base_seed, 42u);
  EXPECT_EQ(c.modes.size(), 1u);
  EXPECT_EQ(c.strategies[0], Strategy::kFineTune);
  EXPECT_EQ(c.train.iterations, 7);
  EXPECT_EQ(c.finetune.iterations, TrainConfig{}.iterations);
  EXPECT_EQ(c.finetune_mode, FineTuneMode::kPooled);
  EXPECT_TRUE(c.permutation);
  std::ostringstream out;
  WriteExperimentConfig(out, c);
  std::istringstream back_in(out.str());
  std::ostringstream out2;
  WriteExperimentConfig(out2, ParseExperimentConfig(back_in));
  EXPECT_EQ(out.str(), out2.str());
}

TEST(ConfigTest, RejectsUnknownFieldsAndBadValues) {
  std::istringstream unknown(R"({"runz":3})");
  EXPECT_THROW(ParseExperimentConfig(unknown), std::invalid_argument);
  std::istringstream strategy(R"({"strategies":["magic"]})");
  EXPECT_THROW(ParseExperimentConfig(strategy), std::invalid_argument);
  ExperimentConfig c;
  c.runs = 0;
  EXPECT_THROW(c.Validate(), std::invalid_argument);
}

TEST(ImportTest, ValidatesAgainstGold) {
  const std::string gold_path = testing::DataPath("fixtures/eval_gold.jsonl");
  const Corpus gold = LoadCorpus(gold_path, LabelSet::Default());
  const Corpus same = ImportPredictions(gold_path, gold);
  EXPECT_EQ(Evaluate(gold, same, MatchMode::kStrict).micro.f1, 1.0);

  const std::string path = ::testing::TempDir() + "pred_bad.jsonl";
  {
    std::ofstream out(path);
    out << R"({"id":"d1","doc_type":"clinical_note","text":"x","entities":[]})" << "\n"
        << R"({"id":"zz","doc_type":"clinical_note","text":"x","entities":[]})" << "\n";
  }
  EXPECT_THROW(ImportPredictions(path, gold), CorpusError);
  {
    std::ofstream out(path);
    out << "\n{oops\n";
  }
  try {
    ImportPredictions(path, gold);
    FAIL();
  } catch (const CorpusError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(PermutationAnalysisTest, EmptyPoolMeansNoChange) {
  const Corpus gold = LoadCorpus(testing::DataPath("fixtures/eval_gold.jsonl"),
                                 LabelSet::Default());
  const PermutationReport r = RunPermutationAnalysis(
      [](const Corpus& c) { return c; }, gold, gold, gold, 5,
      {MatchMode::kStrict, MatchMode::kLenient});
  EXPECT_EQ(r.replaced, 0u);
  EXPECT_EQ(r.skipped, gold.NumMentions());
  for (std::size_t m = 0; m < 2; ++m) {
    EXPECT_EQ(r.original[m].micro.f1, r.permuted[m].micro.f1);
  }
}

class TransferTest : public ::testing::Test {
 protected:
  static ExperimentConfig SmallConfig(int runs) {
    ExperimentConfig c;
    c.runs = runs;
    c.base_seed = 5;
    c.train.iterations = 15;
    c.finetune.iterations = 10;
    c.permutation = true;
    return c;
  }
  static Corpus MakeSite(Site site, double shift) {
    GeneratorSpec spec = DefaultGeneratorSpec();
    spec.documents = 20;
    spec.shift = shift;
    return GenerateSynthetic(spec, site, 3);
  }
};

TEST_F(TransferTest, SingleRunWarnsAndSkipsAnova) {
  const TransferReport r = RunTransferExperiment(
      SmallConfig(1), MakeSite(Site::kA, 0.0), MakeSite(Site::kB, 0.5));
  EXPECT_TRUE(r.anova.empty());
  EXPECT_TRUE(r.pairwise.empty());
  EXPECT_FALSE(r.warnings.empty());
  ASSERT_EQ(r.runs.size(), 1u);
  EXPECT_EQ(r.runs[0].reports.size(), 4u);
  EXPECT_TRUE(r.runs[0].permutation.has_value());
}

std::map<std::string, std::vector<double>> ReadPerRun(const std::string& path) {
  std::ifstream in(path);
  const auto rows = ReadCsv(in);
  std::map<std::string, std::vector<double>> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    out[rows[i][2] + "|" + rows[i][3] + "|" + rows[i][4]].push_back(
        std::stod(rows[i][5]));
  }
  return out;
}

TEST_F(TransferTest, ReportArithmeticAndDeterminism) {
  ExperimentConfig c = SmallConfig(3);
  c.jobs = 2;
  const Corpus a = MakeSite(Site::kA, 0.0);
  const Corpus b = MakeSite(Site::kB, 0.5);
  const TransferReport r = RunTransferExperiment(c, a, b);
  EXPECT_EQ(r.anova.size(), 2u);
  EXPECT_EQ(r.correlations.size(), 2u);

  const std::string dir1 = ::testing::TempDir() + "nerport_exp1";
  const std::string dir2 = ::testing::TempDir() + "nerport_exp2";
  WriteTransferReport(dir1, r);
  c.jobs = 1;
  WriteTransferReport(dir2, RunTransferExperiment(c, a, b));
  for (const auto& entry : std::filesystem::directory_iterator(dir1)) {
    const auto name = entry.path().filename().string();
    std::ifstream f1(entry.path()), f2(dir2 + "/" + name);
    std::stringstream s1, s2;
    s1 << f1.rdbuf();
    s2 << f2.rdbuf();
    EXPECT_EQ(s1.str(), s2.str()) << name;
  }

  const auto per_run = ReadPerRun(dir1 + "/per_run.csv");
  std::ifstream agg_in(dir1 + "/aggregate.csv");
  const auto agg = ReadCsv(agg_in);
  ASSERT_GT(agg.size(), 1u);
  for (std::size_t i = 1; i < agg.size(); ++i) {
    const auto key = agg[i][0] + "|" + agg[i][1] + "|" + agg[i][2];
    ASSERT_EQ(per_run.count(key), 1u) << key;
    const RunAggregate re = AggregateRuns(agg[i][2], per_run.at(key));
    EXPECT_EQ(FormatDouble(re.mean), agg[i][4]) << key;
    EXPECT_EQ(FormatDouble(re.std_dev), agg[i][5]) << key;
  }
  std::filesystem::remove_all(dir1);
  std::filesystem::remove_all(dir2);
}

}  // namespace
}  // namespace nerport
