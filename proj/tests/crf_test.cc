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

#include "nerport/crf.h"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <vector>

#include "nerport/corpus_io.h"
#include "nerport/evaluation.h"
#include "oracles.h"
#include "test_support.h"

namespace nerport {
namespace {

TEST(CrfInferenceTest, LogPartitionMatchesEnumeration) {
  std::mt19937 gen(17);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t len = 1 + gen() % 6;
    const std::size_t labels = 1 + gen() % 4;
    const SequenceScores s = oracle::RandomScores(&gen, len, labels, false);
    double z = 0.0;
    std::vector<double> node(len * labels, 0.0);
    oracle::ForEachPath(len, labels, [&](const std::vector<std::size_t>& y) {
      const double p = std::exp(oracle::PathScore(s, y));
      z += p;
      for (std::size_t t = 0; t < len; ++t) node[t * labels + y[t]] += p;
    });
    const Marginals m = ForwardBackward(s);
    EXPECT_NEAR(std::exp(m.log_z) / z, 1.0, 1e-9);
    for (std::size_t i = 0; i < node.size(); ++i) {
      EXPECT_NEAR(m.node[i], node[i] / z, 1e-9);
    }
  }
}

TEST(CrfInferenceTest, EdgeMarginalsSumToNodeMarginals) {
  std::mt19937 gen(3);
  const SequenceScores s = oracle::RandomScores(&gen, 5, 3, false);
  const Marginals m = ForwardBackward(s);
  for (std::size_t t = 0; t + 1 < 5; ++t) {
    for (std::size_t a = 0; a < 3; ++a) {
      double row = 0.0;
      for (std::size_t b = 0; b < 3; ++b) row += m.edge[(t * 3 + a) * 3 + b];
      EXPECT_NEAR(row, m.node[t * 3 + a], 1e-12);
    }
  }
}

TEST(CrfInferenceTest, ViterbiMatchesExhaustiveArgmax) {
  std::mt19937 gen(29);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t len = 1 + gen() % 6;
    const std::size_t labels = 1 + gen() % 4;
    // Half the instances use small integers so exact ties occur.
    const SequenceScores s = oracle::RandomScores(&gen, len, labels, trial % 2 == 1);
    double best = -std::numeric_limits<double>::infinity();
    std::vector<std::size_t> arg;
    oracle::ForEachPath(len, labels, [&](const std::vector<std::size_t>& y) {
      const double v = oracle::PathScore(s, y);
      if (v > best) {
        best = v;
        arg = y;
      }
    });
    const auto path = ViterbiPath(s);
    EXPECT_EQ(path, arg) << "trial " << trial;
    EXPECT_NEAR(PathScore(s, path), best, 1e-12);
  }
}

TEST(CrfInferenceTest, ViterbiInvariantUnderPositiveScaling) {
  std::mt19937 gen(8);
  for (int trial = 0; trial < 100; ++trial) {
    SequenceScores s = oracle::RandomScores(&gen, 1 + gen() % 6, 1 + gen() % 4, false);
    const auto before = ViterbiPath(s);
    for (auto* v : {&s.state, &s.transition, &s.begin, &s.end}) {
      for (double& x : *v) x *= 3.7;
    }
    EXPECT_EQ(ViterbiPath(s), before);
  }
}

TEST(CrfTrainingTest, GradientMatchesCentralDifferences) {
  std::mt19937 gen(101);
  for (int trial = 0; trial < 5; ++trial) {
    oracle::CrfProblem p = oracle::RandomCrfProblem(&gen);
    EXPECT_LE(oracle::GradientCheck(&p, 0.3), 1e-4) << "trial " << trial;
  }
}

TEST(CrfTrainingTest, GradientIndependentOfThreadCount) {
  std::mt19937 gen(55);
  oracle::CrfProblem p = oracle::RandomCrfProblem(&gen);
  const ObjectiveResult one = ObjectiveAndGradient(p.model, p.batch, 0.1, 1);
  const ObjectiveResult many = ObjectiveAndGradient(p.model, p.batch, 0.1, 4);
  EXPECT_EQ(one.value, many.value);
  EXPECT_EQ(one.gradient, many.gradient);
}

Corpus FixtureCorpus() {
  return LoadCorpus(testing::DataPath("fixtures/two_docs.jsonl"),
                    LabelSet::Default());
}

TEST(CrfTrainingTest, ObjectiveIncreasesAndMemorizesFixture) {
  const Corpus data = FixtureCorpus();
  TrainConfig config;
  config.iterations = 50;
  std::vector<double> objective;
  const CrfModel model = TrainCrf(
      data, nullptr, FeatureConfig{}, config,
      [&](const TrainProgress& p) { objective.push_back(p.objective); });
  ASSERT_EQ(objective.size(), 50u);
  for (std::size_t i = 1; i < objective.size(); ++i) {
    EXPECT_GT(objective[i], objective[i - 1]) << "iteration " << i;
  }
  const EvalReport r = Evaluate(data, PredictCorpus(model, data), MatchMode::kStrict);
  EXPECT_GE(r.micro.f1, 0.95);
}

TEST(CrfTrainingTest, ScalingWeightsKeepsPredictions) {
  const Corpus data = FixtureCorpus();
  TrainConfig config;
  config.iterations = 20;
  CrfModel model = TrainCrf(data, nullptr, FeatureConfig{}, config);
  const FeatureExtractor fx(model.feature_config());
  std::vector<std::vector<std::string>> before;
  for (const auto& d : data.documents) before.push_back(ViterbiTags(model, fx, d.tokens));
  for (double& w : model.weights()) w *= 4.0;
  for (std::size_t i = 0; i < data.documents.size(); ++i) {
    EXPECT_EQ(ViterbiTags(model, fx, data.documents[i].tokens), before[i]);
  }
}

TEST(CrfModelTest, SerializationRoundTrip) {
  const Corpus data = FixtureCorpus();
  TrainConfig config;
  config.iterations = 10;
  config.seed = 9;
  const CrfModel model = TrainCrf(data, nullptr, FeatureConfig{}, config);
  std::ostringstream first;
  WriteModel(first, model);
  std::istringstream in(first.str());
  const CrfModel back = ReadModel(in);
  std::ostringstream second;
  WriteModel(second, back);
  EXPECT_EQ(first.str(), second.str());
  EXPECT_EQ(back.metadata().seed, 9u);
  EXPECT_EQ(back.metadata().iterations, 10);
  std::istringstream bad("{\"format\":\"other\"}");
  EXPECT_THROW(ReadModel(bad), std::runtime_error);
}

TEST(CrfModelTest, TagInventory) {
  EXPECT_EQ(BioTagsFor(LabelSet({"X", "Y"})),
            (std::vector<std::string>{"O", "B-X", "I-X", "B-Y", "I-Y"}));
}

TEST(CrfModelTest, FineTuneKeepsIndicesAndChecksLabels) {
  const Corpus data = FixtureCorpus();
  TrainConfig config;
  config.iterations = 5;
  const CrfModel base = TrainCrf(data, nullptr, FeatureConfig{}, config);
  const Corpus extra = testing::CorpusOf(
      "x", {testing::Doc("n", "Zebra stage IV", {{"stage IV", "Cancer_stage", 0}})});
  const CrfModel tuned = FineTuneCrf(base, extra, nullptr, config);
  ASSERT_GT(tuned.num_features(), base.num_features());
  for (std::size_t f = 0; f < base.num_features(); ++f) {
    EXPECT_EQ(tuned.feature_names()[f], base.feature_names()[f]);
  }
  EXPECT_TRUE(tuned.metadata().warm_start);
  const LabelSet other({"Cancer_stage"});
  const Corpus odd = testing::CorpusOf(
      "o", {testing::Doc("n", "stage IV", {{"stage IV", "Cancer_stage", 0}}, false, other)},
      other);
  EXPECT_THROW(FineTuneCrf(base, odd, nullptr, config), std::invalid_argument);
}

TEST(CrfModelTest, RejectsBadTrainConfig) {
  TrainConfig c;
  c.iterations = -1;
  EXPECT_THROW(c.Validate(), std::invalid_argument);
  c = TrainConfig{};
  c.learning_rate = 0.0;
  EXPECT_THROW(c.Validate(), std::invalid_argument);
  EXPECT_THROW(TrainCrf(testing::CorpusOf("e", {}), nullptr, FeatureConfig{}, TrainConfig{}),
               std::invalid_argument);
}

}  // namespace
}  // namespace nerport
