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

// Experiment orchestration: corpus splitting, the three transfer strategies
// (direct transfer, warm-start fine-tuning, local training), permutation
// robustness analysis, imported predictions and report emission.

#ifndef NERPORT_EXPERIMENT_H_
#define NERPORT_EXPERIMENT_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "nerport/corpus.h"
#include "nerport/crf.h"
#include "nerport/evaluation.h"
#include "nerport/perturbation.h"
#include "nerport/similarity.h"
#include "nerport/stats.h"

namespace nerport {

struct SplitRatios {
  double train = 0.6;
  double dev = 0.1;
  double test = 0.3;

  void Validate() const;
};

struct CorpusSplit {
  Corpus train;
  Corpus dev;
  Corpus test;
};

// Seeded Fisher-Yates shuffle of the documents, then contiguous slices.
// Dev and test get floor(n * ratio) documents, train the remainder. Throws
// std::invalid_argument when any split would be empty.
CorpusSplit SplitCorpus(const Corpus& corpus, const SplitRatios& ratios,
                        std::uint64_t seed);

// Concatenates corpora sharing a label set. Colliding document ids are
// rewritten as "<corpus name>:<id>".
Corpus MergeCorpora(std::string name, const std::vector<const Corpus*>& parts);

// Validated prediction corpus: overlapping spans allowed, every document id
// must exist in `gold` (CorpusError kUnknownDocument otherwise).
Corpus ImportPredictions(const std::string& path, const Corpus& gold);

enum class Strategy { kDirectTransfer, kFineTune, kLocalTrain };
enum class FineTuneMode { kWarmStart, kPooled };

std::string_view StrategyName(Strategy strategy);
Strategy ParseStrategy(std::string_view name);

// Component seed streams derived from a run seed with MixSeed.
enum SeedStream : std::uint64_t {
  kSplitSiteA = 1,
  kSplitSiteB = 2,
  kPermutation = 3,
};

struct ExperimentConfig {
  std::string site_a;
  std::string site_b;
  std::string labels;  // optional label file; default label set when empty
  SplitRatios ratios;
  int runs = 10;
  std::uint64_t base_seed = 0;
  std::vector<MatchMode> modes = {MatchMode::kStrict, MatchMode::kLenient};
  std::vector<Strategy> strategies = {Strategy::kDirectTransfer,
                                      Strategy::kFineTune,
                                      Strategy::kLocalTrain};
  FeatureConfig features;
  TrainConfig train;
  TrainConfig finetune;
  FineTuneMode finetune_mode = FineTuneMode::kWarmStart;
  IdfVariant idf_variant = IdfVariant::kLogOverDf;
  bool permutation = false;
  int jobs = 1;
  std::string output_dir = "experiment_out";

  void Validate() const;
};

// Reads a JSON config; absent fields keep their defaults, unknown fields are
// an error.
ExperimentConfig ParseExperimentConfig(std::istream& in);
// Relative input paths in the file resolve against its directory.
ExperimentConfig LoadExperimentConfig(const std::string& path);
void WriteExperimentConfig(std::ostream& out, const ExperimentConfig& config);

struct PermutationReport {
  std::vector<EvalReport> original;  // one per mode
  std::vector<EvalReport> permuted;
  std::size_t replaced = 0;
  std::size_t skipped = 0;
  std::vector<Replacement> log;
};

using Predictor = std::function<Corpus(const Corpus&)>;

// Scores `predict` on test_a and on test_a with entities swapped for donor
// surfaces unseen in exclude_a.
PermutationReport RunPermutationAnalysis(const Predictor& predict,
                                         const Corpus& test_a,
                                         const Corpus& donor_b,
                                         const Corpus& exclude_a,
                                         std::uint64_t seed,
                                         const std::vector<MatchMode>& modes);
PermutationReport RunPermutationAnalysis(const CrfModel& model,
                                         const Corpus& test_a,
                                         const Corpus& donor_b,
                                         const Corpus& exclude_a,
                                         std::uint64_t seed,
                                         const std::vector<MatchMode>& modes);

// Columns: mode,category,original_f1,permuted_f1,changed_f1.
void WritePermutationCsv(std::ostream& out, const PermutationReport& report);

// Evaluations of one run. "home" is the site-A model on the site-A test
// split; the strategies are all scored on the same site-B test split.
struct RunResult {
  int run = 0;
  std::uint64_t seed = 0;
  std::map<std::string, std::vector<EvalReport>> reports;  // name -> per mode
  std::optional<PermutationReport> permutation;
};

struct StrategySummary {
  std::string name;
  MatchMode mode = MatchMode::kStrict;
  RunAggregate micro_f1;
  RunAggregate macro_f1;
  std::vector<RunAggregate> category_f1;  // label-set order
};

struct PairwiseComparison {
  MatchMode mode = MatchMode::kStrict;
  std::string best;
  std::string other;
  TTestResult test;
  bool significant = false;  // p < 0.05
};

struct CorrelationResult {
  MatchMode mode = MatchMode::kStrict;
  std::vector<std::string> categories;
  std::vector<double> similarity;
  std::vector<double> drop;  // mean home F1 - mean direct-transfer F1
  std::optional<double> r;
};

struct TransferReport {
  ExperimentConfig config;
  SimilarityReport similarity;
  std::vector<RunResult> runs;
  std::vector<StrategySummary> summaries;
  std::map<MatchMode, AnovaResult> anova;
  std::vector<PairwiseComparison> pairwise;
  std::vector<CorrelationResult> correlations;
  std::vector<std::string> warnings;

  const StrategySummary* Find(std::string_view name, MatchMode mode) const;
};

// Run r uses seed base_seed + r; splits and permutation draw from MixSeed of
// that seed. Runs may execute concurrently (config.jobs) and are reduced in
// run order. A failing run aborts with its index in the message.
TransferReport RunTransferExperiment(const ExperimentConfig& config,
                                     const Corpus& site_a,
                                     const Corpus& site_b);

// Writes per_run.csv, aggregate.csv, anova.csv, pairwise.csv,
// correlation.csv, similarity.csv, tables.txt and, when present,
// permutation.csv into `dir` (created if missing).
void WriteTransferReport(const std::string& dir, const TransferReport& report);

}  // namespace nerport

#endif  // NERPORT_EXPERIMENT_H_
