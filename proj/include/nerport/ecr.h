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

// Entity coverage ratio: how consistently a test-set entity surface was seen
// with the same labels in training.
//
//   ECR(e) = 0                                          if C_train = 0
//          = [sum_k train_k * test_k / C_train] / C_test   otherwise
//
// with train_k / test_k the number of gold mentions of surface e labeled k in
// the training / test corpus and C the per-corpus totals.

#ifndef NERPORT_ECR_H_
#define NERPORT_ECR_H_

#include <array>
#include <cstddef>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "nerport/corpus.h"
#include "nerport/evaluation.h"

namespace nerport {

using LabelCounts = std::map<std::string, std::size_t>;
using EntityCounts = std::map<std::string, LabelCounts>;  // surface -> counts

EntityCounts CountEntities(const Corpus& corpus);

// Throws std::invalid_argument when the test counts sum to zero.
double EntityCoverageRatio(const LabelCounts& train, const LabelCounts& test);

struct EcrRecord {
  std::string surface;
  LabelCounts train_counts;
  LabelCounts test_counts;
  std::size_t c_train = 0;
  std::size_t c_test = 0;
  double ecr = 0.0;
};

struct EcrTable {
  std::vector<EcrRecord> records;  // one per test surface, sorted by surface
  EntityCounts train_counts;

  const EcrRecord* Find(const std::string& surface) const;
};

EcrTable BuildEcrTable(const Corpus& train, const Corpus& test);

constexpr std::array<double, 3> kEcrBoundaries = {0.33, 0.67, 1.0};
constexpr int kNumEcrGroups = 4;

// Group 1: [0, 0.33), 2: [0.33, 0.67), 3: [0.67, 1), 4: exactly 1.
int EcrGroup(double ecr);

struct EcrBucket {
  int group = 0;
  std::size_t gold_mentions = 0;
  std::size_t pred_mentions = 0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  Prf prf;
};

struct EcrBucketReport {
  MatchMode mode = MatchMode::kStrict;
  std::array<EcrBucket, kNumEcrGroups> buckets;
};

// Gold mentions are bucketed by their surface's table ECR. Predicted mentions
// use the table ECR when their surface is a test surface; otherwise ECR is
// computed from the training counts against that surface's counts among the
// predictions. Matching then runs per document within each bucket. Counts
// mention instances. Throws std::invalid_argument when a gold surface is
// missing from the table.
EcrBucketReport EvaluateByEcrGroup(const Corpus& gold, const Corpus& pred,
                                   const EcrTable& table, MatchMode mode);

// Columns: surface,c_train,c_test,ecr,group, then train:<cat> and test:<cat>
// per category.
void WriteEcrCsv(std::ostream& out, const EcrTable& table,
                 const LabelSet& label_set);

void WriteEcrBucketCsv(std::ostream& out,
                       const std::vector<EcrBucketReport>& reports);

}  // namespace nerport

#endif  // NERPORT_ECR_H_
