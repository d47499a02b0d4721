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

// Span-level NER scoring.
//
// Strict match: identical character span and category. Lenient match: same
// category and at least one shared character. Matching is one-to-one and
// greedy: predictions are visited in canonical order (start, end, category)
// and each takes the first unmatched compatible gold mention in the same
// order.

#ifndef NERPORT_EVALUATION_H_
#define NERPORT_EVALUATION_H_

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nerport/corpus.h"

namespace nerport {

enum class MatchMode { kStrict, kLenient };

std::string_view MatchModeName(MatchMode mode);
MatchMode ParseMatchMode(std::string_view name);

bool Compatible(const EntityMention& gold, const EntityMention& pred,
                MatchMode mode);

struct MatchResult {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (gold, pred)
  std::vector<std::size_t> unmatched_gold;
  std::vector<std::size_t> unmatched_pred;
};

// Indices refer to the input spans. Both lists must come from one document.
MatchResult MatchMentions(std::span<const EntityMention> gold,
                          std::span<const EntityMention> pred, MatchMode mode);

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// 0/0 is 0 for every ratio.
Prf ComputePrf(std::size_t tp, std::size_t fp, std::size_t fn);

struct CategoryScore {
  std::string category;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  Prf prf;
};

struct EvalReport {
  MatchMode mode = MatchMode::kStrict;
  std::string gold_name;
  std::string pred_name;
  std::vector<CategoryScore> categories;  // label-set order
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  Prf micro;
  // Mean of per-category P/R/F1 over categories with gold or predicted
  // mentions.
  Prf macro;

  const CategoryScore* Find(std::string_view category) const;
};

// Documents missing from `pred` count as having no predictions. Throws
// std::invalid_argument for a prediction document id absent from `gold` or
// for mismatched label sets.
EvalReport Evaluate(const Corpus& gold, const Corpus& pred, MatchMode mode);

// Columns: mode,category,tp,fp,fn,precision,recall,f1 with micro and macro
// rows last.
void WriteEvalCsv(std::ostream& out, const std::vector<EvalReport>& reports);

// One row per category plus micro/macro rows; cells read "strict (lenient)".
void WriteEvalTable(std::ostream& out, const EvalReport& strict,
                    const EvalReport& lenient);

}  // namespace nerport

#endif  // NERPORT_EVALUATION_H_
