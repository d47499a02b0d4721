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

#include "nerport/ecr.h"

#include <algorithm>
#include <stdexcept>

#include "nerport/csv.h"

namespace nerport {
namespace {

std::size_t Total(const LabelCounts& counts) {
  std::size_t total = 0;
  for (const auto& [label, n] : counts) total += n;
  return total;
}

std::size_t Lookup(const LabelCounts& counts, const std::string& label) {
  auto it = counts.find(label);
  return it == counts.end() ? 0 : it->second;
}

}  // namespace

EntityCounts CountEntities(const Corpus& corpus) {
  EntityCounts counts;
  for (const auto& doc : corpus.documents) {
    for (const auto& m : doc.mentions) ++counts[m.surface][m.category];
  }
  return counts;
}

double EntityCoverageRatio(const LabelCounts& train, const LabelCounts& test) {
  const std::size_t c_test = Total(test);
  if (c_test == 0) {
    throw std::invalid_argument("ECR requires at least one test occurrence");
  }
  const std::size_t c_train = Total(train);
  if (c_train == 0) return 0.0;
  // Integer numerator and denominator: the ratio is exact at 0 and 1.
  std::size_t numerator = 0;
  for (const auto& [label, n] : test) numerator += Lookup(train, label) * n;
  return static_cast<double>(numerator) /
         (static_cast<double>(c_train) * static_cast<double>(c_test));
}

const EcrRecord* EcrTable::Find(const std::string& surface) const {
  auto it = std::lower_bound(
      records.begin(), records.end(), surface,
      [](const EcrRecord& r, const std::string& s) { return r.surface < s; });
  if (it == records.end() || it->surface != surface) return nullptr;
  return &*it;
}

EcrTable BuildEcrTable(const Corpus& train, const Corpus& test) {
  if (!(train.label_set == test.label_set)) {
    throw std::invalid_argument("corpora use different label sets");
  }
  EcrTable table;
  table.train_counts = CountEntities(train);
  for (auto& [surface, test_counts] : CountEntities(test)) {
    EcrRecord record;
    record.surface = surface;
    if (auto it = table.train_counts.find(surface);
        it != table.train_counts.end()) {
      record.train_counts = it->second;
    }
    record.test_counts = std::move(test_counts);
    record.c_train = Total(record.train_counts);
    record.c_test = Total(record.test_counts);
    record.ecr = EntityCoverageRatio(record.train_counts, record.test_counts);
    table.records.push_back(std::move(record));
  }
  return table;
}

int EcrGroup(double ecr) {
  if (ecr < kEcrBoundaries[0]) return 1;
  if (ecr < kEcrBoundaries[1]) return 2;
  if (ecr < kEcrBoundaries[2]) return 3;
  return 4;
}

EcrBucketReport EvaluateByEcrGroup(const Corpus& gold, const Corpus& pred,
                                   const EcrTable& table, MatchMode mode) {
  for (const auto& doc : pred.documents) {
    if (gold.FindDocument(doc.id) == nullptr) {
      throw std::invalid_argument("prediction document '" + doc.id +
                                  "' is not in the gold corpus");
    }
  }
  const EntityCounts pred_counts = CountEntities(pred);
  auto pred_group = [&](const EntityMention& m) {
    if (const EcrRecord* r = table.Find(m.surface)) return EcrGroup(r->ecr);
    LabelCounts train;
    if (auto it = table.train_counts.find(m.surface);
        it != table.train_counts.end()) {
      train = it->second;
    }
    return EcrGroup(EntityCoverageRatio(train, pred_counts.at(m.surface)));
  };

  EcrBucketReport report;
  report.mode = mode;
  for (int g = 0; g < kNumEcrGroups; ++g) report.buckets[g].group = g + 1;

  static const std::vector<EntityMention> kNone;
  for (const auto& gdoc : gold.documents) {
    const Document* pdoc = pred.FindDocument(gdoc.id);
    const auto& preds = pdoc ? pdoc->mentions : kNone;
    std::array<std::vector<EntityMention>, kNumEcrGroups> gold_by_group;
    std::array<std::vector<EntityMention>, kNumEcrGroups> pred_by_group;
    for (const auto& m : gdoc.mentions) {
      const EcrRecord* r = table.Find(m.surface);
      if (r == nullptr) {
        throw std::invalid_argument("gold surface '" + m.surface +
                                    "' is missing from the ECR table");
      }
      gold_by_group[EcrGroup(r->ecr) - 1].push_back(m);
    }
    for (const auto& m : preds) pred_by_group[pred_group(m) - 1].push_back(m);

    for (int g = 0; g < kNumEcrGroups; ++g) {
      EcrBucket& bucket = report.buckets[g];
      const MatchResult match =
          MatchMentions(gold_by_group[g], pred_by_group[g], mode);
      bucket.gold_mentions += gold_by_group[g].size();
      bucket.pred_mentions += pred_by_group[g].size();
      bucket.tp += match.pairs.size();
      bucket.fn += match.unmatched_gold.size();
      bucket.fp += match.unmatched_pred.size();
    }
  }
  for (auto& bucket : report.buckets) {
    bucket.prf = ComputePrf(bucket.tp, bucket.fp, bucket.fn);
  }
  return report;
}

void WriteEcrCsv(std::ostream& out, const EcrTable& table,
                 const LabelSet& label_set) {
  CsvWriter csv(out);
  std::vector<std::string> header = {"surface", "c_train", "c_test", "ecr",
                                     "group"};
  for (const auto& c : label_set.categories()) header.push_back("train:" + c);
  for (const auto& c : label_set.categories()) header.push_back("test:" + c);
  csv.Row(header);
  for (const auto& r : table.records) {
    std::vector<std::string> row = {r.surface, std::to_string(r.c_train),
                                    std::to_string(r.c_test),
                                    FormatDouble(r.ecr),
                                    std::to_string(EcrGroup(r.ecr))};
    for (const auto& c : label_set.categories()) {
      row.push_back(std::to_string(Lookup(r.train_counts, c)));
    }
    for (const auto& c : label_set.categories()) {
      row.push_back(std::to_string(Lookup(r.test_counts, c)));
    }
    csv.Row(row);
  }
}

void WriteEcrBucketCsv(std::ostream& out,
                       const std::vector<EcrBucketReport>& reports) {
  CsvWriter csv(out);
  csv.Row({"mode", "group", "range", "gold_mentions", "pred_mentions", "tp",
           "fp", "fn", "precision", "recall", "f1"});
  static const char* kRanges[] = {"[0,0.33)", "[0.33,0.67)", "[0.67,1)",
                                  "1"};
  for (const auto& r : reports) {
    for (const auto& b : r.buckets) {
      csv.Row({std::string(MatchModeName(r.mode)), std::to_string(b.group),
               kRanges[b.group - 1], std::to_string(b.gold_mentions),
               std::to_string(b.pred_mentions), std::to_string(b.tp),
               std::to_string(b.fp), std::to_string(b.fn),
               FormatDouble(b.prf.precision), FormatDouble(b.prf.recall),
               FormatDouble(b.prf.f1)});
    }
  }
}

}  // namespace nerport
