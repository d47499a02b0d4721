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

#include "nerport/similarity.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "nerport/csv.h"

namespace nerport {

std::string_view IdfVariantName(IdfVariant variant) {
  return variant == IdfVariant::kLogOverDf ? "log_over_df" : "standard";
}

IdfVariant ParseIdfVariant(std::string_view name) {
  if (name == "log_over_df") return IdfVariant::kLogOverDf;
  if (name == "standard") return IdfVariant::kStandard;
  throw std::invalid_argument("unknown IDF variant: " + std::string(name));
}

double TermWeights::Norm() const {
  double sum = 0.0;
  for (const auto& [term, w] : weights) sum += w * w;
  return std::sqrt(sum);
}

TermWeights TermWeights::Normalized() const {
  TermWeights out = *this;
  const double norm = Norm();
  if (norm > 0.0) {
    for (auto& [term, w] : out.weights) w /= norm;
  }
  return out;
}

TermWeights CorpusTfidf(const Corpus& corpus, IdfVariant variant) {
  const std::size_t n = corpus.documents.size();
  if (n == 0) throw std::invalid_argument("TF-IDF of an empty corpus");

  std::map<std::string, double> tf_sum;
  TermWeights out;
  out.scope = "corpus";
  out.num_documents = n;
  for (const auto& doc : corpus.documents) {
    if (doc.tokens.empty()) continue;
    std::map<std::string, std::size_t> counts;
    for (const auto& t : doc.tokens) ++counts[FoldCase(t.text)];
    const double len = static_cast<double>(doc.tokens.size());
    for (const auto& [term, count] : counts) {
      tf_sum[term] += static_cast<double>(count) / len;
      ++out.df[term];
    }
  }
  const double log_n = std::log(static_cast<double>(n));
  for (const auto& [term, sum] : tf_sum) {
    const double df = static_cast<double>(out.df[term]);
    const double idf = variant == IdfVariant::kLogOverDf
                           ? log_n / df
                           : std::log(static_cast<double>(n) / df);
    out.weights[term] = sum * idf / static_cast<double>(n);
  }
  return out;
}

TermWeights CategoryTfidf(const Corpus& corpus, const std::string& category,
                          IdfVariant variant) {
  if (!corpus.label_set.Contains(category)) {
    throw std::invalid_argument("unknown category: " + category);
  }
  std::set<std::string> vocab;
  for (const auto& doc : corpus.documents) {
    for (const auto& m : doc.mentions) {
      if (m.category != category) continue;
      for (const auto& t : doc.tokens) {
        if (t.start >= m.start && t.end <= m.end) vocab.insert(FoldCase(t.text));
      }
    }
  }
  TermWeights out;
  out.scope = category;
  out.num_documents = corpus.documents.size();
  if (vocab.empty()) return out;

  const TermWeights full = CorpusTfidf(corpus, variant);
  for (const auto& term : vocab) {
    out.weights[term] = full.weights.at(term);
    out.df[term] = full.df.at(term);
  }
  return out;
}

double Cosine(const TermWeights& a, const TermWeights& b) {
  const double na = a.Norm();
  const double nb = b.Norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  // Merge walk over sorted keys so that the summation order does not depend
  // on argument order.
  double dot = 0.0;
  auto ia = a.weights.begin();
  auto ib = b.weights.begin();
  while (ia != a.weights.end() && ib != b.weights.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      dot += ia->second * ib->second;
      ++ia;
      ++ib;
    }
  }
  const double c = dot / (na * nb);
  return std::clamp(c, 0.0, 1.0);
}

SimilarityReport CompareCorpora(const Corpus& a, const Corpus& b,
                                IdfVariant variant) {
  if (!(a.label_set == b.label_set)) {
    throw std::invalid_argument("corpora use different label sets");
  }
  SimilarityReport report;
  report.variant = variant;
  const TermWeights wa = CorpusTfidf(a, variant);
  const TermWeights wb = CorpusTfidf(b, variant);
  report.overall = Cosine(wa, wb);
  report.vocab_a = wa.weights.size();
  report.vocab_b = wb.weights.size();

  double sum = 0.0;
  std::size_t present = 0;
  for (const auto& category : a.label_set.categories()) {
    const TermWeights ca = CategoryTfidf(a, category, variant);
    const TermWeights cb = CategoryTfidf(b, category, variant);
    CategorySimilarity row;
    row.category = category;
    row.similarity = Cosine(ca, cb);
    row.vocab_a = ca.weights.size();
    row.vocab_b = cb.weights.size();
    row.present = row.vocab_a > 0 || row.vocab_b > 0;
    if (row.present) {
      sum += row.similarity;
      ++present;
    }
    report.categories.push_back(std::move(row));
  }
  report.category_mean = present == 0 ? 0.0 : sum / static_cast<double>(present);
  return report;
}

void WriteSimilarityCsv(std::ostream& out, const SimilarityReport& report) {
  CsvWriter csv(out);
  const std::string variant(IdfVariantName(report.variant));
  csv.Row({"scope", "similarity", "variant", "vocab_a", "vocab_b"});
  csv.Row({"overall", FormatDouble(report.overall), variant,
           std::to_string(report.vocab_a), std::to_string(report.vocab_b)});
  for (const auto& row : report.categories) {
    csv.Row({row.category, FormatDouble(row.similarity), variant,
             std::to_string(row.vocab_a), std::to_string(row.vocab_b)});
  }
  csv.Row({"category_mean", FormatDouble(report.category_mean), variant, "",
           ""});
}

}  // namespace nerport
