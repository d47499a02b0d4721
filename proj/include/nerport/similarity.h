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

// Averaged TF-IDF term vectors over a corpus (or over the vocabulary of one
// entity category) and cosine similarity between them.
//
// For a corpus of N documents, TF_i(t) is the count of term t in document i
// divided by the token count of document i, and
//
//   weight(t) = (1/N) * sum_i TF_i(t) * IDF(t)
//
// where IDF(t) = log(N) / df(t) (kLogOverDf) or log(N / df(t)) (kStandard).
// Terms are case-folded tokens; logarithms are natural.

#ifndef NERPORT_SIMILARITY_H_
#define NERPORT_SIMILARITY_H_

#include <cstddef>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "nerport/corpus.h"

namespace nerport {

enum class IdfVariant { kLogOverDf, kStandard };

std::string_view IdfVariantName(IdfVariant variant);
IdfVariant ParseIdfVariant(std::string_view name);

struct TermWeights {
  std::string scope;  // "corpus" or the category name
  std::size_t num_documents = 0;
  std::map<std::string, double> weights;
  std::map<std::string, std::size_t> df;

  // Copy scaled to unit L2 norm (unchanged when the norm is zero).
  TermWeights Normalized() const;
  double Norm() const;
};

// Throws std::invalid_argument on an empty corpus.
TermWeights CorpusTfidf(const Corpus& corpus, IdfVariant variant);

// Corpus weights restricted to terms occurring inside at least one gold
// mention of `category`. Empty when the category has no mentions.
TermWeights CategoryTfidf(const Corpus& corpus, const std::string& category,
                          IdfVariant variant);

// Cosine over the union vocabulary; 0 when either norm is 0. Exactly
// symmetric in its arguments.
double Cosine(const TermWeights& a, const TermWeights& b);

struct CategorySimilarity {
  std::string category;
  double similarity = 0.0;
  std::size_t vocab_a = 0;
  std::size_t vocab_b = 0;
  bool present = false;  // mentions in at least one corpus
};

struct SimilarityReport {
  IdfVariant variant = IdfVariant::kLogOverDf;
  double overall = 0.0;
  std::size_t vocab_a = 0;
  std::size_t vocab_b = 0;
  std::vector<CategorySimilarity> categories;  // label-set order
  // Unweighted mean over categories present in either corpus.
  double category_mean = 0.0;
};

// Throws std::invalid_argument if the label sets differ.
SimilarityReport CompareCorpora(const Corpus& a, const Corpus& b,
                                IdfVariant variant);

// Columns: scope,similarity,variant,vocab_a,vocab_b. Rows: overall, one per
// category, then category_mean.
void WriteSimilarityCsv(std::ostream& out, const SimilarityReport& report);

}  // namespace nerport

#endif  // NERPORT_SIMILARITY_H_
