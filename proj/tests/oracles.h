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

// Brute-force reference implementations shared by unit and acceptance tests.

#ifndef NERPORT_TESTS_ORACLES_H_
#define NERPORT_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "nerport/corpus.h"
#include "nerport/crf.h"
#include "nerport/evaluation.h"
#include "nerport/similarity.h"
#include "nerport/utf8.h"

namespace nerport::oracle {

// Average TF-IDF by direct summation over every term and document. With
// `keep`, only those terms are reported.
inline std::map<std::string, double> TfidfWeights(
    const Corpus& c, IdfVariant v, const std::set<std::string>* keep = nullptr) {
  const double n = static_cast<double>(c.documents.size());
  std::set<std::string> terms;
  for (const auto& d : c.documents) {
    for (const auto& t : d.tokens) terms.insert(FoldCase(t.text));
  }
  std::map<std::string, double> out;
  for (const auto& term : terms) {
    if (keep != nullptr && keep->count(term) == 0) continue;
    double df = 0.0;
    for (const auto& d : c.documents) {
      bool has = false;
      for (const auto& t : d.tokens) has = has || FoldCase(t.text) == term;
      if (has) df += 1.0;
    }
    const double idf =
        v == IdfVariant::kLogOverDf ? std::log(n) / df : std::log(n / df);
    double total = 0.0;
    for (const auto& d : c.documents) {
      double count = 0.0;
      for (const auto& t : d.tokens) count += FoldCase(t.text) == term ? 1.0 : 0.0;
      if (!d.tokens.empty()) {
        total += count / static_cast<double>(d.tokens.size()) * idf;
      }
    }
    out[term] = total / n;
  }
  return out;
}

inline double Cosine(const std::map<std::string, double>& a,
                     const std::map<std::string, double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (const auto& [k, v] : a) {
    na += v * v;
    auto it = b.find(k);
    if (it != b.end()) dot += v * it->second;
  }
  for (const auto& [k, v] : b) nb += v * v;
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

inline std::set<std::string> MentionTerms(const Corpus& c,
                                          const std::string& category) {
  std::set<std::string> out;
  for (const auto& d : c.documents) {
    for (const auto& m : d.mentions) {
      if (m.category != category) continue;
      for (const auto& t : Tokenize(DecodeUtf8(m.surface))) out.insert(t.text);
    }
  }
  return out;
}

// Random corpus of up to `max_docs` documents over a small vocabulary, with
// "left" and "ER" labelled at their first occurrence per document.
inline Corpus RandomTfidfCorpus(std::mt19937* gen, const std::string& name,
                                int max_docs = 10) {
  static const std::vector<std::string> kWords = {
      "tumor", "Grade", "2", "left", "ER", "positive", "the", "of", "cm", "mass"};
  const LabelSet labels = LabelSet::Default();
  Corpus c{name, labels, {}};
  const int n = 1 + static_cast<int>((*gen)() % static_cast<unsigned>(max_docs));
  for (int d = 0; d < n; ++d) {
    std::u32string text;
    std::vector<RawSpan> spans;
    std::set<std::string> labelled;
    const int len = 1 + static_cast<int>((*gen)() % 12);
    for (int w = 0; w < len; ++w) {
      const std::string& word = kWords[(*gen)() % kWords.size()];
      if (!text.empty()) text.push_back(U' ');
      const std::size_t start = text.size();
      text += DecodeUtf8(word);
      if ((word == "left" || word == "ER") && labelled.insert(word).second) {
        spans.push_back({start, text.size(),
                         word == "left" ? "Cancer_laterality"
                                        : "Hormone_receptor_type"});
      }
    }
    c.documents.push_back(MakeDocument(name + std::to_string(d),
                                       DocType::kClinicalNote, text, spans,
                                       labels));
  }
  return c;
}

inline bool Fits(const EntityMention& g, const EntityMention& p, MatchMode mode) {
  if (g.category != p.category) return false;
  if (mode == MatchMode::kStrict) return g.start == p.start && g.end == p.end;
  return g.start < p.end && p.start < g.end;
}

// Largest one-to-one matching by trying every assignment.
inline std::size_t MaxMatching(const std::vector<EntityMention>& gold,
                               const std::vector<EntityMention>& pred,
                               MatchMode mode) {
  std::vector<bool> used(pred.size(), false);
  std::function<std::size_t(std::size_t)> best =
      [&](std::size_t g) -> std::size_t {
    if (g == gold.size()) return 0;
    std::size_t out = best(g + 1);
    for (std::size_t p = 0; p < pred.size(); ++p) {
      if (used[p] || !Fits(gold[g], pred[p], mode)) continue;
      used[p] = true;
      out = std::max(out, 1 + best(g + 1));
      used[p] = false;
    }
    return out;
  };
  return best(0);
}

struct Counts {
  std::size_t tp = 0, fp = 0, fn = 0;
};

// Per-category counts from maximum matching within each document.
inline std::map<std::string, Counts> MaxMatchCounts(const Corpus& gold,
                                                    const Corpus& pred,
                                                    MatchMode mode) {
  std::map<std::string, Counts> out;
  static const std::vector<EntityMention> kNone;
  for (const auto& category : gold.label_set.categories()) {
    Counts c;
    for (const auto& gd : gold.documents) {
      const Document* pd = pred.FindDocument(gd.id);
      std::vector<EntityMention> g, p;
      for (const auto& m : gd.mentions) {
        if (m.category == category) g.push_back(m);
      }
      for (const auto& m : pd ? pd->mentions : kNone) {
        if (m.category == category) p.push_back(m);
      }
      const std::size_t tp = MaxMatching(g, p, mode);
      c.tp += tp;
      c.fn += g.size() - tp;
      c.fp += p.size() - tp;
    }
    out[category] = c;
  }
  return out;
}

inline SequenceScores RandomScores(std::mt19937* gen, std::size_t len,
                                   std::size_t labels, bool integral) {
  std::uniform_real_distribution<double> real(-2.0, 2.0);
  auto draw = [&] {
    return integral ? static_cast<double>(static_cast<int>((*gen)() % 3) - 1)
                    : real(*gen);
  };
  SequenceScores s;
  s.length = len;
  s.num_labels = labels;
  s.state.resize(len * labels);
  s.transition.resize(labels * labels);
  s.begin.resize(labels);
  s.end.resize(labels);
  for (auto* v : {&s.state, &s.transition, &s.begin, &s.end}) {
    for (double& x : *v) x = draw();
  }
  return s;
}

inline double PathScore(const SequenceScores& s,
                        const std::vector<std::size_t>& y) {
  double total = s.begin[y[0]] + s.end[y.back()];
  for (std::size_t t = 0; t < y.size(); ++t) {
    total += s.state[t * s.num_labels + y[t]];
    if (t > 0) total += s.transition[y[t - 1] * s.num_labels + y[t]];
  }
  return total;
}

// Visits every tag sequence in lexicographic order.
inline void ForEachPath(
    std::size_t len, std::size_t labels,
    const std::function<void(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> y(len, 0);
  while (true) {
    fn(y);
    std::size_t k = len;
    while (k > 0 && ++y[k - 1] == labels) y[--k] = 0;
    if (k == 0) return;
  }
}

// Exhaustive partition function (not in log space).
inline double Partition(const SequenceScores& s) {
  double z = 0.0;
  ForEachPath(s.length, s.num_labels, [&](const std::vector<std::size_t>& y) {
    z += std::exp(PathScore(s, y));
  });
  return z;
}

// First path in lexicographic order with the highest score.
inline std::vector<std::size_t> Argmax(const SequenceScores& s) {
  double best = -HUGE_VAL;
  std::vector<std::size_t> arg;
  ForEachPath(s.length, s.num_labels, [&](const std::vector<std::size_t>& y) {
    const double v = PathScore(s, y);
    if (v > best) {
      best = v;
      arg = y;
    }
  });
  return arg;
}

// Small CRF problem with random weights and gold tags.
struct CrfProblem {
  CrfModel model{LabelSet({"A", "B"}), FeatureConfig{}};
  std::vector<EncodedSequence> batch;
};

inline CrfProblem RandomCrfProblem(std::mt19937* gen) {
  CrfProblem p;
  for (int f = 0; f < 6; ++f) p.model.AddFeature("f" + std::to_string(f));
  std::uniform_real_distribution<double> w(-1.0, 1.0);
  for (double& x : p.model.weights()) x = w(*gen);
  const std::size_t labels = p.model.num_labels();
  for (int s = 0; s < 4; ++s) {
    EncodedSequence seq;
    const std::size_t len = 1 + (*gen)() % 5;
    for (std::size_t t = 0; t < len; ++t) {
      std::vector<FeatureValue> fv;
      for (std::size_t f = 0; f < 6; ++f) {
        if ((*gen)() % 2) fv.push_back({f, f == 5 ? w(*gen) : 1.0});
      }
      seq.positions.push_back(fv);
      seq.gold.push_back((*gen)() % labels);
    }
    p.batch.push_back(seq);
  }
  return p;
}

// Largest relative deviation between the analytic gradient and central
// differences, scaled by max(1, |analytic|, |numeric|).
inline double GradientCheck(CrfProblem* p, double l2, double h = 1e-5) {
  const ObjectiveResult r = ObjectiveAndGradient(p->model, p->batch, l2);
  auto w = p->model.weights();
  double worst = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double saved = w[i];
    w[i] = saved + h;
    const double up = ObjectiveAndGradient(p->model, p->batch, l2).value;
    w[i] = saved - h;
    const double down = ObjectiveAndGradient(p->model, p->batch, l2).value;
    w[i] = saved;
    const double numeric = (up - down) / (2 * h);
    const double scale =
        std::max({1.0, std::fabs(numeric), std::fabs(r.gradient[i])});
    worst = std::max(worst, std::fabs(numeric - r.gradient[i]) / scale);
  }
  return worst;
}

}  // namespace nerport::oracle

#endif  // NERPORT_TESTS_ORACLES_H_
