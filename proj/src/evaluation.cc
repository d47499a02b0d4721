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

#include "nerport/evaluation.h"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "nerport/csv.h"

namespace nerport {

std::string_view MatchModeName(MatchMode mode) {
  return mode == MatchMode::kStrict ? "strict" : "lenient";
}

MatchMode ParseMatchMode(std::string_view name) {
  if (name == "strict") return MatchMode::kStrict;
  if (name == "lenient") return MatchMode::kLenient;
  throw std::invalid_argument("unknown match mode: " + std::string(name));
}

bool Compatible(const EntityMention& gold, const EntityMention& pred,
                MatchMode mode) {
  if (gold.category != pred.category) return false;
  if (mode == MatchMode::kStrict) {
    return gold.start == pred.start && gold.end == pred.end;
  }
  return gold.start < pred.end && pred.start < gold.end;
}

namespace {

std::vector<std::size_t> CanonicalOrder(std::span<const EntityMention> items) {
  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return MentionLess(items[a], items[b]);
  });
  return order;
}

}  // namespace

MatchResult MatchMentions(std::span<const EntityMention> gold,
                          std::span<const EntityMention> pred, MatchMode mode) {
  const auto gold_order = CanonicalOrder(gold);
  const auto pred_order = CanonicalOrder(pred);
  std::vector<bool> gold_used(gold.size(), false);
  MatchResult result;
  for (std::size_t p : pred_order) {
    bool matched = false;
    for (std::size_t g : gold_order) {
      if (gold_used[g] || !Compatible(gold[g], pred[p], mode)) continue;
      gold_used[g] = true;
      result.pairs.emplace_back(g, p);
      matched = true;
      break;
    }
    if (!matched) result.unmatched_pred.push_back(p);
  }
  for (std::size_t g : gold_order) {
    if (!gold_used[g]) result.unmatched_gold.push_back(g);
  }
  return result;
}

Prf ComputePrf(std::size_t tp, std::size_t fp, std::size_t fn) {
  Prf out;
  const auto ratio = [](std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  out.precision = ratio(tp, tp + fp);
  out.recall = ratio(tp, tp + fn);
  const double denom = out.precision + out.recall;
  out.f1 = denom == 0.0 ? 0.0 : 2.0 * out.precision * out.recall / denom;
  return out;
}

const CategoryScore* EvalReport::Find(std::string_view category) const {
  for (const auto& c : categories) {
    if (c.category == category) return &c;
  }
  return nullptr;
}

EvalReport Evaluate(const Corpus& gold, const Corpus& pred, MatchMode mode) {
  if (!(gold.label_set == pred.label_set)) {
    throw std::invalid_argument("gold and prediction label sets differ");
  }
  for (const auto& doc : pred.documents) {
    if (gold.FindDocument(doc.id) == nullptr) {
      throw std::invalid_argument("prediction document '" + doc.id +
                                  "' is not in the gold corpus");
    }
  }
  EvalReport report;
  report.mode = mode;
  report.gold_name = gold.name;
  report.pred_name = pred.name;
  const auto& cats = gold.label_set.categories();
  report.categories.resize(cats.size());
  for (std::size_t c = 0; c < cats.size(); ++c) {
    report.categories[c].category = cats[c];
  }
  auto bucket = [&](const EntityMention& m) -> CategoryScore& {
    const auto idx = gold.label_set.IndexOf(m.category);
    if (!idx) throw std::invalid_argument("unknown category: " + m.category);
    return report.categories[*idx];
  };

  static const std::vector<EntityMention> kNone;
  for (const auto& gdoc : gold.documents) {
    const Document* pdoc = pred.FindDocument(gdoc.id);
    const auto& preds = pdoc ? pdoc->mentions : kNone;
    const MatchResult match = MatchMentions(gdoc.mentions, preds, mode);
    for (const auto& [g, p] : match.pairs) ++bucket(gdoc.mentions[g]).tp;
    for (std::size_t g : match.unmatched_gold) ++bucket(gdoc.mentions[g]).fn;
    for (std::size_t p : match.unmatched_pred) ++bucket(preds[p]).fp;
  }

  Prf macro_sum;
  std::size_t active = 0;
  for (auto& c : report.categories) {
    c.prf = ComputePrf(c.tp, c.fp, c.fn);
    report.tp += c.tp;
    report.fp += c.fp;
    report.fn += c.fn;
    if (c.tp + c.fp + c.fn > 0) {
      macro_sum.precision += c.prf.precision;
      macro_sum.recall += c.prf.recall;
      macro_sum.f1 += c.prf.f1;
      ++active;
    }
  }
  report.micro = ComputePrf(report.tp, report.fp, report.fn);
  if (active > 0) {
    const double n = static_cast<double>(active);
    report.macro = {macro_sum.precision / n, macro_sum.recall / n,
                    macro_sum.f1 / n};
  }
  return report;
}

void WriteEvalCsv(std::ostream& out, const std::vector<EvalReport>& reports) {
  CsvWriter csv(out);
  csv.Row({"mode", "category", "tp", "fp", "fn", "precision", "recall", "f1"});
  for (const auto& r : reports) {
    const std::string mode(MatchModeName(r.mode));
    for (const auto& c : r.categories) {
      csv.Row({mode, c.category, std::to_string(c.tp), std::to_string(c.fp),
               std::to_string(c.fn), FormatDouble(c.prf.precision),
               FormatDouble(c.prf.recall), FormatDouble(c.prf.f1)});
    }
    csv.Row({mode, "micro", std::to_string(r.tp), std::to_string(r.fp),
             std::to_string(r.fn), FormatDouble(r.micro.precision),
             FormatDouble(r.micro.recall), FormatDouble(r.micro.f1)});
    csv.Row({mode, "macro", "", "", "", FormatDouble(r.macro.precision),
             FormatDouble(r.macro.recall), FormatDouble(r.macro.f1)});
  }
}

void WriteEvalTable(std::ostream& out, const EvalReport& strict,
                    const EvalReport& lenient) {
  std::size_t width = 15;
  for (const auto& c : strict.categories) {
    width = std::max(width, c.category.size());
  }
  char line[256];
  auto row = [&](const std::string& name, double s, double l) {
    std::snprintf(line, sizeof(line), "%-*s  %.3f (%.3f)\n",
                  static_cast<int>(width), name.c_str(), s, l);
    out << line;
  };
  std::snprintf(line, sizeof(line), "%-*s  %s\n", static_cast<int>(width),
                "Category", "F1 strict (lenient)");
  out << line;
  for (std::size_t i = 0; i < strict.categories.size(); ++i) {
    row(strict.categories[i].category, strict.categories[i].prf.f1,
        lenient.categories[i].prf.f1);
  }
  row("Micro-average", strict.micro.f1, lenient.micro.f1);
  row("Macro-average", strict.macro.f1, lenient.macro.f1);
}

}  // namespace nerport
