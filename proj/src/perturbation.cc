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

#include "nerport/perturbation.h"

#include <set>
#include <stdexcept>

#include "nerport/csv.h"
#include "nerport/random.h"
#include "nerport/utf8.h"

namespace nerport {
namespace {

std::u32string Trim(std::u32string_view text) {
  std::size_t b = 0;
  std::size_t e = text.size();
  while (b < e && IsSpace(text[b])) ++b;
  while (e > b && IsSpace(text[e - 1])) --e;
  return std::u32string(text.substr(b, e - b));
}

}  // namespace

std::size_t DonorPool::size() const {
  std::size_t n = 0;
  for (const auto& [category, entries] : by_category) n += entries.size();
  return n;
}

DonorPool BuildDonorPool(const Corpus& donor, const Corpus& exclusion) {
  if (!(donor.label_set == exclusion.label_set)) {
    throw std::invalid_argument("corpora use different label sets");
  }
  std::set<std::string> excluded;
  for (const auto& doc : exclusion.documents) {
    for (const auto& m : doc.mentions) excluded.insert(m.surface);
  }
  std::map<std::string, std::map<std::string, std::string>> found;
  for (const auto& doc : donor.documents) {
    for (const auto& m : doc.mentions) {
      if (m.surface.empty() || excluded.count(m.surface) > 0) continue;
      auto& entries = found[m.category];
      if (entries.count(m.surface) == 0) {
        entries.emplace(m.surface, EncodeUtf8(Trim(std::u32string_view(
                                       doc.text).substr(m.start,
                                                        m.end - m.start))));
      }
    }
  }
  DonorPool pool;
  for (const auto& category : donor.label_set.categories()) {
    auto& entries = pool.by_category[category];
    for (const auto& [surface, text] : found[category]) {
      entries.push_back({surface, text});
    }
  }
  return pool;
}

PermutationResult PermuteTestSet(const Corpus& test, const DonorPool& pool,
                                 std::uint64_t seed) {
  Rng rng(seed);
  PermutationResult result;
  result.corpus.name = test.name + "+permuted";
  result.corpus.label_set = test.label_set;
  for (const auto& doc : test.documents) {
    std::u32string text;
    std::vector<RawSpan> spans;
    std::size_t cursor = 0;
    for (const auto& m : doc.mentions) {
      if (m.start < cursor) {
        throw std::invalid_argument("document " + doc.id +
                                    " has overlapping gold mentions");
      }
      Replacement entry;
      entry.doc_id = doc.id;
      entry.category = m.category;
      entry.original_text = doc.Slice(m.start, m.end);
      entry.original_surface = m.surface;

      text.append(doc.text, cursor, m.start - cursor);
      const auto it = pool.by_category.find(m.category);
      const std::size_t new_start = text.size();
      if (it == pool.by_category.end() || it->second.empty()) {
        text.append(doc.text, m.start, m.end - m.start);
        entry.skipped = true;
      } else {
        const DonorEntry& pick = it->second[rng.Below(it->second.size())];
        text += DecodeUtf8(pick.text);
        entry.replacement_surface = pick.surface;
      }
      entry.new_start = new_start;
      entry.new_end = text.size();
      spans.push_back({entry.new_start, entry.new_end, m.category});
      cursor = m.end;
      result.log.push_back(std::move(entry));
    }
    text.append(doc.text, cursor, std::u32string::npos);
    result.corpus.documents.push_back(
        MakeDocument(doc.id, doc.doc_type, std::move(text), spans,
                     test.label_set));
  }
  return result;
}

void WriteReplacementLogCsv(std::ostream& out,
                            const std::vector<Replacement>& log) {
  CsvWriter csv(out);
  csv.Row({"doc_id", "category", "original_text", "original_surface",
           "replacement_surface", "new_start", "new_end", "status"});
  for (const auto& r : log) {
    csv.Row({r.doc_id, r.category, r.original_text, r.original_surface,
             r.replacement_surface, std::to_string(r.new_start),
             std::to_string(r.new_end), r.skipped ? "skipped" : "replaced"});
  }
}

}  // namespace nerport
