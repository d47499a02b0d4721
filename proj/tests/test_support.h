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

#ifndef NERPORT_TESTS_TEST_SUPPORT_H_
#define NERPORT_TESTS_TEST_SUPPORT_H_

#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "nerport/corpus.h"
#include "nerport/utf8.h"

namespace nerport::testing {

inline std::string DataPath(const std::string& relative) {
  return std::string(NERPORT_DATA_DIR) + "/" + relative;
}

// (surface, label, occurrence index)
using SpanSpec = std::tuple<std::string, std::string, int>;

inline Document Doc(const std::string& id, const std::string& text,
                    const std::vector<SpanSpec>& spans,
                    bool allow_overlap = false,
                    const LabelSet& labels = LabelSet::Default()) {
  const std::u32string u = DecodeUtf8(text);
  std::vector<RawSpan> raw;
  for (const auto& [surface, label, occurrence] : spans) {
    const std::u32string s = DecodeUtf8(surface);
    std::size_t pos = std::u32string::npos;
    for (int i = 0; i <= occurrence; ++i) {
      pos = u.find(s, pos == std::u32string::npos ? 0 : pos + 1);
      if (pos == std::u32string::npos) {
        throw std::logic_error("surface not in text: " + surface);
      }
    }
    raw.push_back({pos, pos + s.size(), label});
  }
  return MakeDocument(id, DocType::kClinicalNote, u, raw, labels,
                      allow_overlap);
}

inline Corpus CorpusOf(const std::string& name, std::vector<Document> docs,
                       const LabelSet& labels = LabelSet::Default()) {
  return Corpus{name, labels, std::move(docs)};
}

}  // namespace nerport::testing

#endif  // NERPORT_TESTS_TEST_SUPPORT_H_
