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

#ifndef NERPORT_CORPUS_IO_H_
#define NERPORT_CORPUS_IO_H_

#include <istream>
#include <ostream>
#include <string>

#include "nerport/corpus.h"

namespace nerport {

struct LoadOptions {
  // Prediction files may contain overlapping spans.
  bool allow_overlap = false;
};

// Corpus files hold one JSON object per line:
//   {"id": ..., "doc_type": "clinical_note" | "pathology_report",
//    "text": ..., "entities": [{"start": s, "end": e, "label": l}, ...]}
// Blank lines are ignored. Errors carry the 1-based line number.
Corpus ParseCorpus(std::istream& in, std::string name,
                   const LabelSet& label_set, const LoadOptions& options = {});
Corpus LoadCorpus(const std::string& path, const LabelSet& label_set,
                  const LoadOptions& options = {});

// Writes the format ParseCorpus reads. Output is byte-deterministic.
void WriteCorpus(std::ostream& out, const Corpus& corpus);
void SaveCorpus(const std::string& path, const Corpus& corpus);

// CoNLL-style export: "#doc <id> <doc_type>" headers, "token\tTAG" lines, a
// blank line after each sentence.
void WriteConll(std::ostream& out, const Corpus& corpus);

// Rebuilds documents from CoNLL lines. Tokens are joined by single spaces and
// sentences by newlines, so offsets refer to the rebuilt text.
Corpus ReadConll(std::istream& in, std::string name, const LabelSet& label_set);

// Reads a label set file: one category per line, blank lines ignored.
LabelSet LoadLabelSet(const std::string& path);

}  // namespace nerport

#endif  // NERPORT_CORPUS_IO_H_
