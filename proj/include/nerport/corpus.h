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

// Core data model for annotated corpora: label sets, tokens, entity mentions,
// documents, and the deterministic tokenizer and sentence splitter used by
// every downstream component. Character offsets count Unicode scalar values.

#ifndef NERPORT_CORPUS_H_
#define NERPORT_CORPUS_H_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nerport {

// Ordered set of entity categories. The order is fixed at construction and is
// the order used by every report.
class LabelSet {
 public:
  explicit LabelSet(std::vector<std::string> categories);

  // The eight breast cancer phenotype categories.
  static LabelSet Default();

  const std::vector<std::string>& categories() const { return categories_; }
  std::size_t size() const { return categories_.size(); }
  bool Contains(std::string_view category) const;
  std::optional<std::size_t> IndexOf(std::string_view category) const;

  bool operator==(const LabelSet& other) const = default;

 private:
  std::vector<std::string> categories_;
};

struct Token {
  std::string text;  // UTF-8
  std::size_t start = 0;
  std::size_t end = 0;  // exclusive

  bool operator==(const Token&) const = default;
};

// Half-open range of token indices.
struct SentenceRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool operator==(const SentenceRange&) const = default;
};

struct EntityMention {
  std::string doc_id;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string category;
  std::string surface;  // NormalizeSurface(text[start, end))

  bool operator==(const EntityMention&) const = default;
};

// Canonical mention order: start, then end, then category name.
bool MentionLess(const EntityMention& a, const EntityMention& b);

enum class DocType { kClinicalNote, kPathologyReport };

std::string_view DocTypeName(DocType type);
std::optional<DocType> ParseDocType(std::string_view name);

struct Document {
  std::string id;
  DocType doc_type = DocType::kClinicalNote;
  std::u32string text;
  std::vector<Token> tokens;
  std::vector<SentenceRange> sentences;
  std::vector<EntityMention> mentions;

  // UTF-8 text of [start, end).
  std::string Slice(std::size_t start, std::size_t end) const;
};

struct Corpus {
  std::string name;
  LabelSet label_set = LabelSet::Default();
  std::vector<Document> documents;

  const Document* FindDocument(std::string_view id) const;
  std::size_t NumMentions() const;
};

struct CategoryStats {
  std::string category;
  std::size_t mentions = 0;
  std::size_t unique_surfaces = 0;
};

struct CorpusStats {
  std::size_t num_documents = 0;
  std::size_t num_sentences = 0;
  std::size_t num_tokens = 0;
  std::size_t num_unique_tokens = 0;
  double avg_tokens_per_sentence = 0.0;
  std::vector<CategoryStats> categories;  // label-set order
};

// Raised for every corpus validation failure. `line` is the 1-based input line
// when the error came from a file, 0 otherwise.
class CorpusError : public std::runtime_error {
 public:
  enum class Kind {
    kMalformed,
    kOffset,
    kUnknownLabel,
    kOverlap,
    kDuplicateId,
    kUnknownDocument,
    kTokenSplit,
  };

  CorpusError(Kind kind, const std::string& message, std::size_t line = 0);

  Kind kind() const { return kind_; }
  std::size_t line() const { return line_; }

 private:
  Kind kind_;
  std::size_t line_;
};

// Text helpers.
bool IsSpace(char32_t c);
bool IsLineBreak(char32_t c);
// Characters split off the edges of whitespace-delimited chunks.
bool IsPeelablePunct(char32_t c);
// ASCII case folding; other code points pass through unchanged.
std::string FoldCase(std::string_view utf8);
std::string NormalizeSurface(std::string_view span_text);

// Splits on whitespace, then peels leading and trailing punctuation off each
// chunk into one-character tokens.
std::vector<Token> Tokenize(std::u32string_view text);

// Breaks after tokens separated from their successor by a line break, and
// after ".", "!" or "?" tokens followed by a capitalized token.
std::vector<SentenceRange> SegmentSentences(const std::vector<Token>& tokens,
                                            std::u32string_view text);

// Span annotation before validation; offsets in code points.
struct RawSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string label;
};

// Builds a fully derived document: tokens, sentences, normalized and sorted
// mentions. Validates offsets and labels; rejects overlapping spans unless
// `allow_overlap` is set. Throws CorpusError.
Document MakeDocument(std::string id, DocType doc_type, std::u32string text,
                      const std::vector<RawSpan>& spans,
                      const LabelSet& label_set, bool allow_overlap = false);

CorpusStats ComputeStats(const Corpus& corpus);

// BIO tags for the document's tokens. Throws CorpusError(kTokenSplit) when a
// mention boundary falls inside a token or a mention covers no token.
std::vector<std::string> MentionsToBio(const Document& document);

// Maximal B-/I- runs become mentions. An I- tag without a compatible
// predecessor opens a new mention. Throws std::invalid_argument if the tag
// and token counts differ or a tag is not O, B-x or I-x.
std::vector<EntityMention> BioToMentions(const std::vector<std::string>& tags,
                                         const std::vector<Token>& tokens,
                                         const Document& document);

}  // namespace nerport

#endif  // NERPORT_CORPUS_H_
