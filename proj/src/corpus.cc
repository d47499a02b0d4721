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

#include "nerport/corpus.h"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "nerport/utf8.h"

namespace nerport {

LabelSet::LabelSet(std::vector<std::string> categories)
    : categories_(std::move(categories)) {
  if (categories_.empty()) {
    throw std::invalid_argument("label set must not be empty");
  }
  std::set<std::string> seen;
  for (const auto& c : categories_) {
    if (c.empty()) throw std::invalid_argument("empty category name");
    if (!seen.insert(c).second) {
      throw std::invalid_argument("duplicate category name: " + c);
    }
  }
}

LabelSet LabelSet::Default() {
  return LabelSet({"Hormone_receptor_type", "Hormone_receptor_status",
                   "Tumor_size", "Tumor_site", "Cancer_grade",
                   "Histological_type", "Cancer_laterality", "Cancer_stage"});
}

bool LabelSet::Contains(std::string_view category) const {
  return IndexOf(category).has_value();
}

std::optional<std::size_t> LabelSet::IndexOf(std::string_view category) const {
  for (std::size_t i = 0; i < categories_.size(); ++i) {
    if (categories_[i] == category) return i;
  }
  return std::nullopt;
}

bool MentionLess(const EntityMention& a, const EntityMention& b) {
  if (a.start != b.start) return a.start < b.start;
  if (a.end != b.end) return a.end < b.end;
  return a.category < b.category;
}

std::string_view DocTypeName(DocType type) {
  switch (type) {
    case DocType::kClinicalNote:
      return "clinical_note";
    case DocType::kPathologyReport:
      return "pathology_report";
  }
  return "clinical_note";
}

std::optional<DocType> ParseDocType(std::string_view name) {
  if (name == "clinical_note") return DocType::kClinicalNote;
  if (name == "pathology_report") return DocType::kPathologyReport;
  return std::nullopt;
}

std::string Document::Slice(std::size_t start, std::size_t end) const {
  return EncodeUtf8(std::u32string_view(text).substr(start, end - start));
}

const Document* Corpus::FindDocument(std::string_view id) const {
  for (const auto& d : documents) {
    if (d.id == id) return &d;
  }
  return nullptr;
}

std::size_t Corpus::NumMentions() const {
  std::size_t n = 0;
  for (const auto& d : documents) n += d.mentions.size();
  return n;
}

CorpusError::CorpusError(Kind kind, const std::string& message,
                         std::size_t line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " +
                                        message
                                  : message),
      kind_(kind),
      line_(line) {}

bool IsSpace(char32_t c) {
  switch (c) {
    case U'\t':
    case U'\n':
    case U'\v':
    case U'\f':
    case U'\r':
    case U' ':
    case 0x85:
    case 0xA0:
    case 0x1680:
    case 0x2028:
    case 0x2029:
    case 0x202F:
    case 0x205F:
    case 0x3000:
      return true;
    default:
      return c >= 0x2000 && c <= 0x200A;
  }
}

bool IsLineBreak(char32_t c) {
  return c == U'\n' || c == U'\r' || c == U'\v' || c == U'\f' || c == 0x85 ||
         c == 0x2028 || c == 0x2029;
}

bool IsPeelablePunct(char32_t c) {
  switch (c) {
    case U'.':
    case U',':
    case U';':
    case U':':
    case U'!':
    case U'?':
    case U'(':
    case U')':
    case U'[':
    case U']':
    case U'{':
    case U'}':
    case U'"':
    case U'\'':
    case U'`':
    case 0x2018:  // single quotes
    case 0x2019:
    case 0x201C:  // double quotes
    case 0x201D:
      return true;
    default:
      return false;
  }
}

std::string FoldCase(std::string_view utf8) {
  std::string out(utf8);
  for (char& ch : out) {
    if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
  }
  return out;
}

std::string NormalizeSurface(std::string_view span_text) {
  const std::u32string text = DecodeUtf8(span_text);
  std::string out;
  bool pending_space = false;
  for (char32_t c : text) {
    if (IsSpace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    AppendUtf8(c, &out);
  }
  return FoldCase(out);
}

namespace {

void EmitToken(std::u32string_view text, std::size_t start, std::size_t end,
               std::vector<Token>* out) {
  out->push_back(
      Token{EncodeUtf8(text.substr(start, end - start)), start, end});
}

bool IsCapitalized(const Token& token) {
  if (token.text.empty()) return false;
  const auto c = static_cast<unsigned char>(token.text[0]);
  if (c >= 'A' && c <= 'Z') return true;
  if (c < 0x80) return false;
  // Latin-1 supplement capitals (U+00C0..U+00DE except U+00D7).
  const std::u32string first = DecodeUtf8(token.text);
  const char32_t cp = first[0];
  return cp >= 0xC0 && cp <= 0xDE && cp != 0xD7;
}

}  // namespace

std::vector<Token> Tokenize(std::u32string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    while (i < n && IsSpace(text[i])) ++i;
    if (i == n) break;
    std::size_t chunk_end = i;
    while (chunk_end < n && !IsSpace(text[chunk_end])) ++chunk_end;

    std::size_t a = i;
    std::size_t b = chunk_end;
    while (a < b && IsPeelablePunct(text[a])) {
      EmitToken(text, a, a + 1, &tokens);
      ++a;
    }
    std::size_t core_end = b;
    while (core_end > a && IsPeelablePunct(text[core_end - 1])) --core_end;
    if (core_end > a) EmitToken(text, a, core_end, &tokens);
    for (std::size_t k = core_end; k < b; ++k) {
      EmitToken(text, k, k + 1, &tokens);
    }
    i = chunk_end;
  }
  return tokens;
}

std::vector<SentenceRange> SegmentSentences(const std::vector<Token>& tokens,
                                            std::u32string_view text) {
  std::vector<SentenceRange> sentences;
  if (tokens.empty()) return sentences;
  std::size_t begin = 0;
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    bool boundary = false;
    for (std::size_t k = tokens[i].end; k < tokens[i + 1].start; ++k) {
      if (IsLineBreak(text[k])) {
        boundary = true;
        break;
      }
    }
    if (!boundary) {
      const std::string& t = tokens[i].text;
      boundary = (t == "." || t == "!" || t == "?") &&
                 IsCapitalized(tokens[i + 1]);
    }
    if (boundary) {
      sentences.push_back({begin, i + 1});
      begin = i + 1;
    }
  }
  sentences.push_back({begin, tokens.size()});
  return sentences;
}

Document MakeDocument(std::string id, DocType doc_type, std::u32string text,
                      const std::vector<RawSpan>& spans,
                      const LabelSet& label_set, bool allow_overlap) {
  if (id.empty()) {
    throw CorpusError(CorpusError::Kind::kMalformed, "empty document id");
  }
  Document doc;
  doc.id = std::move(id);
  doc.doc_type = doc_type;
  doc.text = std::move(text);
  doc.tokens = Tokenize(doc.text);
  doc.sentences = SegmentSentences(doc.tokens, doc.text);
  doc.mentions.reserve(spans.size());
  for (const auto& span : spans) {
    if (span.start >= span.end || span.end > doc.text.size()) {
      throw CorpusError(CorpusError::Kind::kOffset,
                        "document " + doc.id + ": mention offsets (" +
                            std::to_string(span.start) + ", " +
                            std::to_string(span.end) +
                            ") out of range for text of length " +
                            std::to_string(doc.text.size()));
    }
    if (!label_set.Contains(span.label)) {
      throw CorpusError(CorpusError::Kind::kUnknownLabel,
                        "document " + doc.id + ": unknown label '" +
                            span.label + "'");
    }
    EntityMention m;
    m.doc_id = doc.id;
    m.start = span.start;
    m.end = span.end;
    m.category = span.label;
    m.surface = NormalizeSurface(doc.Slice(span.start, span.end));
    doc.mentions.push_back(std::move(m));
  }
  std::sort(doc.mentions.begin(), doc.mentions.end(), MentionLess);
  if (!allow_overlap) {
    for (std::size_t i = 1; i < doc.mentions.size(); ++i) {
      const auto& prev = doc.mentions[i - 1];
      const auto& cur = doc.mentions[i];
      if (cur.start < prev.end) {
        throw CorpusError(
            CorpusError::Kind::kOverlap,
            "document " + doc.id + ": overlapping gold mentions (" +
                std::to_string(prev.start) + ", " + std::to_string(prev.end) +
                ") and (" + std::to_string(cur.start) + ", " +
                std::to_string(cur.end) + ")");
      }
    }
  }
  return doc;
}

CorpusStats ComputeStats(const Corpus& corpus) {
  CorpusStats stats;
  stats.num_documents = corpus.documents.size();
  std::unordered_set<std::string> vocab;
  const auto& cats = corpus.label_set.categories();
  std::vector<std::set<std::string>> surfaces(cats.size());
  stats.categories.resize(cats.size());
  for (std::size_t c = 0; c < cats.size(); ++c) {
    stats.categories[c].category = cats[c];
  }
  for (const auto& doc : corpus.documents) {
    stats.num_sentences += doc.sentences.size();
    stats.num_tokens += doc.tokens.size();
    for (const auto& t : doc.tokens) vocab.insert(FoldCase(t.text));
    for (const auto& m : doc.mentions) {
      const auto idx = corpus.label_set.IndexOf(m.category);
      if (!idx) continue;
      ++stats.categories[*idx].mentions;
      surfaces[*idx].insert(m.surface);
    }
  }
  stats.num_unique_tokens = vocab.size();
  for (std::size_t c = 0; c < cats.size(); ++c) {
    stats.categories[c].unique_surfaces = surfaces[c].size();
  }
  stats.avg_tokens_per_sentence =
      stats.num_sentences == 0
          ? 0.0
          : static_cast<double>(stats.num_tokens) /
                static_cast<double>(stats.num_sentences);
  return stats;
}

std::vector<std::string> MentionsToBio(const Document& document) {
  std::vector<std::string> tags(document.tokens.size(), "O");
  for (const auto& m : document.mentions) {
    const std::string label = "(" + std::to_string(m.start) + ", " +
                              std::to_string(m.end) + ", " + m.category + ")";
    bool first = true;
    for (std::size_t i = 0; i < document.tokens.size(); ++i) {
      const Token& t = document.tokens[i];
      if (t.end <= m.start || t.start >= m.end) continue;
      if (t.start < m.start || t.end > m.end) {
        throw CorpusError(CorpusError::Kind::kTokenSplit,
                          "document " + document.id + ": mention " + label +
                              " splits token '" + t.text + "'");
      }
      tags[i] = (first ? "B-" : "I-") + m.category;
      first = false;
    }
    if (first) {
      throw CorpusError(CorpusError::Kind::kTokenSplit,
                        "document " + document.id + ": mention " + label +
                            " covers no token");
    }
  }
  return tags;
}

namespace {

struct ParsedTag {
  char prefix;  // 'O', 'B' or 'I'
  std::string category;
};

ParsedTag ParseTag(const std::string& tag) {
  if (tag == "O") return {'O', {}};
  if (tag.size() > 2 && (tag[0] == 'B' || tag[0] == 'I') && tag[1] == '-') {
    return {tag[0], tag.substr(2)};
  }
  throw std::invalid_argument("invalid BIO tag: '" + tag + "'");
}

}  // namespace

std::vector<EntityMention> BioToMentions(const std::vector<std::string>& tags,
                                         const std::vector<Token>& tokens,
                                         const Document& document) {
  if (tags.size() != tokens.size()) {
    throw std::invalid_argument("tag count " + std::to_string(tags.size()) +
                                " != token count " +
                                std::to_string(tokens.size()));
  }
  std::vector<EntityMention> mentions;
  std::optional<EntityMention> open;
  auto close = [&] {
    if (!open) return;
    open->surface = NormalizeSurface(document.Slice(open->start, open->end));
    mentions.push_back(std::move(*open));
    open.reset();
  };
  for (std::size_t i = 0; i < tags.size(); ++i) {
    const ParsedTag tag = ParseTag(tags[i]);
    if (tag.prefix == 'O') {
      close();
      continue;
    }
    if (tag.prefix == 'I' && open && open->category == tag.category) {
      open->end = tokens[i].end;
      continue;
    }
    close();
    open = EntityMention{document.id, tokens[i].start, tokens[i].end,
                         tag.category, {}};
  }
  close();
  return mentions;
}

}  // namespace nerport
