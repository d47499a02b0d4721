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

#include "nerport/corpus_io.h"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "nerport/utf8.h"

namespace nerport {
namespace {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

CorpusError Malformed(const std::string& message, std::size_t line) {
  return CorpusError(CorpusError::Kind::kMalformed, message, line);
}

std::string RequireString(const Json& record, const char* key,
                          std::size_t line) {
  auto it = record.find(key);
  if (it == record.end() || !it->is_string()) {
    throw Malformed(std::string("missing or non-string field '") + key + "'",
                    line);
  }
  return it->get<std::string>();
}

std::size_t RequireOffset(const Json& entity, const char* key,
                          std::size_t line) {
  auto it = entity.find(key);
  if (it == entity.end() || !it->is_number_integer()) {
    throw Malformed(std::string("entity field '") + key +
                        "' must be an integer",
                    line);
  }
  const auto value = it->get<std::int64_t>();
  if (value < 0) {
    throw CorpusError(CorpusError::Kind::kOffset,
                      std::string("negative entity ") + key, line);
  }
  return static_cast<std::size_t>(value);
}

Document ParseRecord(const std::string& text_line, std::size_t line,
                     const LabelSet& label_set, const LoadOptions& options) {
  Json record;
  try {
    record = Json::parse(text_line);
  } catch (const Json::parse_error& e) {
    throw Malformed(std::string("invalid JSON: ") + e.what(), line);
  }
  if (!record.is_object()) throw Malformed("record is not an object", line);

  std::string id = RequireString(record, "id", line);
  const std::string type_name = RequireString(record, "doc_type", line);
  const auto doc_type = ParseDocType(type_name);
  if (!doc_type) {
    throw Malformed("unknown doc_type '" + type_name + "'", line);
  }
  std::u32string text;
  try {
    text = DecodeUtf8(RequireString(record, "text", line));
  } catch (const std::invalid_argument& e) {
    throw Malformed(e.what(), line);
  }

  std::vector<RawSpan> spans;
  if (auto it = record.find("entities"); it != record.end()) {
    if (!it->is_array()) throw Malformed("'entities' must be a list", line);
    for (const auto& entity : *it) {
      if (!entity.is_object()) {
        throw Malformed("entity is not an object", line);
      }
      RawSpan span;
      span.start = RequireOffset(entity, "start", line);
      span.end = RequireOffset(entity, "end", line);
      span.label = RequireString(entity, "label", line);
      spans.push_back(std::move(span));
    }
  } else {
    throw Malformed("missing field 'entities'", line);
  }
  try {
    return MakeDocument(std::move(id), *doc_type, std::move(text), spans,
                        label_set, options.allow_overlap);
  } catch (const CorpusError& e) {
    throw CorpusError(e.kind(), e.what(), line);
  }
}

}  // namespace

Corpus ParseCorpus(std::istream& in, std::string name,
                   const LabelSet& label_set, const LoadOptions& options) {
  Corpus corpus{std::move(name), label_set, {}};
  std::set<std::string> ids;
  std::string text_line;
  std::size_t line = 0;
  while (std::getline(in, text_line)) {
    ++line;
    if (text_line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Document doc = ParseRecord(text_line, line, label_set, options);
    if (!ids.insert(doc.id).second) {
      throw CorpusError(CorpusError::Kind::kDuplicateId,
                        "duplicate document id '" + doc.id + "'", line);
    }
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

Corpus LoadCorpus(const std::string& path, const LabelSet& label_set,
                  const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path);
  return ParseCorpus(in, path, label_set, options);
}

void WriteCorpus(std::ostream& out, const Corpus& corpus) {
  for (const auto& doc : corpus.documents) {
    OrderedJson record;
    record["id"] = doc.id;
    record["doc_type"] = std::string(DocTypeName(doc.doc_type));
    record["text"] = EncodeUtf8(doc.text);
    OrderedJson entities = OrderedJson::array();
    for (const auto& m : doc.mentions) {
      OrderedJson e;
      e["start"] = m.start;
      e["end"] = m.end;
      e["label"] = m.category;
      entities.push_back(std::move(e));
    }
    record["entities"] = std::move(entities);
    out << record.dump() << '\n';
  }
}

void SaveCorpus(const std::string& path, const Corpus& corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write corpus file: " + path);
  WriteCorpus(out, corpus);
}

void WriteConll(std::ostream& out, const Corpus& corpus) {
  for (const auto& doc : corpus.documents) {
    out << "#doc " << doc.id << ' ' << DocTypeName(doc.doc_type) << '\n';
    const auto tags = MentionsToBio(doc);
    for (const auto& sentence : doc.sentences) {
      for (std::size_t i = sentence.begin; i < sentence.end; ++i) {
        out << doc.tokens[i].text << '\t' << tags[i] << '\n';
      }
      out << '\n';
    }
  }
}

Corpus ReadConll(std::istream& in, std::string name,
                 const LabelSet& label_set) {
  Corpus corpus{std::move(name), label_set, {}};
  std::set<std::string> ids;

  struct Pending {
    std::string id;
    DocType type = DocType::kClinicalNote;
    std::vector<std::vector<std::pair<std::string, std::string>>> sentences;
    std::size_t line = 0;
  };
  std::optional<Pending> pending;

  auto flush = [&] {
    if (!pending) return;
    std::u32string text;
    std::vector<Token> tokens;
    std::vector<std::string> tags;
    for (const auto& sentence : pending->sentences) {
      if (sentence.empty()) continue;
      if (!text.empty()) text.push_back(U'\n');
      for (std::size_t i = 0; i < sentence.size(); ++i) {
        if (i > 0) text.push_back(U' ');
        const std::u32string tok = DecodeUtf8(sentence[i].first);
        tokens.push_back({sentence[i].first, text.size(),
                          text.size() + tok.size()});
        text += tok;
        tags.push_back(sentence[i].second);
      }
    }
    Document shell;
    shell.id = pending->id;
    shell.text = text;
    std::vector<RawSpan> spans;
    for (const auto& m : BioToMentions(tags, tokens, shell)) {
      spans.push_back({m.start, m.end, m.category});
    }
    try {
      corpus.documents.push_back(MakeDocument(pending->id, pending->type,
                                              std::move(text), spans,
                                              label_set));
    } catch (const CorpusError& e) {
      throw CorpusError(e.kind(), e.what(), pending->line);
    }
    pending.reset();
  };

  std::string text_line;
  std::size_t line = 0;
  while (std::getline(in, text_line)) {
    ++line;
    if (!text_line.empty() && text_line.back() == '\r') text_line.pop_back();
    if (text_line.rfind("#doc ", 0) == 0) {
      flush();
      std::istringstream header(text_line.substr(5));
      Pending next;
      next.line = line;
      std::string type_name;
      header >> next.id >> type_name;
      if (next.id.empty()) throw Malformed("missing document id", line);
      if (!type_name.empty()) {
        const auto type = ParseDocType(type_name);
        if (!type) throw Malformed("unknown doc_type '" + type_name + "'", line);
        next.type = *type;
      }
      if (!ids.insert(next.id).second) {
        throw CorpusError(CorpusError::Kind::kDuplicateId,
                          "duplicate document id '" + next.id + "'", line);
      }
      next.sentences.emplace_back();
      pending = std::move(next);
      continue;
    }
    if (text_line.empty()) {
      if (pending && !pending->sentences.back().empty()) {
        pending->sentences.emplace_back();
      }
      continue;
    }
    if (!pending) throw Malformed("token line before any #doc header", line);
    const auto tab = text_line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == text_line.size()) {
      throw Malformed("expected 'token<TAB>tag'", line);
    }
    std::string tag = text_line.substr(tab + 1);
    if (tag != "O") {
      if (tag.size() < 3 || (tag[0] != 'B' && tag[0] != 'I') || tag[1] != '-') {
        throw Malformed("invalid BIO tag '" + tag + "'", line);
      }
      if (!label_set.Contains(tag.substr(2))) {
        throw CorpusError(CorpusError::Kind::kUnknownLabel,
                          "unknown label '" + tag.substr(2) + "'", line);
      }
    }
    pending->sentences.back().emplace_back(text_line.substr(0, tab),
                                           std::move(tag));
  }
  flush();
  return corpus;
}

LabelSet LoadLabelSet(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open label file: " + path);
  std::vector<std::string> categories;
  std::string line;
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    categories.push_back(line.substr(b, e - b + 1));
  }
  return LabelSet(std::move(categories));
}

}  // namespace nerport
