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

#include "nerport/features.h"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "nerport/utf8.h"

namespace nerport {

void FeatureConfig::Validate() const {
  if (window_radius < 0) {
    throw std::invalid_argument("window radius must be >= 0");
  }
  for (int len : affix_lengths) {
    if (len < 1) throw std::invalid_argument("affix lengths must be >= 1");
  }
  if (!embedding_path.empty() && embedding_dim <= 0) {
    throw std::invalid_argument(
        "embedding dimensionality must be positive when a table is set");
  }
}

FeatureConfig FeatureConfig::SurfaceOnly() {
  FeatureConfig config;
  config.window_radius = 0;
  config.affix_lengths.clear();
  config.use_shape = false;
  return config;
}

EmbeddingTable EmbeddingTable::Load(const std::string& path, int dim) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open embedding file: " + path);
  EmbeddingTable table;
  table.dim_ = dim;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string word;
    if (!(fields >> word)) continue;
    std::vector<double> vec;
    double v;
    while (fields >> v) vec.push_back(v);
    if (!fields.eof() || static_cast<int>(vec.size()) != dim) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected " + std::to_string(dim) +
                               " numeric values");
    }
    table.vectors_.emplace(FoldCase(word), std::move(vec));
  }
  return table;
}

const std::vector<double>* EmbeddingTable::Find(const std::string& word) const {
  auto it = vectors_.find(word);
  return it == vectors_.end() ? nullptr : &it->second;
}

std::string WordShape(std::string_view token) {
  std::string shape(token);
  for (char& c : shape) {
    if (c >= 'a' && c <= 'z') {
      c = 'x';
    } else if (c >= 'A' && c <= 'Z') {
      c = 'X';
    } else if (c >= '0' && c <= '9') {
      c = '9';
    }
  }
  return shape;
}

FeatureExtractor::FeatureExtractor(FeatureConfig config)
    : config_(std::move(config)) {
  config_.Validate();
  if (!config_.embedding_path.empty()) {
    embeddings_ = std::make_shared<const EmbeddingTable>(
        EmbeddingTable::Load(config_.embedding_path, config_.embedding_dim));
  }
}

namespace {

bool AllOf(std::string_view s, bool (*pred)(char)) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!pred(c)) return false;
  }
  return true;
}

bool IsDigit(char c) { return c >= '0' && c <= '9'; }
bool IsUpper(char c) { return c >= 'A' && c <= 'Z'; }

std::string Affix(const std::u32string& cps, int len, bool prefix) {
  const auto n = static_cast<std::size_t>(len);
  if (cps.size() < n) return {};
  return EncodeUtf8(prefix ? std::u32string_view(cps).substr(0, n)
                           : std::u32string_view(cps).substr(cps.size() - n));
}

}  // namespace

std::vector<Feature> FeatureExtractor::Extract(std::span<const Token> tokens,
                                               std::size_t position) const {
  if (position >= tokens.size()) {
    throw std::out_of_range("feature position " + std::to_string(position) +
                            " outside sequence of length " +
                            std::to_string(tokens.size()));
  }
  std::vector<Feature> out;
  const std::string& raw = tokens[position].text;
  const std::string lower = FoldCase(raw);
  out.push_back({"bias", 1.0});
  out.push_back({"w=" + lower, 1.0});

  if (!config_.affix_lengths.empty()) {
    const std::u32string cps = DecodeUtf8(lower);
    for (int len : config_.affix_lengths) {
      const std::string p = Affix(cps, len, true);
      if (p.empty()) continue;
      out.push_back({"p" + std::to_string(len) + "=" + p, 1.0});
      out.push_back({"s" + std::to_string(len) + "=" + Affix(cps, len, false),
                     1.0});
    }
  }

  if (config_.use_shape) {
    out.push_back({"shape=" + WordShape(raw), 1.0});
    if (AllOf(raw, IsDigit)) out.push_back({"is_digit", 1.0});
    bool has_digit = false;
    for (char c : raw) has_digit = has_digit || IsDigit(c);
    if (has_digit) out.push_back({"has_digit", 1.0});
    const std::u32string cps = DecodeUtf8(raw);
    if (cps.size() == 1 && IsPeelablePunct(cps[0])) {
      out.push_back({"is_punct", 1.0});
    }
    if (AllOf(raw, IsUpper)) {
      out.push_back({"is_upper", 1.0});
    } else if (IsUpper(raw[0])) {
      out.push_back({"is_title", 1.0});
    }
  }

  const auto n = static_cast<std::ptrdiff_t>(tokens.size());
  for (int d = 1; d <= config_.window_radius; ++d) {
    for (int sign : {-1, 1}) {
      const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(position) + sign * d;
      std::string word;
      if (j < 0) {
        word = "__BOS__";
      } else if (j >= n) {
        word = "__EOS__";
      } else {
        word = FoldCase(tokens[static_cast<std::size_t>(j)].text);
      }
      const std::string tag = "w[" + std::to_string(sign * d) + "]=";
      out.push_back({tag + word, 1.0});
    }
  }

  if (embeddings_) {
    const std::vector<double>* vec = embeddings_->Find(lower);
    for (int k = 0; k < embeddings_->dim(); ++k) {
      out.push_back({"emb" + std::to_string(k),
                     vec ? (*vec)[static_cast<std::size_t>(k)] : 0.0});
    }
  }
  return out;
}

}  // namespace nerport
