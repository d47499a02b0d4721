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

#ifndef NERPORT_FEATURES_H_
#define NERPORT_FEATURES_H_

#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "nerport/corpus.h"

namespace nerport {

struct FeatureConfig {
  int window_radius = 2;
  std::vector<int> affix_lengths = {1, 2, 3};
  // Word shape plus digit/punctuation/case flags.
  bool use_shape = true;
  // Optional "word v1 ... vd" text file; words are matched case-folded.
  std::string embedding_path;
  int embedding_dim = 0;

  // Throws std::invalid_argument when the config is inconsistent.
  void Validate() const;

  // Identity and bias only: no context window, affixes or shape.
  static FeatureConfig SurfaceOnly();
};

struct Feature {
  std::string name;
  double value = 1.0;
};

class EmbeddingTable {
 public:
  // Throws std::runtime_error on unreadable files or rows whose width is not
  // `dim`.
  static EmbeddingTable Load(const std::string& path, int dim);

  int dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }
  // nullptr for out-of-vocabulary words.
  const std::vector<double>* Find(const std::string& word) const;

 private:
  int dim_ = 0;
  std::unordered_map<std::string, std::vector<double>> vectors_;
};

// Letters become x/X, digits 9; everything else is kept.
std::string WordShape(std::string_view token);

class FeatureExtractor {
 public:
  explicit FeatureExtractor(FeatureConfig config);

  const FeatureConfig& config() const { return config_; }

  // Features for tokens[position]. Window features use "__BOS__"/"__EOS__"
  // past the sequence edges. Throws std::out_of_range for a bad position.
  std::vector<Feature> Extract(std::span<const Token> tokens,
                               std::size_t position) const;

 private:
  FeatureConfig config_;
  std::shared_ptr<const EmbeddingTable> embeddings_;
};

}  // namespace nerport

#endif  // NERPORT_FEATURES_H_
