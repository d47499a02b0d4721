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

// Linear-chain conditional random field over BIO tags.
//
// A sequence x = (x_1..x_T) with tags y scores
//
//   s(x, y) = begin(y_1) + sum_t state(t, y_t) + sum_{t>1} trans(y_{t-1}, y_t)
//             + end(y_T),     state(t, y) = sum_f w(f, y) * value_t(f)
//
// and P(y | x) = exp(s(x, y)) / Z(x). Inference is exact (forward-backward in
// log space, Viterbi); training maximizes
//
//   L(w) = sum_sequences [s(x, y_gold) - log Z(x)] - (l2 / 2) * ||w||^2
//
// by full-batch gradient ascent with a constant step.

#ifndef NERPORT_CRF_H_
#define NERPORT_CRF_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "nerport/corpus.h"
#include "nerport/features.h"

namespace nerport {

struct TrainMetadata {
  std::uint64_t seed = 0;
  int iterations = 0;
  double learning_rate = 0.0;
  double l2 = 0.0;
  bool warm_start = false;
  int base_iterations = 0;
};

// BIO tags are "O" followed by B-/I- pairs in label-set order.
std::vector<std::string> BioTagsFor(const LabelSet& label_set);

class CrfModel {
 public:
  CrfModel(LabelSet label_set, FeatureConfig feature_config);

  const LabelSet& label_set() const { return label_set_; }
  const FeatureConfig& feature_config() const { return feature_config_; }
  const std::vector<std::string>& tags() const { return tags_; }
  std::size_t num_labels() const { return tags_.size(); }
  std::size_t num_features() const { return feature_names_.size(); }
  const std::vector<std::string>& feature_names() const {
    return feature_names_;
  }

  std::optional<std::size_t> FeatureId(const std::string& name) const;
  // Returns the existing index or appends a feature with zero weights.
  std::size_t AddFeature(const std::string& name);

  // Parameter layout: transitions (L*L, row = previous tag), begin (L),
  // end (L), then state weights (F*L, row = feature).
  std::span<double> weights() { return weights_; }
  std::span<const double> weights() const { return weights_; }
  std::size_t TransitionIndex(std::size_t prev, std::size_t cur) const {
    return prev * num_labels() + cur;
  }
  std::size_t BeginIndex(std::size_t tag) const {
    return num_labels() * num_labels() + tag;
  }
  std::size_t EndIndex(std::size_t tag) const {
    return num_labels() * (num_labels() + 1) + tag;
  }
  std::size_t StateIndex(std::size_t feature, std::size_t tag) const {
    return num_labels() * (num_labels() + 2) + feature * num_labels() + tag;
  }

  TrainMetadata& metadata() { return metadata_; }
  const TrainMetadata& metadata() const { return metadata_; }

 private:
  LabelSet label_set_;
  FeatureConfig feature_config_;
  std::vector<std::string> tags_;
  std::vector<std::string> feature_names_;
  std::unordered_map<std::string, std::size_t> feature_index_;
  std::vector<double> weights_;
  TrainMetadata metadata_;
};

struct FeatureValue {
  std::size_t feature = 0;
  double value = 0.0;
};

struct EncodedSequence {
  std::vector<std::vector<FeatureValue>> positions;
  std::vector<std::size_t> gold;  // tag indices; empty when unlabeled
};

// Features unknown to the model are dropped.
EncodedSequence EncodeSequence(const CrfModel& model,
                               const FeatureExtractor& extractor,
                               std::span<const Token> tokens);

struct SequenceScores {
  std::size_t length = 0;
  std::size_t num_labels = 0;
  std::vector<double> state;       // length * num_labels
  std::vector<double> transition;  // num_labels * num_labels
  std::vector<double> begin;
  std::vector<double> end;

  double State(std::size_t t, std::size_t y) const {
    return state[t * num_labels + y];
  }
  double Transition(std::size_t prev, std::size_t cur) const {
    return transition[prev * num_labels + cur];
  }
};

SequenceScores SequenceLogPotentials(const CrfModel& model,
                                     const EncodedSequence& sequence);

double PathScore(const SequenceScores& scores, std::span<const std::size_t> path);

struct Marginals {
  double log_z = 0.0;
  std::vector<double> node;  // length * L
  std::vector<double> edge;  // (length - 1) * L * L, [t][prev][cur]
};

Marginals ForwardBackward(const SequenceScores& scores);

// Highest-scoring path; among exact ties the lexicographically smallest tag
// sequence wins.
std::vector<std::size_t> ViterbiPath(const SequenceScores& scores);

struct ObjectiveResult {
  double value = 0.0;
  std::vector<double> gradient;  // same layout as CrfModel::weights()
};

// Sequences must carry gold tags. Per-sequence terms are reduced in a fixed
// order, so the result does not depend on `threads`.
ObjectiveResult ObjectiveAndGradient(const CrfModel& model,
                                     std::span<const EncodedSequence> batch,
                                     double l2, int threads = 1);

struct TrainConfig {
  double learning_rate = 1.0;
  int iterations = 100;
  double l2 = 1.0;
  std::uint64_t seed = 0;
  int dev_eval_interval = 0;  // 0 disables dev evaluation
  int threads = 1;

  void Validate() const;
};

struct TrainProgress {
  int iteration = 0;
  double objective = 0.0;
  std::optional<double> dev_micro_f1;
};

using ProgressCallback = std::function<void(const TrainProgress&)>;

// Encodes every sentence of every document with its gold tags, adding unseen
// features to the model when `grow` is set.
std::vector<EncodedSequence> EncodeCorpus(CrfModel* model,
                                          const FeatureExtractor& extractor,
                                          const Corpus& corpus, bool grow);

// Gradient ascent on the penalized log-likelihood. The first step is
// learning_rate / num_sequences; a step that does not raise the objective is
// halved and retried, an accepted step grows by 1.25x. Throws
// std::invalid_argument on an empty training corpus.
CrfModel TrainCrf(const Corpus& data, const Corpus* dev,
                  const FeatureConfig& feature_config,
                  const TrainConfig& config,
                  const ProgressCallback& progress = {});

// Continues optimizing from `base` on new data. New features start at zero;
// existing weights keep their indices. Throws std::invalid_argument when the
// label sets differ.
CrfModel FineTuneCrf(const CrfModel& base, const Corpus& data,
                     const Corpus* dev, const TrainConfig& config,
                     const ProgressCallback& progress = {});

std::vector<std::string> ViterbiTags(const CrfModel& model,
                                     const FeatureExtractor& extractor,
                                     std::span<const Token> tokens);

// Viterbi per sentence, then BIO repair into mentions.
Corpus PredictCorpus(const CrfModel& model, const Corpus& corpus);

void WriteModel(std::ostream& out, const CrfModel& model);
CrfModel ReadModel(std::istream& in);
void SaveModel(const std::string& path, const CrfModel& model);
CrfModel LoadModel(const std::string& path);

}  // namespace nerport

#endif  // NERPORT_CRF_H_
