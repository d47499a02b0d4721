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

#include "nerport/crf.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <limits>
#include <stdexcept>

#include "json.hpp"
#include "nerport/evaluation.h"

namespace nerport {
namespace {

constexpr const char* kModelFormat = "nerport-crf";
constexpr int kModelVersion = 1;
// Gradient contributions are accumulated in this many contiguous chunks of
// sequences and summed in chunk order.
constexpr std::size_t kReductionChunks = 8;

double LogSumExp(std::span<const double> values) {
  double max = -std::numeric_limits<double>::infinity();
  for (double v : values) max = std::max(max, v);
  if (std::isinf(max)) return max;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - max);
  return max + std::log(sum);
}

}  // namespace

std::vector<std::string> BioTagsFor(const LabelSet& label_set) {
  std::vector<std::string> tags = {"O"};
  for (const auto& c : label_set.categories()) {
    tags.push_back("B-" + c);
    tags.push_back("I-" + c);
  }
  return tags;
}

CrfModel::CrfModel(LabelSet label_set, FeatureConfig feature_config)
    : label_set_(std::move(label_set)),
      feature_config_(std::move(feature_config)),
      tags_(BioTagsFor(label_set_)) {
  feature_config_.Validate();
  weights_.assign(num_labels() * (num_labels() + 2), 0.0);
}

std::optional<std::size_t> CrfModel::FeatureId(const std::string& name) const {
  auto it = feature_index_.find(name);
  if (it == feature_index_.end()) return std::nullopt;
  return it->second;
}

std::size_t CrfModel::AddFeature(const std::string& name) {
  auto [it, inserted] = feature_index_.emplace(name, feature_names_.size());
  if (inserted) {
    feature_names_.push_back(name);
    weights_.resize(weights_.size() + num_labels(), 0.0);
  }
  return it->second;
}

EncodedSequence EncodeSequence(const CrfModel& model,
                               const FeatureExtractor& extractor,
                               std::span<const Token> tokens) {
  EncodedSequence seq;
  seq.positions.resize(tokens.size());
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    for (const auto& f : extractor.Extract(tokens, t)) {
      if (auto id = model.FeatureId(f.name)) {
        seq.positions[t].push_back({*id, f.value});
      }
    }
  }
  return seq;
}

SequenceScores SequenceLogPotentials(const CrfModel& model,
                                     const EncodedSequence& sequence) {
  const std::size_t labels = model.num_labels();
  const auto w = model.weights();
  SequenceScores scores;
  scores.length = sequence.positions.size();
  scores.num_labels = labels;
  scores.transition.assign(w.begin(), w.begin() + labels * labels);
  scores.begin.assign(w.begin() + model.BeginIndex(0),
                      w.begin() + model.BeginIndex(0) + labels);
  scores.end.assign(w.begin() + model.EndIndex(0),
                    w.begin() + model.EndIndex(0) + labels);
  scores.state.assign(scores.length * labels, 0.0);
  for (std::size_t t = 0; t < scores.length; ++t) {
    double* row = &scores.state[t * labels];
    for (const auto& fv : sequence.positions[t]) {
      const double* wf = &w[model.StateIndex(fv.feature, 0)];
      for (std::size_t y = 0; y < labels; ++y) row[y] += wf[y] * fv.value;
    }
  }
  return scores;
}

double PathScore(const SequenceScores& scores,
                 std::span<const std::size_t> path) {
  if (path.size() != scores.length) {
    throw std::invalid_argument("path length does not match sequence length");
  }
  if (path.empty()) return 0.0;
  double s = scores.begin[path[0]];
  for (std::size_t t = 0; t < path.size(); ++t) {
    s += scores.State(t, path[t]);
    if (t > 0) s += scores.Transition(path[t - 1], path[t]);
  }
  return s + scores.end[path.back()];
}

Marginals ForwardBackward(const SequenceScores& scores) {
  const std::size_t T = scores.length;
  const std::size_t L = scores.num_labels;
  Marginals out;
  if (T == 0) return out;
  std::vector<double> alpha(T * L);
  std::vector<double> beta(T * L);
  std::vector<double> buf(L);

  for (std::size_t y = 0; y < L; ++y) {
    alpha[y] = scores.begin[y] + scores.State(0, y);
  }
  for (std::size_t t = 1; t < T; ++t) {
    for (std::size_t y = 0; y < L; ++y) {
      for (std::size_t p = 0; p < L; ++p) {
        buf[p] = alpha[(t - 1) * L + p] + scores.Transition(p, y);
      }
      alpha[t * L + y] = scores.State(t, y) + LogSumExp(buf);
    }
  }
  for (std::size_t y = 0; y < L; ++y) beta[(T - 1) * L + y] = scores.end[y];
  for (std::size_t t = T - 1; t-- > 0;) {
    for (std::size_t y = 0; y < L; ++y) {
      for (std::size_t n = 0; n < L; ++n) {
        buf[n] = scores.Transition(y, n) + scores.State(t + 1, n) +
                 beta[(t + 1) * L + n];
      }
      beta[t * L + y] = LogSumExp(buf);
    }
  }
  for (std::size_t y = 0; y < L; ++y) {
    buf[y] = alpha[(T - 1) * L + y] + scores.end[y];
  }
  out.log_z = LogSumExp(buf);

  out.node.resize(T * L);
  for (std::size_t i = 0; i < T * L; ++i) {
    out.node[i] = std::exp(alpha[i] + beta[i] - out.log_z);
  }
  out.edge.resize((T - 1) * L * L);
  for (std::size_t t = 0; t + 1 < T; ++t) {
    for (std::size_t p = 0; p < L; ++p) {
      for (std::size_t y = 0; y < L; ++y) {
        out.edge[(t * L + p) * L + y] =
            std::exp(alpha[t * L + p] + scores.Transition(p, y) +
                     scores.State(t + 1, y) + beta[(t + 1) * L + y] -
                     out.log_z);
      }
    }
  }
  return out;
}

std::vector<std::size_t> ViterbiPath(const SequenceScores& scores) {
  const std::size_t T = scores.length;
  const std::size_t L = scores.num_labels;
  std::vector<std::size_t> path(T);
  if (T == 0) return path;
  // best[t][y]: highest score of any completion from position t in tag y,
  // excluding the state score at t.
  std::vector<double> best(T * L);
  for (std::size_t y = 0; y < L; ++y) best[(T - 1) * L + y] = scores.end[y];
  for (std::size_t t = T - 1; t-- > 0;) {
    for (std::size_t y = 0; y < L; ++y) {
      double m = -std::numeric_limits<double>::infinity();
      for (std::size_t n = 0; n < L; ++n) {
        m = std::max(m, scores.Transition(y, n) + scores.State(t + 1, n) +
                            best[(t + 1) * L + n]);
      }
      best[t * L + y] = m;
    }
  }
  // Forward greedy pass: the first tag reaching the optimum at each step.
  for (std::size_t t = 0; t < T; ++t) {
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t y = 0; y < L; ++y) {
      const double entry =
          t == 0 ? scores.begin[y] : scores.Transition(path[t - 1], y);
      const double v = entry + scores.State(t, y) + best[t * L + y];
      if (v > top) {
        top = v;
        path[t] = y;
      }
    }
  }
  return path;
}

namespace {

// Adds the log-likelihood of one sequence to *value and its gradient
// (empirical minus expected feature values) to *grad.
void AccumulateSequence(const CrfModel& model, const EncodedSequence& seq,
                        double* value, std::vector<double>* grad) {
  if (seq.positions.empty()) return;
  const std::size_t T = seq.positions.size();
  const std::size_t L = model.num_labels();
  const SequenceScores scores = SequenceLogPotentials(model, seq);
  const Marginals marg = ForwardBackward(scores);
  *value += PathScore(scores, seq.gold) - marg.log_z;

  auto& g = *grad;
  g[model.BeginIndex(seq.gold[0])] += 1.0;
  g[model.EndIndex(seq.gold[T - 1])] += 1.0;
  for (std::size_t y = 0; y < L; ++y) {
    g[model.BeginIndex(y)] -= marg.node[y];
    g[model.EndIndex(y)] -= marg.node[(T - 1) * L + y];
  }
  for (std::size_t t = 0; t < T; ++t) {
    for (const auto& fv : seq.positions[t]) {
      double* gf = &g[model.StateIndex(fv.feature, 0)];
      gf[seq.gold[t]] += fv.value;
      for (std::size_t y = 0; y < L; ++y) {
        gf[y] -= fv.value * marg.node[t * L + y];
      }
    }
    if (t == 0) continue;
    g[model.TransitionIndex(seq.gold[t - 1], seq.gold[t])] += 1.0;
    const double* edge = &marg.edge[(t - 1) * L * L];
    for (std::size_t i = 0; i < L * L; ++i) g[i] -= edge[i];
  }
}

}  // namespace

ObjectiveResult ObjectiveAndGradient(const CrfModel& model,
                                     std::span<const EncodedSequence> batch,
                                     double l2, int threads) {
  const std::size_t n = batch.size();
  const std::size_t dim = model.weights().size();
  const std::size_t chunks = std::min(kReductionChunks, std::max<std::size_t>(n, 1));
  std::vector<double> values(chunks, 0.0);
  std::vector<std::vector<double>> grads(chunks);

  auto run_chunk = [&](std::size_t c) {
    grads[c].assign(dim, 0.0);
    const std::size_t lo = n * c / chunks;
    const std::size_t hi = n * (c + 1) / chunks;
    for (std::size_t i = lo; i < hi; ++i) {
      AccumulateSequence(model, batch[i], &values[c], &grads[c]);
    }
  };
  if (threads <= 1 || chunks == 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    const auto workers =
        std::min<std::size_t>(chunks, static_cast<std::size_t>(threads));
    std::vector<std::future<void>> jobs;
    for (std::size_t w = 0; w < workers; ++w) {
      jobs.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t c = w; c < chunks; c += workers) run_chunk(c);
      }));
    }
    for (auto& j : jobs) j.get();
  }

  ObjectiveResult result;
  result.gradient.assign(dim, 0.0);
  for (std::size_t c = 0; c < chunks; ++c) {
    result.value += values[c];
    for (std::size_t i = 0; i < dim; ++i) result.gradient[i] += grads[c][i];
  }
  const auto w = model.weights();
  double norm2 = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    norm2 += w[i] * w[i];
    result.gradient[i] -= l2 * w[i];
  }
  result.value -= 0.5 * l2 * norm2;
  return result;
}

void TrainConfig::Validate() const {
  if (!(learning_rate > 0.0)) {
    throw std::invalid_argument("learning rate must be positive");
  }
  if (!(l2 >= 0.0)) throw std::invalid_argument("l2 must be >= 0");
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  if (dev_eval_interval < 0) {
    throw std::invalid_argument("dev eval interval must be >= 0");
  }
}

std::vector<EncodedSequence> EncodeCorpus(CrfModel* model,
                                          const FeatureExtractor& extractor,
                                          const Corpus& corpus, bool grow) {
  std::unordered_map<std::string, std::size_t> tag_index;
  for (std::size_t i = 0; i < model->tags().size(); ++i) {
    tag_index.emplace(model->tags()[i], i);
  }
  std::vector<EncodedSequence> out;
  for (const auto& doc : corpus.documents) {
    const std::vector<std::string> tags = MentionsToBio(doc);
    const std::span<const Token> all(doc.tokens);
    for (const auto& sentence : doc.sentences) {
      const auto tokens = all.subspan(sentence.begin, sentence.size());
      if (grow) {
        for (std::size_t t = 0; t < tokens.size(); ++t) {
          for (const auto& f : extractor.Extract(tokens, t)) {
            model->AddFeature(f.name);
          }
        }
      }
      EncodedSequence seq = EncodeSequence(*model, extractor, tokens);
      for (std::size_t i = sentence.begin; i < sentence.end; ++i) {
        seq.gold.push_back(tag_index.at(tags[i]));
      }
      out.push_back(std::move(seq));
    }
  }
  return out;
}

namespace {

void Optimize(CrfModel* model, const std::vector<EncodedSequence>& data,
              const Corpus* dev, const TrainConfig& config,
              const ProgressCallback& progress) {
  constexpr int kMaxHalvings = 40;
  double step = config.learning_rate / static_cast<double>(data.size());
  ObjectiveResult current =
      ObjectiveAndGradient(*model, data, config.l2, config.threads);
  auto w = model->weights();
  std::vector<double> start(w.size());
  for (int it = 1; it <= config.iterations; ++it) {
    std::copy(w.begin(), w.end(), start.begin());
    bool improved = false;
    for (int attempt = 0; attempt <= kMaxHalvings && !improved; ++attempt) {
      for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = start[i] + step * current.gradient[i];
      }
      ObjectiveResult next =
          ObjectiveAndGradient(*model, data, config.l2, config.threads);
      if (next.value > current.value) {
        current = std::move(next);
        improved = true;
      } else {
        step *= 0.5;
      }
    }
    if (improved) {
      step *= 1.25;
    } else {
      std::copy(start.begin(), start.end(), w.begin());
    }

    TrainProgress report;
    report.iteration = it;
    report.objective = current.value;
    if (dev != nullptr && config.dev_eval_interval > 0 &&
        (it % config.dev_eval_interval == 0 || it == config.iterations)) {
      report.dev_micro_f1 =
          Evaluate(*dev, PredictCorpus(*model, *dev), MatchMode::kStrict)
              .micro.f1;
    }
    if (progress) progress(report);
  }
}

}  // namespace

CrfModel TrainCrf(const Corpus& data, const Corpus* dev,
                  const FeatureConfig& feature_config,
                  const TrainConfig& config, const ProgressCallback& progress) {
  config.Validate();
  CrfModel model(data.label_set, feature_config);
  const FeatureExtractor extractor(feature_config);
  const auto sequences = EncodeCorpus(&model, extractor, data, true);
  if (sequences.empty()) {
    throw std::invalid_argument("training corpus has no sentences");
  }
  Optimize(&model, sequences, dev, config, progress);
  model.metadata() = {config.seed, config.iterations, config.learning_rate,
                      config.l2, false, 0};
  return model;
}

CrfModel FineTuneCrf(const CrfModel& base, const Corpus& data,
                     const Corpus* dev, const TrainConfig& config,
                     const ProgressCallback& progress) {
  config.Validate();
  if (!(base.label_set() == data.label_set)) {
    throw std::invalid_argument(
        "fine-tuning data uses a different label set than the base model");
  }
  CrfModel model = base;
  const FeatureExtractor extractor(model.feature_config());
  const auto sequences = EncodeCorpus(&model, extractor, data, true);
  if (sequences.empty()) {
    throw std::invalid_argument("fine-tuning corpus has no sentences");
  }
  Optimize(&model, sequences, dev, config, progress);
  model.metadata() = {config.seed,
                      config.iterations,
                      config.learning_rate,
                      config.l2,
                      true,
                      base.metadata().base_iterations +
                          base.metadata().iterations};
  return model;
}

std::vector<std::string> ViterbiTags(const CrfModel& model,
                                     const FeatureExtractor& extractor,
                                     std::span<const Token> tokens) {
  const EncodedSequence seq = EncodeSequence(model, extractor, tokens);
  std::vector<std::string> tags;
  for (std::size_t y : ViterbiPath(SequenceLogPotentials(model, seq))) {
    tags.push_back(model.tags()[y]);
  }
  return tags;
}

Corpus PredictCorpus(const CrfModel& model, const Corpus& corpus) {
  if (!(model.label_set() == corpus.label_set)) {
    throw std::invalid_argument("model and corpus label sets differ");
  }
  const FeatureExtractor extractor(model.feature_config());
  Corpus out{corpus.name + "+pred", corpus.label_set, {}};
  out.documents.reserve(corpus.documents.size());
  for (const auto& doc : corpus.documents) {
    std::vector<std::string> tags;
    tags.reserve(doc.tokens.size());
    const std::span<const Token> all(doc.tokens);
    for (const auto& sentence : doc.sentences) {
      for (auto& tag :
           ViterbiTags(model, extractor, all.subspan(sentence.begin,
                                                     sentence.size()))) {
        tags.push_back(std::move(tag));
      }
    }
    Document pred = doc;
    pred.mentions = BioToMentions(tags, doc.tokens, doc);
    out.documents.push_back(std::move(pred));
  }
  return out;
}

void WriteModel(std::ostream& out, const CrfModel& model) {
  nlohmann::ordered_json j;
  j["format"] = kModelFormat;
  j["version"] = kModelVersion;
  j["categories"] = model.label_set().categories();
  j["tags"] = model.tags();
  const FeatureConfig& fc = model.feature_config();
  j["feature_config"] = {{"window_radius", fc.window_radius},
                         {"affix_lengths", fc.affix_lengths},
                         {"use_shape", fc.use_shape},
                         {"embedding_path", fc.embedding_path},
                         {"embedding_dim", fc.embedding_dim}};
  const TrainMetadata& md = model.metadata();
  j["training"] = {{"seed", md.seed},
                   {"iterations", md.iterations},
                   {"learning_rate", md.learning_rate},
                   {"l2", md.l2},
                   {"warm_start", md.warm_start},
                   {"base_iterations", md.base_iterations}};
  j["features"] = model.feature_names();
  const auto w = model.weights();
  const std::size_t L = model.num_labels();
  j["transitions"] = std::vector<double>(w.begin(), w.begin() + L * L);
  j["begin"] = std::vector<double>(w.begin() + model.BeginIndex(0),
                                   w.begin() + model.BeginIndex(0) + L);
  j["end"] = std::vector<double>(w.begin() + model.EndIndex(0),
                                 w.begin() + model.EndIndex(0) + L);
  j["state_weights"] =
      std::vector<double>(w.begin() + model.StateIndex(0, 0), w.end());
  out << j.dump() << '\n';
}

CrfModel ReadModel(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
    if (j.at("format") != kModelFormat) {
      throw std::runtime_error("not a nerport CRF model file");
    }
    if (j.at("version").get<int>() != kModelVersion) {
      throw std::runtime_error("unsupported model version " +
                               j.at("version").dump());
    }
    FeatureConfig fc;
    const auto& jf = j.at("feature_config");
    fc.window_radius = jf.at("window_radius").get<int>();
    fc.affix_lengths = jf.at("affix_lengths").get<std::vector<int>>();
    fc.use_shape = jf.at("use_shape").get<bool>();
    fc.embedding_path = jf.at("embedding_path").get<std::string>();
    fc.embedding_dim = jf.at("embedding_dim").get<int>();

    CrfModel model(LabelSet(j.at("categories").get<std::vector<std::string>>()),
                   fc);
    if (j.at("tags").get<std::vector<std::string>>() != model.tags()) {
      throw std::runtime_error("tag list does not match categories");
    }
    for (const auto& name : j.at("features")) {
      model.AddFeature(name.get<std::string>());
    }
    if (model.num_features() != j.at("features").size()) {
      throw std::runtime_error("duplicate feature names");
    }
    const auto L = model.num_labels();
    const auto trans = j.at("transitions").get<std::vector<double>>();
    const auto begin = j.at("begin").get<std::vector<double>>();
    const auto end = j.at("end").get<std::vector<double>>();
    const auto state = j.at("state_weights").get<std::vector<double>>();
    if (trans.size() != L * L || begin.size() != L || end.size() != L ||
        state.size() != model.num_features() * L) {
      throw std::runtime_error("weight array sizes do not match the model");
    }
    auto w = model.weights();
    std::copy(trans.begin(), trans.end(), w.begin());
    std::copy(begin.begin(), begin.end(), w.begin() + model.BeginIndex(0));
    std::copy(end.begin(), end.end(), w.begin() + model.EndIndex(0));
    std::copy(state.begin(), state.end(), w.begin() + model.StateIndex(0, 0));
    for (double v : w) {
      if (!std::isfinite(v)) throw std::runtime_error("non-finite weight");
    }
    const auto& jt = j.at("training");
    model.metadata() = {jt.at("seed").get<std::uint64_t>(),
                        jt.at("iterations").get<int>(),
                        jt.at("learning_rate").get<double>(),
                        jt.at("l2").get<double>(),
                        jt.at("warm_start").get<bool>(),
                        jt.at("base_iterations").get<int>()};
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("malformed model file: ") + e.what());
  }
}

void SaveModel(const std::string& path, const CrfModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  WriteModel(out, model);
}

CrfModel LoadModel(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  return ReadModel(in);
}

}  // namespace nerport
