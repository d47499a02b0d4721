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

#include "nerport/experiment.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "nerport/corpus_io.h"
#include "nerport/csv.h"
#include "nerport/random.h"

namespace nerport {

void SplitRatios::Validate() const {
  if (!(train > 0.0 && dev > 0.0 && test > 0.0)) {
    throw std::invalid_argument("split ratios must all be positive");
  }
  if (std::fabs(train + dev + test - 1.0) > 1e-9) {
    throw std::invalid_argument("split ratios must sum to 1");
  }
}

CorpusSplit SplitCorpus(const Corpus& corpus, const SplitRatios& ratios,
                        std::uint64_t seed) {
  ratios.Validate();
  const std::size_t n = corpus.documents.size();
  if (n < 3) {
    throw std::invalid_argument("corpus '" + corpus.name + "' has " +
                                std::to_string(n) +
                                " documents; need at least 3 to split");
  }
  const auto floor_count = [n](double ratio) {
    return static_cast<std::size_t>(std::floor(static_cast<double>(n) * ratio +
                                               1e-9));
  };
  const std::size_t n_dev = floor_count(ratios.dev);
  const std::size_t n_test = floor_count(ratios.test);
  if (n_dev == 0 || n_test == 0 || n_dev + n_test >= n) {
    throw std::invalid_argument("corpus '" + corpus.name + "' with " +
                                std::to_string(n) +
                                " documents leaves an empty split");
  }
  const std::size_t n_train = n - n_dev - n_test;

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  rng.Shuffle(&order);

  CorpusSplit split;
  split.train = {corpus.name + "/train", corpus.label_set, {}};
  split.dev = {corpus.name + "/dev", corpus.label_set, {}};
  split.test = {corpus.name + "/test", corpus.label_set, {}};
  for (std::size_t i = 0; i < n; ++i) {
    Corpus& target = i < n_train ? split.train
                     : i < n_train + n_dev ? split.dev
                                           : split.test;
    target.documents.push_back(corpus.documents[order[i]]);
  }
  return split;
}

Corpus MergeCorpora(std::string name, const std::vector<const Corpus*>& parts) {
  if (parts.empty()) throw std::invalid_argument("nothing to merge");
  Corpus out{std::move(name), parts.front()->label_set, {}};
  std::set<std::string> ids;
  for (const Corpus* part : parts) {
    if (!(part->label_set == out.label_set)) {
      throw std::invalid_argument("cannot merge corpora with different labels");
    }
    for (Document doc : part->documents) {
      if (ids.count(doc.id) > 0) {
        doc.id = part->name + ":" + doc.id;
        for (auto& m : doc.mentions) m.doc_id = doc.id;
      }
      if (!ids.insert(doc.id).second) {
        throw std::invalid_argument("duplicate document id after merge: " +
                                    doc.id);
      }
      out.documents.push_back(std::move(doc));
    }
  }
  return out;
}

Corpus ImportPredictions(const std::string& path, const Corpus& gold) {
  Corpus pred = LoadCorpus(path, gold.label_set, LoadOptions{true});
  for (const auto& doc : pred.documents) {
    if (gold.FindDocument(doc.id) == nullptr) {
      throw CorpusError(CorpusError::Kind::kUnknownDocument,
                        "prediction document '" + doc.id +
                            "' is not in the gold corpus");
    }
  }
  return pred;
}

std::string_view StrategyName(Strategy strategy) {
  switch (strategy) {
    case Strategy::kDirectTransfer:
      return "direct_transfer";
    case Strategy::kFineTune:
      return "fine_tune";
    case Strategy::kLocalTrain:
      return "local_train";
  }
  return "direct_transfer";
}

Strategy ParseStrategy(std::string_view name) {
  if (name == "direct_transfer") return Strategy::kDirectTransfer;
  if (name == "fine_tune") return Strategy::kFineTune;
  if (name == "local_train") return Strategy::kLocalTrain;
  throw std::invalid_argument("unknown strategy: " + std::string(name));
}

void ExperimentConfig::Validate() const {
  ratios.Validate();
  if (runs < 1) throw std::invalid_argument("run count must be >= 1");
  if (jobs < 1) throw std::invalid_argument("jobs must be >= 1");
  if (modes.empty()) throw std::invalid_argument("no match modes configured");
  if (strategies.empty()) throw std::invalid_argument("no strategies configured");
  std::set<Strategy> seen(strategies.begin(), strategies.end());
  if (seen.size() != strategies.size()) {
    throw std::invalid_argument("duplicate strategy");
  }
  std::set<MatchMode> seen_modes(modes.begin(), modes.end());
  if (seen_modes.size() != modes.size()) {
    throw std::invalid_argument("duplicate match mode");
  }
  features.Validate();
  train.Validate();
  finetune.Validate();
}

namespace {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

template <typename Fn>
void ForEachField(const Json& object, const std::string& where, Fn fn) {
  if (!object.is_object()) {
    throw std::invalid_argument(where + " must be an object");
  }
  for (const auto& [key, value] : object.items()) {
    if (!fn(key, value)) {
      throw std::invalid_argument("unknown config field '" + where + "." + key +
                                  "'");
    }
  }
}

void ParseTrainConfig(const Json& j, const std::string& where,
                      TrainConfig* out) {
  ForEachField(j, where, [&](const std::string& key, const Json& v) {
    if (key == "learning_rate") {
      out->learning_rate = v.get<double>();
    } else if (key == "iterations") {
      out->iterations = v.get<int>();
    } else if (key == "l2") {
      out->l2 = v.get<double>();
    } else if (key == "dev_eval_interval") {
      out->dev_eval_interval = v.get<int>();
    } else if (key == "threads") {
      out->threads = v.get<int>();
    } else {
      return false;
    }
    return true;
  });
}

OrderedJson TrainConfigJson(const TrainConfig& c) {
  return {{"learning_rate", c.learning_rate},
          {"iterations", c.iterations},
          {"l2", c.l2},
          {"dev_eval_interval", c.dev_eval_interval},
          {"threads", c.threads}};
}

}  // namespace

ExperimentConfig ParseExperimentConfig(std::istream& in) {
  ExperimentConfig config;
  try {
    const Json j = Json::parse(in);
    ForEachField(j, "config", [&](const std::string& key, const Json& v) {
      if (key == "site_a") {
        config.site_a = v.get<std::string>();
      } else if (key == "site_b") {
        config.site_b = v.get<std::string>();
      } else if (key == "labels") {
        config.labels = v.get<std::string>();
      } else if (key == "split") {
        ForEachField(v, "split", [&](const std::string& k, const Json& r) {
          if (k == "train") {
            config.ratios.train = r.get<double>();
          } else if (k == "dev") {
            config.ratios.dev = r.get<double>();
          } else if (k == "test") {
            config.ratios.test = r.get<double>();
          } else {
            return false;
          }
          return true;
        });
      } else if (key == "runs") {
        config.runs = v.get<int>();
      } else if (key == "seed") {
        config.base_seed = v.get<std::uint64_t>();
      } else if (key == "modes") {
        config.modes.clear();
        for (const auto& m : v) config.modes.push_back(ParseMatchMode(m.get<std::string>()));
      } else if (key == "strategies") {
        config.strategies.clear();
        for (const auto& s : v) config.strategies.push_back(ParseStrategy(s.get<std::string>()));
      } else if (key == "features") {
        ForEachField(v, "features", [&](const std::string& k, const Json& f) {
          if (k == "window_radius") {
            config.features.window_radius = f.get<int>();
          } else if (k == "affix_lengths") {
            config.features.affix_lengths = f.get<std::vector<int>>();
          } else if (k == "use_shape") {
            config.features.use_shape = f.get<bool>();
          } else if (k == "embedding_path") {
            config.features.embedding_path = f.get<std::string>();
          } else if (k == "embedding_dim") {
            config.features.embedding_dim = f.get<int>();
          } else {
            return false;
          }
          return true;
        });
      } else if (key == "train") {
        ParseTrainConfig(v, "train", &config.train);
      } else if (key == "finetune") {
        ParseTrainConfig(v, "finetune", &config.finetune);
      } else if (key == "finetune_mode") {
        const auto mode = v.get<std::string>();
        if (mode == "warm_start") {
          config.finetune_mode = FineTuneMode::kWarmStart;
        } else if (mode == "pooled") {
          config.finetune_mode = FineTuneMode::kPooled;
        } else {
          throw std::invalid_argument("unknown finetune_mode: " + mode);
        }
      } else if (key == "idf_variant") {
        config.idf_variant = ParseIdfVariant(v.get<std::string>());
      } else if (key == "permutation") {
        config.permutation = v.get<bool>();
      } else if (key == "jobs") {
        config.jobs = v.get<int>();
      } else if (key == "output_dir") {
        config.output_dir = v.get<std::string>();
      } else {
        return false;
      }
      return true;
    });
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("malformed experiment config: ") +
                                e.what());
  }
  return config;
}

ExperimentConfig LoadExperimentConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  ExperimentConfig config = ParseExperimentConfig(in);
  // Input paths are relative to the config file; output_dir is not.
  const std::filesystem::path base =
      std::filesystem::path(path).parent_path();
  for (std::string* p : {&config.site_a, &config.site_b, &config.labels,
                         &config.features.embedding_path}) {
    if (!p->empty() && std::filesystem::path(*p).is_relative()) {
      *p = (base / *p).lexically_normal().string();
    }
  }
  return config;
}

void WriteExperimentConfig(std::ostream& out, const ExperimentConfig& config) {
  OrderedJson j;
  j["site_a"] = config.site_a;
  j["site_b"] = config.site_b;
  j["labels"] = config.labels;
  j["split"] = {{"train", config.ratios.train},
                {"dev", config.ratios.dev},
                {"test", config.ratios.test}};
  j["runs"] = config.runs;
  j["seed"] = config.base_seed;
  std::vector<std::string> modes;
  for (auto m : config.modes) modes.emplace_back(MatchModeName(m));
  j["modes"] = modes;
  std::vector<std::string> strategies;
  for (auto s : config.strategies) strategies.emplace_back(StrategyName(s));
  j["strategies"] = strategies;
  j["features"] = {{"window_radius", config.features.window_radius},
                   {"affix_lengths", config.features.affix_lengths},
                   {"use_shape", config.features.use_shape},
                   {"embedding_path", config.features.embedding_path},
                   {"embedding_dim", config.features.embedding_dim}};
  j["train"] = TrainConfigJson(config.train);
  j["finetune"] = TrainConfigJson(config.finetune);
  j["finetune_mode"] =
      config.finetune_mode == FineTuneMode::kWarmStart ? "warm_start" : "pooled";
  j["idf_variant"] = std::string(IdfVariantName(config.idf_variant));
  j["permutation"] = config.permutation;
  j["jobs"] = config.jobs;
  j["output_dir"] = config.output_dir;
  out << j.dump(2) << '\n';
}

PermutationReport RunPermutationAnalysis(const Predictor& predict,
                                         const Corpus& test_a,
                                         const Corpus& donor_b,
                                         const Corpus& exclude_a,
                                         std::uint64_t seed,
                                         const std::vector<MatchMode>& modes) {
  const DonorPool pool = BuildDonorPool(donor_b, exclude_a);
  PermutationResult permuted = PermuteTestSet(test_a, pool, seed);
  const Corpus pred_original = predict(test_a);
  const Corpus pred_permuted = predict(permuted.corpus);
  PermutationReport report;
  for (MatchMode mode : modes) {
    report.original.push_back(Evaluate(test_a, pred_original, mode));
    report.permuted.push_back(Evaluate(permuted.corpus, pred_permuted, mode));
  }
  for (const auto& r : permuted.log) ++(r.skipped ? report.skipped : report.replaced);
  report.log = std::move(permuted.log);
  return report;
}

PermutationReport RunPermutationAnalysis(const CrfModel& model,
                                         const Corpus& test_a,
                                         const Corpus& donor_b,
                                         const Corpus& exclude_a,
                                         std::uint64_t seed,
                                         const std::vector<MatchMode>& modes) {
  return RunPermutationAnalysis(
      [&model](const Corpus& c) { return PredictCorpus(model, c); }, test_a,
      donor_b, exclude_a, seed, modes);
}

namespace {

void PermutationRows(CsvWriter* csv, const std::vector<std::string>& prefix,
                     const PermutationReport& report) {
  for (std::size_t m = 0; m < report.original.size(); ++m) {
    const EvalReport& o = report.original[m];
    const EvalReport& p = report.permuted[m];
    auto row = [&](const std::string& name, double before, double after) {
      std::vector<std::string> fields = prefix;
      fields.insert(fields.end(),
                    {std::string(MatchModeName(o.mode)), name,
                     FormatDouble(before), FormatDouble(after),
                     FormatDouble(after - before)});
      csv->Row(fields);
    };
    for (std::size_t c = 0; c < o.categories.size(); ++c) {
      row(o.categories[c].category, o.categories[c].prf.f1,
          p.categories[c].prf.f1);
    }
    row("micro", o.micro.f1, p.micro.f1);
    row("macro", o.macro.f1, p.macro.f1);
  }
}

}  // namespace

void WritePermutationCsv(std::ostream& out, const PermutationReport& report) {
  CsvWriter csv(out);
  csv.Row({"mode", "category", "original_f1", "permuted_f1", "changed_f1"});
  PermutationRows(&csv, {}, report);
}

const StrategySummary* TransferReport::Find(std::string_view name,
                                            MatchMode mode) const {
  for (const auto& s : summaries) {
    if (s.name == name && s.mode == mode) return &s;
  }
  return nullptr;
}

namespace {

constexpr const char* kHome = "home";

RunResult ExecuteRun(const ExperimentConfig& config, const Corpus& site_a,
                     const Corpus& site_b, int run) {
  RunResult result;
  result.run = run;
  result.seed = config.base_seed + static_cast<std::uint64_t>(run);
  const CorpusSplit a = SplitCorpus(site_a, config.ratios,
                                    MixSeed(result.seed, kSplitSiteA));
  const CorpusSplit b = SplitCorpus(site_b, config.ratios,
                                    MixSeed(result.seed, kSplitSiteB));
  TrainConfig train = config.train;
  train.seed = result.seed;
  TrainConfig finetune = config.finetune;
  finetune.seed = result.seed;

  const Corpus a_train = MergeCorpora(site_a.name + "/train+dev",
                                      {&a.train, &a.dev});
  const CrfModel model_a = TrainCrf(a_train, nullptr, config.features, train);

  auto score = [&](const std::string& name, const Corpus& gold,
                   const Corpus& pred) {
    auto& reports = result.reports[name];
    for (MatchMode mode : config.modes) {
      reports.push_back(Evaluate(gold, pred, mode));
    }
  };
  score(kHome, a.test, PredictCorpus(model_a, a.test));

  for (Strategy strategy : config.strategies) {
    const std::string name(StrategyName(strategy));
    switch (strategy) {
      case Strategy::kDirectTransfer:
        score(name, b.test, PredictCorpus(model_a, b.test));
        break;
      case Strategy::kFineTune: {
        if (config.finetune_mode == FineTuneMode::kWarmStart) {
          const CrfModel tuned = FineTuneCrf(model_a, b.train, &b.dev, finetune);
          score(name, b.test, PredictCorpus(tuned, b.test));
        } else {
          const Corpus pooled = MergeCorpora(
              "pooled", {&a.train, &a.dev, &b.train});
          const CrfModel tuned =
              TrainCrf(pooled, &b.dev, config.features, train);
          score(name, b.test, PredictCorpus(tuned, b.test));
        }
        break;
      }
      case Strategy::kLocalTrain: {
        const CrfModel local = TrainCrf(b.train, &b.dev, config.features, train);
        score(name, b.test, PredictCorpus(local, b.test));
        break;
      }
    }
  }
  if (config.permutation) {
    result.permutation =
        RunPermutationAnalysis(model_a, a.test, site_b, site_a,
                               MixSeed(result.seed, kPermutation), config.modes);
  }
  return result;
}

std::vector<std::string> SummaryNames(const ExperimentConfig& config) {
  std::vector<std::string> names = {kHome};
  for (Strategy s : config.strategies) names.emplace_back(StrategyName(s));
  return names;
}

}  // namespace

TransferReport RunTransferExperiment(const ExperimentConfig& config,
                                     const Corpus& site_a,
                                     const Corpus& site_b) {
  config.Validate();
  if (!(site_a.label_set == site_b.label_set)) {
    throw std::invalid_argument("site corpora use different label sets");
  }
  TransferReport report;
  report.config = config;
  report.similarity = CompareCorpora(site_a, site_b, config.idf_variant);

  report.runs.resize(static_cast<std::size_t>(config.runs));
  auto run_one = [&](int r) {
    try {
      report.runs[static_cast<std::size_t>(r)] =
          ExecuteRun(config, site_a, site_b, r);
    } catch (const std::exception& e) {
      throw std::runtime_error("run " + std::to_string(r) + " failed: " +
                               e.what());
    }
  };
  if (config.jobs <= 1) {
    for (int r = 0; r < config.runs; ++r) run_one(r);
  } else {
    const int workers = std::min(config.jobs, config.runs);
    std::vector<std::future<void>> pool;
    for (int w = 0; w < workers; ++w) {
      pool.push_back(std::async(std::launch::async, [&, w] {
        for (int r = w; r < config.runs; r += workers) run_one(r);
      }));
    }
    // Surface the lowest failing run index first.
    std::exception_ptr first;
    for (auto& f : pool) {
      try {
        f.get();
      } catch (...) {
        if (!first) first = std::current_exception();
      }
    }
    if (first) std::rethrow_exception(first);
  }

  const auto& categories = site_a.label_set.categories();
  for (std::size_t m = 0; m < config.modes.size(); ++m) {
    const MatchMode mode = config.modes[m];
    for (const auto& name : SummaryNames(config)) {
      StrategySummary summary;
      summary.name = name;
      summary.mode = mode;
      std::vector<double> micro, macro;
      std::vector<std::vector<double>> per_cat(categories.size());
      for (const auto& run : report.runs) {
        const EvalReport& e = run.reports.at(name)[m];
        micro.push_back(e.micro.f1);
        macro.push_back(e.macro.f1);
        for (std::size_t c = 0; c < categories.size(); ++c) {
          per_cat[c].push_back(e.categories[c].prf.f1);
        }
      }
      summary.micro_f1 = AggregateRuns("micro_f1", std::move(micro));
      summary.macro_f1 = AggregateRuns("macro_f1", std::move(macro));
      for (std::size_t c = 0; c < categories.size(); ++c) {
        summary.category_f1.push_back(
            AggregateRuns("f1:" + categories[c], std::move(per_cat[c])));
      }
      report.summaries.push_back(std::move(summary));
    }

    const std::string mode_name(MatchModeName(mode));
    if (config.runs < 2 || config.strategies.size() < 2) {
      report.warnings.push_back(
          mode_name + ": significance tests skipped (need >= 2 runs and >= 2 "
                      "strategies)");
    } else {
      std::vector<std::vector<double>> groups;
      const StrategySummary* best = nullptr;
      for (Strategy s : config.strategies) {
        const StrategySummary* sum = report.Find(StrategyName(s), mode);
        groups.push_back(sum->micro_f1.values);
        if (best == nullptr || sum->micro_f1.mean > best->micro_f1.mean) {
          best = sum;
        }
      }
      report.anova[mode] = OneWayAnova(groups);
      for (Strategy s : config.strategies) {
        const StrategySummary* sum = report.Find(StrategyName(s), mode);
        if (sum == best) continue;
        PairwiseComparison cmp;
        cmp.mode = mode;
        cmp.best = best->name;
        cmp.other = sum->name;
        cmp.test = WelchTTest(best->micro_f1.values, sum->micro_f1.values);
        cmp.significant = cmp.test.p_value < 0.05;
        report.pairwise.push_back(std::move(cmp));
      }
    }

    const StrategySummary* home = report.Find(kHome, mode);
    const StrategySummary* direct =
        report.Find(StrategyName(Strategy::kDirectTransfer), mode);
    if (direct == nullptr) continue;
    CorrelationResult corr;
    corr.mode = mode;
    for (std::size_t c = 0; c < categories.size(); ++c) {
      const CategorySimilarity& sim = report.similarity.categories[c];
      if (!sim.present) continue;
      corr.categories.push_back(categories[c]);
      corr.similarity.push_back(sim.similarity);
      corr.drop.push_back(home->category_f1[c].mean -
                          direct->category_f1[c].mean);
    }
    try {
      corr.r = Pearson(corr.similarity, corr.drop);
    } catch (const std::invalid_argument& e) {
      report.warnings.push_back(mode_name +
                                ": similarity/drop correlation undefined (" +
                                e.what() + ")");
    }
    report.correlations.push_back(std::move(corr));
  }
  return report;
}

namespace {

std::ofstream OpenReportFile(const std::filesystem::path& dir,
                             const std::string& name) {
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write report file: " +
                             (dir / name).string());
  }
  return out;
}

std::string Cell(const TransferReport& report, const std::string& name,
                 const std::function<double(const StrategySummary&)>& metric) {
  std::string cell;
  for (std::size_t m = 0; m < report.config.modes.size(); ++m) {
    const StrategySummary* s = report.Find(name, report.config.modes[m]);
    const std::string v = FormatFixed(metric(*s), 3);
    cell += m == 0 ? v : " (" + v + ")";
  }
  return cell;
}

void WriteTables(std::ostream& out, const TransferReport& report,
                 const std::vector<std::string>& categories) {
  const auto names = SummaryNames(report.config);
  std::vector<std::string> mode_names;
  for (auto m : report.config.modes) mode_names.emplace_back(MatchModeName(m));
  std::string modes_label = mode_names[0];
  if (mode_names.size() > 1) modes_label += " (" + mode_names[1] + ")";

  out << "Transfer evaluation, F1 " << modes_label << ", mean over "
      << report.config.runs << " run(s)\n";
  out << "home = site-A model on site-A test; strategies on site-B test\n\n";
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header = {"Category"};
  header.insert(header.end(), names.begin(), names.end());
  rows.push_back(header);
  for (std::size_t c = 0; c < categories.size(); ++c) {
    std::vector<std::string> row = {categories[c]};
    for (const auto& n : names) {
      row.push_back(Cell(report, n, [c](const StrategySummary& s) {
        return s.category_f1[c].mean;
      }));
    }
    rows.push_back(std::move(row));
  }
  std::vector<std::string> micro = {"Micro-average"};
  std::vector<std::string> macro = {"Macro-average"};
  for (const auto& n : names) {
    micro.push_back(
        Cell(report, n, [](const StrategySummary& s) { return s.micro_f1.mean; }));
    macro.push_back(
        Cell(report, n, [](const StrategySummary& s) { return s.macro_f1.mean; }));
  }
  rows.push_back(std::move(micro));
  rows.push_back(std::move(macro));

  std::vector<std::size_t> widths(header.size(), 0);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      widths[i] = std::max(widths[i], row[i].size());
    }
  }
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << row[i];
      if (i + 1 < row.size()) out << std::string(widths[i] - row[i].size() + 2, ' ');
    }
    out << '\n';
  }

  out << "\nOne-way ANOVA on micro F1 across strategies\n";
  if (report.anova.empty()) out << "  (not computed)\n";
  for (const auto& [mode, a] : report.anova) {
    out << "  " << MatchModeName(mode) << ": F = " << FormatFixed(a.f, 4)
        << ", df = (" << a.df_between << ", " << a.df_within
        << "), p = " << FormatFixed(a.p_value, 6) << '\n';
  }
  out << "\nBest vs other strategies (Welch t-test, alpha = 0.05)\n";
  if (report.pairwise.empty()) out << "  (not computed)\n";
  for (const auto& p : report.pairwise) {
    out << "  " << MatchModeName(p.mode) << ": " << p.best << " vs " << p.other
        << ": t = " << FormatFixed(p.test.t, 4)
        << ", p = " << FormatFixed(p.test.p_value, 6)
        << (p.significant ? " *" : "") << '\n';
  }
  out << "\nCategory similarity vs direct-transfer F1 drop (Pearson r)\n";
  if (report.correlations.empty()) out << "  (not computed)\n";
  for (const auto& c : report.correlations) {
    out << "  " << MatchModeName(c.mode) << ": r = "
        << (c.r ? FormatFixed(*c.r, 4) : std::string("undefined")) << '\n';
  }
  out << "\nCorpus similarity (" << IdfVariantName(report.similarity.variant)
      << " IDF): overall " << FormatFixed(report.similarity.overall, 4)
      << ", category mean " << FormatFixed(report.similarity.category_mean, 4)
      << '\n';
  if (!report.warnings.empty()) {
    out << "\nWarnings\n";
    for (const auto& w : report.warnings) out << "  " << w << '\n';
  }
}

}  // namespace

void WriteTransferReport(const std::string& dir, const TransferReport& report) {
  const std::filesystem::path root(dir);
  std::filesystem::create_directories(root);
  std::vector<std::string> categories;
  for (const auto& c : report.similarity.categories) {
    categories.push_back(c.category);
  }
  {
    auto out = OpenReportFile(root, "per_run.csv");
    CsvWriter csv(out);
    csv.Row({"run", "seed", "strategy", "mode", "metric", "value"});
    for (const auto& run : report.runs) {
      for (const auto& name : SummaryNames(report.config)) {
        for (const EvalReport& e : run.reports.at(name)) {
          auto row = [&](const std::string& metric, double v) {
            csv.Row({std::to_string(run.run), std::to_string(run.seed), name,
                     std::string(MatchModeName(e.mode)), metric,
                     FormatDouble(v)});
          };
          row("micro_f1", e.micro.f1);
          row("micro_precision", e.micro.precision);
          row("micro_recall", e.micro.recall);
          row("macro_f1", e.macro.f1);
          for (const auto& c : e.categories) row("f1:" + c.category, c.prf.f1);
        }
      }
    }
  }
  {
    auto out = OpenReportFile(root, "aggregate.csv");
    CsvWriter csv(out);
    csv.Row({"strategy", "mode", "metric", "count", "mean", "std"});
    for (const auto& s : report.summaries) {
      auto row = [&](const RunAggregate& a) {
        csv.Row({s.name, std::string(MatchModeName(s.mode)), a.metric,
                 std::to_string(a.count), FormatDouble(a.mean),
                 FormatDouble(a.std_dev)});
      };
      row(s.micro_f1);
      row(s.macro_f1);
      for (const auto& c : s.category_f1) row(c);
    }
  }
  {
    auto out = OpenReportFile(root, "anova.csv");
    CsvWriter csv(out);
    std::vector<std::string> header = {"mode", "f", "df_between", "df_within",
                                       "p_value"};
    for (Strategy s : report.config.strategies) {
      header.push_back("mean:" + std::string(StrategyName(s)));
    }
    csv.Row(header);
    for (const auto& [mode, a] : report.anova) {
      std::vector<std::string> row = {std::string(MatchModeName(mode)),
                                      FormatDouble(a.f),
                                      std::to_string(a.df_between),
                                      std::to_string(a.df_within),
                                      FormatDouble(a.p_value)};
      for (double m : a.group_means) row.push_back(FormatDouble(m));
      csv.Row(row);
    }
  }
  {
    auto out = OpenReportFile(root, "pairwise.csv");
    CsvWriter csv(out);
    csv.Row({"mode", "best", "other", "t", "df", "p_value", "significant"});
    for (const auto& p : report.pairwise) {
      csv.Row({std::string(MatchModeName(p.mode)), p.best, p.other,
               FormatDouble(p.test.t), FormatDouble(p.test.df),
               FormatDouble(p.test.p_value), p.significant ? "1" : "0"});
    }
  }
  {
    auto out = OpenReportFile(root, "correlation.csv");
    CsvWriter csv(out);
    csv.Row({"mode", "category", "similarity", "f1_drop"});
    for (const auto& c : report.correlations) {
      const std::string mode(MatchModeName(c.mode));
      for (std::size_t i = 0; i < c.categories.size(); ++i) {
        csv.Row({mode, c.categories[i], FormatDouble(c.similarity[i]),
                 FormatDouble(c.drop[i])});
      }
      csv.Row({mode, "pearson_r", c.r ? FormatDouble(*c.r) : "", ""});
    }
  }
  {
    auto out = OpenReportFile(root, "similarity.csv");
    WriteSimilarityCsv(out, report.similarity);
  }
  {
    auto out = OpenReportFile(root, "tables.txt");
    WriteTables(out, report, categories);
  }
  bool any_permutation = false;
  for (const auto& run : report.runs) {
    any_permutation = any_permutation || run.permutation.has_value();
  }
  if (any_permutation) {
    auto out = OpenReportFile(root, "permutation.csv");
    CsvWriter csv(out);
    csv.Row({"run", "mode", "category", "original_f1", "permuted_f1",
             "changed_f1"});
    for (const auto& run : report.runs) {
      if (run.permutation) {
        PermutationRows(&csv, {std::to_string(run.run)}, *run.permutation);
      }
    }
  }
}

}  // namespace nerport
