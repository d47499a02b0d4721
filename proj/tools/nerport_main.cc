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

// Command-line front end.

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nerport/corpus.h"
#include "nerport/corpus_io.h"
#include "nerport/crf.h"
#include "nerport/csv.h"
#include "nerport/ecr.h"
#include "nerport/evaluation.h"
#include "nerport/experiment.h"
#include "nerport/perturbation.h"
#include "nerport/similarity.h"
#include "nerport/stats.h"
#include "nerport/synthetic.h"

namespace nerport {
namespace {

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  std::string labels;
  bool allow_overlap = false;
};

LabelSet Labels(const GlobalOptions& g) {
  return g.labels.empty() ? LabelSet::Default() : LoadLabelSet(g.labels);
}

Corpus ReadCorpusFile(const std::string& path, const GlobalOptions& g) {
  return LoadCorpus(path, Labels(g), LoadOptions{g.allow_overlap});
}

// Writes to `path`, or stdout for "" and "-".
void WithOutput(const std::string& path,
                const std::function<void(std::ostream&)>& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  fn(out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<MatchMode> ModesFromFlag(const std::string& flag) {
  if (flag == "both") return {MatchMode::kStrict, MatchMode::kLenient};
  return {ParseMatchMode(flag)};
}

void AddFeatureFlags(CLI::App* cmd, FeatureConfig* f) {
  cmd->add_option("--window", f->window_radius, "Context window radius");
  cmd->add_option("--affixes", f->affix_lengths, "Prefix/suffix lengths")
      ->delimiter(',');
  cmd->add_option("--shape", f->use_shape, "Use word-shape features");
  cmd->add_option("--embeddings", f->embedding_path,
                  "Word embedding text file");
  cmd->add_option("--embedding-dim", f->embedding_dim, "Embedding dimension");
  cmd->add_flag(
      "--surface-only",
      [f](std::int64_t) { *f = FeatureConfig::SurfaceOnly(); },
      "Only the current-token identity feature");
}

void AddTrainFlags(CLI::App* cmd, TrainConfig* t, const std::string& prefix) {
  cmd->add_option("--" + prefix + "lr", t->learning_rate, "Learning rate");
  cmd->add_option("--" + prefix + "iterations", t->iterations,
                  "Gradient iterations");
  cmd->add_option("--" + prefix + "l2", t->l2, "L2 penalty");
  cmd->add_option("--" + prefix + "dev-interval", t->dev_eval_interval,
                  "Dev evaluation interval (0 = off)");
  cmd->add_option("--" + prefix + "threads", t->threads, "Gradient threads");
}

ProgressCallback Progress(bool verbose) {
  if (!verbose) return nullptr;
  return [](const TrainProgress& p) {
    std::cerr << "iter " << p.iteration << " objective "
              << FormatFixed(p.objective, 6);
    if (p.dev_micro_f1) std::cerr << " dev_f1 " << FormatFixed(*p.dev_micro_f1, 4);
    std::cerr << '\n';
  };
}

std::vector<double> NumericColumn(const std::vector<std::vector<std::string>>& rows,
                                  std::size_t col, const std::string& name) {
  std::vector<double> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (col >= rows[r].size() || rows[r][col].empty()) continue;
    std::size_t used = 0;
    const std::string& cell = rows[r][col];
    double v = 0.0;
    try {
      v = std::stod(cell, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != cell.size()) {
      throw std::invalid_argument("non-numeric value '" + cell + "' in column " +
                                  name + " at row " + std::to_string(r + 1));
    }
    out.push_back(v);
  }
  return out;
}

std::vector<std::string> TextColumn(const std::vector<std::vector<std::string>>& rows,
                                    std::size_t col) {
  std::vector<std::string> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    out.push_back(col < rows[r].size() ? rows[r][col] : "");
  }
  return out;
}

std::size_t ColumnIndex(const std::vector<std::vector<std::string>>& rows,
                        const std::string& name) {
  if (rows.empty()) throw std::invalid_argument("empty CSV file");
  for (std::size_t i = 0; i < rows[0].size(); ++i) {
    if (rows[0][i] == name) return i;
  }
  throw std::invalid_argument("no column named '" + name + "'");
}

void PrintCorpusStats(const Corpus& corpus) {
  const CorpusStats s = ComputeStats(corpus);
  CsvWriter csv(std::cout);
  csv.Row({"statistic", "value"});
  csv.Row({"documents", std::to_string(s.num_documents)});
  csv.Row({"sentences", std::to_string(s.num_sentences)});
  csv.Row({"tokens", std::to_string(s.num_tokens)});
  csv.Row({"unique_tokens", std::to_string(s.num_unique_tokens)});
  csv.Row({"avg_tokens_per_sentence", FormatFixed(s.avg_tokens_per_sentence, 2)});
  for (const auto& c : s.categories) {
    csv.Row({"mentions:" + c.category, std::to_string(c.mentions)});
    csv.Row({"unique:" + c.category, std::to_string(c.unique_surfaces)});
  }
}

int Run(int argc, char** argv) {
  CLI::App app{"Clinical NER portability toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions g;
  app.add_option("--seed", g.seed, "Seed for every randomized step");
  app.add_option("--labels", g.labels, "Label file, one category per line");
  app.add_flag("--allow-overlap", g.allow_overlap,
               "Accept overlapping spans in input corpora");

  // validate
  auto* validate = app.add_subcommand("validate", "Check a corpus file");
  std::string validate_path;
  validate->add_option("corpus", validate_path)->required();
  validate->callback([&] {
    const Corpus c = ReadCorpusFile(validate_path, g);
    std::cout << "ok: " << c.documents.size() << " documents, "
              << c.NumMentions() << " mentions\n";
  });

  // stats
  auto* stats = app.add_subcommand(
      "stats", "Corpus statistics, or a statistical test over CSV columns");
  std::string stats_corpus, stats_csv, stats_test = "anova";
  std::vector<std::string> stats_columns;
  stats->add_option("--corpus", stats_corpus, "Corpus to describe");
  stats->add_option("--csv", stats_csv, "CSV file with a header row");
  stats->add_option("--test", stats_test, "pearson|anova|welch|kappa|aggregate")
      ->check(CLI::IsMember({"pearson", "anova", "welch", "kappa", "aggregate"}));
  stats->add_option("--columns", stats_columns, "Column names")->delimiter(',');
  stats->callback([&] {
    if (!stats_corpus.empty()) {
      PrintCorpusStats(ReadCorpusFile(stats_corpus, g));
      return;
    }
    if (stats_csv.empty()) throw CLI::ValidationError("stats", "need --corpus or --csv");
    std::ifstream in(stats_csv, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open CSV file: " + stats_csv);
    const auto rows = ReadCsv(in);
    std::vector<std::size_t> idx;
    for (const auto& name : stats_columns) idx.push_back(ColumnIndex(rows, name));
    auto need = [&](std::size_t n, bool exact) {
      if (exact ? idx.size() != n : idx.size() < n) {
        throw CLI::ValidationError("--columns", "test '" + stats_test + "' needs " +
                                   (exact ? "" : "at least ") +
                                   std::to_string(n) + " columns");
      }
    };
    CsvWriter csv(std::cout);
    if (stats_test == "pearson") {
      need(2, true);
      const double r = Pearson(NumericColumn(rows, idx[0], stats_columns[0]),
                               NumericColumn(rows, idx[1], stats_columns[1]));
      csv.Row({"r"});
      csv.Row({FormatDouble(r)});
    } else if (stats_test == "anova") {
      need(2, false);
      std::vector<std::vector<double>> groups;
      for (std::size_t i = 0; i < idx.size(); ++i) {
        groups.push_back(NumericColumn(rows, idx[i], stats_columns[i]));
      }
      const AnovaResult a = OneWayAnova(groups);
      csv.Row({"f", "df_between", "df_within", "p_value"});
      csv.Row({FormatDouble(a.f), std::to_string(a.df_between),
               std::to_string(a.df_within), FormatDouble(a.p_value)});
    } else if (stats_test == "welch") {
      need(2, true);
      const TTestResult t =
          WelchTTest(NumericColumn(rows, idx[0], stats_columns[0]),
                     NumericColumn(rows, idx[1], stats_columns[1]));
      csv.Row({"t", "df", "p_value"});
      csv.Row({FormatDouble(t.t), FormatDouble(t.df), FormatDouble(t.p_value)});
    } else if (stats_test == "kappa") {
      need(2, true);
      const double k = CohensKappa(TextColumn(rows, idx[0]), TextColumn(rows, idx[1]));
      csv.Row({"kappa"});
      csv.Row({FormatDouble(k)});
    } else {
      need(1, false);
      csv.Row({"metric", "count", "mean", "std"});
      for (std::size_t i = 0; i < idx.size(); ++i) {
        const RunAggregate a = AggregateRuns(
            stats_columns[i], NumericColumn(rows, idx[i], stats_columns[i]));
        csv.Row({a.metric, std::to_string(a.count), FormatDouble(a.mean),
                 FormatDouble(a.std_dev)});
      }
    }
  });

  // similarity
  auto* similarity = app.add_subcommand("similarity", "TF-IDF cosine similarity");
  std::string sim_a, sim_b, sim_variant = "log_over_df", sim_out;
  similarity->add_option("--a", sim_a, "First corpus")->required();
  similarity->add_option("--b", sim_b, "Second corpus")->required();
  similarity->add_option("--idf", sim_variant, "log_over_df|standard");
  similarity->add_option("--out", sim_out, "Output CSV (default stdout)");
  similarity->callback([&] {
    const SimilarityReport r =
        CompareCorpora(ReadCorpusFile(sim_a, g), ReadCorpusFile(sim_b, g),
                       ParseIdfVariant(sim_variant));
    WithOutput(sim_out, [&](std::ostream& o) { WriteSimilarityCsv(o, r); });
  });

  // ecr
  auto* ecr = app.add_subcommand("ecr", "Entity coverage ratios");
  std::string ecr_train, ecr_test, ecr_pred, ecr_mode = "both", ecr_out,
                                              ecr_buckets;
  ecr->add_option("--train", ecr_train, "Training corpus")->required();
  ecr->add_option("--test", ecr_test, "Test corpus")->required();
  ecr->add_option("--pred", ecr_pred, "Predictions on the test corpus");
  ecr->add_option("--mode", ecr_mode, "strict|lenient|both");
  ecr->add_option("--out", ecr_out, "Per-entity CSV (default stdout)");
  ecr->add_option("--buckets", ecr_buckets, "Bucket summary CSV");
  ecr->callback([&] {
    const Corpus train = ReadCorpusFile(ecr_train, g);
    const Corpus test = ReadCorpusFile(ecr_test, g);
    const EcrTable table = BuildEcrTable(train, test);
    WithOutput(ecr_out,
               [&](std::ostream& o) { WriteEcrCsv(o, table, train.label_set); });
    if (!ecr_buckets.empty()) {
      const Corpus pred = ecr_pred.empty()
                              ? test
                              : LoadCorpus(ecr_pred, test.label_set,
                                           LoadOptions{true});
      std::vector<EcrBucketReport> reports;
      for (MatchMode m : ModesFromFlag(ecr_mode)) {
        reports.push_back(EvaluateByEcrGroup(test, pred, table, m));
      }
      WithOutput(ecr_buckets,
                 [&](std::ostream& o) { WriteEcrBucketCsv(o, reports); });
    }
  });

  // permute
  auto* permute = app.add_subcommand("permute", "Build a permuted test set");
  std::string perm_test, perm_donor, perm_exclude, perm_out, perm_log;
  permute->add_option("--test", perm_test, "Test corpus to permute")->required();
  permute->add_option("--donor", perm_donor, "Donor corpus")->required();
  permute->add_option("--exclude", perm_exclude, "Exclusion corpus")->required();
  permute->add_option("--out", perm_out, "Permuted corpus file")->required();
  permute->add_option("--log", perm_log, "Replacement log CSV");
  permute->callback([&] {
    const Corpus test = ReadCorpusFile(perm_test, g);
    const DonorPool pool = BuildDonorPool(ReadCorpusFile(perm_donor, g),
                                          ReadCorpusFile(perm_exclude, g));
    const PermutationResult r = PermuteTestSet(test, pool, g.seed.value_or(0));
    SaveCorpus(perm_out, r.corpus);
    if (!perm_log.empty()) {
      WithOutput(perm_log,
                 [&](std::ostream& o) { WriteReplacementLogCsv(o, r.log); });
    }
  });

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Score predictions");
  std::string eval_gold, eval_pred, eval_mode = "both", eval_csv, eval_table;
  evaluate->add_option("--gold", eval_gold, "Gold corpus")->required();
  evaluate->add_option("--pred", eval_pred, "Predicted corpus")->required();
  evaluate->add_option("--mode", eval_mode, "strict|lenient|both")
      ->check(CLI::IsMember({"strict", "lenient", "both"}));
  evaluate->add_option("--csv", eval_csv, "Per-category CSV (default stdout)");
  evaluate->add_option("--table", eval_table, "Text table");
  evaluate->callback([&] {
    const Corpus gold = ReadCorpusFile(eval_gold, g);
    const Corpus pred =
        LoadCorpus(eval_pred, gold.label_set, LoadOptions{true});
    std::vector<EvalReport> reports;
    for (MatchMode m : ModesFromFlag(eval_mode)) {
      reports.push_back(Evaluate(gold, pred, m));
    }
    WithOutput(eval_csv, [&](std::ostream& o) { WriteEvalCsv(o, reports); });
    if (!eval_table.empty()) {
      WithOutput(eval_table, [&](std::ostream& o) {
        WriteEvalTable(o, reports.front(), reports.back());
      });
    }
  });

  // train-crf
  auto* train = app.add_subcommand("train-crf", "Train a CRF tagger");
  std::string train_data, train_dev, train_model;
  bool train_verbose = false;
  FeatureConfig train_features;
  TrainConfig train_cfg;
  train->add_option("--train", train_data, "Training corpus")->required();
  train->add_option("--dev", train_dev, "Development corpus");
  train->add_option("--model", train_model, "Output model file")->required();
  train->add_flag("--verbose", train_verbose, "Print training progress");
  AddFeatureFlags(train, &train_features);
  AddTrainFlags(train, &train_cfg, "");
  train->callback([&] {
    train_cfg.seed = g.seed.value_or(0);
    const Corpus data = ReadCorpusFile(train_data, g);
    std::optional<Corpus> dev;
    if (!train_dev.empty()) dev = ReadCorpusFile(train_dev, g);
    const CrfModel model = TrainCrf(data, dev ? &*dev : nullptr, train_features,
                                    train_cfg, Progress(train_verbose));
    SaveModel(train_model, model);
  });

  // finetune-crf
  auto* finetune = app.add_subcommand("finetune-crf", "Continue training a CRF");
  std::string ft_base, ft_data, ft_dev, ft_out;
  bool ft_verbose = false;
  TrainConfig ft_cfg;
  finetune->add_option("--model", ft_base, "Base model file")->required();
  finetune->add_option("--train", ft_data, "Target-site training corpus")
      ->required();
  finetune->add_option("--dev", ft_dev, "Target-site development corpus");
  finetune->add_option("--out", ft_out, "Output model file")->required();
  finetune->add_flag("--verbose", ft_verbose, "Print training progress");
  AddTrainFlags(finetune, &ft_cfg, "");
  finetune->callback([&] {
    ft_cfg.seed = g.seed.value_or(0);
    const CrfModel base = LoadModel(ft_base);
    const Corpus data = LoadCorpus(ft_data, base.label_set(),
                                   LoadOptions{g.allow_overlap});
    std::optional<Corpus> dev;
    if (!ft_dev.empty()) {
      dev = LoadCorpus(ft_dev, base.label_set(), LoadOptions{g.allow_overlap});
    }
    SaveModel(ft_out, FineTuneCrf(base, data, dev ? &*dev : nullptr, ft_cfg,
                                  Progress(ft_verbose)));
  });

  // predict-crf
  auto* predict = app.add_subcommand("predict-crf", "Tag a corpus with a CRF");
  std::string pred_model, pred_corpus, pred_out;
  predict->add_option("--model", pred_model, "Model file")->required();
  predict->add_option("--corpus", pred_corpus, "Corpus to tag")->required();
  predict->add_option("--out", pred_out, "Prediction corpus (default stdout)");
  predict->callback([&] {
    const CrfModel model = LoadModel(pred_model);
    const Corpus corpus = LoadCorpus(pred_corpus, model.label_set(),
                                     LoadOptions{g.allow_overlap});
    const Corpus pred = PredictCorpus(model, corpus);
    WithOutput(pred_out, [&](std::ostream& o) { WriteCorpus(o, pred); });
  });

  // import-pred
  auto* import = app.add_subcommand("import-pred",
                                    "Validate external predictions against gold");
  std::string imp_gold, imp_pred, imp_out;
  import->add_option("--gold", imp_gold, "Gold corpus")->required();
  import->add_option("--pred", imp_pred, "Prediction file")->required();
  import->add_option("--out", imp_out, "Normalized prediction corpus");
  import->callback([&] {
    const Corpus gold = ReadCorpusFile(imp_gold, g);
    const Corpus pred = ImportPredictions(imp_pred, gold);
    if (!imp_out.empty()) SaveCorpus(imp_out, pred);
    std::cout << "ok: " << pred.documents.size() << " documents, "
              << pred.NumMentions() << " predicted mentions\n";
  });

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Run the transfer study");
  std::string exp_config_path, exp_dump;
  ExperimentConfig ec;
  std::string exp_modes, exp_strategies, exp_ft_mode, exp_idf;
  std::optional<bool> exp_perm;
  experiment->add_option("--config", exp_config_path, "Experiment config JSON");
  experiment->add_option("--dump-config", exp_dump,
                         "Write the effective config and exit");
  // Overrides are parsed into a scratch config and applied after the file.
  ExperimentConfig ov;
  auto* o_site_a = experiment->add_option("--site-a", ov.site_a, "Site A corpus");
  auto* o_site_b = experiment->add_option("--site-b", ov.site_b, "Site B corpus");
  auto* o_train_r = experiment->add_option("--train-ratio", ov.ratios.train);
  auto* o_dev_r = experiment->add_option("--dev-ratio", ov.ratios.dev);
  auto* o_test_r = experiment->add_option("--test-ratio", ov.ratios.test);
  auto* o_runs = experiment->add_option("--runs", ov.runs, "Repeated runs");
  auto* o_jobs = experiment->add_option("--jobs", ov.jobs, "Parallel runs");
  auto* o_out = experiment->add_option("--out-dir", ov.output_dir,
                                       "Report directory");
  experiment->add_option("--modes", exp_modes, "strict|lenient|both");
  experiment->add_option("--strategies", exp_strategies,
                         "Comma-separated strategy list");
  experiment->add_option("--finetune-mode", exp_ft_mode, "warm_start|pooled");
  experiment->add_option("--idf", exp_idf, "log_over_df|standard");
  experiment->add_option("--permutation", exp_perm,
                         "Run the permutation analysis");
  FeatureConfig ov_features;
  AddFeatureFlags(experiment, &ov_features);
  TrainConfig ov_train, ov_ft;
  AddTrainFlags(experiment, &ov_train, "");
  AddTrainFlags(experiment, &ov_ft, "ft-");
  bool exp_verbose = false;
  experiment->add_flag("--verbose", exp_verbose, "Print the tables to stdout");
  experiment->callback([&] {
    if (!exp_config_path.empty()) ec = LoadExperimentConfig(exp_config_path);
    auto set = [](CLI::Option* opt, auto& dst, const auto& src) {
      if (opt->count() > 0) dst = src;
    };
    set(o_site_a, ec.site_a, ov.site_a);
    set(o_site_b, ec.site_b, ov.site_b);
    set(o_train_r, ec.ratios.train, ov.ratios.train);
    set(o_dev_r, ec.ratios.dev, ov.ratios.dev);
    set(o_test_r, ec.ratios.test, ov.ratios.test);
    set(o_runs, ec.runs, ov.runs);
    set(o_jobs, ec.jobs, ov.jobs);
    set(o_out, ec.output_dir, ov.output_dir);
    if (g.seed) ec.base_seed = *g.seed;
    if (!g.labels.empty()) ec.labels = g.labels;
    if (!exp_modes.empty()) ec.modes = ModesFromFlag(exp_modes);
    if (!exp_strategies.empty()) {
      ec.strategies.clear();
      std::stringstream ss(exp_strategies);
      for (std::string item; std::getline(ss, item, ',');) {
        ec.strategies.push_back(ParseStrategy(item));
      }
    }
    if (!exp_ft_mode.empty()) {
      if (exp_ft_mode == "warm_start") {
        ec.finetune_mode = FineTuneMode::kWarmStart;
      } else if (exp_ft_mode == "pooled") {
        ec.finetune_mode = FineTuneMode::kPooled;
      } else {
        throw CLI::ValidationError("--finetune-mode", "unknown value " + exp_ft_mode);
      }
    }
    if (!exp_idf.empty()) ec.idf_variant = ParseIdfVariant(exp_idf);
    if (exp_perm) ec.permutation = *exp_perm;
    auto count = [&](const std::string& name) {
      return experiment->get_option(name)->count() > 0;
    };
    if (count("--surface-only")) ec.features = FeatureConfig::SurfaceOnly();
    if (count("--window")) ec.features.window_radius = ov_features.window_radius;
    if (count("--affixes")) ec.features.affix_lengths = ov_features.affix_lengths;
    if (count("--shape")) ec.features.use_shape = ov_features.use_shape;
    if (count("--embeddings")) ec.features.embedding_path = ov_features.embedding_path;
    if (count("--embedding-dim")) ec.features.embedding_dim = ov_features.embedding_dim;
    for (auto [prefix, src, dst] :
         {std::tuple{std::string(""), &ov_train, &ec.train},
          std::tuple{std::string("ft-"), &ov_ft, &ec.finetune}}) {
      if (count("--" + prefix + "lr")) dst->learning_rate = src->learning_rate;
      if (count("--" + prefix + "iterations")) dst->iterations = src->iterations;
      if (count("--" + prefix + "l2")) dst->l2 = src->l2;
      if (count("--" + prefix + "dev-interval")) {
        dst->dev_eval_interval = src->dev_eval_interval;
      }
      if (count("--" + prefix + "threads")) dst->threads = src->threads;
    }
    ec.Validate();
    if (!exp_dump.empty()) {
      WithOutput(exp_dump, [&](std::ostream& o) { WriteExperimentConfig(o, ec); });
      return;
    }
    if (ec.site_a.empty() || ec.site_b.empty()) {
      throw CLI::ValidationError("experiment", "site_a and site_b are required");
    }
    const LabelSet labels =
        ec.labels.empty() ? LabelSet::Default() : LoadLabelSet(ec.labels);
    const Corpus a = LoadCorpus(ec.site_a, labels, LoadOptions{g.allow_overlap});
    const Corpus b = LoadCorpus(ec.site_b, labels, LoadOptions{g.allow_overlap});
    const TransferReport report = RunTransferExperiment(ec, a, b);
    WriteTransferReport(ec.output_dir, report);
    {
      std::ofstream cfg(ec.output_dir + "/config.json", std::ios::binary);
      WriteExperimentConfig(cfg, ec);
    }
    if (exp_verbose) {
      std::ifstream tables(ec.output_dir + "/tables.txt");
      std::cout << tables.rdbuf();
    }
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  });

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic site corpus");
  std::string synth_spec, synth_site = "a", synth_out;
  std::optional<double> synth_shift;
  std::optional<std::size_t> synth_docs;
  synth->add_option("--spec", synth_spec, "Generator spec JSON");
  synth->add_option("--site", synth_site, "a|b")
      ->check(CLI::IsMember({"a", "b"}));
  synth->add_option("--shift", synth_shift, "Institution shift in [0, 1]");
  synth->add_option("--documents", synth_docs, "Document count");
  synth->add_option("--out", synth_out, "Output corpus (default stdout)");
  synth->callback([&] {
    GeneratorSpec spec =
        synth_spec.empty() ? DefaultGeneratorSpec() : LoadGeneratorSpec(synth_spec);
    if (synth_shift) spec.shift = *synth_shift;
    if (synth_docs) spec.documents = *synth_docs;
    const Corpus c = GenerateSynthetic(
        spec, synth_site == "a" ? Site::kA : Site::kB, g.seed.value_or(0));
    WithOutput(synth_out, [&](std::ostream& o) { WriteCorpus(o, c); });
  });

  // convert
  auto* convert = app.add_subcommand("convert", "Convert between JSONL and CoNLL");
  std::string conv_in, conv_out, conv_to = "conll";
  convert->add_option("--in", conv_in, "Input file")->required();
  convert->add_option("--out", conv_out, "Output file (default stdout)");
  convert->add_option("--to", conv_to, "conll|jsonl")
      ->check(CLI::IsMember({"conll", "jsonl"}));
  convert->callback([&] {
    if (conv_to == "conll") {
      const Corpus c = ReadCorpusFile(conv_in, g);
      WithOutput(conv_out, [&](std::ostream& o) { WriteConll(o, c); });
    } else {
      std::ifstream in(conv_in, std::ios::binary);
      if (!in) throw std::runtime_error("cannot open file: " + conv_in);
      const Corpus c = ReadConll(in, conv_in, Labels(g));
      WithOutput(conv_out, [&](std::ostream& o) { WriteCorpus(o, c); });
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const CorpusError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace
}  // namespace nerport

int main(int argc, char** argv) { return nerport::Run(argc, argv); }
