/*
 * Copyright 2026 The cltq Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cli_app.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cltq/corpus.hpp"
#include "cltq/evaluation.hpp"
#include "cltq/pipeline.hpp"
#include "cltq/report.hpp"

namespace cltq::cli {
namespace fs = std::filesystem;

namespace {

struct SynthArgs {
  std::optional<std::uint64_t> seed;
  fs::path out = "synthetic";
  std::size_t labeled = 2000;
  std::size_t unlabeled = 10000;
  std::size_t vocab = 2000;
};

// Flags of `run` that override the configuration file. Kept as strings and
// routed through apply_setting so both sources share one parser.
struct RunArgs {
  fs::path config;
  std::map<std::string, std::string> overrides;
  bool no_cache = false;
  bool quiet = false;
};

struct ReportArgs {
  std::vector<fs::path> inputs;
  fs::path summary;
};

int cmd_synth(const SynthArgs& args, std::ostream& out) {
  if (!args.seed) throw ConfigError("synth requires an explicit --seed");
  SyntheticBilingual data = generate_synthetic_bilingual(*args.seed, args.labeled, args.unlabeled, args.vocab);
  std::error_code ec;
  fs::create_directories(args.out, ec);
  if (ec) throw IoError("cannot create directory '" + args.out.string() + "': " + ec.message());

  ExperimentConfig config;
  config.source_labeled = args.out / "source_labeled.txt";
  config.source_unlabeled = args.out / "source_unlabeled.txt";
  config.target_unlabeled = args.out / "target_unlabeled.txt";
  config.target_test = args.out / "target_test.txt";
  config.dictionary = args.out / "dictionary.tsv";
  config.out_dir = args.out / "run";
  config.seed = *args.seed;
  write_corpus(data.source_labeled, config.source_labeled);
  write_corpus(data.source_unlabeled, config.source_unlabeled);
  write_corpus(data.target_unlabeled, config.target_unlabeled);
  write_corpus(data.target_test, config.target_test);
  write_dictionary(data.dictionary, config.dictionary);

  const fs::path conf_path = args.out / "experiment.conf";
  std::ofstream conf(conf_path, std::ios::binary);
  if (!conf) throw IoError("cannot write '" + conf_path.string() + "'");
  conf << "# Synthetic bilingual benchmark, seed " << *args.seed << '\n';
  write_config(config, conf, args.out);
  if (!conf.flush()) throw IoError("error while writing '" + conf_path.string() + "'");
  out << "wrote synthetic benchmark to " << args.out.string() << '\n';
  return kExitOk;
}

int cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err) {
  ExperimentConfig config = load_config(args.config);
  for (const auto& [key, value] : args.overrides) apply_setting(config, key, value);
  if (args.no_cache) config.use_cache = false;
  validate_config(config);
  const ExperimentResult result = run_experiment(config, args.quiet ? nullptr : &err);
  out << format_table(result.summary);
  out << "results: " << result.results_path.string() << "\nsummary: " << result.summary_path.string() << '\n';
  return kExitOk;
}

int cmd_report(const ReportArgs& args, std::ostream& out) {
  std::vector<std::vector<SampleRecord>> files;
  std::map<std::string, int> seen;
  for (const fs::path& path : args.inputs) {
    files.push_back(load_results(path));
    std::map<std::string, bool> here;
    for (const SampleRecord& r : files.back()) here[r.method] = true;
    for (const auto& [method, unused] : here) ++seen[method];
  }
  // A method name found in several files is qualified with the file path.
  std::vector<SampleRecord> records;
  for (std::size_t f = 0; f < files.size(); ++f) {
    for (SampleRecord& r : files[f]) {
      if (seen[r.method] > 1) r.method = args.inputs[f].string() + ":" + r.method;
      records.push_back(std::move(r));
    }
  }
  const auto summary = summarize(records);
  out << format_table(summary);
  if (!args.summary.empty()) write_summary(args.summary, summary);
  return kExitOk;
}

void add_override(CLI::App* app, RunArgs& args, const std::string& flag, const std::string& key,
                  const std::string& help) {
  app->add_option_function<std::string>(
         flag, [&args, key](const std::string& value) { args.overrides[key] = value; }, help)
      ->type_name("VALUE");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cross-lingual text quantification"};
  app.name("cltq");
  app.require_subcommand(1);

  SynthArgs synth_args;
  CLI::App* synth = app.add_subcommand("synth", "Write a synthetic bilingual benchmark and its configuration");
  synth->add_option("--seed", synth_args.seed, "Generator seed (required)")->type_name("U64");
  synth->add_option("--out", synth_args.out, "Output directory")->capture_default_str();
  synth->add_option("--labeled", synth_args.labeled, "Labeled source documents and target test pool size")
      ->capture_default_str();
  synth->add_option("--unlabeled", synth_args.unlabeled, "Unlabeled documents per language")->capture_default_str();
  synth->add_option("--vocab", synth_args.vocab, "Terms per language")->capture_default_str();

  RunArgs run_args;
  CLI::App* run = app.add_subcommand("run", "Run the full experiment described by a configuration file");
  run->add_option("--config", run_args.config, "Configuration file")->required();
  add_override(run, run_args, "--seed", "seed", "Base seed");
  add_override(run, run_args, "--jobs", "jobs", "Worker threads (0 = all cores)");
  add_override(run, run_args, "--projection", "projection", "scl, dci or both");
  add_override(run, run_args, "--methods", "methods", "Comma-separated subset of cc,pcc,acc,pacc");
  add_override(run, run_args, "--out", "out", "Output directory");
  add_override(run, run_args, "--pivots", "pivots", "Number of pivots m");
  add_override(run, run_args, "--min-support", "min_support", "Minimum pivot document frequency phi");
  add_override(run, run_args, "--drift-threshold", "drift_threshold", "Minimum pivot frequency ratio, 0 disables");
  add_override(run, run_args, "--oracle-budget", "oracle_budget", "Translation oracle calls (default 10 m)");
  add_override(run, run_args, "--dims", "dims", "SCL dimensionality k");
  add_override(run, run_args, "--folds-rates", "folds_rates", "Folds for tpr/fpr estimation");
  add_override(run, run_args, "--folds-grid", "folds_grid", "Folds for the C grid search");
  run->add_flag("--no-cache", run_args.no_cache, "Recompute every stage");
  run->add_flag("--quiet", run_args.quiet, "No progress output");

  ReportArgs report_args;
  CLI::App* report = app.add_subcommand("report", "Compare methods from one or more results files");
  report->add_option("results", report_args.inputs, "results.tsv files")->required();
  report->add_option("--summary", report_args.summary, "Also write the summary TSV here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (*synth) return cmd_synth(synth_args, out);
    if (*run) return cmd_run(run_args, out, err);
    return cmd_report(report_args, out);
  } catch (const StageError& e) {
    err << "error: " << e.what() << '\n';
    return e.input_problem() ? kExitConfig : kExitPipeline;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitPipeline;
  }
}

}  // namespace cltq::cli
