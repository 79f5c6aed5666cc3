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

#include "cltq/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "cltq/dci.hpp"
#include "cltq/learner.hpp"
#include "cltq/random.hpp"
#include "cltq/scl.hpp"
#include "cltq/vectorizer.hpp"

namespace cltq {
namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> items;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = s.find(',', start);
    const std::string_view item = trim(s.substr(start, comma == std::string_view::npos ? comma : comma - start));
    if (!item.empty()) items.push_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return items;
}

template <class T>
T parse_value(std::string_view key, std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw ConfigError("invalid value '" + std::string(text) + "' for " + std::string(key));
  }
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError("invalid boolean '" + std::string(text) + "' for " + std::string(key));
}

fs::path resolve(const fs::path& base, std::string_view value) {
  fs::path p{std::string(value)};
  return p.is_relative() && !base.empty() ? base / p : p;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void fingerprint_corpus(Fingerprint& fp, const Corpus& corpus) {
  fp.add_text(corpus.language).add_text(corpus.domain).add_u64(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    std::optional<Label> label;
    if (corpus.labels) label = (*corpus.labels)[i];
    fp.add_text(serialize_processed_line(corpus.documents[i], label));
  }
}

std::uint64_t fingerprint_inputs(const ExperimentInputs& in) {
  Fingerprint fp;
  for (const Corpus* c : {&in.source_labeled, &in.source_unlabeled, &in.target_unlabeled, &in.target_test}) {
    fingerprint_corpus(fp, *c);
  }
  for (const TermPair& p : in.dictionary) fp.add_text(p.source).add_text(p.target);
  return fp.value();
}

// Runs `body`, turning any failure into a StageError tagged with `stage`.
template <class Fn>
auto run_stage(const std::string& stage, bool input_stage, Fn&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const StageError&) {
    throw;
  } catch (const ConfigError& e) {
    throw StageError(stage, e.what(), true);
  } catch (const IoError& e) {
    throw StageError(stage, e.what(), input_stage);
  } catch (const std::exception& e) {
    throw StageError(stage, e.what(), input_stage);
  }
}

class Logger {
 public:
  explicit Logger(std::ostream* out) : out_(out), start_(std::chrono::steady_clock::now()) {}

  void operator()(const std::string& stage, const std::string& message) const {
    if (out_ == nullptr) return;
    const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    char buf[32];
    std::snprintf(buf, sizeof buf, "%8.1fs ", t);
    *out_ << buf << '[' << stage << "] " << message << std::endl;
  }

 private:
  std::ostream* out_;
  std::chrono::steady_clock::time_point start_;
};

// Write to a temporary name, then rename, so an interrupted run never leaves
// a truncated cache entry behind.
void write_atomically(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("cannot write '" + tmp.string() + "'");
    body(out);
    out.flush();
    if (!out) throw IoError("error while writing '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
}

void write_pivots(std::ostream& out, const std::vector<PivotPair>& pivots) {
  char buf[32];
  for (const PivotPair& p : pivots) {
    std::snprintf(buf, sizeof buf, "%.17g", p.mi_score);
    out << p.source_term << '\t' << p.target_term << '\t' << buf << '\n';
  }
}

std::vector<PivotPair> read_pivots(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::vector<PivotPair> pivots;
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t a = line.find('\t');
    const std::size_t b = a == std::string::npos ? a : line.find('\t', a + 1);
    if (b == std::string::npos) throw FormatError("corrupt pivot cache '" + path.string() + "'");
    pivots.push_back({line.substr(0, a), line.substr(a + 1, b - a - 1),
                      parse_value<double>("mi", std::string_view(line).substr(b + 1))});
  }
  return pivots;
}

struct TrainedModels {
  double hard_c = 0.0;
  double soft_c = 0.0;
  RateEstimates rates;
  double source_cv_accuracy = 0.0;
  LinearModel hard;
  LinearModel soft;
};

void write_vector(std::ostream& out, const char* key, const Eigen::VectorXd& v) {
  char buf[32];
  out << key;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, " %.17g", v(i));
    out << buf;
  }
  out << '\n';
}

void write_models(std::ostream& out, const TrainedModels& m) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "c %.17g %.17g\nrates %.17g %.17g %.17g %.17g\ncv_accuracy %.17g\nbias %.17g %.17g\n",
                m.hard_c, m.soft_c, m.rates.tpr_hard, m.rates.fpr_hard, m.rates.tpr_soft, m.rates.fpr_soft,
                m.source_cv_accuracy, m.hard.bias, m.soft.bias);
  out << buf;
  write_vector(out, "hard_weights", m.hard.weights);
  write_vector(out, "soft_weights", m.soft.weights);
}

std::vector<double> read_numbers(std::istream& in, const std::string& key, const fs::path& path) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("corrupt model cache '" + path.string() + "'");
  std::istringstream fields(line);
  std::string word;
  fields >> word;
  if (word != key) throw FormatError("corrupt model cache '" + path.string() + "'");
  std::vector<double> values;
  while (fields >> word) values.push_back(parse_value<double>(key, word));
  return values;
}

TrainedModels read_models(const fs::path& path, const TrainConfig& hard_config, const TrainConfig& soft_config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  TrainedModels m;
  const auto c = read_numbers(in, "c", path);
  const auto rates = read_numbers(in, "rates", path);
  const auto acc = read_numbers(in, "cv_accuracy", path);
  const auto bias = read_numbers(in, "bias", path);
  const auto hw = read_numbers(in, "hard_weights", path);
  const auto sw = read_numbers(in, "soft_weights", path);
  if (c.size() != 2 || rates.size() != 4 || acc.size() != 1 || bias.size() != 2 || hw.size() != sw.size()) {
    throw FormatError("corrupt model cache '" + path.string() + "'");
  }
  m.hard_c = c[0];
  m.soft_c = c[1];
  m.rates = {rates[0], rates[1], rates[2], rates[3]};
  m.source_cv_accuracy = acc[0];
  auto fill = [](LinearModel& model, const TrainConfig& config, double c_value, double b,
                 const std::vector<double>& w) {
    model.weights = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
    model.bias = b;
    model.loss = config.loss;
    model.kind = config.loss == Loss::kHinge ? ClassifierKind::kHard : ClassifierKind::kSoft;
    model.reg_strength = c_value;
    model.elastic_alpha = config.elastic_alpha;
    model.converged = true;
  };
  fill(m.hard, hard_config, m.hard_c, bias[0], hw);
  fill(m.soft, soft_config, m.soft_c, bias[1], sw);
  return m;
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

Corpus load_input_corpus(const fs::path& path, const char* role, std::string language) {
  if (path.empty()) throw ConfigError(std::string("no path configured for ") + role);
  if (!fs::exists(path)) throw IoError(std::string(role) + " file not found: '" + path.string() + "'");
  return load_corpus(path, std::move(language), role);
}

}  // namespace

std::string method_label(ProjectionMethod projection, QuantMethod method) {
  return upper(projection_method_name(projection)) + "+" + std::string(quant_method_name(method));
}

void apply_setting(ExperimentConfig& c, std::string_view key, std::string_view value, const fs::path& base_dir) {
  value = trim(value);
  if (key == "source_labeled") {
    c.source_labeled = resolve(base_dir, value);
  } else if (key == "source_unlabeled") {
    c.source_unlabeled = resolve(base_dir, value);
  } else if (key == "target_unlabeled") {
    c.target_unlabeled = resolve(base_dir, value);
  } else if (key == "target_test") {
    c.target_test = resolve(base_dir, value);
  } else if (key == "dictionary") {
    c.dictionary = resolve(base_dir, value);
  } else if (key == "out") {
    c.out_dir = resolve(base_dir, value);
  } else if (key == "projection") {
    if (value == "both") {
      c.projections = {ProjectionMethod::kScl, ProjectionMethod::kDci};
    } else if (value == "scl") {
      c.projections = {ProjectionMethod::kScl};
    } else if (value == "dci") {
      c.projections = {ProjectionMethod::kDci};
    } else {
      throw ConfigError("projection must be scl, dci or both, got '" + std::string(value) + "'");
    }
  } else if (key == "methods") {
    c.methods.clear();
    for (std::string_view item : split_list(value)) {
      const auto m = parse_quant_method(item);
      if (!m) throw ConfigError("unknown quantification method '" + std::string(item) + "'");
      if (std::find(c.methods.begin(), c.methods.end(), *m) == c.methods.end()) c.methods.push_back(*m);
    }
  } else if (key == "pivots") {
    c.pivots.m = parse_value<std::size_t>(key, value);
  } else if (key == "min_support") {
    c.pivots.phi = parse_value<std::size_t>(key, value);
  } else if (key == "drift_threshold") {
    c.pivots.drift_threshold = parse_value<double>(key, value);
  } else if (key == "oracle_budget") {
    c.oracle_budget = parse_value<std::size_t>(key, value);
  } else if (key == "dims") {
    c.dims = parse_value<std::size_t>(key, value);
  } else if (key == "elastic_alpha") {
    c.elastic_alpha = parse_value<double>(key, value);
  } else if (key == "min_df") {
    c.min_df = parse_value<std::uint32_t>(key, value);
  } else if (key == "folds_grid") {
    c.folds_grid = parse_value<std::size_t>(key, value);
  } else if (key == "folds_rates") {
    c.folds_rates = parse_value<std::size_t>(key, value);
  } else if (key == "levels") {
    c.levels.clear();
    for (std::string_view item : split_list(value)) c.levels.push_back(parse_value<double>(key, item));
  } else if (key == "samples_per_level") {
    c.samples_per_level = parse_value<std::size_t>(key, value);
  } else if (key == "sample_size") {
    c.sample_size = parse_value<std::size_t>(key, value);
  } else if (key == "seed") {
    c.seed = parse_value<std::uint64_t>(key, value);
  } else if (key == "jobs") {
    c.jobs = parse_value<std::size_t>(key, value);
  } else if (key == "center_projected") {
    c.center_projected = parse_bool(key, value);
  } else if (key == "cache") {
    c.use_cache = parse_bool(key, value);
  } else {
    throw ConfigError("unknown configuration key '" + std::string(key) + "'");
  }
}

ExperimentConfig parse_config(std::istream& in, const fs::path& base_dir) {
  ExperimentConfig config;
  std::set<std::string, std::less<>> seen;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string_view text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const std::size_t eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(number) + ": expected 'key = value'");
    }
    const std::string key(trim(text.substr(0, eq)));
    if (!seen.insert(key).second) {
      throw ConfigError("line " + std::to_string(number) + ": '" + key + "' is set twice");
    }
    try {
      apply_setting(config, key, text.substr(eq + 1), base_dir);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(number) + ": " + e.what());
    }
  }
  return config;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open configuration file '" + path.string() + "'");
  try {
    return parse_config(in, path.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void write_config(const ExperimentConfig& c, std::ostream& out, const fs::path& base_dir) {
  auto rel = [&](const fs::path& p) {
    if (base_dir.empty() || p.empty()) return p.generic_string();
    const fs::path r = p.lexically_relative(base_dir);
    return (r.empty() ? p : r).generic_string();
  };
  out << "source_labeled = " << rel(c.source_labeled) << '\n'
      << "source_unlabeled = " << rel(c.source_unlabeled) << '\n'
      << "target_unlabeled = " << rel(c.target_unlabeled) << '\n'
      << "target_test = " << rel(c.target_test) << '\n'
      << "dictionary = " << rel(c.dictionary) << '\n';
  out << "projection = ";
  if (c.projections.size() == 1) {
    out << projection_method_name(c.projections.front());
  } else {
    out << "both";
  }
  out << "\nmethods = ";
  for (std::size_t i = 0; i < c.methods.size(); ++i) {
    out << (i ? "," : "") << upper(quant_method_name(c.methods[i]));
  }
  out << "\npivots = " << c.pivots.m << "\nmin_support = " << c.pivots.phi
      << "\ndrift_threshold = " << format_double(c.pivots.drift_threshold) << '\n';
  if (c.oracle_budget) out << "oracle_budget = " << *c.oracle_budget << '\n';
  out << "dims = " << c.dims << "\nelastic_alpha = " << format_double(c.elastic_alpha) << "\nmin_df = " << c.min_df
      << "\ncenter_projected = " << (c.center_projected ? "true" : "false") << "\nfolds_grid = " << c.folds_grid << "\nfolds_rates = " << c.folds_rates << "\nlevels = ";
  for (std::size_t i = 0; i < c.levels.size(); ++i) out << (i ? "," : "") << format_double(c.levels[i]);
  out << "\nsamples_per_level = " << c.samples_per_level << "\nsample_size = " << c.sample_size
      << "\nseed = " << c.seed << "\njobs = " << c.jobs << "\nout = " << rel(c.out_dir) << '\n';
}

void validate_config(const ExperimentConfig& c) {
  auto require = [](bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
  };
  require(c.pivots.m >= 1, "pivots must be at least 1");
  require(c.pivots.phi >= 1, "min_support must be at least 1");
  require(c.pivots.drift_threshold >= 0.0 && c.pivots.drift_threshold <= 1.0, "drift_threshold must lie in [0, 1]");
  require(c.effective_budget() >= 1, "oracle_budget must be at least 1");
  require(c.dims >= 1 && c.dims <= c.pivots.m, "dims must lie in [1, pivots]");
  require(c.elastic_alpha >= 0.0 && c.elastic_alpha <= 1.0, "elastic_alpha must lie in [0, 1]");
  require(c.min_df >= 1 && c.min_df <= c.pivots.phi, "min_df must lie in [1, min_support]");
  require(c.folds_grid >= 2, "folds_grid must be at least 2");
  require(c.folds_rates >= 2, "folds_rates must be at least 2");
  require(!c.levels.empty(), "levels must not be empty");
  for (double p : c.levels) require(p >= 0.0 && p <= 1.0, "prevalence levels must lie in [0, 1]");
  require(c.samples_per_level >= 1, "samples_per_level must be at least 1");
  require(c.sample_size >= 1, "sample_size must be at least 1");
  require(!c.projections.empty(), "no projection selected");
  require(!c.methods.empty(), "no quantification method selected");
}

ExperimentInputs load_inputs(const ExperimentConfig& config) {
  return run_stage("ingest", true, [&] {
    ExperimentInputs in;
    in.source_labeled = load_input_corpus(config.source_labeled, "source_labeled", "source");
    in.source_unlabeled = load_input_corpus(config.source_unlabeled, "source_unlabeled", "source");
    in.target_unlabeled = load_input_corpus(config.target_unlabeled, "target_unlabeled", "target");
    in.target_test = load_input_corpus(config.target_test, "target_test", "target");
    if (config.dictionary.empty()) throw ConfigError("no path configured for dictionary");
    if (!fs::exists(config.dictionary)) {
      throw IoError("dictionary file not found: '" + config.dictionary.string() + "'");
    }
    in.dictionary = load_dictionary(config.dictionary);
    in.fingerprint = fingerprint_inputs(in);
    return in;
  });
}

ExperimentInputs make_inputs(SyntheticBilingual data) {
  ExperimentInputs in;
  in.source_labeled = std::move(data.source_labeled);
  in.source_unlabeled = std::move(data.source_unlabeled);
  in.target_unlabeled = std::move(data.target_unlabeled);
  in.target_test = std::move(data.target_test);
  in.dictionary = std::move(data.dictionary);
  in.fingerprint = fingerprint_inputs(in);
  return in;
}

ExperimentResult run_experiment(const ExperimentConfig& config, std::ostream* log) {
  run_stage("config", true, [&] { validate_config(config); });
  return run_experiment(config, load_inputs(config), log);
}

ExperimentResult run_experiment(const ExperimentConfig& config, const ExperimentInputs& in, std::ostream* log) {
  const Logger say(log);
  run_stage("config", true, [&] { validate_config(config); });
  const fs::path cache_root = config.out_dir / "cache";

  run_stage("ingest", true, [&] {
    for (const Corpus* c : {&in.source_labeled, &in.source_unlabeled, &in.target_unlabeled, &in.target_test}) {
      c->validate();
    }
    if (!in.source_labeled.labeled()) throw FormatError("source_labeled corpus carries no labels");
    if (!in.target_test.labeled()) throw FormatError("target_test corpus carries no labels");
    say("ingest", std::to_string(in.source_labeled.size()) + " labeled source, " +
                      std::to_string(in.source_unlabeled.size()) + " + " + std::to_string(in.target_unlabeled.size()) +
                      " unlabeled, " + std::to_string(in.target_test.size()) + " target test documents");
  });

  // Vocabularies: source from its labeled and unlabeled text, target from its
  // unlabeled text only, so the test pool never shapes the features.
  Vocabulary source_vocab;
  Vocabulary target_vocab;
  std::vector<SparseVector> source_docs;
  std::vector<SparseVector> test_docs;
  std::vector<SparseVector> source_unlabeled_docs;
  std::vector<SparseVector> target_unlabeled_docs;
  run_stage("vectorize", false, [&] {
    source_vocab = build_vocabulary({&in.source_labeled, &in.source_unlabeled}, config.min_df);
    target_vocab = build_vocabulary({&in.target_unlabeled}, config.min_df);
    source_docs = tfidf_vectorize(in.source_labeled, source_vocab);
    test_docs = tfidf_vectorize(in.target_test, target_vocab);
    if (config.center_projected) {
      source_unlabeled_docs = tfidf_vectorize(in.source_unlabeled, source_vocab);
      target_unlabeled_docs = tfidf_vectorize(in.target_unlabeled, target_vocab);
    }
    say("vectorize", "vocabularies: " + std::to_string(source_vocab.size()) + " source, " +
                         std::to_string(target_vocab.size()) + " target terms");
  });

  Fingerprint pivot_fp;
  pivot_fp.add_u64(in.fingerprint)
      .add_u64(config.pivots.m)
      .add_u64(config.pivots.phi)
      .add_double(config.pivots.drift_threshold)
      .add_u64(config.effective_budget());
  const std::uint64_t pivot_key = pivot_fp.value();
  const std::vector<PivotPair> pivots = run_stage("pivots", false, [&] {
    const fs::path cached = cache_root / hex(pivot_key) / "pivots.tsv";
    if (config.use_cache && fs::exists(cached)) {
      auto p = read_pivots(cached);
      say("pivots", "loaded " + std::to_string(p.size()) + " pivots from cache");
      return p;
    }
    TranslationOracle oracle(in.dictionary, config.effective_budget());
    auto p = select_pivots(in.source_labeled, in.source_unlabeled, in.target_unlabeled, oracle, config.pivots);
    say("pivots", "selected " + std::to_string(p.size()) + " pivots with " + std::to_string(oracle.calls_used()) +
                      " oracle calls");
    if (config.use_cache) write_atomically(cached, [&](std::ostream& out) { write_pivots(out, p); });
    return p;
  });

  // Every method sees the same samples, whatever the projection.
  ProtocolOptions protocol;
  protocol.levels = config.levels;
  protocol.samples_per_level = config.samples_per_level;
  protocol.sample_size = config.sample_size;
  protocol.base_seed = derive_seed(config.seed, {3});
  protocol.jobs = config.jobs;

  ExperimentResult result;
  std::vector<std::vector<std::uint8_t>> all_decisions;
  std::vector<std::vector<double>> all_posteriors;
  std::vector<std::unique_ptr<Quantifier>> quantifiers;
  std::vector<ProtocolEntry> entries;
  all_decisions.reserve(config.projections.size());
  all_posteriors.reserve(config.projections.size());

  for (ProjectionMethod method : config.projections) {
    const std::string name = upper(projection_method_name(method));
    Fingerprint theta_fp;
    theta_fp.add_u64(pivot_key).add_u64(config.min_df).add_text(projection_method_name(method));
    if (method == ProjectionMethod::kScl) theta_fp.add_u64(config.dims).add_u64(config.seed);
    const std::uint64_t theta_key = theta_fp.value();

    const CrossLingualProjection theta = run_stage("project", false, [&] {
      const fs::path dir = cache_root / hex(theta_key);
      if (config.use_cache && fs::exists(dir / "theta_source.txt") && fs::exists(dir / "theta_target.txt")) {
        CrossLingualProjection p{read_projection(dir / "theta_source.txt"), read_projection(dir / "theta_target.txt")};
        say("project", name + ": loaded theta from cache");
        return p;
      }
      CrossLingualProjection p;
      if (method == ProjectionMethod::kScl) {
        scl::SclOptions options;
        options.dims = static_cast<Eigen::Index>(config.dims);
        options.auxiliary.jobs = config.jobs;
        options.svd.seed = derive_seed(config.seed, {4});
        p = scl::build_projection(in.source_unlabeled, in.target_unlabeled, pivots, source_vocab, target_vocab,
                                  options);
      } else {
        p = dci::build_projection(in.source_unlabeled, in.target_unlabeled, pivots, source_vocab, target_vocab);
      }
      say("project", name + ": theta is " + std::to_string(p.source.rows()) + "+" + std::to_string(p.target.rows()) +
                         " x " + std::to_string(p.dims()));
      if (config.use_cache) {
        write_atomically(dir / "theta_source.txt", [&](std::ostream& out) { write_projection(p.source, out); });
        write_atomically(dir / "theta_target.txt", [&](std::ostream& out) { write_projection(p.target, out); });
      }
      return p;
    });

    Eigen::MatrixXd x_source = project_all(source_docs, theta.source);
    Eigen::MatrixXd x_test = project_all(test_docs, theta.target);
    if (config.center_projected) {
      // Each language is centered on its own unlabeled corpus, never on the
      // test pool, so no sample statistic leaks into the features.
      x_source.rowwise() -= mean_projection(source_unlabeled_docs, theta.source);
      x_test.rowwise() -= mean_projection(target_unlabeled_docs, theta.target);
    }
    const std::vector<Label>& labels = *in.source_labeled.labels;

    // The hard classifier is an Elastic Net SVM for SCL and a plain SVM for
    // DCI; the soft one is logistic regression for both.
    TrainConfig hard_config;
    hard_config.loss = Loss::kHinge;
    hard_config.elastic_alpha = method == ProjectionMethod::kScl ? config.elastic_alpha : 0.0;
    TrainConfig soft_config;
    soft_config.loss = Loss::kLogistic;

    Fingerprint model_fp;
    model_fp.add_u64(theta_key)
        .add_double(hard_config.elastic_alpha)
        .add_u64(config.center_projected ? 1 : 0)
        .add_u64(config.folds_grid)
        .add_u64(config.folds_rates)
        .add_u64(config.seed);
    const TrainedModels models = run_stage("train", false, [&] {
      const fs::path cached = cache_root / hex(model_fp.value()) / "models.txt";
      if (config.use_cache && fs::exists(cached)) {
        say("train", name + ": loaded models from cache");
        return read_models(cached, hard_config, soft_config);
      }
      const std::uint64_t grid_seed = derive_seed(config.seed, {1, static_cast<std::uint64_t>(method)});
      const std::uint64_t rate_seed = derive_seed(config.seed, {2, static_cast<std::uint64_t>(method)});
      TrainedModels m;
      m.hard_c = grid_search_c(x_source, labels, hard_config, config.folds_grid, grid_seed, config.jobs).best_c;
      m.soft_c = grid_search_c(x_source, labels, soft_config, config.folds_grid, grid_seed, config.jobs).best_c;
      hard_config.c = m.hard_c;
      soft_config.c = m.soft_c;
      m.hard = train(x_source, labels, hard_config);
      m.soft = train(x_source, labels, soft_config);
      const CvPredictions cv =
          cross_val_predictions(x_source, labels, hard_config, soft_config, config.folds_rates, rate_seed, config.jobs);
      m.rates = estimate_rates(cv);
      std::size_t correct = 0;
      for (std::size_t i = 0; i < labels.size(); ++i) correct += cv.hard[i] == static_cast<std::uint8_t>(labels[i]);
      m.source_cv_accuracy = static_cast<double>(correct) / static_cast<double>(labels.size());
      if (config.use_cache) write_atomically(cached, [&](std::ostream& out) { write_models(out, m); });
      return m;
    });
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s: C hard %g soft %g, cv accuracy %.4f, tpr %.4f fpr %.4f (soft %.4f %.4f)",
                  name.c_str(), models.hard_c, models.soft_c, models.source_cv_accuracy, models.rates.tpr_hard,
                  models.rates.fpr_hard, models.rates.tpr_soft, models.rates.fpr_soft);
    say("train", buf);

    ProjectionRun run;
    run.method = method;
    run.pivots = pivots;
    run.hard_c = models.hard_c;
    run.soft_c = models.soft_c;
    run.rates = models.rates;
    run.source_cv_accuracy = models.source_cv_accuracy;

    run_stage("quantify", false, [&] {
      std::vector<std::uint8_t> decisions(test_docs.size());
      std::vector<double> posteriors(test_docs.size());
      std::size_t correct = 0;
      for (Eigen::Index i = 0; i < x_test.rows(); ++i) {
        const Eigen::VectorXd row = x_test.row(i).transpose();
        decisions[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(predict_hard(models.hard, row));
        posteriors[static_cast<std::size_t>(i)] = predict_soft(models.soft, row);
        correct += decisions[static_cast<std::size_t>(i)] ==
                   static_cast<std::uint8_t>((*in.target_test.labels)[static_cast<std::size_t>(i)]);
      }
      run.target_accuracy = static_cast<double>(correct) / static_cast<double>(test_docs.size());
      char line[96];
      std::snprintf(line, sizeof line, "%s: target test accuracy %.4f", name.c_str(), run.target_accuracy);
      say("quantify", line);
      all_decisions.push_back(std::move(decisions));
      all_posteriors.push_back(std::move(posteriors));
      for (QuantMethod q : config.methods) {
        quantifiers.push_back(make_quantifier(q, models.rates));
        entries.push_back({method_label(method, q), quantifiers.back().get(), all_decisions.back(),
                           all_posteriors.back()});
      }
    });
    result.projections.push_back(std::move(run));
  }

  result.results_path = config.out_dir / "results.tsv";
  result.summary_path = config.out_dir / "summary.tsv";
  run_stage("evaluate", false, [&] {
    result.records = run_protocol(entries, *in.target_test.labels, protocol);
    fs::create_directories(config.out_dir);
    write_results(result.results_path, result.records);
    say("evaluate", std::to_string(result.records.size()) + " records written to " + result.results_path.string());
  });
  run_stage("report", false, [&] {
    // The summary is derived from the file, so it can always be recomputed.
    result.summary = summarize(load_results(result.results_path));
    write_summary(result.summary_path, result.summary);
    say("report", "summary written to " + result.summary_path.string());
  });
  return result;
}

}  // namespace cltq
