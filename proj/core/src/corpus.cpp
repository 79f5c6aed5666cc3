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

#include "cltq/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "cltq/error.hpp"

namespace cltq {
namespace {

constexpr std::string_view kLabelField = "#label#";

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; }

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

}  // namespace

std::string_view label_name(Label label) {
  return label == Label::kPositive ? "positive" : "negative";
}

Document::Document(std::string id, std::vector<TermCount> terms)
    : id_(std::move(id)), terms_(std::move(terms)) {
  std::sort(terms_.begin(), terms_.end(),
            [](const TermCount& a, const TermCount& b) { return a.term < b.term; });
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].term.empty()) throw Error("document '" + id_ + "': empty term");
    if (terms_[i].count == 0) {
      throw Error("document '" + id_ + "': term '" + terms_[i].term + "' has count 0");
    }
    if (i > 0 && terms_[i].term == terms_[i - 1].term) {
      throw Error("document '" + id_ + "': duplicate term '" + terms_[i].term + "'");
    }
  }
}

std::uint32_t Document::count(std::string_view term) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), term,
                             [](const TermCount& t, std::string_view key) { return t.term < key; });
  return (it != terms_.end() && it->term == term) ? it->count : 0;
}

std::size_t Corpus::count(Label label) const {
  if (!labels) return 0;
  return static_cast<std::size_t>(std::count(labels->begin(), labels->end(), label));
}

void Corpus::validate() const {
  if (language.empty()) throw FormatError("corpus language tag is empty");
  if (domain.empty()) throw FormatError("corpus domain tag is empty");
  if (labels && labels->size() != documents.size()) {
    throw FormatError("corpus has " + std::to_string(documents.size()) + " documents but " +
                      std::to_string(labels->size()) + " labels");
  }
}

ParsedLine parse_processed_line(std::string_view line, std::size_t line_number, std::string id) {
  const auto fields = split_fields(line);
  ParsedLine parsed;
  std::vector<TermCount> terms;
  terms.reserve(fields.size());
  for (std::size_t f = 0; f < fields.size(); ++f) {
    const std::string_view field = fields[f];
    const std::size_t colon = field.rfind(':');
    if (colon == std::string_view::npos) {
      throw ParseError(line_number, "field '" + std::string(field) + "' has no ':'");
    }
    const std::string_view token = field.substr(0, colon);
    const std::string_view value = field.substr(colon + 1);
    if (token == kLabelField) {
      if (f + 1 != fields.size()) throw ParseError(line_number, "#label# must be the last field");
      if (value == "positive") {
        parsed.label = Label::kPositive;
      } else if (value == "negative") {
        parsed.label = Label::kNegative;
      } else {
        throw ParseError(line_number, "unknown label '" + std::string(value) + "'");
      }
      continue;
    }
    if (token.empty()) throw ParseError(line_number, "empty token in field '" + std::string(field) + "'");
    std::uint32_t count = 0;
    const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), count);
    if (ec != std::errc() || end != value.data() + value.size() || count < 1) {
      throw ParseError(line_number, "malformed count in field '" + std::string(field) + "'");
    }
    terms.push_back({std::string(token), count});
  }
  if (terms.empty()) throw ParseError(line_number, "empty document");
  try {
    parsed.document = Document(std::move(id), std::move(terms));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(line_number, e.what());
  }
  return parsed;
}

std::string serialize_processed_line(const Document& document, std::optional<Label> label) {
  std::string out;
  for (const TermCount& t : document.terms()) {
    if (!out.empty()) out += ' ';
    out += t.term;
    out += ':';
    out += std::to_string(t.count);
  }
  if (label) {
    out += ' ';
    out += kLabelField;
    out += ':';
    out += label_name(*label);
  }
  return out;
}

Corpus read_corpus(std::istream& in, std::string language, std::string domain) {
  Corpus corpus;
  corpus.language = std::move(language);
  corpus.domain = std::move(domain);
  std::vector<Label> labels;
  std::size_t labeled_lines = 0;
  std::size_t first_unlabeled = 0;
  std::size_t first_labeled = 0;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    ParsedLine parsed = parse_processed_line(line, line_number, std::to_string(line_number));
    if (parsed.label) {
      ++labeled_lines;
      if (first_labeled == 0) first_labeled = line_number;
      labels.push_back(*parsed.label);
    } else if (first_unlabeled == 0) {
      first_unlabeled = line_number;
    }
    corpus.documents.push_back(std::move(parsed.document));
  }
  if (corpus.documents.empty()) throw FormatError("corpus file is empty");
  if (labeled_lines == corpus.documents.size()) {
    corpus.labels = std::move(labels);
  } else if (labeled_lines != 0) {
    throw FormatError("mixed labeling: line " + std::to_string(first_labeled) +
                      " is labeled but line " + std::to_string(first_unlabeled) + " is not");
  }
  corpus.validate();
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path, std::string language, std::string domain) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus file '" + path.string() + "'");
  try {
    return read_corpus(in, std::move(language), std::move(domain));
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path.string() + ": " + e.detail());
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_corpus(const Corpus& corpus, std::ostream& out) {
  corpus.validate();
  for (std::size_t i = 0; i < corpus.documents.size(); ++i) {
    std::optional<Label> label;
    if (corpus.labels) label = (*corpus.labels)[i];
    out << serialize_processed_line(corpus.documents[i], label) << '\n';
  }
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write corpus file '" + path.string() + "'");
  write_corpus(corpus, out);
  if (!out) throw IoError("error while writing '" + path.string() + "'");
}

std::vector<TermPair> read_dictionary(std::istream& in) {
  std::vector<TermPair> pairs;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw ParseError(line_number, "expected exactly one TAB separating source and target terms");
    }
    TermPair pair{line.substr(0, tab), line.substr(tab + 1)};
    if (pair.source.empty() || pair.target.empty()) throw ParseError(line_number, "empty term");
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

std::vector<TermPair> load_dictionary(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dictionary file '" + path.string() + "'");
  return read_dictionary(in);
}

void write_dictionary(std::span<const TermPair> dictionary, std::ostream& out) {
  for (const TermPair& p : dictionary) out << p.source << '\t' << p.target << '\n';
}

void write_dictionary(std::span<const TermPair> dictionary, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write dictionary file '" + path.string() + "'");
  write_dictionary(dictionary, out);
  if (!out) throw IoError("error while writing '" + path.string() + "'");
}

}  // namespace cltq
