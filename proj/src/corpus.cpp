// Copyright 2026 The embalign Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "embalign/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>

namespace embalign {

WordId Vocabulary::add(std::string_view word) {
  auto [it, inserted] =
      index_.try_emplace(std::string(word), static_cast<WordId>(words_.size()));
  if (inserted) {
    words_.emplace_back(word);
    freq_.push_back(0);
  }
  ++freq_[it->second];
  return it->second;
}

std::optional<WordId> Vocabulary::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t Vocabulary::total_tokens() const {
  return std::accumulate(freq_.begin(), freq_.end(), std::uint64_t{0});
}

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  auto is_sep = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (pos < line.size()) {
    while (pos < line.size() && is_sep(line[pos])) ++pos;
    std::size_t start = pos;
    while (pos < line.size() && !is_sep(line[pos])) ++pos;
    if (pos > start) tokens.push_back(line.substr(start, pos - start));
  }
  return tokens;
}

namespace {

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<WordId> intern(std::string_view line, Vocabulary& vocab,
                           bool lowercase) {
  std::vector<WordId> ids;
  for (std::string_view tok : split_tokens(line))
    ids.push_back(lowercase ? vocab.add(ascii_lower(tok)) : vocab.add(tok));
  return ids;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(std::move(line));
  if (in.bad()) throw IoError("error reading " + path);
  return lines;
}

std::string join(const std::vector<WordId>& ids, const Vocabulary& vocab) {
  std::string out;
  for (WordId id : ids) {
    if (!out.empty()) out += ' ';
    out += vocab.word(id);
  }
  return out;
}

}  // namespace

ParallelCorpus ParallelCorpus::from_lines(const std::vector<std::string>& source,
                                          const std::vector<std::string>& target,
                                          const CorpusOptions& options) {
  if (source.size() != target.size())
    throw FormatError("parallel files differ in length: " +
                      std::to_string(source.size()) + " source lines vs " +
                      std::to_string(target.size()) + " target lines");
  ParallelCorpus corpus;
  corpus.report_.lines_read = source.size();
  for (std::size_t n = 0; n < source.size(); ++n) {
    // Check emptiness before interning so dropped lines leave no trace in
    // the vocabularies.
    if (split_tokens(source[n]).empty() || split_tokens(target[n]).empty()) {
      ++corpus.report_.pairs_dropped;
      continue;
    }
    SentencePair pair;
    pair.source = intern(source[n], corpus.source_vocab_, options.lowercase);
    pair.target = intern(target[n], corpus.target_vocab_, options.lowercase);
    corpus.pairs_.push_back(std::move(pair));
  }
  corpus.report_.pairs_kept = corpus.pairs_.size();
  return corpus;
}

ParallelCorpus ParallelCorpus::swapped() const {
  ParallelCorpus out;
  out.source_vocab_ = target_vocab_;
  out.target_vocab_ = source_vocab_;
  out.report_ = report_;
  out.pairs_.reserve(pairs_.size());
  for (const SentencePair& p : pairs_) out.pairs_.push_back({p.target, p.source});
  return out;
}

std::string ParallelCorpus::source_line(std::size_t index) const {
  return join(pairs_.at(index).source, source_vocab_);
}

std::string ParallelCorpus::target_line(std::size_t index) const {
  return join(pairs_.at(index).target, target_vocab_);
}

ParallelCorpus load_parallel_corpus(const std::string& source_path,
                                    const std::string& target_path,
                                    const CorpusOptions& options) {
  auto source = read_lines(source_path);
  auto target = read_lines(target_path);
  if (source.size() != target.size())
    throw FormatError(source_path + " has " + std::to_string(source.size()) +
                      " lines but " + target_path + " has " +
                      std::to_string(target.size()));
  return ParallelCorpus::from_lines(source, target, options);
}

bool CooccurrenceIndex::contains(WordId source, WordId target) const {
  const auto& row = rows_.at(source);
  return std::binary_search(row.begin(), row.end(), target);
}

std::size_t CooccurrenceIndex::pair_count() const {
  std::size_t n = 0;
  for (const auto& row : rows_) n += row.size();
  return n;
}

CooccurrenceIndex build_cooccurrence(const ParallelCorpus& corpus) {
  const std::size_t vs = corpus.source_vocab().size();
  std::vector<std::vector<WordId>> rows(vs);
  // Rows are compacted (sort + unique) whenever they double past their last
  // compacted size, keeping memory proportional to |Co(x)|.
  std::vector<std::size_t> compacted(vs, 0);
  auto compact = [](std::vector<WordId>& row) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  };

  std::vector<WordId> src, tgt;
  for (const SentencePair& pair : corpus.pairs()) {
    src = pair.source;
    tgt = pair.target;
    compact(src);
    compact(tgt);
    for (WordId x : src) {
      auto& row = rows[x];
      row.insert(row.end(), tgt.begin(), tgt.end());
      if (row.size() > 2 * compacted[x] + 64) {
        compact(row);
        compacted[x] = row.size();
      }
    }
  }
  for (auto& row : rows) {
    compact(row);
    row.shrink_to_fit();
  }
  return CooccurrenceIndex(std::move(rows), corpus.target_vocab().size());
}

}  // namespace embalign
