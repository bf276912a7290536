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

#ifndef EMBALIGN_CORPUS_HPP
#define EMBALIGN_CORPUS_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace embalign {

using WordId = std::uint32_t;

/// Raised for malformed input files (bad headers, mismatched line counts).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a file cannot be opened or read.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense word <-> id mapping with per-id token counts.
class Vocabulary {
 public:
  /// Returns the id for `word`, assigning the next dense id if new, and
  /// increments its frequency.
  WordId add(std::string_view word);

  std::optional<WordId> find(std::string_view word) const;
  const std::string& word(WordId id) const { return words_.at(id); }
  std::uint64_t freq(WordId id) const { return freq_.at(id); }
  std::size_t size() const { return words_.size(); }
  std::uint64_t total_tokens() const;

  const std::vector<std::string>& words() const { return words_; }

 private:
  std::unordered_map<std::string, WordId> index_;
  std::vector<std::string> words_;
  std::vector<std::uint64_t> freq_;
};

struct SentencePair {
  std::vector<WordId> source;
  std::vector<WordId> target;
};

struct LoadReport {
  std::size_t lines_read = 0;
  std::size_t pairs_kept = 0;
  std::size_t pairs_dropped = 0;  // at least one side had no tokens
};

struct CorpusOptions {
  bool lowercase = false;
};

/// Tokenized bitext over integer vocabularies. Immutable once built.
class ParallelCorpus {
 public:
  ParallelCorpus() = default;

  /// Builds a corpus from in-memory lines. Throws FormatError when the sides
  /// have different line counts.
  static ParallelCorpus from_lines(const std::vector<std::string>& source,
                                   const std::vector<std::string>& target,
                                   const CorpusOptions& options = {});

  const std::vector<SentencePair>& pairs() const { return pairs_; }
  const Vocabulary& source_vocab() const { return source_vocab_; }
  const Vocabulary& target_vocab() const { return target_vocab_; }
  const LoadReport& report() const { return report_; }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }

  /// The same bitext with the two sides exchanged; vocabularies and
  /// frequencies move with their side.
  ParallelCorpus swapped() const;

  /// Space-joined tokens of one side of pair `index`.
  std::string source_line(std::size_t index) const;
  std::string target_line(std::size_t index) const;

 private:
  std::vector<SentencePair> pairs_;
  Vocabulary source_vocab_;
  Vocabulary target_vocab_;
  LoadReport report_;
};

/// Reads two parallel files, one sentence per line. Throws IoError when a
/// file cannot be read and FormatError on unequal line counts.
ParallelCorpus load_parallel_corpus(const std::string& source_path,
                                    const std::string& target_path,
                                    const CorpusOptions& options = {});

/// Splits on ASCII spaces (and tabs/CR), discarding empty tokens.
std::vector<std::string_view> split_tokens(std::string_view line);

/// Co(x): sorted target ids that share at least one sentence pair with
/// source id x.
class CooccurrenceIndex {
 public:
  CooccurrenceIndex() = default;
  CooccurrenceIndex(std::vector<std::vector<WordId>> rows,
                    std::size_t target_vocab_size)
      : rows_(std::move(rows)), target_vocab_size_(target_vocab_size) {}

  const std::vector<WordId>& targets(WordId source) const {
    return rows_.at(source);
  }
  bool contains(WordId source, WordId target) const;
  std::size_t source_count() const { return rows_.size(); }
  std::size_t target_vocab_size() const { return target_vocab_size_; }
  std::size_t pair_count() const;

 private:
  std::vector<std::vector<WordId>> rows_;
  std::size_t target_vocab_size_ = 0;
};

CooccurrenceIndex build_cooccurrence(const ParallelCorpus& corpus);

}  // namespace embalign

#endif  // EMBALIGN_CORPUS_HPP
