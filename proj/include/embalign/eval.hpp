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

#ifndef EMBALIGN_EVAL_HPP
#define EMBALIGN_EVAL_HPP

#include <cstddef>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "embalign/alignment.hpp"

namespace embalign {

/// Sure and possible links of one sentence; sure is a subset of possible.
struct GoldSentence {
  std::set<Link> sure;
  std::set<Link> possible;
};

struct GoldAlignment {
  std::vector<GoldSentence> sentences;
  std::size_t size() const { return sentences.size(); }
  /// Adds a link, keeping sure links inside the possible set.
  void add(std::size_t sentence, Link link, bool sure);
};

enum class Indexing { kZero, kOne };

/// Lines "sentence src tgt [S|P]"; a missing label means S. With one-based
/// indexing all three numbers are shifted down by one. The sentence count is
/// one past the largest sentence id, or `min_sentences` if larger.
GoldAlignment read_gold(std::istream& in, Indexing indexing,
                        const std::string& source_name = "<stream>",
                        std::size_t min_sentences = 0);
GoldAlignment load_gold(const std::string& path, Indexing indexing,
                        std::size_t min_sentences = 0);

struct AlignmentCounts {
  std::size_t predicted = 0;       // |A|
  std::size_t sure = 0;            // |S|
  std::size_t possible = 0;        // |P|
  std::size_t hit_sure = 0;        // |A n S|
  std::size_t hit_possible = 0;    // |A n P|
  void add(const AlignmentCounts& other);
};

struct Score {
  double aer = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  AlignmentCounts counts;
};

AlignmentCounts count_links(const SentenceAlignment& pred, const GoldSentence& gold);

/// AER = 1 - (|A n S| + |A n P|) / (|A| + |S|), precision = |A n P| / |A|,
/// recall = |A n S| / |S|. With |A| = |S| = 0 the AER is 0 and precision
/// and recall are 1.
Score score_from_counts(const AlignmentCounts& counts);

/// Corpus-level scores over summed counts. Throws std::invalid_argument when
/// the sentence counts differ.
Score score(const AlignmentSet& pred, const GoldAlignment& gold);

/// "AER=0.1234 P=0.9000 R=0.8000 |A|=10 |S|=12"
std::string format_score(const Score& s);

/// One TSV row per sentence: index, |A|, |S|, |P|, |A n S|, |A n P|, AER.
void write_sentence_scores(std::ostream& out, const AlignmentSet& pred,
                           const GoldAlignment& gold);

}  // namespace embalign

#endif  // EMBALIGN_EVAL_HPP
