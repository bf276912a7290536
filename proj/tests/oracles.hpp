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

// Brute-force reference computations. None of these call into the
// implementation paths they are compared against: alignments are enumerated
// exhaustively and transition probabilities are rebuilt from their
// definitions.

#ifndef EMBALIGN_TESTS_ORACLES_HPP
#define EMBALIGN_TESTS_ORACLES_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "embalign/aligner.hpp"
#include "embalign/alignment.hpp"
#include "embalign/corpus.hpp"
#include "embalign/embedding.hpp"

namespace oracle {

using embalign::WordId;

using PairCounts = std::map<std::pair<WordId, WordId>, double>;

struct Model1Enumeration {
  PairCounts counts;                         // (source id or NULL, target id)
  std::vector<std::vector<double>> gamma;    // l x (m+1), column 0 NULL
  double loglik = 0.0;
};

/// Sums over all (m+1)^l alignments of one pair.
Model1Enumeration model1(const embalign::SentencePair& pair,
                         const embalign::TranslationTable& table);

struct HmmEnumeration {
  std::vector<std::vector<double>> gamma;        // l x 2m
  std::vector<std::vector<double>> transitions;  // m x m effective jumps
  PairCounts counts;
  double loglik = 0.0;
  std::vector<std::optional<std::size_t>> best_path;
};

/// Sums over all (2m)^l state sequences of one pair.
HmmEnumeration hmm(const embalign::SentencePair& pair,
                   const embalign::TranslationTable& table,
                   const embalign::HmmParams& params);

/// Cosine computed with a fixed left-to-right reduction.
double cosine(std::span<const double> a, std::span<const double> b);

/// Full sort of every eligible row, then the mean of the top k.
double knn_mean(std::span<const double> query, const embalign::EmbeddingSpace& space,
                std::size_t k, std::optional<std::size_t> exclude);

/// Double loop over every (pair, source token, target token) triple.
std::set<std::pair<WordId, WordId>> cooccurrence(const embalign::ParallelCorpus& corpus);

/// Grow-diag-final over std::set with the documented scan order.
std::set<embalign::Link> grow_diag_final(std::size_t m, std::size_t l,
                                         const std::set<embalign::Link>& fwd,
                                         const std::set<embalign::Link>& bwd);

}  // namespace oracle

#endif  // EMBALIGN_TESTS_ORACLES_HPP
