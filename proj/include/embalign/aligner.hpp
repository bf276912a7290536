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

// IBM Model 1 and jump-width HMM alignment models trained by EM, with an
// optional embedding-derived interpolation of the lexical table after every
// iteration.
//
// Conventions shared by every routine here:
//  * Source position 0 in Model 1 posteriors is the NULL word; real source
//    words occupy columns 1..m.
//  * HMM states 0..m-1 are the real source positions, states m..2m-1 are the
//    NULL states. NULL state m+i remembers i as the last real position, so
//    jumps out of it are measured from i.

#ifndef EMBALIGN_ALIGNER_HPP
#define EMBALIGN_ALIGNER_HPP

#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "embalign/alignment.hpp"
#include "embalign/corpus.hpp"
#include "embalign/embedding.hpp"

namespace embalign {

inline constexpr double kProbabilityFloor = 1e-12;

/// Row supports of a lexical table: Co(x) for each source id, and every
/// target id for the NULL row (id == source vocabulary size).
struct TableSupport {
  std::vector<std::vector<WordId>> rows;
  WordId null_id = 0;
  std::size_t target_vocab_size = 0;
};

/// Sparse values over a fixed TableSupport. Used both for normalized
/// translation probabilities p(y|x) and for unnormalized expected counts.
class TranslationTable {
 public:
  TranslationTable() = default;
  /// All values zero.
  explicit TranslationTable(std::shared_ptr<const TableSupport> support);

  static TranslationTable zeros_like(const TranslationTable& other) {
    return TranslationTable(other.support_);
  }

  WordId null_id() const { return support_->null_id; }
  std::size_t row_count() const { return values_.size(); }
  std::span<const WordId> targets(WordId x) const { return support_->rows.at(x); }
  std::span<const double> values(WordId x) const { return values_.at(x); }
  std::span<double> values(WordId x) { return values_.at(x); }

  /// Position of y inside row x, if y is in the row's support.
  std::optional<std::size_t> index(WordId x, WordId y) const;
  /// Value for (x, y); 0 outside the support.
  double get(WordId x, WordId y) const;
  double row_sum(WordId x) const;

  /// Element-wise accumulation; supports must be identical.
  void add(const TranslationTable& other);

  const std::shared_ptr<const TableSupport>& support() const { return support_; }
  bool operator==(const TranslationTable& other) const {
    return values_ == other.values_;
  }

 private:
  std::shared_ptr<const TableSupport> support_;
  std::vector<std::vector<double>> values_;
};

using LexicalCounts = TranslationTable;

/// Each row x uniform over Co(x); the NULL row uniform over all targets.
TranslationTable init_uniform_table(const CooccurrenceIndex& cooc);

/// M-step: divides each row by its total, floors entries at `floor`, and
/// renormalizes. Rows with no mass come out uniform.
TranslationTable normalize_counts(const LexicalCounts& counts,
                                  double floor = kProbabilityFloor);

// ---------------------------------------------------------------------------
// Model 1

/// l x (m+1) posterior matrix; column 0 is NULL.
struct Model1Posterior {
  std::vector<std::vector<double>> gamma;
  double loglik = 0.0;  // sum_j log( sum_i p(t_j|s_i) / (m+1) )
};

Model1Posterior model1_posteriors(const SentencePair& pair,
                                  const TranslationTable& table);

struct EStepResult {
  LexicalCounts counts;
  double loglik = 0.0;
};

EStepResult model1_e_step(const ParallelCorpus& corpus,
                          const TranslationTable& table, unsigned threads = 1);

struct Model1Step {
  TranslationTable table;
  double loglik = 0.0;  // of the input table
};

Model1Step model1_em_iteration(const ParallelCorpus& corpus,
                               const TranslationTable& table,
                               unsigned threads = 1);

// ---------------------------------------------------------------------------
// HMM

/// Position-independent jump-width weights c(d), d in [-max_jump, max_jump];
/// jumps beyond the range share the boundary bucket.
struct HmmParams {
  int max_jump = 7;
  double p0 = 0.2;
  std::vector<double> jump_weights;  // size 2*max_jump+1, index d+max_jump

  static HmmParams uniform(int max_jump = 7, double p0 = 0.2);

  int bucket(long delta) const;
  double weight(long delta) const { return jump_weights[static_cast<std::size_t>(bucket(delta))]; }
  /// Throws std::invalid_argument when out of range.
  void validate() const;
};

/// m x m matrix A with A(i', i) = c(i - i') / sum_i'' c(i'' - i'). Rows sum
/// to one; the (1 - p0) factor is not included.
RowMatrix jump_matrix(const HmmParams& params, std::size_t m);

/// Expected jump counts E(i', i) per source length, summed over the corpus:
/// transitions into a real position i from real i' or from NULL state m+i'.
struct JumpCounts {
  std::vector<RowMatrix> by_length;  // index m; empty matrices for unseen m
  void ensure(std::size_t m);
  void add(const JumpCounts& other);
};

struct HmmPosterior {
  RowMatrix gamma;        // l x 2m state posteriors
  RowMatrix transitions;  // m x m expected jumps (see JumpCounts)
  double loglik = 0.0;    // log P(t_1..t_l | s_1..s_m)
};

HmmPosterior hmm_posteriors(const SentencePair& pair,
                            const TranslationTable& table,
                            const HmmParams& params);

struct HmmEStepResult {
  LexicalCounts counts;
  JumpCounts jumps;
  double loglik = 0.0;
};

HmmEStepResult hmm_e_step(const ParallelCorpus& corpus,
                          const TranslationTable& table,
                          const HmmParams& params, unsigned threads = 1);

/// Expected complete-data log-likelihood of the jump parameters.
double jump_objective(const JumpCounts& counts, const HmmParams& params);

/// Re-estimates the jump weights from expected counts. The relative-frequency
/// estimate is taken along a backtracking path from the current weights so
/// that jump_objective never decreases.
HmmParams update_jump_weights(const JumpCounts& counts, const HmmParams& current,
                              double floor = kProbabilityFloor);

struct HmmStep {
  TranslationTable table;
  HmmParams params;
  double loglik = 0.0;  // of the input table and params
};

HmmStep hmm_em_iteration(const ParallelCorpus& corpus,
                         const TranslationTable& table, const HmmParams& params,
                         unsigned threads = 1);

// ---------------------------------------------------------------------------
// Embedding enhancement

/// For each source x with a p_map row, rescales every y in Co(x) to
///   lambda * p_map(y|x) / freq(x) + p_align(y|x)   (p_map term only where
/// defined) and renormalizes the row. The NULL row and rows without p_map
/// are untouched; lambda == 0 returns the table unchanged.
TranslationTable enhance_table(const TranslationTable& table,
                               const MapDistribution& pmap,
                               const Vocabulary& source_vocab, double lambda);

// ---------------------------------------------------------------------------
// Training and decoding

struct AlignerConfig {
  int model1_iterations = 5;
  int hmm_iterations = 5;
  double lambda = 10000.0;
  double p0 = 0.2;
  int max_jump = 7;
  /// Apply the enhancement to the uniform table before the first iteration.
  bool enhance_initial_table = false;
  unsigned threads = 1;

  void validate() const;
};

struct TrainingLogEntry {
  std::string stage;  // "model1" or "hmm"
  int iteration = 0;  // 1-based
  double loglik = 0.0;
  bool enhanced = false;
};

struct AlignerModel {
  TranslationTable table;
  HmmParams hmm;
  bool trained_hmm = false;
  std::vector<TrainingLogEntry> log;
};

/// Model 1 then HMM EM. With `pmap`, enhance_table runs after every
/// iteration of both stages.
AlignerModel train(const ParallelCorpus& corpus, const MapDistribution* pmap,
                   const AlignerConfig& config);

/// Most probable HMM state path; nullopt entries are NULL-aligned targets.
std::vector<std::optional<std::size_t>> viterbi(const SentencePair& pair,
                                                const TranslationTable& table,
                                                const HmmParams& params);

/// Per-target argmax over {NULL, s_1..s_m}, lowest position wins ties.
std::vector<std::optional<std::size_t>> model1_decode(
    const SentencePair& pair, const TranslationTable& table);

/// Viterbi when the model has an HMM stage, Model 1 argmax otherwise.
AlignmentSet decode(const AlignerModel& model, const ParallelCorpus& corpus);

/// "src tgt prob" lines sorted by source word, then descending probability.
void write_table(std::ostream& out, const TranslationTable& table,
                 const Vocabulary& source_vocab, const Vocabulary& target_vocab);

/// "stage iter loglik enhanced={0|1}" per iteration.
void write_training_log(std::ostream& out,
                        const std::vector<TrainingLogEntry>& log);

}  // namespace embalign

#endif  // EMBALIGN_ALIGNER_HPP
