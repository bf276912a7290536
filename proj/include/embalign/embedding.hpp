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

// Monolingual embedding spaces, orthogonal mapping into a shared space, and
// the CSLS-softmax translation distribution over cooccurring word pairs.

#ifndef EMBALIGN_EMBEDDING_HPP
#define EMBALIGN_EMBEDDING_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "embalign/corpus.hpp"

namespace embalign {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct VectorLoadReport {
  std::size_t header_rows = 0;
  std::size_t header_dim = 0;
  std::size_t rows_kept = 0;
  std::size_t duplicates = 0;
  std::size_t malformed = 0;  // rows with an unparsable component
};

struct OrthogonalMap;

class EmbeddingSpace {
 public:
  EmbeddingSpace() = default;
  /// Throws std::invalid_argument on duplicate words or a row count that
  /// differs from the word count.
  EmbeddingSpace(std::vector<std::string> words, RowMatrix vectors);

  std::size_t size() const { return words_.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(vectors_.cols()); }

  const std::string& word(std::size_t row) const { return words_.at(row); }
  const std::vector<std::string>& words() const { return words_; }
  std::optional<std::size_t> find(const std::string& word) const;

  std::span<const double> row(std::size_t r) const {
    return {vectors_.data() + r * dim(), dim()};
  }
  const RowMatrix& matrix() const { return vectors_; }

  /// Zero rows (at load, or produced by mean-centering). They take part in
  /// no neighborhood and carry no translation evidence.
  bool is_degenerate(std::size_t r) const { return degenerate_.at(r) != 0; }
  std::size_t degenerate_count() const;

  bool preprocessed() const { return preprocessed_; }
  bool mapped() const { return mapped_; }
  const VectorLoadReport& load_report() const { return report_; }

 private:
  friend EmbeddingSpace read_vectors(std::istream&, std::size_t,
                                     const std::string&);
  friend EmbeddingSpace preprocess(EmbeddingSpace);
  friend EmbeddingSpace apply_map(const EmbeddingSpace&,
                                  const OrthogonalMap&);

  void refresh_degenerate();

  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
  RowMatrix vectors_;
  std::vector<char> degenerate_;
  bool preprocessed_ = false;
  bool mapped_ = false;
  VectorLoadReport report_;
};

/// Parses the text vector format: a header "n d", then "word c_1 ... c_d".
/// Keeps the first min(n, vocab_limit) distinct words in file order.
EmbeddingSpace read_vectors(std::istream& in, std::size_t vocab_limit,
                            const std::string& source_name = "<stream>");
EmbeddingSpace load_vectors(const std::string& path, std::size_t vocab_limit);

/// Writes the same format the loader reads; components use shortest
/// round-trip decimal form.
void write_vectors(std::ostream& out, const EmbeddingSpace& space);
void save_vectors(const std::string& path, const EmbeddingSpace& space);

/// Unit length, subtract column means, unit length again.
EmbeddingSpace preprocess(EmbeddingSpace space);

struct OrthogonalMap {
  RowMatrix w;
  std::size_t dim() const { return static_cast<std::size_t>(w.rows()); }
  /// Largest |(W W^T - I)_ij|.
  double orthogonality_error() const;
};

struct ProcrustesFit {
  /// Best orthogonal W for X W ~ Y on the seed rows.
  OrthogonalMap map;
  /// U and V of the seed cross-covariance X_s^T Y_s = U S V^T. Applying U to
  /// X and V to Y places both spaces in a common frame with the same residual.
  OrthogonalMap source_frame;
  OrthogonalMap target_frame;
  std::size_t seeds_used = 0;
  std::size_t seeds_missing = 0;
  bool underdetermined = false;  // fewer resolvable seeds than dimensions
  double residual = 0.0;         // ||X_s W - Y_s||_F
  double relative_residual = 0.0;
};

using SeedPairs = std::vector<std::pair<std::string, std::string>>;

/// Closed-form orthogonal Procrustes over the seed pairs resolvable in both
/// vocabularies. Throws std::invalid_argument on dimension mismatch or fewer
/// than two resolvable seeds.
ProcrustesFit procrustes(const EmbeddingSpace& x, const EmbeddingSpace& y,
                         const SeedPairs& seeds);

/// Every row right-multiplied by W.
EmbeddingSpace apply_map(const EmbeddingSpace& space, const OrthogonalMap& map);

/// Two whitespace-separated words per line; blank lines ignored.
SeedPairs load_seed_pairs(const std::string& path);

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
/// Cosine similarity; 0 when either vector is zero.
double cosine(std::span<const double> a, std::span<const double> b);

struct KnnMean {
  double value = 0.0;
  std::size_t used = 0;  // neighbours averaged over
  bool degraded = false; // fewer than k eligible rows
};

/// Mean cosine similarity between `query` and its k most similar rows of
/// `neighborhood`. `exclude_row` (the query's own row) and degenerate rows
/// are never neighbours. Ties go to the lower row index.
KnnMean mean_knn_similarity(std::span<const double> query,
                            const EmbeddingSpace& neighborhood, std::size_t k,
                            std::optional<std::size_t> exclude_row = {});

/// 2 cos(x, y) - avg_x - avg_y.
double csls(std::span<const double> x, std::span<const double> y, double avg_x,
            double avg_y);

/// Softmax of scores / tau with the row maximum subtracted first.
std::vector<double> softmax(std::span<const double> scores, double tau);

enum class NeighborhoodMode {
  kOwnSpace,    // avg(x) over the source space, avg(y) over the target space
  kCrossSpace,  // avg(x) over the target space, avg(y) over the source space
};

struct MapOptions {
  double tau = 0.1;
  std::size_t k = 10;
  NeighborhoodMode neighborhood = NeighborhoodMode::kOwnSpace;
  bool lowercase_fallback = false;
  unsigned threads = 1;
};

/// Embedding row for each vocabulary id, by exact surface form and then,
/// optionally, by ASCII-lowercased form. Degenerate rows resolve to nullopt.
std::vector<std::optional<std::size_t>> resolve_rows(
    const Vocabulary& vocab, const EmbeddingSpace& space,
    bool lowercase_fallback);

struct MapRow {
  std::vector<WordId> targets;  // ascending
  std::vector<double> probs;
  bool empty() const { return targets.empty(); }
  std::optional<double> prob(WordId target) const;
};

/// Sparse p_map(y|x) over the cooccurring, embedded targets of each embedded
/// source word.
class MapDistribution {
 public:
  MapDistribution() = default;
  explicit MapDistribution(std::size_t source_vocab_size)
      : rows_(source_vocab_size) {}

  /// nullptr when x has no embedding or no embedded cooccurring target.
  const MapRow* row(WordId x) const;
  std::size_t source_vocab_size() const { return rows_.size(); }
  std::size_t row_count() const;
  std::size_t entry_count() const;

  void set_row(WordId x, MapRow row) { rows_.at(x) = std::move(row); }

  /// Cached neighbourhood means; NaN for words without an embedding.
  std::vector<double> source_avg;
  std::vector<double> target_avg;
  std::size_t degraded_k = 0;

 private:
  std::vector<MapRow> rows_;
};

MapDistribution build_p_map(const EmbeddingSpace& source_space,
                            const EmbeddingSpace& target_space,
                            const Vocabulary& source_vocab,
                            const Vocabulary& target_vocab,
                            const CooccurrenceIndex& cooc,
                            const MapOptions& options = {});

}  // namespace embalign

#endif  // EMBALIGN_EMBEDDING_HPP
