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

#include "embalign/embedding.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "embalign/parallel.hpp"

namespace embalign {

// ---------------------------------------------------------------------------
// EmbeddingSpace

EmbeddingSpace::EmbeddingSpace(std::vector<std::string> words,
                               RowMatrix vectors)
    : words_(std::move(words)), vectors_(std::move(vectors)) {
  if (static_cast<std::size_t>(vectors_.rows()) != words_.size())
    throw std::invalid_argument("embedding space: " +
                                std::to_string(words_.size()) + " words but " +
                                std::to_string(vectors_.rows()) + " rows");
  for (std::size_t r = 0; r < words_.size(); ++r)
    if (!index_.emplace(words_[r], r).second)
      throw std::invalid_argument("embedding space: duplicate word '" +
                                  words_[r] + "'");
  refresh_degenerate();
  report_.rows_kept = words_.size();
  report_.header_rows = words_.size();
  report_.header_dim = dim();
}

std::optional<std::size_t> EmbeddingSpace::find(const std::string& word) const {
  auto it = index_.find(word);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t EmbeddingSpace::degenerate_count() const {
  return static_cast<std::size_t>(
      std::count(degenerate_.begin(), degenerate_.end(), 1));
}

void EmbeddingSpace::refresh_degenerate() {
  degenerate_.assign(words_.size(), 0);
  for (std::size_t r = 0; r < words_.size(); ++r)
    degenerate_[r] = norm(row(r)) == 0.0 ? 1 : 0;
}

// ---------------------------------------------------------------------------
// Text vector format

namespace {

bool parse_double(std::string_view tok, double& out) {
  const char* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

bool parse_size(std::string_view tok, std::size_t& out) {
  const char* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

EmbeddingSpace read_vectors(std::istream& in, std::size_t vocab_limit,
                            const std::string& source_name) {
  if (vocab_limit == 0)
    throw std::invalid_argument("vocabulary limit must be positive");
  std::string line;
  if (!std::getline(in, line))
    throw FormatError(source_name + ": missing header line");
  auto header = split_tokens(line);
  std::size_t n = 0, d = 0;
  if (header.size() != 2 || !parse_size(header[0], n) ||
      !parse_size(header[1], d) || d == 0)
    throw FormatError(source_name + ": expected header \"n d\", got \"" +
                      line + "\"");

  VectorLoadReport report;
  report.header_rows = n;
  report.header_dim = d;

  const std::size_t wanted = std::min(n, vocab_limit);
  std::vector<std::string> words;
  std::unordered_map<std::string, std::size_t> seen;
  std::vector<double> values;
  values.reserve(wanted * d);
  std::vector<double> parsed(d);

  std::size_t line_no = 1;
  while (words.size() < wanted && std::getline(in, line)) {
    ++line_no;
    auto toks = split_tokens(line);
    if (toks.empty()) continue;
    if (toks.size() != d + 1)
      throw FormatError(source_name + ":" + std::to_string(line_no) +
                        ": expected " + std::to_string(d) +
                        " components, found " +
                        std::to_string(toks.size() - 1));
    bool ok = true;
    for (std::size_t c = 0; c < d && ok; ++c) ok = parse_double(toks[c + 1], parsed[c]);
    if (!ok) {
      ++report.malformed;
      continue;
    }
    std::string word(toks[0]);
    if (!seen.emplace(word, words.size()).second) {
      ++report.duplicates;
      continue;
    }
    words.push_back(std::move(word));
    values.insert(values.end(), parsed.begin(), parsed.end());
  }
  if (in.bad()) throw IoError(source_name + ": read error");

  RowMatrix m(static_cast<Eigen::Index>(words.size()),
              static_cast<Eigen::Index>(d));
  std::copy(values.begin(), values.end(), m.data());
  EmbeddingSpace space(std::move(words), std::move(m));
  report.rows_kept = space.size();
  space.report_ = report;
  return space;
}

EmbeddingSpace load_vectors(const std::string& path, std::size_t vocab_limit) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_vectors(in, vocab_limit, path);
}

void write_vectors(std::ostream& out, const EmbeddingSpace& space) {
  out << space.size() << ' ' << space.dim() << '\n';
  char buf[64];
  for (std::size_t r = 0; r < space.size(); ++r) {
    out << space.word(r);
    for (double v : space.row(r)) {
      auto res = std::to_chars(buf, buf + sizeof buf, v);
      out << ' ';
      out.write(buf, res.ptr - buf);
    }
    out << '\n';
  }
}

void save_vectors(const std::string& path, const EmbeddingSpace& space) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  write_vectors(out, space);
  if (!out) throw IoError("error writing " + path);
}

// ---------------------------------------------------------------------------
// Normalization and mapping

namespace {

void normalize_rows(RowMatrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    double n = norm({m.data() + r * m.cols(), static_cast<std::size_t>(m.cols())});
    if (n > 0.0) m.row(r) /= n;
  }
}

}  // namespace

EmbeddingSpace preprocess(EmbeddingSpace space) {
  if (space.preprocessed_)
    throw std::logic_error("embedding space is already preprocessed");
  RowMatrix& m = space.vectors_;
  normalize_rows(m);
  if (m.rows() > 0) {
    Eigen::RowVectorXd mean = m.colwise().mean();
    m.rowwise() -= mean;
  }
  // Rows that vanish after centering stay zero and are flagged by
  // refresh_degenerate().
  normalize_rows(m);
  space.refresh_degenerate();
  space.preprocessed_ = true;
  return space;
}

double OrthogonalMap::orthogonality_error() const {
  RowMatrix gram = w * w.transpose();
  gram -= RowMatrix::Identity(w.rows(), w.cols());
  return gram.cwiseAbs().maxCoeff();
}

ProcrustesFit procrustes(const EmbeddingSpace& x, const EmbeddingSpace& y,
                         const SeedPairs& seeds) {
  if (x.dim() != y.dim())
    throw std::invalid_argument("procrustes: dimension mismatch (" +
                                std::to_string(x.dim()) + " vs " +
                                std::to_string(y.dim()) + ")");
  std::vector<std::pair<std::size_t, std::size_t>> rows;
  ProcrustesFit fit;
  for (const auto& [xs, ys] : seeds) {
    auto xr = x.find(xs);
    auto yr = y.find(ys);
    if (xr && yr)
      rows.emplace_back(*xr, *yr);
    else
      ++fit.seeds_missing;
  }
  if (rows.size() < 2)
    throw std::invalid_argument("procrustes: " + std::to_string(rows.size()) +
                                " resolvable seed pairs; at least 2 required");
  const auto d = static_cast<Eigen::Index>(x.dim());
  const auto s = static_cast<Eigen::Index>(rows.size());
  RowMatrix xs(s, d), ys(s, d);
  for (Eigen::Index r = 0; r < s; ++r) {
    xs.row(r) = x.matrix().row(static_cast<Eigen::Index>(rows[r].first));
    ys.row(r) = y.matrix().row(static_cast<Eigen::Index>(rows[r].second));
  }
  Eigen::MatrixXd cross = xs.transpose() * ys;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(cross,
                                        Eigen::ComputeFullU | Eigen::ComputeFullV);
  fit.source_frame.w = svd.matrixU();
  fit.target_frame.w = svd.matrixV();
  fit.map.w = svd.matrixU() * svd.matrixV().transpose();
  fit.seeds_used = rows.size();
  fit.underdetermined = rows.size() < x.dim();
  fit.residual = (xs * fit.map.w - ys).norm();
  double yn = ys.norm();
  fit.relative_residual = yn > 0.0 ? fit.residual / yn : fit.residual;
  return fit;
}

EmbeddingSpace apply_map(const EmbeddingSpace& space, const OrthogonalMap& map) {
  if (map.dim() != space.dim())
    throw std::invalid_argument("apply_map: space has dimension " +
                                std::to_string(space.dim()) + ", map " +
                                std::to_string(map.dim()));
  EmbeddingSpace out = space;
  out.vectors_ = space.vectors_ * map.w;
  out.refresh_degenerate();
  out.mapped_ = true;
  return out;
}

SeedPairs load_seed_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  SeedPairs seeds;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto toks = split_tokens(line);
    if (toks.empty()) continue;
    if (toks.size() != 2)
      throw FormatError(path + ":" + std::to_string(line_no) +
                        ": expected two words");
    seeds.emplace_back(std::string(toks[0]), std::string(toks[1]));
  }
  return seeds;
}

// ---------------------------------------------------------------------------
// Similarities

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double cosine(std::span<const double> a, std::span<const double> b) {
  double na = norm(a), nb = norm(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot(a, b) / (na * nb);
}

namespace {

// Streams the neighbourhood once; `norms` are the precomputed row norms.
KnnMean knn_mean_impl(std::span<const double> query, double query_norm,
                      const EmbeddingSpace& space,
                      const std::vector<double>& norms, std::size_t k,
                      std::optional<std::size_t> exclude,
                      std::vector<std::pair<double, std::size_t>>& scratch) {
  if (k == 0) throw std::invalid_argument("k must be positive");
  scratch.clear();
  for (std::size_t r = 0; r < space.size(); ++r) {
    if ((exclude && *exclude == r) || space.is_degenerate(r)) continue;
    double sim = query_norm == 0.0
                     ? 0.0
                     : dot(query, space.row(r)) / (query_norm * norms[r]);
    scratch.emplace_back(sim, r);
  }
  KnnMean out;
  out.used = std::min(k, scratch.size());
  out.degraded = out.used < k;
  if (out.used == 0) return out;
  auto better = [](const std::pair<double, std::size_t>& a,
                   const std::pair<double, std::size_t>& b) {
    return a.first > b.first || (a.first == b.first && a.second < b.second);
  };
  std::partial_sort(scratch.begin(),
                    scratch.begin() + static_cast<std::ptrdiff_t>(out.used),
                    scratch.end(), better);
  double sum = 0.0;
  for (std::size_t n = 0; n < out.used; ++n) sum += scratch[n].first;
  out.value = sum / static_cast<double>(out.used);
  return out;
}

std::vector<double> row_norms(const EmbeddingSpace& space) {
  std::vector<double> norms(space.size());
  for (std::size_t r = 0; r < space.size(); ++r) norms[r] = norm(space.row(r));
  return norms;
}

}  // namespace

KnnMean mean_knn_similarity(std::span<const double> query,
                            const EmbeddingSpace& neighborhood, std::size_t k,
                            std::optional<std::size_t> exclude_row) {
  std::vector<std::pair<double, std::size_t>> scratch;
  return knn_mean_impl(query, norm(query), neighborhood, row_norms(neighborhood),
                       k, exclude_row, scratch);
}

double csls(std::span<const double> x, std::span<const double> y, double avg_x,
            double avg_y) {
  return 2.0 * cosine(x, y) - avg_x - avg_y;
}

std::vector<double> softmax(std::span<const double> scores, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("softmax temperature must be positive");
  std::vector<double> out(scores.size());
  if (scores.empty()) return out;
  double top = *std::max_element(scores.begin(), scores.end());
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    // Floor keeps every entry strictly positive for very small tau.
    out[i] = std::max(std::exp((scores[i] - top) / tau),
                      std::numeric_limits<double>::min());
    total += out[i];
  }
  for (double& p : out) p /= total;
  return out;
}

// ---------------------------------------------------------------------------
// p_map

std::optional<double> MapRow::prob(WordId target) const {
  auto it = std::lower_bound(targets.begin(), targets.end(), target);
  if (it == targets.end() || *it != target) return std::nullopt;
  return probs[static_cast<std::size_t>(it - targets.begin())];
}

const MapRow* MapDistribution::row(WordId x) const {
  if (x >= rows_.size() || rows_[x].empty()) return nullptr;
  return &rows_[x];
}

std::size_t MapDistribution::row_count() const {
  return static_cast<std::size_t>(std::count_if(
      rows_.begin(), rows_.end(), [](const MapRow& r) { return !r.empty(); }));
}

std::size_t MapDistribution::entry_count() const {
  std::size_t n = 0;
  for (const auto& r : rows_) n += r.targets.size();
  return n;
}

std::vector<std::optional<std::size_t>> resolve_rows(
    const Vocabulary& vocab, const EmbeddingSpace& space,
    bool lowercase_fallback) {
  std::vector<std::optional<std::size_t>> rows(vocab.size());
  for (WordId id = 0; id < vocab.size(); ++id) {
    auto r = space.find(vocab.word(id));
    if (!r && lowercase_fallback) {
      std::string lower = vocab.word(id);
      for (char& c : lower)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      r = space.find(lower);
    }
    if (r && !space.is_degenerate(*r)) rows[id] = r;
  }
  return rows;
}

namespace {

// avg(v, k) for every resolved word of one vocabulary side.
std::vector<double> neighborhood_means(
    const EmbeddingSpace& own, const EmbeddingSpace& neighborhood,
    bool exclude_self, const std::vector<std::optional<std::size_t>>& rows,
    const std::vector<char>& wanted, std::size_t k, unsigned threads,
    std::size_t& degraded) {
  std::vector<double> avg(rows.size(), std::numeric_limits<double>::quiet_NaN());
  std::vector<char> degraded_flags(rows.size(), 0);
  const auto norms = row_norms(neighborhood);
  parallel_ranges(rows.size(), threads,
                  [&](std::size_t begin, std::size_t end, unsigned) {
                    std::vector<std::pair<double, std::size_t>> scratch;
                    for (std::size_t id = begin; id < end; ++id) {
                      if (!rows[id] || !wanted[id]) continue;
                      auto q = own.row(*rows[id]);
                      std::optional<std::size_t> ex;
                      if (exclude_self) ex = *rows[id];
                      KnnMean m = knn_mean_impl(q, norm(q), neighborhood, norms, k,
                                                ex, scratch);
                      avg[id] = m.value;
                      degraded_flags[id] = m.degraded ? 1 : 0;
                    }
                  });
  degraded += static_cast<std::size_t>(
      std::count(degraded_flags.begin(), degraded_flags.end(), 1));
  return avg;
}

}  // namespace

MapDistribution build_p_map(const EmbeddingSpace& source_space,
                            const EmbeddingSpace& target_space,
                            const Vocabulary& source_vocab,
                            const Vocabulary& target_vocab,
                            const CooccurrenceIndex& cooc,
                            const MapOptions& options) {
  if (source_space.dim() != target_space.dim())
    throw std::invalid_argument("build_p_map: spaces differ in dimension");
  if (!(options.tau > 0.0)) throw std::invalid_argument("tau must be positive");
  if (options.k == 0) throw std::invalid_argument("k must be positive");

  const auto src_rows =
      resolve_rows(source_vocab, source_space, options.lowercase_fallback);
  const auto tgt_rows =
      resolve_rows(target_vocab, target_space, options.lowercase_fallback);

  // Only targets that cooccur with some embedded source need a mean.
  std::vector<char> src_wanted(source_vocab.size(), 1);
  std::vector<char> tgt_wanted(target_vocab.size(), 0);
  for (WordId x = 0; x < cooc.source_count(); ++x) {
    if (!src_rows[x]) continue;
    for (WordId y : cooc.targets(x)) tgt_wanted[y] = 1;
  }

  MapDistribution dist(source_vocab.size());
  const bool own = options.neighborhood == NeighborhoodMode::kOwnSpace;
  dist.source_avg = neighborhood_means(
      source_space, own ? source_space : target_space, own, src_rows,
      src_wanted, options.k, options.threads, dist.degraded_k);
  dist.target_avg = neighborhood_means(
      target_space, own ? target_space : source_space, own, tgt_rows,
      tgt_wanted, options.k, options.threads, dist.degraded_k);

  std::vector<MapRow> rows(source_vocab.size());
  parallel_ranges(
      cooc.source_count(), options.threads,
      [&](std::size_t begin, std::size_t end, unsigned) {
        std::vector<double> scores;
        for (std::size_t x = begin; x < end; ++x) {
          if (!src_rows[x]) continue;
          auto xv = source_space.row(*src_rows[x]);
          MapRow row;
          scores.clear();
          for (WordId y : cooc.targets(static_cast<WordId>(x))) {
            if (!tgt_rows[y]) continue;
            row.targets.push_back(y);
            scores.push_back(csls(xv, target_space.row(*tgt_rows[y]),
                                  dist.source_avg[x], dist.target_avg[y]));
          }
          if (row.targets.empty()) continue;
          row.probs = softmax(scores, options.tau);
          rows[x] = std::move(row);
        }
      });
  for (WordId x = 0; x < rows.size(); ++x) dist.set_row(x, std::move(rows[x]));
  return dist;
}

}  // namespace embalign
