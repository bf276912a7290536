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

#include "embalign/aligner.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "embalign/parallel.hpp"

namespace embalign {

// ---------------------------------------------------------------------------
// TranslationTable

TranslationTable::TranslationTable(std::shared_ptr<const TableSupport> support)
    : support_(std::move(support)) {
  values_.resize(support_->rows.size());
  for (std::size_t x = 0; x < values_.size(); ++x)
    values_[x].assign(support_->rows[x].size(), 0.0);
}

std::optional<std::size_t> TranslationTable::index(WordId x, WordId y) const {
  const auto& row = support_->rows.at(x);
  auto it = std::lower_bound(row.begin(), row.end(), y);
  if (it == row.end() || *it != y) return std::nullopt;
  return static_cast<std::size_t>(it - row.begin());
}

double TranslationTable::get(WordId x, WordId y) const {
  auto i = index(x, y);
  return i ? values_[x][*i] : 0.0;
}

double TranslationTable::row_sum(WordId x) const {
  const auto& v = values_.at(x);
  return std::accumulate(v.begin(), v.end(), 0.0);
}

void TranslationTable::add(const TranslationTable& other) {
  if (other.support_ != support_)
    throw std::invalid_argument("TranslationTable::add: different supports");
  for (std::size_t x = 0; x < values_.size(); ++x)
    for (std::size_t k = 0; k < values_[x].size(); ++k)
      values_[x][k] += other.values_[x][k];
}

TranslationTable init_uniform_table(const CooccurrenceIndex& cooc) {
  auto support = std::make_shared<TableSupport>();
  support->null_id = static_cast<WordId>(cooc.source_count());
  support->target_vocab_size = cooc.target_vocab_size();
  support->rows.reserve(cooc.source_count() + 1);
  for (WordId x = 0; x < cooc.source_count(); ++x)
    support->rows.push_back(cooc.targets(x));
  std::vector<WordId> all(cooc.target_vocab_size());
  std::iota(all.begin(), all.end(), WordId{0});
  support->rows.push_back(std::move(all));

  TranslationTable table(std::move(support));
  for (WordId x = 0; x < table.row_count(); ++x) {
    auto v = table.values(x);
    if (v.empty()) continue;
    std::fill(v.begin(), v.end(), 1.0 / static_cast<double>(v.size()));
  }
  return table;
}

TranslationTable normalize_counts(const LexicalCounts& counts, double floor) {
  TranslationTable out = counts;
  for (WordId x = 0; x < out.row_count(); ++x) {
    auto v = out.values(x);
    if (v.empty()) continue;
    double total = std::accumulate(v.begin(), v.end(), 0.0);
    if (!(total > 0.0)) {
      std::fill(v.begin(), v.end(), 1.0 / static_cast<double>(v.size()));
      continue;
    }
    double floored = 0.0;
    for (double& p : v) {
      p = std::max(p / total, floor);
      floored += p;
    }
    for (double& p : v) p /= floored;
  }
  return out;
}

namespace {

// Row positions of t_j in the NULL row (i = 0) and in each source row
// (i = 1..m), laid out j-major.
std::vector<std::size_t> sentence_indices(const SentencePair& pair,
                                          const TranslationTable& table) {
  const std::size_t m = pair.source.size();
  std::vector<std::size_t> idx(pair.target.size() * (m + 1));
  for (std::size_t j = 0; j < pair.target.size(); ++j) {
    WordId y = pair.target[j];
    for (std::size_t i = 0; i <= m; ++i) {
      WordId x = i == 0 ? table.null_id() : pair.source[i - 1];
      auto k = table.index(x, y);
      if (!k)
        throw std::logic_error("lexical table lacks a cooccurring pair");
      idx[j * (m + 1) + i] = *k;
    }
  }
  return idx;
}

WordId source_at(const SentencePair& pair, const TranslationTable& table,
                 std::size_t i) {
  return i == 0 ? table.null_id() : pair.source[i - 1];
}

// Adds one pair's Model 1 posteriors into `counts`; returns its loglik.
double model1_accumulate(const SentencePair& pair, const TranslationTable& table,
                         LexicalCounts* counts,
                         std::vector<std::vector<double>>* gamma) {
  const std::size_t m = pair.source.size();
  const auto idx = sentence_indices(pair, table);
  std::vector<double> p(m + 1);
  double loglik = 0.0;
  if (gamma) gamma->assign(pair.target.size(), std::vector<double>(m + 1));
  for (std::size_t j = 0; j < pair.target.size(); ++j) {
    double total = 0.0;
    for (std::size_t i = 0; i <= m; ++i) {
      p[i] = table.values(source_at(pair, table, i))[idx[j * (m + 1) + i]];
      total += p[i];
    }
    if (!(total > 0.0))
      throw std::runtime_error("target token has zero probability mass");
    loglik += std::log(total / static_cast<double>(m + 1));
    for (std::size_t i = 0; i <= m; ++i) {
      double g = p[i] / total;
      if (counts) counts->values(source_at(pair, table, i))[idx[j * (m + 1) + i]] += g;
      if (gamma) (*gamma)[j][i] = g;
    }
  }
  return loglik;
}

}  // namespace

// ---------------------------------------------------------------------------
// Model 1

Model1Posterior model1_posteriors(const SentencePair& pair,
                                  const TranslationTable& table) {
  Model1Posterior out;
  out.loglik = model1_accumulate(pair, table, nullptr, &out.gamma);
  return out;
}

EStepResult model1_e_step(const ParallelCorpus& corpus,
                          const TranslationTable& table, unsigned threads) {
  threads = std::max(1u, threads);
  std::vector<LexicalCounts> counts(threads, TranslationTable::zeros_like(table));
  std::vector<double> loglik(threads, 0.0);
  parallel_ranges(corpus.size(), threads,
                  [&](std::size_t begin, std::size_t end, unsigned w) {
                    for (std::size_t n = begin; n < end; ++n)
                      loglik[w] += model1_accumulate(corpus.pairs()[n], table,
                                                     &counts[w], nullptr);
                  });
  EStepResult out{std::move(counts[0]), loglik[0]};
  for (unsigned w = 1; w < threads; ++w) {
    out.counts.add(counts[w]);
    out.loglik += loglik[w];
  }
  return out;
}

Model1Step model1_em_iteration(const ParallelCorpus& corpus,
                               const TranslationTable& table, unsigned threads) {
  auto e = model1_e_step(corpus, table, threads);
  return {normalize_counts(e.counts), e.loglik};
}

// ---------------------------------------------------------------------------
// HMM parameters

HmmParams HmmParams::uniform(int max_jump, double p0) {
  HmmParams p;
  p.max_jump = max_jump;
  p.p0 = p0;
  p.jump_weights.assign(static_cast<std::size_t>(2 * max_jump + 1),
                        1.0 / static_cast<double>(2 * max_jump + 1));
  p.validate();
  return p;
}

int HmmParams::bucket(long delta) const {
  long d = std::clamp<long>(delta, -max_jump, max_jump);
  return static_cast<int>(d + max_jump);
}

void HmmParams::validate() const {
  if (max_jump < 1) throw std::invalid_argument("max_jump must be positive");
  if (!(p0 > 0.0 && p0 < 1.0)) throw std::invalid_argument("p0 must lie in (0, 1)");
  if (jump_weights.size() != static_cast<std::size_t>(2 * max_jump + 1))
    throw std::invalid_argument("jump weight vector has the wrong size");
  for (double w : jump_weights)
    if (!(w > 0.0) || !std::isfinite(w))
      throw std::invalid_argument("jump weights must be positive and finite");
}

RowMatrix jump_matrix(const HmmParams& params, std::size_t m) {
  const auto n = static_cast<Eigen::Index>(m);
  RowMatrix a(n, n);
  for (Eigen::Index from = 0; from < n; ++from) {
    double z = 0.0;
    for (Eigen::Index to = 0; to < n; ++to) {
      a(from, to) = params.weight(to - from);
      z += a(from, to);
    }
    a.row(from) /= z;
  }
  return a;
}

void JumpCounts::ensure(std::size_t m) {
  if (by_length.size() <= m) by_length.resize(m + 1);
  const auto n = static_cast<Eigen::Index>(m);
  if (by_length[m].rows() != n) by_length[m] = RowMatrix::Zero(n, n);
}

void JumpCounts::add(const JumpCounts& other) {
  for (std::size_t m = 0; m < other.by_length.size(); ++m) {
    if (other.by_length[m].size() == 0) continue;
    ensure(m);
    by_length[m] += other.by_length[m];
  }
}

// ---------------------------------------------------------------------------
// HMM forward-backward

namespace {

class JumpCache {
 public:
  explicit JumpCache(const HmmParams& params) : params_(params) {}
  const RowMatrix& get(std::size_t m) {
    if (cache_.size() <= m) cache_.resize(m + 1);
    if (cache_[m].rows() != static_cast<Eigen::Index>(m))
      cache_[m] = jump_matrix(params_, m);
    return cache_[m];
  }

 private:
  const HmmParams& params_;
  std::vector<RowMatrix> cache_;
};

// Runs scaled forward-backward on one pair. Fills posteriors into the
// optional outputs and returns the log-likelihood.
double hmm_accumulate(const SentencePair& pair, const TranslationTable& table,
                      const HmmParams& params, const RowMatrix& jumps,
                      LexicalCounts* counts, RowMatrix* transitions,
                      RowMatrix* gamma_out) {
  const std::size_t m = pair.source.size();
  const std::size_t l = pair.target.size();
  const std::size_t states = 2 * m;
  const double p0 = params.p0;
  const double stay = 1.0 - p0;
  const auto idx = sentence_indices(pair, table);

  // emit[j*(m+1) + i]: i = 0 is NULL, 1..m real.
  std::vector<double> emit(l * (m + 1));
  for (std::size_t j = 0; j < l; ++j)
    for (std::size_t i = 0; i <= m; ++i)
      emit[j * (m + 1) + i] =
          table.values(source_at(pair, table, i))[idx[j * (m + 1) + i]];
  auto e_real = [&](std::size_t j, std::size_t i) { return emit[j * (m + 1) + i + 1]; };
  auto e_null = [&](std::size_t j) { return emit[j * (m + 1)]; };

  std::vector<double> alpha(l * states), beta(l * states), scale(l);
  auto a = [&](std::size_t j, std::size_t s) -> double& { return alpha[j * states + s]; };
  auto b = [&](std::size_t j, std::size_t s) -> double& { return beta[j * states + s]; };

  auto normalize_step = [&](std::size_t j) {
    double c = 0.0;
    for (std::size_t s = 0; s < states; ++s) c += a(j, s);
    if (!(c > 0.0)) throw std::runtime_error("HMM forward pass lost all mass");
    scale[j] = c;
    for (std::size_t s = 0; s < states; ++s) a(j, s) /= c;
  };

  const double md = static_cast<double>(m);
  for (std::size_t i = 0; i < m; ++i) {
    a(0, i) = stay / md * e_real(0, i);
    a(0, m + i) = p0 / md * e_null(0);
  }
  normalize_step(0);

  std::vector<double> from(m);
  for (std::size_t j = 1; j < l; ++j) {
    for (std::size_t i = 0; i < m; ++i) from[i] = a(j - 1, i) + a(j - 1, m + i);
    for (std::size_t i = 0; i < m; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < m; ++k)
        s += from[k] * jumps(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i));
      a(j, i) = e_real(j, i) * stay * s;
      a(j, m + i) = e_null(j) * p0 * from[i];
    }
    normalize_step(j);
  }

  double loglik = 0.0;
  for (double c : scale) loglik += std::log(c);

  for (std::size_t s = 0; s < states; ++s) b(l - 1, s) = 1.0;
  for (std::size_t j = l - 1; j-- > 0;) {
    for (std::size_t k = 0; k < m; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < m; ++i)
        s += jumps(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) *
             e_real(j + 1, i) * b(j + 1, i);
      double v = (stay * s + p0 * e_null(j + 1) * b(j + 1, m + k)) / scale[j + 1];
      b(j, k) = v;
      b(j, m + k) = v;  // real k and NULL state m+k share outgoing transitions
    }
  }

  if (gamma_out) gamma_out->resize(static_cast<Eigen::Index>(l),
                                   static_cast<Eigen::Index>(states));
  for (std::size_t j = 0; j < l; ++j) {
    for (std::size_t s = 0; s < states; ++s) {
      double g = a(j, s) * b(j, s);
      if (gamma_out)
        (*gamma_out)(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(s)) = g;
      if (counts) {
        std::size_t i = s < m ? s + 1 : 0;
        counts->values(source_at(pair, table, i))[idx[j * (m + 1) + i]] += g;
      }
    }
  }

  if (transitions) {
    for (std::size_t j = 1; j < l; ++j) {
      for (std::size_t i = 0; i < m; ++i) from[i] = a(j - 1, i) + a(j - 1, m + i);
      for (std::size_t i = 0; i < m; ++i) {
        double tail = stay * e_real(j, i) * b(j, i) / scale[j];
        for (std::size_t k = 0; k < m; ++k)
          (*transitions)(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) +=
              from[k] * jumps(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) *
              tail;
      }
    }
  }
  return loglik;
}

}  // namespace

HmmPosterior hmm_posteriors(const SentencePair& pair,
                            const TranslationTable& table,
                            const HmmParams& params) {
  params.validate();
  const std::size_t m = pair.source.size();
  HmmPosterior out;
  out.transitions = RowMatrix::Zero(static_cast<Eigen::Index>(m),
                                    static_cast<Eigen::Index>(m));
  out.loglik = hmm_accumulate(pair, table, params, jump_matrix(params, m),
                              nullptr, &out.transitions, &out.gamma);
  return out;
}

HmmEStepResult hmm_e_step(const ParallelCorpus& corpus,
                          const TranslationTable& table,
                          const HmmParams& params, unsigned threads) {
  params.validate();
  threads = std::max(1u, threads);
  std::vector<LexicalCounts> counts(threads, TranslationTable::zeros_like(table));
  std::vector<JumpCounts> jumps(threads);
  std::vector<double> loglik(threads, 0.0);
  parallel_ranges(corpus.size(), threads,
                  [&](std::size_t begin, std::size_t end, unsigned w) {
                    JumpCache cache(params);
                    for (std::size_t n = begin; n < end; ++n) {
                      const auto& pair = corpus.pairs()[n];
                      const std::size_t m = pair.source.size();
                      jumps[w].ensure(m);
                      loglik[w] += hmm_accumulate(pair, table, params, cache.get(m),
                                                  &counts[w], &jumps[w].by_length[m],
                                                  nullptr);
                    }
                  });
  HmmEStepResult out{std::move(counts[0]), std::move(jumps[0]), loglik[0]};
  for (unsigned w = 1; w < threads; ++w) {
    out.counts.add(counts[w]);
    out.jumps.add(jumps[w]);
    out.loglik += loglik[w];
  }
  return out;
}

double jump_objective(const JumpCounts& counts, const HmmParams& params) {
  double q = 0.0;
  for (std::size_t m = 1; m < counts.by_length.size(); ++m) {
    const RowMatrix& e = counts.by_length[m];
    if (e.size() == 0) continue;
    const auto n = static_cast<Eigen::Index>(m);
    for (Eigen::Index from = 0; from < n; ++from) {
      double z = 0.0, mass = 0.0, term = 0.0;
      for (Eigen::Index to = 0; to < n; ++to) {
        double w = params.weight(to - from);
        z += w;
        mass += e(from, to);
        if (e(from, to) > 0.0) term += e(from, to) * std::log(w);
      }
      q += term - mass * std::log(z);
    }
  }
  return q;
}

HmmParams update_jump_weights(const JumpCounts& counts, const HmmParams& current,
                              double floor) {
  current.validate();
  const std::size_t buckets = current.jump_weights.size();
  std::vector<double> tally(buckets, 0.0);
  for (std::size_t m = 1; m < counts.by_length.size(); ++m) {
    const RowMatrix& e = counts.by_length[m];
    if (e.size() == 0) continue;
    const auto n = static_cast<Eigen::Index>(m);
    for (Eigen::Index from = 0; from < n; ++from)
      for (Eigen::Index to = 0; to < n; ++to)
        tally[static_cast<std::size_t>(current.bucket(to - from))] += e(from, to);
  }
  double total = std::accumulate(tally.begin(), tally.end(), 0.0);
  if (!(total > 0.0)) return current;

  auto normalized = [](std::vector<double> w) {
    double s = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& v : w) v /= s;
    return w;
  };
  std::vector<double> target(buckets);
  for (std::size_t k = 0; k < buckets; ++k) target[k] = std::max(tally[k] / total, floor);
  target = normalized(target);
  const std::vector<double> start = normalized(current.jump_weights);

  const double q_old = jump_objective(counts, current);
  HmmParams candidate = current;
  // Relative frequencies ignore the per-length normalization, so they are
  // not always an improvement; walk back toward the current weights in log
  // space until the objective does not decrease.
  double step = 1.0;
  for (int attempt = 0; attempt < 30; ++attempt, step *= 0.5) {
    for (std::size_t k = 0; k < buckets; ++k)
      candidate.jump_weights[k] =
          std::exp((1.0 - step) * std::log(start[k]) + step * std::log(target[k]));
    candidate.jump_weights = normalized(candidate.jump_weights);
    if (jump_objective(counts, candidate) >= q_old) return candidate;
  }
  return current;
}

HmmStep hmm_em_iteration(const ParallelCorpus& corpus,
                         const TranslationTable& table, const HmmParams& params,
                         unsigned threads) {
  auto e = hmm_e_step(corpus, table, params, threads);
  return {normalize_counts(e.counts), update_jump_weights(e.jumps, params),
          e.loglik};
}

// ---------------------------------------------------------------------------
// Enhancement

TranslationTable enhance_table(const TranslationTable& table,
                               const MapDistribution& pmap,
                               const Vocabulary& source_vocab, double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("lambda must be a nonnegative finite number");
  if (pmap.source_vocab_size() != table.null_id() ||
      source_vocab.size() != table.null_id())
    throw std::invalid_argument("p_map, vocabulary and table disagree on size");
  if (lambda == 0.0) return table;

  TranslationTable out = table;
  for (WordId x = 0; x < table.null_id(); ++x) {
    const MapRow* row = pmap.row(x);
    if (!row) continue;
    const double freq = static_cast<double>(source_vocab.freq(x));
    if (!(freq >= 1.0)) throw std::logic_error("enhanced row has zero frequency");
    const double weight = lambda / freq;
    auto targets = out.targets(x);
    auto probs = out.values(x);
    std::size_t r = 0;
    double total = 0.0;
    for (std::size_t k = 0; k < targets.size(); ++k) {
      while (r < row->targets.size() && row->targets[r] < targets[k]) ++r;
      if (r < row->targets.size() && row->targets[r] == targets[k])
        probs[k] += weight * row->probs[r];
      total += probs[k];
    }
    for (double& p : probs) p /= total;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Training

void AlignerConfig::validate() const {
  if (model1_iterations < 0 || hmm_iterations < 0)
    throw std::invalid_argument("iteration counts must be nonnegative");
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("lambda must be nonnegative");
  if (!(p0 > 0.0 && p0 < 1.0)) throw std::invalid_argument("p0 must lie in (0, 1)");
  if (max_jump < 1) throw std::invalid_argument("max_jump must be positive");
}

AlignerModel train(const ParallelCorpus& corpus, const MapDistribution* pmap,
                   const AlignerConfig& config) {
  config.validate();
  if (corpus.empty()) throw std::invalid_argument("cannot train on an empty corpus");

  AlignerModel model;
  model.table = init_uniform_table(build_cooccurrence(corpus));
  auto enhance = [&](TranslationTable t) {
    return pmap ? enhance_table(t, *pmap, corpus.source_vocab(), config.lambda) : t;
  };
  if (config.enhance_initial_table) model.table = enhance(std::move(model.table));

  for (int it = 1; it <= config.model1_iterations; ++it) {
    auto step = model1_em_iteration(corpus, model.table, config.threads);
    model.table = enhance(std::move(step.table));
    model.log.push_back({"model1", it, step.loglik, pmap != nullptr});
  }

  model.hmm = HmmParams::uniform(config.max_jump, config.p0);
  for (int it = 1; it <= config.hmm_iterations; ++it) {
    auto step = hmm_em_iteration(corpus, model.table, model.hmm, config.threads);
    model.table = enhance(std::move(step.table));
    model.hmm = std::move(step.params);
    model.log.push_back({"hmm", it, step.loglik, pmap != nullptr});
  }
  model.trained_hmm = config.hmm_iterations > 0;
  return model;
}

// ---------------------------------------------------------------------------
// Decoding

std::vector<std::optional<std::size_t>> viterbi(const SentencePair& pair,
                                                const TranslationTable& table,
                                                const HmmParams& params) {
  params.validate();
  const std::size_t m = pair.source.size();
  const std::size_t l = pair.target.size();
  const std::size_t states = 2 * m;
  const auto idx = sentence_indices(pair, table);
  const RowMatrix jumps = jump_matrix(params, m);
  const double log_p0 = std::log(params.p0);
  const double log_stay = std::log(1.0 - params.p0);
  const double neg_inf = -std::numeric_limits<double>::infinity();

  auto log_emit = [&](std::size_t j, std::size_t s) {
    std::size_t i = s < m ? s + 1 : 0;
    return std::log(table.values(source_at(pair, table, i))[idx[j * (m + 1) + i]]);
  };
  // Log transition probability between states.
  auto log_trans = [&](std::size_t from, std::size_t to) {
    std::size_t prev = from < m ? from : from - m;
    if (to < m)
      return log_stay + std::log(jumps(static_cast<Eigen::Index>(prev),
                                       static_cast<Eigen::Index>(to)));
    return to - m == prev ? log_p0 : neg_inf;
  };

  std::vector<double> delta(states), next(states);
  std::vector<std::size_t> back(l * states, 0);
  const double log_m = std::log(static_cast<double>(m));
  for (std::size_t s = 0; s < states; ++s)
    delta[s] = (s < m ? log_stay : log_p0) - log_m + log_emit(0, s);

  for (std::size_t j = 1; j < l; ++j) {
    for (std::size_t s = 0; s < states; ++s) {
      double best = neg_inf;
      std::size_t arg = 0;
      for (std::size_t f = 0; f < states; ++f) {
        double v = delta[f] + log_trans(f, s);
        if (v > best) {
          best = v;
          arg = f;
        }
      }
      next[s] = best + log_emit(j, s);
      back[j * states + s] = arg;
    }
    std::swap(delta, next);
  }

  std::size_t state = static_cast<std::size_t>(
      std::max_element(delta.begin(), delta.end()) - delta.begin());
  std::vector<std::optional<std::size_t>> path(l);
  for (std::size_t j = l; j-- > 0;) {
    if (state < m) path[j] = state;
    if (j > 0) state = back[j * states + state];
  }
  return path;
}

std::vector<std::optional<std::size_t>> model1_decode(
    const SentencePair& pair, const TranslationTable& table) {
  const std::size_t m = pair.source.size();
  const auto idx = sentence_indices(pair, table);
  std::vector<std::optional<std::size_t>> out(pair.target.size());
  for (std::size_t j = 0; j < pair.target.size(); ++j) {
    double best = -1.0;
    std::size_t arg = 0;
    for (std::size_t i = 0; i <= m; ++i) {
      double p = table.values(source_at(pair, table, i))[idx[j * (m + 1) + i]];
      if (p > best) {
        best = p;
        arg = i;
      }
    }
    if (arg > 0) out[j] = arg - 1;
  }
  return out;
}

AlignmentSet decode(const AlignerModel& model, const ParallelCorpus& corpus) {
  AlignmentSet out;
  out.reserve(corpus.size());
  for (const auto& pair : corpus.pairs()) {
    auto path = model.trained_hmm ? viterbi(pair, model.table, model.hmm)
                                  : model1_decode(pair, model.table);
    std::vector<Link> links;
    for (std::size_t j = 0; j < path.size(); ++j)
      if (path[j]) links.push_back({*path[j], j});
    out.emplace_back(pair.source.size(), pair.target.size(), std::move(links));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dumps

namespace {

void put_double(std::ostream& out, double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.write(buf, res.ptr - buf);
}

}  // namespace

void write_table(std::ostream& out, const TranslationTable& table,
                 const Vocabulary& source_vocab, const Vocabulary& target_vocab) {
  auto name = [&](WordId x) -> const std::string& {
    static const std::string null_name = "NULL";
    return x == table.null_id() ? null_name : source_vocab.word(x);
  };
  std::vector<WordId> order(table.row_count());
  std::iota(order.begin(), order.end(), WordId{0});
  std::sort(order.begin(), order.end(),
            [&](WordId a, WordId b) { return name(a) < name(b); });

  std::vector<std::pair<double, WordId>> entries;
  for (WordId x : order) {
    entries.clear();
    auto targets = table.targets(x);
    auto probs = table.values(x);
    for (std::size_t k = 0; k < targets.size(); ++k)
      entries.emplace_back(probs[k], targets[k]);
    std::sort(entries.begin(), entries.end(), [&](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return target_vocab.word(a.second) < target_vocab.word(b.second);
    });
    for (const auto& [p, y] : entries) {
      out << name(x) << ' ' << target_vocab.word(y) << ' ';
      put_double(out, p);
      out << '\n';
    }
  }
}

void write_training_log(std::ostream& out,
                        const std::vector<TrainingLogEntry>& log) {
  for (const auto& e : log) {
    out << e.stage << ' ' << e.iteration << ' ';
    put_double(out, e.loglik);
    out << " enhanced=" << (e.enhanced ? 1 : 0) << '\n';
  }
}

}  // namespace embalign
