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

// Acceptance suite: one [PASS]/[FAIL] line per criterion. Exit status is
// nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include "embalign/aligner.hpp"
#include "embalign/eval.hpp"
#include "embalign/pipeline.hpp"
#include "embalign/symmetrize.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace embalign;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void criterion(const char* id, const char* title, double limit_seconds,
               const std::function<Outcome()>& body) {
  auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_seconds > 0 && secs >= limit_seconds) {
    out.pass = false;
    out.detail += " (over time limit)";
  }
  if (!out.pass) ++failures;
  std::printf("[%s] %s %s: %s [%.2fs]\n", out.pass ? "PASS" : "FAIL", id, title,
              out.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// 50 pairs with at most four tokens per side.
ParallelCorpus small_corpus() {
  synthetic::Rng rng(4242);
  return synthetic::random_corpus(rng, 50, 4, 10, 10);
}

Outcome ac1() {
  auto c = small_corpus();
  synthetic::Rng rng(1);
  auto table = synthetic::random_table(rng, c);
  double worst = 0.0;
  oracle::PairCounts expected;
  for (const auto& pair : c.pairs()) {
    auto want = oracle::model1(pair, table);
    auto got = model1_posteriors(pair, table);
    worst = std::max(worst, std::abs(got.loglik - want.loglik));
    for (std::size_t j = 0; j < pair.target.size(); ++j)
      for (std::size_t i = 0; i <= pair.source.size(); ++i)
        worst = std::max(worst, std::abs(got.gamma[j][i] - want.gamma[j][i]));
    for (const auto& [k, v] : want.counts) expected[k] += v;
  }
  auto e = model1_e_step(c, table);
  for (WordId x = 0; x < e.counts.row_count(); ++x) {
    auto targets = e.counts.targets(x);
    for (std::size_t n = 0; n < targets.size(); ++n) {
      auto it = expected.find({x, targets[n]});
      worst = std::max(worst, std::abs(e.counts.values(x)[n] -
                                       (it == expected.end() ? 0.0 : it->second)));
    }
  }
  // The M-step is count normalization of exactly these counts.
  auto step = model1_em_iteration(c, table);
  auto norm = normalize_counts(e.counts);
  for (WordId x = 0; x < norm.row_count(); ++x)
    for (std::size_t n = 0; n < norm.values(x).size(); ++n)
      worst = std::max(worst, std::abs(norm.values(x)[n] - step.table.values(x)[n]));
  return {worst <= 1e-9, "max abs deviation " + fmt("%.3g", worst)};
}

Outcome ac2() {
  auto c = small_corpus();
  synthetic::Rng rng(2);
  auto table = synthetic::random_table(rng, c);
  auto params = synthetic::random_hmm(rng, 7, 0.2);
  double worst = 0.0;
  std::size_t path_mismatch = 0;
  for (const auto& pair : c.pairs()) {
    const std::size_t m = pair.source.size();
    auto want = oracle::hmm(pair, table, params);
    auto got = hmm_posteriors(pair, table, params);
    worst = std::max(worst, std::abs(got.loglik - want.loglik));
    for (std::size_t j = 0; j < pair.target.size(); ++j)
      for (std::size_t s = 0; s < 2 * m; ++s)
        worst = std::max(worst, std::abs(got.gamma(j, s) - want.gamma[j][s]));
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b)
        worst = std::max(worst, std::abs(got.transitions(a, b) - want.transitions[a][b]));
    if (viterbi(pair, table, params) != want.best_path) ++path_mismatch;
  }
  return {worst <= 1e-9 && path_mismatch == 0,
          "max abs deviation " + fmt("%.3g", worst) + ", Viterbi mismatches " +
              std::to_string(path_mismatch) + "/50"};
}

Outcome ac3() {
  auto b = synthetic::make_dictionary_bitext();
  auto c = ParallelCorpus::from_lines(b.source_lines, b.target_lines);
  AlignerConfig cfg;
  cfg.model1_iterations = 5;
  cfg.hmm_iterations = 5;
  auto model = train(c, nullptr, cfg);
  std::size_t violations = 0;
  for (std::size_t n = 1; n < model.log.size(); ++n) {
    const auto& prev = model.log[n - 1];
    const auto& cur = model.log[n];
    if (prev.stage != cur.stage) continue;
    if (cur.loglik < prev.loglik - 1e-9 * std::abs(prev.loglik)) ++violations;
  }
  // The log holds the likelihood of each iteration's input; one more
  // E-step scores the final parameters.
  double final_ll = hmm_e_step(c, model.table, model.hmm).loglik;
  if (final_ll < model.log.back().loglik - 1e-9 * std::abs(model.log.back().loglik))
    ++violations;
  return {violations == 0 && model.log.size() == 10,
          std::to_string(c.size()) + " lines, " + std::to_string(violations) +
              " decreases; model1 " + fmt("%.6f", model.log[0].loglik) + " -> " +
              fmt("%.6f", model.log[4].loglik) + ", hmm " + fmt("%.6f", model.log[5].loglik) +
              " -> " + fmt("%.6f", final_ll)};
}

Outcome ac4() {
  auto b = synthetic::make_dictionary_bitext();
  auto c = ParallelCorpus::from_lines(b.source_lines, b.target_lines);
  auto mapped = map_spaces(b.source_space, b.target_space, b.seeds);
  auto cooc = build_cooccurrence(c);
  auto pmap = build_p_map(mapped.source, mapped.target, c.source_vocab(), c.target_vocab(),
                          cooc);
  AlignerConfig cfg;
  auto base = train(c, nullptr, cfg);
  cfg.lambda = 0.0;
  auto zero = train(c, &pmap, cfg);
  std::ostringstream ta, tb, aa, ab;
  write_table(ta, base.table, c.source_vocab(), c.target_vocab());
  write_table(tb, zero.table, c.source_vocab(), c.target_vocab());
  write_pharaoh(aa, decode(base, c));
  write_pharaoh(ab, decode(zero, c));
  bool identical = ta.str() == tb.str() && aa.str() == ab.str();

  // freq = 10^6: the enhancement vanishes.
  auto one = ParallelCorpus::from_lines({"a"}, {"y1 y2"});
  Vocabulary frequent;
  for (int n = 0; n < 1000000; ++n) frequent.add("a");
  MapDistribution pm1(1);
  pm1.set_row(0, MapRow{{0, 1}, {0.9, 0.1}});
  auto t1 = init_uniform_table(build_cooccurrence(one));
  auto e1 = enhance_table(t1, pm1, frequent, 1.0);
  double freq_dev = std::max(std::abs(e1.get(0, 0) - 0.5), std::abs(e1.get(0, 1) - 0.5));

  // Row sums after enhancement with the default lambda.
  auto enhanced = enhance_table(base.table, pmap, c.source_vocab(), 1e4);
  double sum_dev = 0.0;
  for (WordId x = 0; x < enhanced.row_count(); ++x)
    sum_dev = std::max(sum_dev, std::abs(enhanced.row_sum(x) - 1.0));
  bool pass = identical && freq_dev <= 1e-6 && sum_dev <= 1e-9;
  return {pass, std::string("lambda=0 ") + (identical ? "byte-identical" : "DIFFERS") +
                    ", freq=1e6 deviation " + fmt("%.3g", freq_dev) +
                    ", max row-sum error " + fmt("%.3g", sum_dev)};
}

Outcome ac5() {
  synthetic::Rng rng(5);
  auto space = synthetic::random_space(rng, 50, 8);
  const std::size_t k = 10;
  std::size_t mismatches = 0;
  std::vector<double> avg(space.size());
  for (std::size_t r = 0; r < space.size(); ++r) {
    avg[r] = mean_knn_similarity(space.row(r), space, k, r).value;
    if (avg[r] != oracle::knn_mean(space.row(r), space, k, r)) ++mismatches;
  }
  for (std::size_t a = 0; a < space.size(); ++a)
    for (std::size_t b = 0; b < space.size(); ++b) {
      double want = 2.0 * oracle::cosine(space.row(a), space.row(b)) - avg[a] - avg[b];
      if (csls(space.row(a), space.row(b), avg[a], avg[b]) != want) ++mismatches;
    }

  // p_map over a random bitext whose words all have embeddings.
  auto c = synthetic::random_corpus(rng, 200, 8, 50, 50);
  auto embed = [&](const Vocabulary& v) {
    return preprocess(EmbeddingSpace(v.words(), synthetic::gaussian(rng, v.size(), 8)));
  };
  auto xs = embed(c.source_vocab()), ys = embed(c.target_vocab());
  auto pmap = build_p_map(xs, ys, c.source_vocab(), c.target_vocab(), build_cooccurrence(c));
  double sum_dev = 0.0;
  std::size_t argmax_mismatch = 0, rows = 0;
  for (WordId x = 0; x < c.source_vocab().size(); ++x) {
    const MapRow* row = pmap.row(x);
    if (!row) continue;
    ++rows;
    double total = 0.0;
    for (double p : row->probs) total += p;
    sum_dev = std::max(sum_dev, std::abs(total - 1.0));
    auto xr = *xs.find(c.source_vocab().word(x));
    double ax = oracle::knn_mean(xs.row(xr), xs, k, xr);
    std::size_t best_c = 0, best_p = 0;
    double top = -INFINITY;
    for (std::size_t n = 0; n < row->targets.size(); ++n) {
      auto yr = *ys.find(c.target_vocab().word(row->targets[n]));
      double s = 2.0 * oracle::cosine(xs.row(xr), ys.row(yr)) - ax -
                 oracle::knn_mean(ys.row(yr), ys, k, yr);
      if (s > top) {
        top = s;
        best_c = n;
      }
      if (row->probs[n] > row->probs[best_p]) best_p = n;
    }
    if (best_c != best_p) ++argmax_mismatch;
  }
  bool pass = mismatches == 0 && sum_dev <= 1e-9 && argmax_mismatch == 0 &&
              rows == c.source_vocab().size();
  return {pass, "oracle mismatches " + std::to_string(mismatches) + ", " +
                    std::to_string(rows) + " p_map rows, max row-sum error " +
                    fmt("%.3g", sum_dev) + ", argmax mismatches " +
                    std::to_string(argmax_mismatch)};
}

Outcome ac6() {
  synthetic::Rng rng(6);
  auto x = preprocess(synthetic::random_space(rng, 300, 32, "x"));
  auto r = synthetic::random_orthogonal(rng, 32);
  std::vector<std::string> ywords;
  SeedPairs seeds;
  for (std::size_t i = 0; i < x.size(); ++i) {
    ywords.push_back("y" + std::to_string(i));
    seeds.emplace_back(x.word(i), ywords.back());
  }
  EmbeddingSpace y(ywords, x.matrix() * r);
  auto fit = procrustes(x, y, seeds);
  double rel = (x.matrix() * fit.map.w - y.matrix()).norm() / y.matrix().norm();
  double ortho = fit.map.orthogonality_error();
  return {rel <= 1e-6 && ortho <= 1e-6,
          "relative residual " + fmt("%.3g", rel) + ", max |WW^T - I| " + fmt("%.3g", ortho)};
}

Outcome ac7() {
  synthetic::Rng rng(7);
  std::uniform_int_distribution<std::size_t> len(1, 10);
  std::uniform_real_distribution<double> dens(0.05, 0.5);
  std::size_t bound_violations = 0, reference_mismatch = 0;
  auto random_alignment = [&](std::size_t m, std::size_t l) {
    std::bernoulli_distribution on(dens(rng));
    std::vector<Link> links;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < l; ++j)
        if (on(rng)) links.push_back({i, j});
    return SentenceAlignment(m, l, links);
  };
  auto as_set = [](const SentenceAlignment& a) {
    return std::set<Link>(a.links().begin(), a.links().end());
  };
  for (int n = 0; n < 1000; ++n) {
    std::size_t m = len(rng), l = len(rng);
    auto fwd = random_alignment(m, l), bwd = random_alignment(m, l);
    auto got = as_set(grow_diag_final(fwd, bwd));
    auto lo = as_set(intersect(fwd, bwd)), hi = as_set(unite(fwd, bwd));
    if (!std::includes(got.begin(), got.end(), lo.begin(), lo.end()) ||
        !std::includes(hi.begin(), hi.end(), got.begin(), got.end()))
      ++bound_violations;
    if (got != oracle::grow_diag_final(m, l, as_set(fwd), as_set(bwd))) ++reference_mismatch;
  }
  std::size_t fixtures_failed = 0;
  auto expect = [&](SentenceAlignment f, SentenceAlignment b, std::vector<Link> want) {
    if (grow_diag_final(f, b).links() != want) ++fixtures_failed;
  };
  expect({2, 2, {{0, 0}, {1, 1}}}, {2, 2, {{0, 0}}}, {{0, 0}, {1, 1}});
  expect({2, 1, {{0, 0}}}, {2, 1, {{1, 0}}}, {{0, 0}, {1, 0}});
  expect({2, 2, {{0, 0}, {0, 1}, {1, 1}}}, {2, 2, {{0, 0}, {1, 1}}}, {{0, 0}, {1, 1}});
  expect({3, 3, {{0, 0}, {1, 1}}}, {3, 3, {{0, 0}, {1, 1}}}, {{0, 0}, {1, 1}});
  expect({3, 3, {{0, 0}, {0, 2}}}, {3, 3, {{0, 0}, {2, 2}}}, {{0, 0}, {0, 2}, {2, 2}});
  return {bound_violations == 0 && reference_mismatch == 0 && fixtures_failed == 0,
          std::to_string(bound_violations) + " bound violations in 1000 pairs, " +
              std::to_string(reference_mismatch) + " reference-trace mismatches, " +
              std::to_string(fixtures_failed) + "/5 hand fixtures failed"};
}

Outcome ac8() {
  auto gold_of = [](const std::string& text) {
    std::istringstream in(text);
    return read_gold(in, Indexing::kOne);
  };
  auto mixed = gold_of("1 1 1 S\n1 2 2 P\n");
  double a_mixed = score(AlignmentSet{{2, 2, {{0, 0}, {1, 1}}}}, mixed).aer;
  auto single = gold_of("1 1 1 S\n");
  double a_empty = score(AlignmentSet{{1, 1, {}}}, single).aer;
  double a_perfect = score(AlignmentSet{{1, 1, {{0, 0}}}}, single).aer;
  bool fixtures = a_mixed == 0.0 && a_empty == 1.0 && a_perfect == 0.0;

  std::mt19937_64 rng(8);
  std::bernoulli_distribution coin(0.5), rare(0.2);
  std::size_t property_failures = 0;
  for (int trial = 0; trial < 500; ++trial) {
    GoldAlignment g;
    g.sentences.resize(4);
    AlignmentSet pred;
    for (std::size_t s = 0; s < 4; ++s) {
      std::vector<Link> links;
      for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) {
          bool p = rare(rng), sure = p && coin(rng);
          if (p) g.add(s, {i, j}, sure);
          if (sure || (p && coin(rng))) links.push_back({i, j});
        }
      pred.emplace_back(6, 6, links);
    }
    if (score(pred, g).aer != 0.0) ++property_failures;
  }
  return {fixtures && property_failures == 0,
          "mixed " + fmt("%.4f", a_mixed) + ", empty " + fmt("%.4f", a_empty) + ", perfect " +
              fmt("%.4f", a_perfect) + ", S<=A<=P violations " +
              std::to_string(property_failures) + "/500"};
}

Outcome ac9() {
  auto b = synthetic::make_dictionary_bitext();
  auto c = ParallelCorpus::from_lines(b.source_lines, b.target_lines);
  std::size_t singletons = 0;
  for (const auto& w : b.rare_source_words)
    if (c.source_vocab().freq(*c.source_vocab().find(w)) == 1) ++singletons;

  auto mapped = map_spaces(b.source_space, b.target_space, b.seeds);
  PipelineConfig cfg;
  auto pmap = build_p_map(mapped.source, mapped.target, c.source_vocab(), c.target_vocab(),
                          build_cooccurrence(c), cfg.map_options());
  // Rare words whose true translation is the CSLS-top cooccurring target.
  std::size_t csls_top = 0;
  for (const auto& w : b.rare_source_words) {
    WordId x = *c.source_vocab().find(w);
    const MapRow* row = pmap.row(x);
    if (!row) continue;
    auto best = std::max_element(row->probs.begin(), row->probs.end()) - row->probs.begin();
    std::string truth = "u" + w.substr(1);
    if (c.target_vocab().word(row->targets[static_cast<std::size_t>(best)]) == truth)
      ++csls_top;
  }

  cfg.enhance = false;
  auto base = run_alignment(c, nullptr, nullptr, cfg);
  cfg.enhance = true;
  auto enh = run_alignment(c, &mapped.source, &mapped.target, cfg);
  double aer_base = score(base.symmetrized, b.gold).aer;
  double aer_enh = score(enh.symmetrized, b.gold).aer;
  auto frequent = [](const std::string& w) { return w[0] == 's'; };
  auto rb = synthetic::restrict_by_source(base.symmetrized, b.gold, c, frequent);
  double aer_freq = score(rb.pred, rb.gold).aer;
  auto rare = [&](const std::string& w) { return b.rare_source_words.count(w) > 0; };
  auto rrb = synthetic::restrict_by_source(base.symmetrized, b.gold, c, rare);
  auto rre = synthetic::restrict_by_source(enh.symmetrized, b.gold, c, rare);

  bool pass = singletons >= 20 && csls_top >= 20 && aer_enh < aer_base && aer_freq <= 0.05;
  return {pass, std::to_string(c.size()) + " lines, " + std::to_string(singletons) +
                    " singletons (" + std::to_string(csls_top) + " CSLS-top); AER baseline " +
                    fmt("%.4f", aer_base) + " enhanced " + fmt("%.4f", aer_enh) +
                    "; baseline frequent-subset " + fmt("%.4f", aer_freq) +
                    "; rare-subset " + fmt("%.4f", score(rrb.pred, rrb.gold).aer) + " -> " +
                    fmt("%.4f", score(rre.pred, rre.gold).aer)};
}

}  // namespace

int main() {
  criterion("AC1", "Model 1 EM oracle", 10.0, ac1);
  criterion("AC2", "HMM oracle", 30.0, ac2);
  criterion("AC3", "EM monotonicity", 0.0, ac3);
  criterion("AC4", "enhancement identities", 0.0, ac4);
  criterion("AC5", "CSLS and p_map", 0.0, ac5);
  criterion("AC6", "Procrustes recovery", 0.0, ac6);
  criterion("AC7", "symmetrization", 0.0, ac7);
  criterion("AC8", "AER", 0.0, ac8);
  criterion("AC9", "end-to-end direction of effect", 120.0, ac9);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
