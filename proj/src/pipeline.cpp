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

#include "embalign/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

namespace embalign {

void PipelineConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw ConfigError("lambda must be a nonnegative number");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ConfigError("tau must be positive");
  if (k < 1) throw ConfigError("k must be a positive integer");
  if (model1_iterations < 1) throw ConfigError("m1_iters must be a positive integer");
  if (hmm_iterations < 1) throw ConfigError("hmm_iters must be a positive integer");
  if (vocab_limit < 1) throw ConfigError("vocab_limit must be a positive integer");
  if (!(p0 > 0.0 && p0 < 1.0)) throw ConfigError("p0 must lie in (0, 1)");
  if (max_jump < 1) throw ConfigError("max_jump must be a positive integer");
  if (threads < 1) throw ConfigError("threads must be a positive integer");
}

AlignerConfig PipelineConfig::aligner() const {
  AlignerConfig c;
  c.model1_iterations = model1_iterations;
  c.hmm_iterations = hmm_iterations;
  c.lambda = lambda;
  c.p0 = p0;
  c.max_jump = max_jump;
  c.enhance_initial_table = enhance_initial_table;
  c.threads = threads;
  return c;
}

MapOptions PipelineConfig::map_options() const {
  MapOptions o;
  o.tau = tau;
  o.k = k;
  o.neighborhood = neighborhood;
  o.lowercase_fallback = lowercase_fallback;
  o.threads = threads;
  return o;
}

std::string PipelineConfig::describe() const {
  std::ostringstream out;
  out.precision(17);
  out << "lambda=" << lambda << '\n'
      << "tau=" << tau << '\n'
      << "k=" << k << '\n'
      << "m1_iters=" << model1_iterations << '\n'
      << "hmm_iters=" << hmm_iterations << '\n'
      << "vocab_limit=" << vocab_limit << '\n'
      << "p0=" << p0 << '\n'
      << "max_jump=" << max_jump << '\n'
      << "neighborhood="
      << (neighborhood == NeighborhoodMode::kOwnSpace ? "own" : "cross") << '\n'
      << "enhance=" << (enhance ? "true" : "false") << '\n'
      << "enhance_initial=" << (enhance_initial_table ? "true" : "false") << '\n'
      << "symmetrize=" << heuristic_name(heuristic) << '\n'
      << "gold_indexing=" << (gold_indexing == Indexing::kOne ? "one" : "zero") << '\n'
      << "lowercase=" << (lowercase ? "true" : "false") << '\n'
      << "lowercase_fallback=" << (lowercase_fallback ? "true" : "false") << '\n'
      << "threads=" << threads << '\n'
      << "parallel_directions=" << (parallel_directions ? "true" : "false") << '\n';
  return out.str();
}

MapResult map_spaces(EmbeddingSpace source, EmbeddingSpace target,
                     const SeedPairs& seeds, MapMode mode) {
  if (source.dim() != target.dim())
    throw std::invalid_argument("source and target vectors differ in dimension");
  EmbeddingSpace x = source.preprocessed() ? std::move(source) : preprocess(std::move(source));
  EmbeddingSpace y = target.preprocessed() ? std::move(target) : preprocess(std::move(target));
  MapResult out;
  out.fit = procrustes(x, y, seeds);
  if (mode == MapMode::kSourceToTarget) {
    out.source = apply_map(x, out.fit.map);
    // Identity keeps the target values and marks it as living in the
    // shared space.
    out.target = apply_map(y, OrthogonalMap{RowMatrix::Identity(
                                  static_cast<Eigen::Index>(y.dim()),
                                  static_cast<Eigen::Index>(y.dim()))});
  } else {
    out.source = apply_map(x, out.fit.source_frame);
    out.target = apply_map(y, out.fit.target_frame);
  }
  return out;
}

namespace {

DirectionRun run_direction(ParallelCorpus corpus, const EmbeddingSpace* source_space,
                           const EmbeddingSpace* target_space,
                           const PipelineConfig& config) {
  DirectionRun run;
  run.corpus = std::move(corpus);
  if (config.enhance && source_space && target_space) {
    auto cooc = build_cooccurrence(run.corpus);
    run.pmap = build_p_map(*source_space, *target_space, run.corpus.source_vocab(),
                           run.corpus.target_vocab(), cooc, config.map_options());
  }
  run.model = train(run.corpus, run.pmap ? &*run.pmap : nullptr, config.aligner());
  run.alignment = decode(run.model, run.corpus);
  return run;
}

}  // namespace

AlignRun run_alignment(const ParallelCorpus& corpus,
                       const EmbeddingSpace* source_space,
                       const EmbeddingSpace* target_space,
                       const PipelineConfig& config) {
  config.validate();
  if (corpus.empty()) throw std::invalid_argument("corpus has no usable sentence pairs");
  if ((source_space == nullptr) != (target_space == nullptr))
    throw std::invalid_argument("supply both embedding spaces or neither");

  AlignRun run;
  if (config.parallel_directions) {
    auto fwd = std::async(std::launch::async, run_direction, corpus, source_space,
                          target_space, std::cref(config));
    run.backward = run_direction(corpus.swapped(), target_space, source_space, config);
    run.forward = fwd.get();
  } else {
    run.forward = run_direction(corpus, source_space, target_space, config);
    run.backward = run_direction(corpus.swapped(), target_space, source_space, config);
  }
  run.symmetrized = symmetrize(run.forward.alignment, transpose(run.backward.alignment),
                               config.heuristic);
  return run;
}

void write_run_artifacts(const std::string& dir, const AlignRun& run,
                         const PipelineConfig& config) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto open = [&](const std::string& name) {
    std::ofstream out(fs::path(dir) / name);
    if (!out) throw IoError("cannot write " + (fs::path(dir) / name).string());
    return out;
  };
  {
    auto out = open("config.txt");
    out << config.describe();
  }
  for (const auto* d : {&run.forward, &run.backward}) {
    const std::string tag = d == &run.forward ? "fwd" : "bwd";
    {
      auto out = open(tag + ".table");
      write_table(out, d->model.table, d->corpus.source_vocab(), d->corpus.target_vocab());
    }
    {
      auto out = open(tag + ".log");
      write_training_log(out, d->model.log);
    }
    {
      auto out = open(tag + ".align");
      write_pharaoh(out, d->alignment);
    }
  }
  auto out = open("sym.align");
  write_pharaoh(out, run.symmetrized);
}

}  // namespace embalign
