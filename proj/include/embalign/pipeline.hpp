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

// End-to-end orchestration behind the `embalign` command: embedding mapping,
// bidirectional training with optional enhancement, and symmetrization.

#ifndef EMBALIGN_PIPELINE_HPP
#define EMBALIGN_PIPELINE_HPP

#include <cstddef>
#include <optional>
#include <string>

#include "embalign/aligner.hpp"
#include "embalign/alignment.hpp"
#include "embalign/corpus.hpp"
#include "embalign/embedding.hpp"
#include "embalign/eval.hpp"
#include "embalign/symmetrize.hpp"

namespace embalign {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct PipelineConfig {
  double lambda = 10000.0;
  double tau = 0.1;
  std::size_t k = 10;
  int model1_iterations = 5;
  int hmm_iterations = 5;
  std::size_t vocab_limit = 200000;
  double p0 = 0.2;
  int max_jump = 7;
  NeighborhoodMode neighborhood = NeighborhoodMode::kOwnSpace;
  bool enhance = true;  // only meaningful when vectors are supplied
  bool enhance_initial_table = false;
  Heuristic heuristic = Heuristic::kGrowDiagFinal;
  Indexing gold_indexing = Indexing::kOne;
  bool lowercase = false;
  bool lowercase_fallback = false;
  unsigned threads = 1;
  bool parallel_directions = false;

  /// Throws ConfigError naming the first violated bound.
  void validate() const;
  AlignerConfig aligner() const;
  MapOptions map_options() const;
  /// Flat key=value lines, one per field, in a fixed order.
  std::string describe() const;
};

enum class MapMode {
  kSourceToTarget,  // X W, Y unchanged
  kBoth,            // X U, Y V
};

struct MapResult {
  EmbeddingSpace source;
  EmbeddingSpace target;
  ProcrustesFit fit;
};

/// Preprocesses both spaces, fits Procrustes on the seeds and maps.
MapResult map_spaces(EmbeddingSpace source, EmbeddingSpace target,
                     const SeedPairs& seeds, MapMode mode = MapMode::kSourceToTarget);

struct DirectionRun {
  ParallelCorpus corpus;  // this direction's orientation
  std::optional<MapDistribution> pmap;
  AlignerModel model;
  AlignmentSet alignment;  // in this direction's orientation
};

struct AlignRun {
  DirectionRun forward;   // source -> target
  DirectionRun backward;  // target -> source
  AlignmentSet symmetrized;
};

/// Trains both directions and symmetrizes. `source_space`/`target_space`
/// must be in a shared space already; pass nullptr for a pure baseline.
AlignRun run_alignment(const ParallelCorpus& corpus,
                       const EmbeddingSpace* source_space,
                       const EmbeddingSpace* target_space,
                       const PipelineConfig& config);

/// Writes config.txt, {fwd,bwd}.table, {fwd,bwd}.log, {fwd,bwd}.align and
/// sym.align into `dir` (created if missing).
void write_run_artifacts(const std::string& dir, const AlignRun& run,
                         const PipelineConfig& config);

}  // namespace embalign

#endif  // EMBALIGN_PIPELINE_HPP
