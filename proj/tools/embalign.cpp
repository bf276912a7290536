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

// embalign: embedding-enhanced IBM Model 1 / HMM word alignment.
//
//   embalign map   --src-vectors A.vec --tgt-vectors B.vec --seeds dict.txt
//                  --out-src A.mapped.vec --out-tgt B.mapped.vec
//   embalign align --src corpus.de --tgt corpus.en
//                  [--src-vectors A.mapped.vec --tgt-vectors B.mapped.vec]
//                  [--config run.cfg] --out pred.align
//   embalign eval  --pred pred.align --gold gold.txt
//
// Exit status: 0 success, 1 runtime failure, 2 usage error.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "embalign/pipeline.hpp"

namespace {

using namespace embalign;

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct MapArgs {
  std::string src_vectors, tgt_vectors, seeds, out_src, out_tgt;
  std::size_t vocab_limit = 200000;
  bool map_both = false;
};

struct AlignArgs {
  std::string src, tgt, src_vectors, tgt_vectors, config_file, out;
  std::string run_dir, tag = "run";
  std::string neighborhood = "own", symmetrize = "grow-diag-final";
  PipelineConfig config;
};

struct EvalArgs {
  std::string pred, gold, indexing = "one", per_sentence;
  std::size_t limit = 0;
};

// Flat key=value; '#' starts a comment line.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  std::size_t line_no = 0;
  auto trim = [](std::string s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--config", path + ":" + std::to_string(line_no) +
                                                 ": expected key=value");
    entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return entries;
}

void add_map_command(CLI::App& app, MapArgs& a) {
  auto* cmd = app.add_subcommand("map", "Map two embedding spaces into a shared space");
  cmd->add_option("--src-vectors", a.src_vectors, "Source text vectors")
      ->required()->check(CLI::ExistingFile);
  cmd->add_option("--tgt-vectors", a.tgt_vectors, "Target text vectors")
      ->required()->check(CLI::ExistingFile);
  cmd->add_option("--seeds", a.seeds, "Seed dictionary, one 'src tgt' pair per line")
      ->required()->check(CLI::ExistingFile);
  cmd->add_option("--out-src", a.out_src, "Mapped source vectors")->required();
  cmd->add_option("--out-tgt", a.out_tgt, "Mapped target vectors")->required();
  cmd->add_option("--vocab-limit", a.vocab_limit, "Rows kept per space")
      ->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_flag("--map-both", a.map_both,
                "Rotate both spaces into a common frame instead of source onto target");
}

void add_align_command(CLI::App& app, AlignArgs& a) {
  auto* cmd = app.add_subcommand("align", "Train both directions and symmetrize");
  PipelineConfig& c = a.config;
  cmd->add_option("--src", a.src, "Source side, one tokenized sentence per line")
      ->required()->check(CLI::ExistingFile);
  cmd->add_option("--tgt", a.tgt, "Target side")->required()->check(CLI::ExistingFile);
  cmd->add_option("--src-vectors", a.src_vectors, "Mapped source vectors")
      ->check(CLI::ExistingFile);
  cmd->add_option("--tgt-vectors", a.tgt_vectors, "Mapped target vectors")
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", a.out, "Symmetrized Pharaoh output")->required();
  cmd->add_option("--config", a.config_file, "key=value file; flags override it")
      ->check(CLI::ExistingFile);
  cmd->add_option("--run-dir", a.run_dir, "Directory for tables, logs and alignments");
  cmd->add_option("--tag", a.tag, "Run name inside --run-dir")->capture_default_str();

  cmd->add_option("--lambda", c.lambda, "Weight of the embedding distribution")
      ->check(CLI::NonNegativeNumber)->capture_default_str();
  cmd->add_option("--tau", c.tau, "Softmax temperature")
      ->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--k", c.k, "Neighbours in the CSLS mean")
      ->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--m1-iters", c.model1_iterations, "Model 1 EM iterations")
      ->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--hmm-iters", c.hmm_iterations, "HMM EM iterations")
      ->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--vocab-limit", c.vocab_limit, "Rows kept per embedding space")
      ->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--p0", c.p0, "HMM NULL transition probability")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  cmd->add_option("--max-jump", c.max_jump, "Largest distinct HMM jump width")
      ->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--neighborhood", a.neighborhood, "CSLS neighbourhoods: own or cross")
      ->check(CLI::IsMember({"own", "cross"}))->capture_default_str();
  cmd->add_option("--symmetrize", a.symmetrize, "intersect, union or grow-diag-final")
      ->check(CLI::IsMember({"intersect", "union", "grow-diag-final"}))
      ->capture_default_str();
  cmd->add_flag("--enhance,!--no-enhance", c.enhance,
                "Interpolate the embedding distribution when vectors are given");
  cmd->add_flag("--enhance-initial", c.enhance_initial_table,
                "Also enhance the uniform table before the first iteration");
  cmd->add_flag("--lowercase", c.lowercase, "Lowercase corpus tokens");
  cmd->add_flag("--lowercase-fallback", c.lowercase_fallback,
                "Retry vector lookup with the lowercased word");
  cmd->add_option("--threads", c.threads, "Worker threads per direction")
      ->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_flag("--parallel-directions", c.parallel_directions,
                "Train the two directions concurrently");
}

void add_eval_command(CLI::App& app, EvalArgs& a) {
  auto* cmd = app.add_subcommand("eval", "Score Pharaoh predictions against gold links");
  cmd->add_option("--pred", a.pred, "Predicted alignments")->required()->check(CLI::ExistingFile);
  cmd->add_option("--gold", a.gold, "Gold 'sent src tgt [S|P]' lines")
      ->required()->check(CLI::ExistingFile);
  cmd->add_option("--indexing", a.indexing, "Gold indexing: one or zero")
      ->check(CLI::IsMember({"one", "zero"}))->capture_default_str();
  cmd->add_option("--limit", a.limit, "Score only the first N sentences of both files");
  cmd->add_option("--per-sentence", a.per_sentence, "Write per-sentence TSV here");
}

int run_map(const MapArgs& a) {
  auto x = load_vectors(a.src_vectors, a.vocab_limit);
  auto y = load_vectors(a.tgt_vectors, a.vocab_limit);
  auto seeds = load_seed_pairs(a.seeds);
  auto result = map_spaces(std::move(x), std::move(y), seeds,
                           a.map_both ? MapMode::kBoth : MapMode::kSourceToTarget);
  save_vectors(a.out_src, result.source);
  save_vectors(a.out_tgt, result.target);
  const auto& f = result.fit;
  if (f.underdetermined)
    std::cerr << "warning: " << f.seeds_used << " seeds for " << result.source.dim()
              << " dimensions\n";
  std::printf("seeds=%zu/%zu residual=%.9g relative_residual=%.9g\n", f.seeds_used,
              f.seeds_used + f.seeds_missing, f.residual, f.relative_residual);
  return 0;
}

int run_align(AlignArgs& a) {
  a.config.neighborhood =
      a.neighborhood == "cross" ? NeighborhoodMode::kCrossSpace : NeighborhoodMode::kOwnSpace;
  a.config.heuristic = parse_heuristic(a.symmetrize);
  a.config.validate();
  if (a.src_vectors.empty() != a.tgt_vectors.empty())
    throw CLI::ValidationError("--src-vectors", "give both vector files or neither");

  CorpusOptions copts;
  copts.lowercase = a.config.lowercase;
  auto corpus = load_parallel_corpus(a.src, a.tgt, copts);
  const auto& rep = corpus.report();
  std::cerr << "corpus: " << rep.pairs_kept << " pairs, " << rep.pairs_dropped
            << " dropped\n"
            << a.config.describe();

  std::optional<EmbeddingSpace> xs, ys;
  if (!a.src_vectors.empty()) {
    xs = load_vectors(a.src_vectors, a.config.vocab_limit);
    ys = load_vectors(a.tgt_vectors, a.config.vocab_limit);
  }
  auto run = run_alignment(corpus, xs ? &*xs : nullptr, ys ? &*ys : nullptr, a.config);
  for (const auto* d : {&run.forward, &run.backward})
    if (d->pmap)
      std::cerr << (d == &run.forward ? "fwd" : "bwd") << " p_map: " << d->pmap->row_count()
                << " rows, " << d->pmap->entry_count() << " entries\n";
  save_pharaoh(a.out, run.symmetrized);
  if (!a.run_dir.empty())
    write_run_artifacts((std::filesystem::path(a.run_dir) / a.tag).string(), run, a.config);
  return 0;
}

int run_eval(const EvalArgs& a) {
  auto pred = load_pharaoh(a.pred);
  if (a.limit > 0 && pred.size() > a.limit) pred.resize(a.limit);
  auto gold = load_gold(a.gold, a.indexing == "zero" ? Indexing::kZero : Indexing::kOne);
  if (a.limit > 0 && gold.size() > a.limit) gold.sentences.resize(a.limit);
  auto s = score(pred, gold);
  std::printf("%s\n", format_score(s).c_str());
  if (!a.per_sentence.empty()) {
    std::ofstream out(a.per_sentence);
    if (!out) throw IoError("cannot write " + a.per_sentence);
    write_sentence_scores(out, pred, gold);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Embedding-enhanced IBM Model 1 / HMM word aligner"};
  app.require_subcommand(1);
  MapArgs map_args;
  AlignArgs align_args;
  EvalArgs eval_args;
  add_map_command(app, map_args);
  add_align_command(app, align_args);
  add_eval_command(app, eval_args);

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
    app.parse(args);
    auto* align = app.get_subcommand("align");
    if (align->parsed() && !align_args.config_file.empty()) {
      // Config values fill in only the options not given as flags.
      std::vector<std::string> merged(argv + 1, argv + argc);
      for (const auto& [key, value] : read_config_file(align_args.config_file)) {
        std::string name = "--" + key;
        std::replace(name.begin() + 2, name.end(), '_', '-');
        auto* opt = align->get_option_no_throw(name);
        if (!opt || name == "--config")
          throw CLI::ValidationError("--config", "unknown key '" + key + "'");
        if (opt->count() == 0) merged.push_back(name + "=" + value);
      }
      align_args = AlignArgs{};
      app.clear();
      std::reverse(merged.begin(), merged.end());
      app.parse(merged);
    }
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (app.got_subcommand("map")) return run_map(map_args);
    if (app.got_subcommand("align")) return run_align(align_args);
    return run_eval(eval_args);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
