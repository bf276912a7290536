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

#include "embalign/eval.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "embalign/corpus.hpp"

namespace embalign {

void GoldAlignment::add(std::size_t sentence, Link link, bool sure) {
  if (sentences.size() <= sentence) sentences.resize(sentence + 1);
  auto& s = sentences[sentence];
  if (sure) s.sure.insert(link);
  s.possible.insert(link);
}

GoldAlignment read_gold(std::istream& in, Indexing indexing,
                        const std::string& source_name, std::size_t min_sentences) {
  GoldAlignment gold;
  std::string line;
  std::size_t line_no = 0;
  const std::size_t base = indexing == Indexing::kOne ? 1 : 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto toks = split_tokens(line);
    if (toks.empty()) continue;
    auto fail = [&](const std::string& why) {
      return FormatError(source_name + ":" + std::to_string(line_no) + ": " + why);
    };
    if (toks.size() != 3 && toks.size() != 4)
      throw fail("expected \"sentence src tgt [S|P]\"");
    std::size_t nums[3];
    for (int k = 0; k < 3; ++k) {
      auto t = toks[static_cast<std::size_t>(k)];
      auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), nums[k]);
      if (ec != std::errc() || ptr != t.data() + t.size())
        throw fail("bad number \"" + std::string(t) + "\"");
      if (nums[k] < base) throw fail("index below the one-based minimum");
      nums[k] -= base;
    }
    bool sure = true;
    if (toks.size() == 4) {
      if (toks[3] == "S")
        sure = true;
      else if (toks[3] == "P")
        sure = false;
      else
        throw fail("unknown label \"" + std::string(toks[3]) + "\"");
    }
    gold.add(nums[0], {nums[1], nums[2]}, sure);
  }
  if (gold.sentences.size() < min_sentences) gold.sentences.resize(min_sentences);
  return gold;
}

GoldAlignment load_gold(const std::string& path, Indexing indexing,
                        std::size_t min_sentences) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_gold(in, indexing, path, min_sentences);
}

void AlignmentCounts::add(const AlignmentCounts& o) {
  predicted += o.predicted;
  sure += o.sure;
  possible += o.possible;
  hit_sure += o.hit_sure;
  hit_possible += o.hit_possible;
}

AlignmentCounts count_links(const SentenceAlignment& pred, const GoldSentence& gold) {
  AlignmentCounts c;
  c.predicted = pred.size();
  c.sure = gold.sure.size();
  c.possible = gold.possible.size();
  for (const Link& k : pred.links()) {
    if (gold.sure.count(k)) ++c.hit_sure;
    if (gold.possible.count(k)) ++c.hit_possible;
  }
  return c;
}

Score score_from_counts(const AlignmentCounts& c) {
  Score s;
  s.counts = c;
  const double a = static_cast<double>(c.predicted);
  const double sure = static_cast<double>(c.sure);
  // An empty prediction against a nonempty gold set scores precision 0.
  s.precision = c.predicted ? static_cast<double>(c.hit_possible) / a
                            : (c.sure ? 0.0 : 1.0);
  s.recall = c.sure ? static_cast<double>(c.hit_sure) / sure : 1.0;
  s.aer = (c.predicted + c.sure) == 0
              ? 0.0
              : 1.0 - static_cast<double>(c.hit_sure + c.hit_possible) / (a + sure);
  return s;
}

Score score(const AlignmentSet& pred, const GoldAlignment& gold) {
  if (pred.size() != gold.size())
    throw std::invalid_argument("prediction has " + std::to_string(pred.size()) +
                                " sentences, gold has " + std::to_string(gold.size()));
  AlignmentCounts total;
  for (std::size_t s = 0; s < pred.size(); ++s)
    total.add(count_links(pred[s], gold.sentences[s]));
  return score_from_counts(total);
}

std::string format_score(const Score& s) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "AER=%.4f P=%.4f R=%.4f |A|=%zu |S|=%zu", s.aer,
                s.precision, s.recall, s.counts.predicted, s.counts.sure);
  return buf;
}

void write_sentence_scores(std::ostream& out, const AlignmentSet& pred,
                           const GoldAlignment& gold) {
  if (pred.size() != gold.size())
    throw std::invalid_argument("prediction and gold differ in sentence count");
  out << "sentence\tA\tS\tP\tA_and_S\tA_and_P\tAER\n";
  char aer[32];
  for (std::size_t s = 0; s < pred.size(); ++s) {
    auto c = count_links(pred[s], gold.sentences[s]);
    std::snprintf(aer, sizeof aer, "%.4f", score_from_counts(c).aer);
    out << s << '\t' << c.predicted << '\t' << c.sure << '\t' << c.possible << '\t'
        << c.hit_sure << '\t' << c.hit_possible << '\t' << aer << '\n';
  }
}

}  // namespace embalign
