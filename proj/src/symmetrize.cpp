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

#include "embalign/symmetrize.hpp"

#include <algorithm>
#include <iterator>
#include <stdexcept>
#include <string>

namespace embalign {

namespace {

void check_shapes(const SentenceAlignment& fwd, const SentenceAlignment& bwd,
                  std::size_t sentence) {
  if (fwd.source_len() != bwd.source_len() || fwd.target_len() != bwd.target_len())
    throw std::invalid_argument(
        "sentence " + std::to_string(sentence) + ": forward is " +
        std::to_string(fwd.source_len()) + "x" + std::to_string(fwd.target_len()) +
        ", backward is " + std::to_string(bwd.source_len()) + "x" +
        std::to_string(bwd.target_len()));
}

void check_counts(const AlignmentSet& fwd, const AlignmentSet& bwd) {
  if (fwd.size() != bwd.size())
    throw std::invalid_argument("alignment sets have " + std::to_string(fwd.size()) +
                                " and " + std::to_string(bwd.size()) + " sentences");
}

// Dense occupancy grid over m x l, indexed [tgt * m + src].
class Grid {
 public:
  Grid(std::size_t m, std::size_t l) : m_(m), l_(l), cells_(m * l, 0) {}
  bool has(std::size_t i, std::size_t j) const { return cells_[j * m_ + i] != 0; }
  void set(std::size_t i, std::size_t j) { cells_[j * m_ + i] = 1; }
  std::size_t m() const { return m_; }
  std::size_t l() const { return l_; }

 private:
  std::size_t m_, l_;
  std::vector<char> cells_;
};

constexpr int kNeighbours[8][2] = {{-1, 0}, {0, -1}, {1, 0},  {0, 1},
                                   {-1, -1}, {-1, 1}, {1, -1}, {1, 1}};

}  // namespace

SentenceAlignment intersect(const SentenceAlignment& fwd,
                            const SentenceAlignment& bwd) {
  check_shapes(fwd, bwd, 0);
  std::vector<Link> out;
  std::set_intersection(fwd.links().begin(), fwd.links().end(), bwd.links().begin(),
                        bwd.links().end(), std::back_inserter(out));
  return SentenceAlignment(fwd.source_len(), fwd.target_len(), std::move(out));
}

SentenceAlignment unite(const SentenceAlignment& fwd,
                        const SentenceAlignment& bwd) {
  check_shapes(fwd, bwd, 0);
  std::vector<Link> out;
  std::set_union(fwd.links().begin(), fwd.links().end(), bwd.links().begin(),
                 bwd.links().end(), std::back_inserter(out));
  return SentenceAlignment(fwd.source_len(), fwd.target_len(), std::move(out));
}

SentenceAlignment grow_diag_final(const SentenceAlignment& fwd,
                                  const SentenceAlignment& bwd) {
  check_shapes(fwd, bwd, 0);
  const std::size_t m = fwd.source_len(), l = fwd.target_len();
  Grid fwd_grid(m, l), bwd_grid(m, l), current(m, l);
  std::vector<char> src_aligned(m, 0), tgt_aligned(l, 0);
  for (const Link& k : fwd.links()) fwd_grid.set(k.src, k.tgt);
  for (const Link& k : bwd.links()) bwd_grid.set(k.src, k.tgt);

  std::vector<Link> result;
  auto add = [&](std::size_t i, std::size_t j) {
    current.set(i, j);
    src_aligned[i] = 1;
    tgt_aligned[j] = 1;
    result.push_back({i, j});
  };
  auto in_union = [&](std::size_t i, std::size_t j) {
    return fwd_grid.has(i, j) || bwd_grid.has(i, j);
  };

  for (std::size_t j = 0; j < l; ++j)
    for (std::size_t i = 0; i < m; ++i)
      if (fwd_grid.has(i, j) && bwd_grid.has(i, j)) add(i, j);

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t j = 0; j < l; ++j) {
      for (std::size_t i = 0; i < m; ++i) {
        if (!current.has(i, j)) continue;
        for (const auto& d : kNeighbours) {
          long ni = static_cast<long>(i) + d[0];
          long nj = static_cast<long>(j) + d[1];
          if (ni < 0 || nj < 0 || ni >= static_cast<long>(m) ||
              nj >= static_cast<long>(l))
            continue;
          auto ui = static_cast<std::size_t>(ni), uj = static_cast<std::size_t>(nj);
          if (current.has(ui, uj) || !in_union(ui, uj)) continue;
          if (!src_aligned[ui] || !tgt_aligned[uj]) {
            add(ui, uj);
            changed = true;
          }
        }
      }
    }
  }

  for (const Grid* directional : {&fwd_grid, &bwd_grid})
    for (std::size_t j = 0; j < l; ++j)
      for (std::size_t i = 0; i < m; ++i)
        if (directional->has(i, j) && !current.has(i, j) &&
            (!src_aligned[i] || !tgt_aligned[j]))
          add(i, j);

  return SentenceAlignment(m, l, std::move(result));
}

namespace {

template <typename Fn>
AlignmentSet per_sentence(const AlignmentSet& fwd, const AlignmentSet& bwd, Fn fn) {
  check_counts(fwd, bwd);
  AlignmentSet out;
  out.reserve(fwd.size());
  for (std::size_t s = 0; s < fwd.size(); ++s) {
    check_shapes(fwd[s], bwd[s], s);
    out.push_back(fn(fwd[s], bwd[s]));
  }
  return out;
}

}  // namespace

AlignmentSet intersect(const AlignmentSet& fwd, const AlignmentSet& bwd) {
  return per_sentence(fwd, bwd, [](const auto& a, const auto& b) { return intersect(a, b); });
}

AlignmentSet unite(const AlignmentSet& fwd, const AlignmentSet& bwd) {
  return per_sentence(fwd, bwd, [](const auto& a, const auto& b) { return unite(a, b); });
}

AlignmentSet grow_diag_final(const AlignmentSet& fwd, const AlignmentSet& bwd) {
  return per_sentence(fwd, bwd,
                      [](const auto& a, const auto& b) { return grow_diag_final(a, b); });
}

Heuristic parse_heuristic(std::string_view name) {
  if (name == "intersect" || name == "intersection") return Heuristic::kIntersection;
  if (name == "union") return Heuristic::kUnion;
  if (name == "grow-diag-final" || name == "gdf") return Heuristic::kGrowDiagFinal;
  throw std::invalid_argument("unknown symmetrization heuristic: " + std::string(name));
}

std::string_view heuristic_name(Heuristic h) {
  switch (h) {
    case Heuristic::kIntersection: return "intersect";
    case Heuristic::kUnion: return "union";
    case Heuristic::kGrowDiagFinal: return "grow-diag-final";
  }
  return "grow-diag-final";
}

AlignmentSet symmetrize(const AlignmentSet& fwd, const AlignmentSet& bwd,
                        Heuristic heuristic) {
  switch (heuristic) {
    case Heuristic::kIntersection: return intersect(fwd, bwd);
    case Heuristic::kUnion: return unite(fwd, bwd);
    case Heuristic::kGrowDiagFinal: return grow_diag_final(fwd, bwd);
  }
  throw std::invalid_argument("bad heuristic");
}

}  // namespace embalign
