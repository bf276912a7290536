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

#ifndef EMBALIGN_SYMMETRIZE_HPP
#define EMBALIGN_SYMMETRIZE_HPP

#include <string_view>

#include "embalign/alignment.hpp"

namespace embalign {

// Both inputs are in source-to-target orientation: callers transpose the
// target-to-source run before combining. Sentence counts and lengths must
// agree; a mismatch throws std::invalid_argument naming the sentence.

SentenceAlignment intersect(const SentenceAlignment& fwd,
                            const SentenceAlignment& bwd);
SentenceAlignment unite(const SentenceAlignment& fwd,
                        const SentenceAlignment& bwd);

/// Grow-diag-final. Starts from the intersection, then:
///  * grow: scanning existing links in ascending (target, source) order,
///    add any union link in the 8-neighbourhood whose source or target
///    position is still unaligned; repeat until nothing changes.
///  * final: add remaining fwd links, then bwd links, in the same scan
///    order, when their source or target position is unaligned.
SentenceAlignment grow_diag_final(const SentenceAlignment& fwd,
                                  const SentenceAlignment& bwd);

AlignmentSet intersect(const AlignmentSet& fwd, const AlignmentSet& bwd);
AlignmentSet unite(const AlignmentSet& fwd, const AlignmentSet& bwd);
AlignmentSet grow_diag_final(const AlignmentSet& fwd, const AlignmentSet& bwd);

enum class Heuristic { kIntersection, kUnion, kGrowDiagFinal };

/// Accepts "intersect", "union", "grow-diag-final".
Heuristic parse_heuristic(std::string_view name);
std::string_view heuristic_name(Heuristic h);

AlignmentSet symmetrize(const AlignmentSet& fwd, const AlignmentSet& bwd,
                        Heuristic heuristic);

}  // namespace embalign

#endif  // EMBALIGN_SYMMETRIZE_HPP
