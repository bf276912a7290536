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

#ifndef EMBALIGN_ALIGNMENT_HPP
#define EMBALIGN_ALIGNMENT_HPP

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace embalign {

/// A link between source position `src` and target position `tgt`, both
/// 0-indexed.
struct Link {
  std::size_t src = 0;
  std::size_t tgt = 0;
  auto operator<=>(const Link&) const = default;
};

/// Links of one sentence pair, kept sorted by (src, tgt) without duplicates.
class SentenceAlignment {
 public:
  SentenceAlignment() = default;
  /// Throws std::out_of_range when a link falls outside m x l.
  SentenceAlignment(std::size_t source_len, std::size_t target_len,
                    std::vector<Link> links);

  std::size_t source_len() const { return m_; }
  std::size_t target_len() const { return l_; }
  const std::vector<Link>& links() const { return links_; }
  std::size_t size() const { return links_.size(); }
  bool contains(Link link) const;
  void insert(Link link);

  /// Source and target roles exchanged.
  SentenceAlignment transposed() const;

  bool operator==(const SentenceAlignment&) const = default;

 private:
  std::size_t m_ = 0;
  std::size_t l_ = 0;
  std::vector<Link> links_;
};

using AlignmentSet = std::vector<SentenceAlignment>;

AlignmentSet transpose(const AlignmentSet& set);

/// "i-j" links, space separated, ascending (i, j).
std::string to_pharaoh(const SentenceAlignment& sentence);
void write_pharaoh(std::ostream& out, const AlignmentSet& set);
void save_pharaoh(const std::string& path, const AlignmentSet& set);

/// Parses Pharaoh lines. Sentence lengths are unknown in this format and are
/// inferred as one past the largest index seen. Throws FormatError on a
/// malformed link.
AlignmentSet read_pharaoh(std::istream& in, const std::string& source_name = "<stream>");
AlignmentSet load_pharaoh(const std::string& path);

}  // namespace embalign

#endif  // EMBALIGN_ALIGNMENT_HPP
