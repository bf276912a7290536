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

#include "embalign/alignment.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <stdexcept>

#include "embalign/corpus.hpp"

namespace embalign {

SentenceAlignment::SentenceAlignment(std::size_t source_len,
                                     std::size_t target_len,
                                     std::vector<Link> links)
    : m_(source_len), l_(target_len), links_(std::move(links)) {
  for (const Link& k : links_)
    if (k.src >= m_ || k.tgt >= l_)
      throw std::out_of_range("link " + std::to_string(k.src) + "-" +
                              std::to_string(k.tgt) + " outside " +
                              std::to_string(m_) + "x" + std::to_string(l_));
  std::sort(links_.begin(), links_.end());
  links_.erase(std::unique(links_.begin(), links_.end()), links_.end());
}

bool SentenceAlignment::contains(Link link) const {
  return std::binary_search(links_.begin(), links_.end(), link);
}

void SentenceAlignment::insert(Link link) {
  if (link.src >= m_ || link.tgt >= l_)
    throw std::out_of_range("link outside sentence bounds");
  auto it = std::lower_bound(links_.begin(), links_.end(), link);
  if (it == links_.end() || *it != link) links_.insert(it, link);
}

SentenceAlignment SentenceAlignment::transposed() const {
  std::vector<Link> t;
  t.reserve(links_.size());
  for (const Link& k : links_) t.push_back({k.tgt, k.src});
  return SentenceAlignment(l_, m_, std::move(t));
}

AlignmentSet transpose(const AlignmentSet& set) {
  AlignmentSet out;
  out.reserve(set.size());
  for (const auto& s : set) out.push_back(s.transposed());
  return out;
}

std::string to_pharaoh(const SentenceAlignment& sentence) {
  std::string out;
  for (const Link& k : sentence.links()) {
    if (!out.empty()) out += ' ';
    out += std::to_string(k.src);
    out += '-';
    out += std::to_string(k.tgt);
  }
  return out;
}

void write_pharaoh(std::ostream& out, const AlignmentSet& set) {
  for (const auto& s : set) out << to_pharaoh(s) << '\n';
}

void save_pharaoh(const std::string& path, const AlignmentSet& set) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  write_pharaoh(out, set);
  if (!out) throw IoError("error writing " + path);
}

AlignmentSet read_pharaoh(std::istream& in, const std::string& source_name) {
  AlignmentSet set;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::vector<Link> links;
    std::size_t m = 0, l = 0;
    for (std::string_view tok : split_tokens(line)) {
      auto dash = tok.find('-');
      Link k;
      bool ok = dash != std::string_view::npos;
      if (ok) {
        auto a = std::from_chars(tok.data(), tok.data() + dash, k.src);
        auto b = std::from_chars(tok.data() + dash + 1, tok.data() + tok.size(), k.tgt);
        ok = a.ec == std::errc() && a.ptr == tok.data() + dash &&
             b.ec == std::errc() && b.ptr == tok.data() + tok.size();
      }
      if (!ok)
        throw FormatError(source_name + ":" + std::to_string(line_no) +
                          ": bad link \"" + std::string(tok) + "\"");
      m = std::max(m, k.src + 1);
      l = std::max(l, k.tgt + 1);
      links.push_back(k);
    }
    set.emplace_back(m, l, std::move(links));
  }
  return set;
}

AlignmentSet load_pharaoh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_pharaoh(in, path);
}

}  // namespace embalign
