// Copyright 2026 The tsel Authors.
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

#ifndef TSEL_BPE_HPP_
#define TSEL_BPE_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tsel/features.hpp"

namespace tsel::bpe {

// Suffix on the last symbol of every word while segmenting.
inline constexpr std::string_view kEndOfWord = "</w>";
// Suffix on every rendered subword that is not the end of its word.
inline constexpr std::string_view kContinuation = "@@";
inline constexpr std::string_view kDefaultHeader = "#version: 0.2";

using SymbolPair = std::pair<std::string, std::string>;

// Merge operations in learning order.
class MergeTable {
 public:
  MergeTable() = default;
  // Throws ConfigError on a repeated pair.
  explicit MergeTable(std::vector<SymbolPair> merges, std::string header = std::string(kDefaultHeader));

  const std::vector<SymbolPair>& merges() const { return merges_; }
  std::size_t num_merges() const { return merges_.size(); }
  const std::string& header() const { return header_; }
  std::optional<std::size_t> rank(std::string_view left, std::string_view right) const;

 private:
  std::vector<SymbolPair> merges_;
  std::string header_ = std::string(kDefaultHeader);
  StringMap<std::size_t> ranks_;  // "left right" -> position
};

// Throws MalformedInputError if `token` contains a reserved marker.
void check_marker_free(std::string_view token);

// Characters of `word` with the end-of-word marker on the last one.
std::vector<std::string> word_symbols(std::string_view word);

// Word-type frequencies, e.g. from counting a tokenized corpus.
using WordCounts = std::vector<std::pair<std::string, std::uint64_t>>;

WordCounts count_words(const std::vector<std::vector<std::string>>& corpus);

// Learns up to `num_merges` merges: repeatedly merges the most frequent
// adjacent pair (ties to the lexicographically smallest pair), stopping
// early once no pair occurs at least twice.
MergeTable learn_bpe(const WordCounts& words, std::size_t num_merges);
MergeTable learn_bpe(const std::vector<std::vector<std::string>>& corpus, std::size_t num_merges);

// Symbols of one word after applying every merge once, in table order.
std::vector<std::string> segment_word(std::string_view word, const MergeTable& merges);

// Applies a merge table to tokens, rendering subwords with "@@"
// continuation markers. Caches segmentations per word type; not
// thread-safe.
class Encoder {
 public:
  explicit Encoder(const MergeTable& merges) : merges_(merges) {}

  std::vector<std::string> encode(std::span<const std::string> tokens);
  void encode_word(std::string_view word, std::vector<std::string>& out);

 private:
  const MergeTable& merges_;
  std::unordered_map<std::string, std::vector<std::string>> cache_;
};

std::vector<std::string> apply_bpe(std::span<const std::string> tokens, const MergeTable& merges);

// Joins "@@"-continued subwords back into words. Throws
// MalformedInputError when the last token still expects a continuation.
std::vector<std::string> unapply_bpe(std::span<const std::string> subwords);

void write_merge_table(const MergeTable& table, const std::filesystem::path& path);
MergeTable read_merge_table(const std::filesystem::path& path);

}  // namespace tsel::bpe

#endif  // TSEL_BPE_HPP_
