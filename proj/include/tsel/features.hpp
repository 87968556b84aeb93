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

#ifndef TSEL_FEATURES_HPP_
#define TSEL_FEATURES_HPP_

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tsel/corpus.hpp"

namespace tsel {

// Orders of the n-grams used as features, inclusive on both ends.
struct NgramConfig {
  int min_order = 1;
  int max_order = 3;

  void validate() const;  // throws ConfigError
};

// Calls fn(std::string_view) for every n-gram of `s`, order by order and
// left to right within an order, with multiplicity.
template <class Fn>
void for_each_ngram(const Sentence& s, const NgramConfig& cfg, Fn&& fn) {
  const std::size_t len = s.size();
  for (int order = cfg.min_order; order <= cfg.max_order; ++order) {
    const auto k = static_cast<std::size_t>(order);
    if (k > len) break;
    for (std::size_t i = 0; i + k <= len; ++i) fn(s.span(i, k));
  }
}

// The multiset of n-grams of `tokens`; each n-gram is its tokens joined
// by one space.
std::vector<std::string> extract_ngrams(std::span<const std::string> tokens,
                                        const NgramConfig& cfg);
std::vector<std::string> extract_ngrams(const Sentence& s, const NgramConfig& cfg);

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept {
    return std::hash<std::string_view>{}(s);
  }
};

template <class V>
using StringMap = std::unordered_map<std::string, V, StringHash, std::equal_to<>>;

// Document frequencies over the candidate pool, one document per
// candidate source sentence.
class IdfTable {
 public:
  IdfTable() = default;
  IdfTable(std::uint64_t doc_count, StringMap<std::uint32_t> df);

  std::uint64_t doc_count() const { return doc_count_; }
  std::size_t vocabulary_size() const { return df_.size(); }
  // 0 for terms never seen in the pool.
  std::uint32_t df(std::string_view term) const;
  // log(N / df) in the given base (natural when unset). Unseen terms are
  // treated as df = 1.
  double log_idf(std::string_view term, std::optional<double> base = std::nullopt) const;

 private:
  std::uint64_t doc_count_ = 0;
  StringMap<std::uint32_t> df_;
};

IdfTable compute_idf(const CandidatePool& pool, const NgramConfig& cfg, unsigned threads = 0);

// Sparse term-weight vector. Entries are kept sorted by term; sums over
// entries (norm, dot products) always run in that order so that equal
// vectors give bit-identical results.
class SparseVector {
 public:
  SparseVector() = default;
  // Duplicated terms are summed; zero weights are dropped.
  explicit SparseVector(std::vector<std::pair<std::string, double>> entries);

  const std::vector<std::pair<std::string, double>>& entries() const { return entries_; }
  double norm() const { return norm_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  double weight(std::string_view term) const;

 private:
  std::vector<std::pair<std::string, double>> entries_;
  double norm_ = 0.0;
};

namespace detail {

// Sorted, zero-free (term, tf * log idf) pairs of a sentence; the terms
// view into `s`.
std::vector<std::pair<std::string_view, double>> tfidf_terms(const Sentence& s,
                                                             const IdfTable& idf,
                                                             const NgramConfig& cfg,
                                                             std::optional<double> base);

template <class Range>
double l2_norm(const Range& entries) {
  double sum = 0.0;
  for (const auto& e : entries) sum += e.second * e.second;
  return std::sqrt(sum);
}

// dot / (norm_a * norm_b), clamped into [0, 1]; 0 if either norm is 0.
double cosine_from(double dot, double norm_a, double norm_b);

}  // namespace detail

SparseVector tfidf_vector(const Sentence& s, const IdfTable& idf, const NgramConfig& cfg,
                          std::optional<double> log_base = std::nullopt);
SparseVector tfidf_vector(std::span<const std::string> tokens, const IdfTable& idf,
                          const NgramConfig& cfg, std::optional<double> log_base = std::nullopt);

double dot(const SparseVector& u, const SparseVector& v);
double cosine_sim(const SparseVector& u, const SparseVector& v);

// A test feature present in a candidate, with its occurrence count there.
struct FeatureHit {
  std::uint32_t feature;
  std::uint32_t count;
};

// Inverted index from test-set n-grams to the candidates containing them.
// Feature ids number the distinct test n-grams in lexicographic order.
class FeatureIndex {
 public:
  FeatureIndex() = default;

  std::size_t test_feature_count() const { return features_.size(); }
  std::size_t candidate_count() const { return hit_offsets_.empty() ? 0 : hit_offsets_.size() - 1; }

  const std::vector<std::string>& features() const { return features_; }
  std::optional<std::uint32_t> feature_id(std::string_view ngram) const;

  std::span<const std::uint32_t> postings(std::uint32_t feature) const;
  std::span<const std::uint32_t> postings(std::string_view ngram) const;
  // Test n-grams occurring in at least one candidate.
  std::vector<std::string_view> indexed_ngrams() const;

  // Distinct test features of a candidate, ascending by id.
  std::span<const FeatureHit> candidate_features(std::size_t candidate) const;
  std::uint32_t candidate_length(std::size_t candidate) const { return lengths_[candidate]; }

 private:
  friend FeatureIndex build_feature_index(const CandidatePool&, const TestSet&,
                                          const NgramConfig&, unsigned);
  friend std::vector<FeatureHit> match_features(const FeatureIndex&, const Sentence&,
                                                const NgramConfig&);

  std::vector<std::string> features_;
  StringMap<std::uint32_t> ids_;
  std::vector<std::uint64_t> posting_offsets_;
  std::vector<std::uint32_t> postings_;
  std::vector<std::uint64_t> hit_offsets_;
  std::vector<FeatureHit> hits_;
  std::vector<std::uint32_t> lengths_;
};

FeatureIndex build_feature_index(const CandidatePool& pool, const TestSet& test,
                                 const NgramConfig& cfg, unsigned threads = 0);

// Distinct test features of an arbitrary sentence against an existing
// index, ascending by id.
std::vector<FeatureHit> match_features(const FeatureIndex& index, const Sentence& s,
                                       const NgramConfig& cfg);

}  // namespace tsel

#endif  // TSEL_FEATURES_HPP_
