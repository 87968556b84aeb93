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

#ifndef TSEL_SELECTION_HPP_
#define TSEL_SELECTION_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "tsel/corpus.hpp"
#include "tsel/features.hpp"

namespace tsel {

enum class Method { tfidf, inr, fda };

std::string_view to_string(Method m);
Method parse_method(std::string_view name);  // throws ConfigError

// How the selected-pool count of an n-gram grows when a sentence
// containing it is selected.
enum class CountMode {
  occurrences,  // by the number of occurrences in the sentence
  sentences,    // by one per selected sentence
};

std::string_view to_string(CountMode m);
CountMode parse_count_mode(std::string_view name);

struct SelectionEntry {
  std::size_t rank = 0;
  std::size_t global_index = 0;
  double score = 0.0;  // at selection time
  std::string corpus_id;
  std::uint64_t line_no = 0;
};

struct Selection {
  Method method = Method::fda;
  std::vector<SelectionEntry> entries;
  // Every parameter of the run, rendered as text, in a fixed order.
  std::vector<std::pair<std::string, std::string>> config;
  std::size_t requested = 0;
  // Stopped before `requested` because no remaining candidate scored > 0.
  bool exhausted = false;
};

// Selected-pool counts of test n-grams. Absent means zero.
struct DecayState {
  StringMap<std::uint64_t> counts;

  std::uint64_t count(std::string_view ngram) const {
    auto it = counts.find(ngram);
    return it == counts.end() ? 0 : it->second;
  }
};

// Counts the test n-grams occurring in `corpus`, for seeding a run with
// an already-selected pool.
DecayState count_test_ngrams(std::span<const Sentence> corpus, const TestSet& test,
                             const NgramConfig& cfg, CountMode mode = CountMode::occurrences);

struct TfidfConfig {
  NgramConfig ngram;
  // Per test sentence top-k with duplicates instead of one global ranking.
  bool per_sentence = false;
};

struct InrConfig {
  std::uint64_t t = 80;
  NgramConfig ngram;
  CountMode count_mode = CountMode::occurrences;
  DecayState seed;

  void validate() const;
};

struct FdaConfig {
  double d = 0.5;
  double c = 0.0;
  double init = 1.0;
  // Per-feature initial value; overrides `init` when set. Must be > 0.
  std::function<double(std::string_view)> init_fn;
  NgramConfig ngram;
  CountMode count_mode = CountMode::occurrences;
  DecayState seed;

  void validate() const;
};

using MethodConfig = std::variant<TfidfConfig, InrConfig, FdaConfig>;

// Global ranking by the best cosine similarity against any test sentence.
// Ties go to the smaller global index. Returns min(n, |pool|) entries.
Selection tfidf_select(const CandidatePool& pool, const TestSet& test, std::size_t n,
                       const TfidfConfig& cfg, unsigned threads = 0);

Selection inr_select(const CandidatePool& pool, const TestSet& test, std::size_t n,
                     const InrConfig& cfg, unsigned threads = 0);

Selection fda_select(const CandidatePool& pool, const TestSet& test, std::size_t n,
                     const FdaConfig& cfg, unsigned threads = 0);

Selection select(const CandidatePool& pool, const TestSet& test, std::size_t n,
                 const MethodConfig& cfg, unsigned threads = 0);

// Round-one score of every candidate, indexed by global index.
std::vector<double> score_dump(const CandidatePool& pool, const TestSet& test,
                               const MethodConfig& cfg, unsigned threads = 0);

struct GreedyPick {
  std::uint32_t candidate;
  double score;
};

struct GreedyResult {
  std::vector<GreedyPick> picks;
  bool exhausted = false;
};

// Greedy selection for scores that never increase as the selected pool
// grows. Keeps a max-heap of possibly stale scores: the top is rescored
// and taken only if it still beats the next head, otherwise reinserted.
// Picks the same sequence as rescoring every candidate each round, with
// ties to the smaller index. Candidates whose score reaches 0 are dropped;
// an empty heap before n picks sets `exhausted`.
//
// `rescore(i)` returns the current score of i; `commit(i)` records i as
// selected. Throws std::logic_error if a rescored value exceeds its
// cached one.
GreedyResult lazy_greedy(std::span<const double> initial_scores, std::size_t n,
                         const std::function<double(std::uint32_t)>& rescore,
                         const std::function<void(std::uint32_t)>& commit);

}  // namespace tsel

#endif  // TSEL_SELECTION_HPP_
