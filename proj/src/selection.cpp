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

#include "tsel/selection.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "tsel/error.hpp"
#include "tsel/threads.hpp"

namespace tsel {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::tfidf: return "tfidf";
    case Method::inr: return "inr";
    case Method::fda: return "fda";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  if (name == "tfidf") return Method::tfidf;
  if (name == "inr") return Method::inr;
  if (name == "fda") return Method::fda;
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

std::string_view to_string(CountMode m) {
  return m == CountMode::occurrences ? "occurrences" : "sentences";
}

CountMode parse_count_mode(std::string_view name) {
  if (name == "occurrences") return CountMode::occurrences;
  if (name == "sentences") return CountMode::sentences;
  throw ConfigError("unknown count mode '" + std::string(name) + "'");
}

void InrConfig::validate() const {
  ngram.validate();
  if (t < 1) throw ConfigError("INR threshold t must be >= 1");
}

void FdaConfig::validate() const {
  ngram.validate();
  if (!(d > 0.0 && d <= 1.0)) throw ConfigError("FDA decay d must be in (0, 1]");
  if (!(c >= 0.0)) throw ConfigError("FDA exponent c must be >= 0");
  if (!(init > 0.0)) throw ConfigError("FDA init must be > 0");
}

DecayState count_test_ngrams(std::span<const Sentence> corpus, const TestSet& test,
                             const NgramConfig& cfg, CountMode mode) {
  cfg.validate();
  DecayState state;
  for (const auto& s : test.sentences()) {
    for_each_ngram(s, cfg, [&](std::string_view g) {
      if (state.counts.find(g) == state.counts.end()) state.counts.emplace(std::string(g), 0);
    });
  }
  std::vector<std::string_view> seen;
  for (const auto& s : corpus) {
    seen.clear();
    for_each_ngram(s, cfg, [&](std::string_view g) {
      auto it = state.counts.find(g);
      if (it == state.counts.end()) return;
      if (mode == CountMode::sentences) {
        if (std::find(seen.begin(), seen.end(), g) != seen.end()) return;
        seen.push_back(g);
      }
      ++it->second;
    });
  }
  std::erase_if(state.counts, [](const auto& kv) { return kv.second == 0; });
  return state;
}

// ---------------------------------------------------------------- engine

namespace {

struct HeapItem {
  double score;
  std::uint32_t candidate;
};

// Orders the heap so that top() is the highest score, smallest index.
struct Lower {
  bool operator()(const HeapItem& a, const HeapItem& b) const {
    if (a.score != b.score) return a.score < b.score;
    return a.candidate > b.candidate;
  }
};

}  // namespace

GreedyResult lazy_greedy(std::span<const double> initial_scores, std::size_t n,
                         const std::function<double(std::uint32_t)>& rescore,
                         const std::function<void(std::uint32_t)>& commit) {
  std::vector<HeapItem> items;
  for (std::size_t i = 0; i < initial_scores.size(); ++i) {
    if (initial_scores[i] > 0.0) items.push_back({initial_scores[i], static_cast<std::uint32_t>(i)});
  }
  std::priority_queue<HeapItem, std::vector<HeapItem>, Lower> heap(Lower{}, std::move(items));

  GreedyResult result;
  while (result.picks.size() < n && !heap.empty()) {
    HeapItem top = heap.top();
    heap.pop();
    double current = rescore(top.candidate);
    if (current > top.score) {
      throw std::logic_error("lazy_greedy: score of candidate " + std::to_string(top.candidate) +
                             " increased from " + std::to_string(top.score) + " to " +
                             std::to_string(current));
    }
    if (!(current > 0.0)) continue;
    HeapItem fresh{current, top.candidate};
    if (heap.empty() || !Lower{}(fresh, heap.top())) {
      result.picks.push_back({top.candidate, current});
      commit(top.candidate);
    } else {
      heap.push(fresh);
    }
  }
  result.exhausted = result.picks.size() < n;
  return result;
}

// ---------------------------------------------------------------- helpers

namespace {

void require_size(std::size_t n) {
  if (n < 1) throw ConfigError("selection size must be >= 1");
}

std::string render(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void record_ngram(Selection& sel, const NgramConfig& cfg) {
  sel.config.emplace_back("min_order", std::to_string(cfg.min_order));
  sel.config.emplace_back("max_order", std::to_string(cfg.max_order));
}

void add_entry(Selection& sel, const CandidatePool& pool, std::size_t global, double score) {
  Provenance p = pool.locate(global);
  sel.entries.push_back({sel.entries.size(), global, score, std::string(p.corpus_id), p.line_no});
}

// Selected-pool counts per feature id, shared by INR and FDA.
std::vector<std::uint64_t> seed_counts(const FeatureIndex& index, const DecayState& seed) {
  std::vector<std::uint64_t> counts(index.test_feature_count(), 0);
  if (seed.counts.empty()) return counts;
  for (std::uint32_t f = 0; f < counts.size(); ++f) counts[f] = seed.count(index.features()[f]);
  return counts;
}

std::vector<double> score_all(std::size_t n, unsigned threads,
                              const std::function<double(std::uint32_t)>& score) {
  std::vector<double> out(n);
  parallel_for(n, threads, [&](std::size_t begin, std::size_t end, unsigned) {
    for (std::size_t i = begin; i < end; ++i) out[i] = score(static_cast<std::uint32_t>(i));
  });
  return out;
}

// ---------------------------------------------------------------- INR

class InrScorer {
 public:
  InrScorer(const FeatureIndex& index, const InrConfig& cfg)
      : index_(index), cfg_(cfg), counts_(seed_counts(index, cfg.seed)) {}

  double score(std::uint32_t i) const {
    std::uint64_t sum = 0;
    for (const auto& h : index_.candidate_features(i)) {
      if (counts_[h.feature] < cfg_.t) sum += cfg_.t - counts_[h.feature];
    }
    return static_cast<double>(sum);
  }

  void commit(std::uint32_t i) {
    for (const auto& h : index_.candidate_features(i)) {
      counts_[h.feature] += cfg_.count_mode == CountMode::occurrences ? h.count : 1;
    }
  }

 private:
  const FeatureIndex& index_;
  const InrConfig& cfg_;
  std::vector<std::uint64_t> counts_;
};

// ---------------------------------------------------------------- FDA

class FdaScorer {
 public:
  FdaScorer(const FeatureIndex& index, const FdaConfig& cfg)
      : index_(index), cfg_(cfg), counts_(seed_counts(index, cfg.seed)) {
    const auto& features = index.features();
    init_.resize(features.size());
    value_.resize(features.size());
    for (std::size_t f = 0; f < features.size(); ++f) {
      init_[f] = cfg.init_fn ? cfg.init_fn(features[f]) : cfg.init;
      if (!(init_[f] > 0.0)) {
        throw ConfigError("FDA init value for '" + features[f] + "' must be > 0");
      }
      value_[f] = decay(f);
    }
  }

  double score(std::uint32_t i) const {
    const std::uint32_t len = index_.candidate_length(i);
    if (len == 0) return 0.0;
    double sum = 0.0;
    for (const auto& h : index_.candidate_features(i)) sum += value_[h.feature];
    return sum / static_cast<double>(len);
  }

  void commit(std::uint32_t i) {
    for (const auto& h : index_.candidate_features(i)) {
      counts_[h.feature] += cfg_.count_mode == CountMode::occurrences ? h.count : 1;
      value_[h.feature] = decay(h.feature);
    }
  }

 private:
  double decay(std::size_t f) const {
    const double count = static_cast<double>(counts_[f]);
    return init_[f] * std::pow(cfg_.d, count) / std::pow(1.0 + count, cfg_.c);
  }

  const FeatureIndex& index_;
  const FdaConfig& cfg_;
  std::vector<std::uint64_t> counts_;
  std::vector<double> init_;
  std::vector<double> value_;
};

template <class Scorer>
Selection run_greedy(const CandidatePool& pool, std::size_t n, Scorer& scorer, unsigned threads,
                     Selection sel) {
  auto score = [&](std::uint32_t i) { return scorer.score(i); };
  auto initial = score_all(pool.size(), threads, score);
  GreedyResult result =
      lazy_greedy(initial, n, score, [&](std::uint32_t i) { scorer.commit(i); });
  sel.requested = n;
  sel.exhausted = result.exhausted;
  sel.entries.reserve(result.picks.size());
  for (const auto& p : result.picks) add_entry(sel, pool, p.candidate, p.score);
  return sel;
}

// ---------------------------------------------------------------- TF-IDF

// Test-side TF-IDF data: an inverted list from term to (test sentence,
// weight), and the norm of every test vector.
struct TestVectors {
  StringMap<std::vector<std::pair<std::uint32_t, double>>> postings;
  std::vector<double> norms;
};

TestVectors vectorize_test(const TestSet& test, const IdfTable& idf, const NgramConfig& cfg) {
  TestVectors tv;
  tv.norms.reserve(test.size());
  for (std::uint32_t r = 0; r < test.size(); ++r) {
    auto terms = detail::tfidf_terms(test.sentences()[r], idf, cfg, std::nullopt);
    tv.norms.push_back(detail::l2_norm(terms));
    for (auto [term, w] : terms) {
      auto it = tv.postings.find(term);
      if (it == tv.postings.end()) it = tv.postings.emplace(std::string(term), std::vector<std::pair<std::uint32_t, double>>{}).first;
      it->second.emplace_back(r, w);
    }
  }
  return tv;
}

// Cosine similarity of one candidate against every test sentence it
// shares a term with. Dot products accumulate in the candidate's sorted
// term order, matching dot() on SparseVectors.
class CosineScratch {
 public:
  explicit CosineScratch(std::size_t test_size) : dots_(test_size, 0.0), seen_(test_size, 0) {}

  template <class Fn>
  void for_each_similarity(const Sentence& s, const IdfTable& idf, const NgramConfig& cfg,
                           const TestVectors& tv, Fn&& fn) {
    auto terms = detail::tfidf_terms(s, idf, cfg, std::nullopt);
    const double norm = detail::l2_norm(terms);
    touched_.clear();
    for (auto [term, w] : terms) {
      auto it = tv.postings.find(term);
      if (it == tv.postings.end()) continue;
      for (auto [r, wr] : it->second) {
        if (!seen_[r]) {
          seen_[r] = 1;
          touched_.push_back(r);
        }
        dots_[r] += w * wr;
      }
    }
    for (std::uint32_t r : touched_) {
      fn(r, detail::cosine_from(dots_[r], norm, tv.norms[r]));
      dots_[r] = 0.0;
      seen_[r] = 0;
    }
  }

 private:
  std::vector<double> dots_;
  std::vector<char> seen_;
  std::vector<std::uint32_t> touched_;
};

std::vector<double> tfidf_scores(const CandidatePool& pool, const TestSet& test,
                                 const IdfTable& idf, const NgramConfig& cfg, unsigned threads) {
  TestVectors tv = vectorize_test(test, idf, cfg);
  std::vector<double> scores(pool.size(), 0.0);
  parallel_for(pool.size(), threads, [&](std::size_t begin, std::size_t end, unsigned) {
    CosineScratch scratch(test.size());
    for (std::size_t i = begin; i < end; ++i) {
      double best = 0.0;
      scratch.for_each_similarity(pool.source(i), idf, cfg, tv,
                                  [&](std::uint32_t, double sim) { best = std::max(best, sim); });
      scores[i] = best;
    }
  });
  return scores;
}

bool ranks_before(double sa, std::size_t ia, double sb, std::size_t ib) {
  return sa != sb ? sa > sb : ia < ib;
}

Selection tfidf_per_sentence(const CandidatePool& pool, const TestSet& test, std::size_t n,
                             const IdfTable& idf, const NgramConfig& cfg, unsigned threads,
                             Selection sel) {
  using Hit = std::pair<double, std::uint32_t>;
  auto worse = [](const Hit& a, const Hit& b) { return ranks_before(a.first, a.second, b.first, b.second); };
  const std::size_t k = (n + test.size() - 1) / test.size();
  TestVectors tv = vectorize_test(test, idf, cfg);

  // Per chunk and test sentence, a bounded heap of the best k candidates.
  const unsigned chunks = chunk_count(pool.size(), threads);
  std::vector<std::vector<std::vector<Hit>>> best(chunks, std::vector<std::vector<Hit>>(test.size()));
  parallel_for(pool.size(), threads, [&](std::size_t begin, std::size_t end, unsigned c) {
    CosineScratch scratch(test.size());
    auto& heaps = best[c];
    for (std::size_t i = begin; i < end; ++i) {
      scratch.for_each_similarity(pool.source(i), idf, cfg, tv, [&](std::uint32_t r, double sim) {
        if (!(sim > 0.0)) return;
        auto& h = heaps[r];
        Hit hit{sim, static_cast<std::uint32_t>(i)};
        if (h.size() < k) {
          h.push_back(hit);
          std::push_heap(h.begin(), h.end(), worse);
        } else if (worse(hit, h.front())) {
          std::pop_heap(h.begin(), h.end(), worse);
          h.back() = hit;
          std::push_heap(h.begin(), h.end(), worse);
        }
      });
    }
  });

  for (std::size_t r = 0; r < test.size() && sel.entries.size() < n; ++r) {
    std::vector<Hit> merged;
    for (auto& heaps : best) merged.insert(merged.end(), heaps[r].begin(), heaps[r].end());
    std::sort(merged.begin(), merged.end(), worse);
    if (merged.size() > k) merged.resize(k);
    for (const auto& [sim, i] : merged) {
      if (sel.entries.size() == n) break;
      add_entry(sel, pool, i, sim);
    }
  }
  sel.requested = n;
  return sel;
}

}  // namespace

// ---------------------------------------------------------------- public

Selection tfidf_select(const CandidatePool& pool, const TestSet& test, std::size_t n,
                       const TfidfConfig& cfg, unsigned threads) {
  require_size(n);
  cfg.ngram.validate();
  Selection sel;
  sel.method = Method::tfidf;
  record_ngram(sel, cfg.ngram);
  sel.config.emplace_back("per_sentence", cfg.per_sentence ? "true" : "false");
  sel.requested = n;
  if (pool.empty()) return sel;

  IdfTable idf = compute_idf(pool, cfg.ngram, threads);
  if (cfg.per_sentence) return tfidf_per_sentence(pool, test, n, idf, cfg.ngram, threads, std::move(sel));

  auto scores = tfidf_scores(pool, test, idf, cfg.ngram, threads);
  std::vector<std::uint32_t> order(pool.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  const std::size_t take = std::min(n, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                    [&](std::uint32_t a, std::uint32_t b) { return ranks_before(scores[a], a, scores[b], b); });
  for (std::size_t r = 0; r < take; ++r) add_entry(sel, pool, order[r], scores[order[r]]);
  return sel;
}

Selection inr_select(const CandidatePool& pool, const TestSet& test, std::size_t n,
                     const InrConfig& cfg, unsigned threads) {
  require_size(n);
  cfg.validate();
  Selection sel;
  sel.method = Method::inr;
  record_ngram(sel, cfg.ngram);
  sel.config.emplace_back("t", std::to_string(cfg.t));
  sel.config.emplace_back("count_mode", std::string(to_string(cfg.count_mode)));
  sel.config.emplace_back("seeded", cfg.seed.counts.empty() ? "false" : "true");
  FeatureIndex index = build_feature_index(pool, test, cfg.ngram, threads);
  InrScorer scorer(index, cfg);
  return run_greedy(pool, n, scorer, threads, std::move(sel));
}

Selection fda_select(const CandidatePool& pool, const TestSet& test, std::size_t n,
                     const FdaConfig& cfg, unsigned threads) {
  require_size(n);
  cfg.validate();
  Selection sel;
  sel.method = Method::fda;
  record_ngram(sel, cfg.ngram);
  sel.config.emplace_back("d", render(cfg.d));
  sel.config.emplace_back("c", render(cfg.c));
  sel.config.emplace_back("init", cfg.init_fn ? "custom" : render(cfg.init));
  sel.config.emplace_back("count_mode", std::string(to_string(cfg.count_mode)));
  sel.config.emplace_back("seeded", cfg.seed.counts.empty() ? "false" : "true");
  FeatureIndex index = build_feature_index(pool, test, cfg.ngram, threads);
  FdaScorer scorer(index, cfg);
  return run_greedy(pool, n, scorer, threads, std::move(sel));
}

Selection select(const CandidatePool& pool, const TestSet& test, std::size_t n,
                 const MethodConfig& cfg, unsigned threads) {
  return std::visit(
      [&](const auto& c) -> Selection {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, TfidfConfig>) return tfidf_select(pool, test, n, c, threads);
        else if constexpr (std::is_same_v<T, InrConfig>) return inr_select(pool, test, n, c, threads);
        else return fda_select(pool, test, n, c, threads);
      },
      cfg);
}

std::vector<double> score_dump(const CandidatePool& pool, const TestSet& test,
                               const MethodConfig& cfg, unsigned threads) {
  if (pool.empty()) return {};
  if (const auto* t = std::get_if<TfidfConfig>(&cfg)) {
    t->ngram.validate();
    IdfTable idf = compute_idf(pool, t->ngram, threads);
    return tfidf_scores(pool, test, idf, t->ngram, threads);
  }
  if (const auto* inr = std::get_if<InrConfig>(&cfg)) {
    inr->validate();
    FeatureIndex index = build_feature_index(pool, test, inr->ngram, threads);
    InrScorer scorer(index, *inr);
    return score_all(pool.size(), threads, [&](std::uint32_t i) { return scorer.score(i); });
  }
  const auto& fda = std::get<FdaConfig>(cfg);
  fda.validate();
  FeatureIndex index = build_feature_index(pool, test, fda.ngram, threads);
  FdaScorer scorer(index, fda);
  return score_all(pool.size(), threads, [&](std::uint32_t i) { return scorer.score(i); });
}

}  // namespace tsel
