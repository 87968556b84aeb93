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

#include "tsel/features.hpp"

#include <algorithm>
#include <cmath>

#include "tsel/error.hpp"
#include "tsel/threads.hpp"

namespace tsel {

void NgramConfig::validate() const {
  if (min_order < 1) throw ConfigError("n-gram min order must be >= 1");
  if (max_order < min_order) throw ConfigError("n-gram max order must be >= min order");
}

std::vector<std::string> extract_ngrams(std::span<const std::string> tokens,
                                        const NgramConfig& cfg) {
  std::vector<std::string> out;
  for (int order = cfg.min_order; order <= cfg.max_order; ++order) {
    const auto k = static_cast<std::size_t>(order);
    if (k > tokens.size()) break;
    for (std::size_t i = 0; i + k <= tokens.size(); ++i) {
      std::string g = tokens[i];
      for (std::size_t j = 1; j < k; ++j) {
        g.push_back(' ');
        g += tokens[i + j];
      }
      out.push_back(std::move(g));
    }
  }
  return out;
}

std::vector<std::string> extract_ngrams(const Sentence& s, const NgramConfig& cfg) {
  std::vector<std::string> out;
  for_each_ngram(s, cfg, [&](std::string_view g) { out.emplace_back(g); });
  return out;
}

// ---------------------------------------------------------------- IDF

IdfTable::IdfTable(std::uint64_t doc_count, StringMap<std::uint32_t> df)
    : doc_count_(doc_count), df_(std::move(df)) {}

std::uint32_t IdfTable::df(std::string_view term) const {
  auto it = df_.find(term);
  return it == df_.end() ? 0 : it->second;
}

double IdfTable::log_idf(std::string_view term, std::optional<double> base) const {
  std::uint32_t d = df(term);
  if (d == 0) d = 1;
  double v = std::log(static_cast<double>(doc_count_) / static_cast<double>(d));
  if (base) v /= std::log(*base);
  return v;
}

namespace {

std::vector<std::string_view> distinct_ngrams(const Sentence& s, const NgramConfig& cfg) {
  std::vector<std::string_view> grams;
  for_each_ngram(s, cfg, [&](std::string_view g) { grams.push_back(g); });
  std::sort(grams.begin(), grams.end());
  grams.erase(std::unique(grams.begin(), grams.end()), grams.end());
  return grams;
}

}  // namespace

IdfTable compute_idf(const CandidatePool& pool, const NgramConfig& cfg, unsigned threads) {
  cfg.validate();
  if (pool.empty()) throw ConfigError("cannot compute IDF over an empty pool");
  const unsigned chunks = chunk_count(pool.size(), threads);
  std::vector<StringMap<std::uint32_t>> partial(chunks);
  parallel_for(pool.size(), threads, [&](std::size_t begin, std::size_t end, unsigned c) {
    auto& df = partial[c];
    for (std::size_t i = begin; i < end; ++i) {
      for (std::string_view g : distinct_ngrams(pool.source(i), cfg)) {
        auto it = df.find(g);
        if (it == df.end()) {
          df.emplace(std::string(g), 1u);
        } else {
          ++it->second;
        }
      }
    }
  });
  StringMap<std::uint32_t> df = std::move(partial[0]);
  for (unsigned c = 1; c < chunks; ++c) {
    for (auto& [term, count] : partial[c]) df[term] += count;
    partial[c].clear();
  }
  return IdfTable(pool.size(), std::move(df));
}

// ---------------------------------------------------------------- vectors

SparseVector::SparseVector(std::vector<std::pair<std::string, double>> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& e : entries) {
    if (!entries_.empty() && entries_.back().first == e.first) {
      entries_.back().second += e.second;
    } else {
      entries_.push_back(std::move(e));
    }
  }
  std::erase_if(entries_, [](const auto& e) { return e.second == 0.0; });
  norm_ = detail::l2_norm(entries_);
}

double SparseVector::weight(std::string_view term) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), term,
                             [](const auto& e, std::string_view t) { return e.first < t; });
  return it != entries_.end() && it->first == term ? it->second : 0.0;
}

namespace detail {

std::vector<std::pair<std::string_view, double>> tfidf_terms(const Sentence& s,
                                                             const IdfTable& idf,
                                                             const NgramConfig& cfg,
                                                             std::optional<double> base) {
  std::vector<std::string_view> grams;
  for_each_ngram(s, cfg, [&](std::string_view g) { grams.push_back(g); });
  std::sort(grams.begin(), grams.end());
  std::vector<std::pair<std::string_view, double>> out;
  for (std::size_t i = 0; i < grams.size();) {
    std::size_t j = i;
    while (j < grams.size() && grams[j] == grams[i]) ++j;
    double w = static_cast<double>(j - i) * idf.log_idf(grams[i], base);
    if (w != 0.0) out.emplace_back(grams[i], w);
    i = j;
  }
  return out;
}

double cosine_from(double dot, double norm_a, double norm_b) {
  if (norm_a == 0.0 || norm_b == 0.0) return 0.0;
  double c = dot / (norm_a * norm_b);
  return std::clamp(c, 0.0, 1.0);
}

}  // namespace detail

SparseVector tfidf_vector(const Sentence& s, const IdfTable& idf, const NgramConfig& cfg,
                          std::optional<double> log_base) {
  std::vector<std::pair<std::string, double>> entries;
  for (auto [term, w] : detail::tfidf_terms(s, idf, cfg, log_base)) entries.emplace_back(term, w);
  return SparseVector(std::move(entries));
}

SparseVector tfidf_vector(std::span<const std::string> tokens, const IdfTable& idf,
                          const NgramConfig& cfg, std::optional<double> log_base) {
  std::string line;
  for (const auto& t : tokens) {
    if (!line.empty()) line.push_back(' ');
    line += t;
  }
  return tfidf_vector(Sentence(std::move(line), 0), idf, cfg, log_base);
}

double dot(const SparseVector& u, const SparseVector& v) {
  const auto& a = u.entries();
  const auto& b = v.entries();
  double sum = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    int c = a[i].first.compare(b[j].first);
    if (c < 0) {
      ++i;
    } else if (c > 0) {
      ++j;
    } else {
      sum += a[i].second * b[j].second;
      ++i;
      ++j;
    }
  }
  return sum;
}

double cosine_sim(const SparseVector& u, const SparseVector& v) {
  return detail::cosine_from(dot(u, v), u.norm(), v.norm());
}

// ---------------------------------------------------------------- index

std::optional<std::uint32_t> FeatureIndex::feature_id(std::string_view ngram) const {
  auto it = ids_.find(ngram);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::span<const std::uint32_t> FeatureIndex::postings(std::uint32_t feature) const {
  return {postings_.data() + posting_offsets_[feature],
          postings_.data() + posting_offsets_[feature + 1]};
}

std::span<const std::uint32_t> FeatureIndex::postings(std::string_view ngram) const {
  auto id = feature_id(ngram);
  if (!id) return {};
  return postings(*id);
}

std::vector<std::string_view> FeatureIndex::indexed_ngrams() const {
  std::vector<std::string_view> out;
  for (std::uint32_t f = 0; f < features_.size(); ++f) {
    if (!postings(f).empty()) out.push_back(features_[f]);
  }
  return out;
}

std::span<const FeatureHit> FeatureIndex::candidate_features(std::size_t candidate) const {
  return {hits_.data() + hit_offsets_[candidate], hits_.data() + hit_offsets_[candidate + 1]};
}

namespace {

void collect_hits(const StringMap<std::uint32_t>& ids, const Sentence& s, const NgramConfig& cfg,
                  std::vector<std::uint32_t>& scratch, std::vector<FeatureHit>& out) {
  scratch.clear();
  for_each_ngram(s, cfg, [&](std::string_view g) {
    auto it = ids.find(g);
    if (it != ids.end()) scratch.push_back(it->second);
  });
  std::sort(scratch.begin(), scratch.end());
  for (std::size_t i = 0; i < scratch.size();) {
    std::size_t j = i;
    while (j < scratch.size() && scratch[j] == scratch[i]) ++j;
    out.push_back({scratch[i], static_cast<std::uint32_t>(j - i)});
    i = j;
  }
}

}  // namespace

FeatureIndex build_feature_index(const CandidatePool& pool, const TestSet& test,
                                 const NgramConfig& cfg, unsigned threads) {
  cfg.validate();
  FeatureIndex index;

  std::vector<std::string_view> grams;
  for (const auto& s : test.sentences()) {
    for_each_ngram(s, cfg, [&](std::string_view g) { grams.push_back(g); });
  }
  std::sort(grams.begin(), grams.end());
  grams.erase(std::unique(grams.begin(), grams.end()), grams.end());
  index.features_.assign(grams.begin(), grams.end());
  index.ids_.reserve(grams.size());
  for (std::uint32_t f = 0; f < index.features_.size(); ++f) index.ids_.emplace(index.features_[f], f);

  const std::size_t n = pool.size();
  const unsigned chunks = chunk_count(n, threads);
  std::vector<std::vector<FeatureHit>> chunk_hits(chunks);
  std::vector<std::uint32_t> counts(n);
  index.lengths_.resize(n);
  parallel_for(n, threads, [&](std::size_t begin, std::size_t end, unsigned c) {
    std::vector<std::uint32_t> scratch;
    auto& out = chunk_hits[c];
    for (std::size_t i = begin; i < end; ++i) {
      const Sentence& s = pool.source(i);
      std::size_t before = out.size();
      collect_hits(index.ids_, s, cfg, scratch, out);
      counts[i] = static_cast<std::uint32_t>(out.size() - before);
      index.lengths_[i] = static_cast<std::uint32_t>(s.size());
    }
  });

  index.hit_offsets_.resize(n + 1);
  index.hit_offsets_[0] = 0;
  for (std::size_t i = 0; i < n; ++i) index.hit_offsets_[i + 1] = index.hit_offsets_[i] + counts[i];
  index.hits_.reserve(index.hit_offsets_[n]);
  for (auto& h : chunk_hits) {
    index.hits_.insert(index.hits_.end(), h.begin(), h.end());
    std::vector<FeatureHit>().swap(h);
  }

  const std::size_t nf = index.features_.size();
  index.posting_offsets_.assign(nf + 1, 0);
  for (const auto& h : index.hits_) ++index.posting_offsets_[h.feature + 1];
  for (std::size_t f = 0; f < nf; ++f) index.posting_offsets_[f + 1] += index.posting_offsets_[f];
  index.postings_.resize(index.hits_.size());
  std::vector<std::uint64_t> cursor(index.posting_offsets_.begin(), index.posting_offsets_.end() - 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& h : index.candidate_features(i)) {
      index.postings_[cursor[h.feature]++] = static_cast<std::uint32_t>(i);
    }
  }
  return index;
}

std::vector<FeatureHit> match_features(const FeatureIndex& index, const Sentence& s,
                                       const NgramConfig& cfg) {
  std::vector<std::uint32_t> scratch;
  std::vector<FeatureHit> out;
  collect_hits(index.ids_, s, cfg, scratch, out);
  return out;
}

}  // namespace tsel
