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

#include "tsel/corpus.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <unordered_set>

#include "tsel/error.hpp"
#include "tsel/selection.hpp"
#include "tsel/utf8.hpp"

namespace tsel {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\v' || c == '\f' || c == '\r';
}

}  // namespace

Sentence::Sentence(std::string raw, std::uint64_t line_no)
    : raw_(std::move(raw)), line_no_(line_no) {
  // First pass: token starts in raw_, and whether raw_ is already in
  // single-space form.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> spans;
  std::size_t i = 0;
  const std::size_t n = raw_.size();
  while (i < n) {
    while (i < n && is_space(raw_[i])) ++i;
    if (i == n) break;
    std::size_t b = i;
    while (i < n && !is_space(raw_[i])) ++i;
    spans.emplace_back(static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(i));
  }
  normalized_ = spans.empty() ? n == 0 : spans.front().first == 0 && spans.back().second == n;
  for (std::size_t k = 1; k < spans.size() && normalized_; ++k) {
    normalized_ = spans[k].first == spans[k - 1].second + 1 && raw_[spans[k - 1].second] == ' ';
  }
  starts_.reserve(spans.size());
  if (normalized_) {
    for (auto [b, e] : spans) starts_.push_back(b);
    return;
  }
  for (auto [b, e] : spans) {
    if (!text_.empty()) text_.push_back(' ');
    starts_.push_back(static_cast<std::uint32_t>(text_.size()));
    text_.append(raw_, b, e - b);
  }
}

std::string_view Sentence::span(std::size_t first, std::size_t count) const {
  std::string_view t = text();
  std::size_t last = first + count;
  std::size_t end = last < starts_.size() ? starts_[last] - 1 : t.size();
  return t.substr(starts_[first], end - starts_[first]);
}

std::vector<std::string_view> Sentence::tokens() const {
  std::vector<std::string_view> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(token(i));
  return out;
}

std::vector<std::string> Sentence::token_strings() const {
  std::vector<std::string> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.emplace_back(token(i));
  return out;
}

ParallelCorpus::ParallelCorpus(std::string corpus_id, std::vector<Sentence> source,
                               std::vector<std::string> target)
    : id_(std::move(corpus_id)), source_(std::move(source)), target_(std::move(target)) {
  if (id_.empty()) throw ConfigError("corpus id must be non-empty");
  if (source_.size() != target_.size()) {
    throw AlignmentError("corpus '" + id_ + "': source/target line counts differ: " +
                         std::to_string(source_.size()) + " vs " +
                         std::to_string(target_.size()));
  }
}

TestSet::TestSet(std::vector<Sentence> sentences) : sentences_(std::move(sentences)) {
  if (sentences_.empty()) throw ConfigError("test set is empty");
}

CandidatePool::CandidatePool(std::vector<ParallelCorpus> corpora) : corpora_(std::move(corpora)) {
  std::unordered_set<std::string> seen;
  for (const auto& c : corpora_) {
    if (!seen.insert(c.id()).second) {
      throw ConfigError("duplicate corpus id '" + c.id() + "'");
    }
    offsets_.push_back(offsets_.back() + c.size());
  }
}

std::size_t CandidatePool::corpus_of(std::size_t global) const {
  if (global >= size()) throw std::out_of_range("candidate index out of range");
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), global);
  return static_cast<std::size_t>(it - offsets_.begin()) - 1;
}

const Sentence& CandidatePool::source(std::size_t global) const {
  std::size_t c = corpus_of(global);
  return corpora_[c].source()[global - offsets_[c]];
}

const std::string& CandidatePool::target(std::size_t global) const {
  std::size_t c = corpus_of(global);
  return corpora_[c].target()[global - offsets_[c]];
}

Provenance CandidatePool::locate(std::size_t global) const {
  std::size_t c = corpus_of(global);
  return {corpora_[c].id(), global - offsets_[c]};
}

std::size_t CandidatePool::global_index(std::string_view corpus_id,
                                        std::uint64_t line_no) const {
  for (std::size_t c = 0; c < corpora_.size(); ++c) {
    if (corpora_[c].id() == corpus_id) {
      if (line_no >= corpora_[c].size()) throw std::out_of_range("line number out of range");
      return offsets_[c] + line_no;
    }
  }
  throw std::out_of_range("unknown corpus id '" + std::string(corpus_id) + "'");
}

void for_each_line(const std::filesystem::path& path,
                   const std::function<void(std::string&, std::size_t)>& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!utf8::is_valid(line)) {
      throw EncodingError("'" + path.string() + "' line " + std::to_string(line_no + 1) +
                          ": invalid UTF-8");
    }
    fn(line, line_no++);
    line.clear();
  }
  if (in.bad()) throw IoError("read failure on '" + path.string() + "'");
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::vector<std::string> lines;
  for_each_line(path, [&](std::string& line, std::size_t) { lines.push_back(std::move(line)); });
  return lines;
}

std::vector<Sentence> to_sentences(std::vector<std::string> lines) {
  std::vector<Sentence> out;
  out.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) out.emplace_back(std::move(lines[i]), i);
  return out;
}

ParallelCorpus load_parallel_corpus(const std::filesystem::path& source_path,
                                    const std::filesystem::path& target_path,
                                    std::string corpus_id) {
  auto src = read_lines(source_path);
  auto tgt = read_lines(target_path);
  if (src.size() != tgt.size()) {
    throw AlignmentError("'" + source_path.string() + "' and '" + target_path.string() +
                         "' are not aligned: " + std::to_string(src.size()) + " vs " +
                         std::to_string(tgt.size()) + " lines");
  }
  return ParallelCorpus(std::move(corpus_id), to_sentences(std::move(src)), std::move(tgt));
}

TestSet load_test_set(const std::filesystem::path& path) {
  auto lines = read_lines(path);
  if (lines.empty()) throw ConfigError("test set '" + path.string() + "' is empty");
  return TestSet(to_sentences(std::move(lines)));
}

CandidatePool concat_corpora(std::vector<ParallelCorpus> corpora) {
  return CandidatePool(std::move(corpora));
}

std::string format_score(double score) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", score);
  return buf;
}

void write_selection(const Selection& selection, const CandidatePool& pool,
                     const std::filesystem::path& out_prefix) {
  if (selection.entries.empty()) throw ConfigError("cannot write an empty selection");
  auto open = [](const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + p.string() + "' for writing");
    return out;
  };
  const std::filesystem::path src_path = out_prefix.string() + ".src";
  const std::filesystem::path tgt_path = out_prefix.string() + ".tgt";
  const std::filesystem::path meta_path = out_prefix.string() + ".meta.tsv";
  auto src = open(src_path);
  auto tgt = open(tgt_path);
  auto meta = open(meta_path);
  meta << kMetaHeader << '\n';
  for (const auto& e : selection.entries) {
    src << pool.source(e.global_index).raw() << '\n';
    tgt << pool.target(e.global_index) << '\n';
    meta << e.rank << '\t' << format_score(e.score) << '\t' << e.corpus_id << '\t' << e.line_no
         << '\n';
  }
  src.flush();
  tgt.flush();
  meta.flush();
  if (!src) throw IoError("write failure on '" + src_path.string() + "'");
  if (!tgt) throw IoError("write failure on '" + tgt_path.string() + "'");
  if (!meta) throw IoError("write failure on '" + meta_path.string() + "'");
}

}  // namespace tsel
