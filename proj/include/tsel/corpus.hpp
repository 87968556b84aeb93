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

#ifndef TSEL_CORPUS_HPP_
#define TSEL_CORPUS_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace tsel {

// A whitespace-tokenized line. Tokens are kept as offsets into a
// single-space-joined copy of the line so that any contiguous run of
// tokens (an n-gram) is a substring, available without allocation.
class Sentence {
 public:
  Sentence() = default;
  Sentence(std::string raw, std::uint64_t line_no);

  // The line as read, minus the line terminator (and a trailing CR).
  const std::string& raw() const { return raw_; }
  // Tokens joined by single spaces.
  std::string_view text() const { return normalized_ ? std::string_view(raw_) : text_; }
  std::uint64_t line_no() const { return line_no_; }

  std::size_t size() const { return starts_.size(); }
  bool empty() const { return starts_.empty(); }
  std::string_view token(std::size_t i) const { return span(i, 1); }
  std::vector<std::string_view> tokens() const;
  std::vector<std::string> token_strings() const;

  // Tokens [first, first + count) joined by single spaces.
  std::string_view span(std::size_t first, std::size_t count) const;

 private:
  std::string raw_;
  std::string text_;       // unused when raw_ is already normalized
  bool normalized_ = true;
  std::vector<std::uint32_t> starts_;
  std::uint64_t line_no_ = 0;
};

class ParallelCorpus {
 public:
  ParallelCorpus(std::string corpus_id, std::vector<Sentence> source,
                 std::vector<std::string> target);

  const std::string& id() const { return id_; }
  std::size_t size() const { return source_.size(); }
  const std::vector<Sentence>& source() const { return source_; }
  const std::vector<std::string>& target() const { return target_; }

 private:
  std::string id_;
  std::vector<Sentence> source_;
  std::vector<std::string> target_;
};

class TestSet {
 public:
  explicit TestSet(std::vector<Sentence> sentences);

  std::size_t size() const { return sentences_.size(); }
  const std::vector<Sentence>& sentences() const { return sentences_; }

 private:
  std::vector<Sentence> sentences_;
};

struct Provenance {
  std::string_view corpus_id;
  std::uint64_t line_no = 0;
};

// Concatenation of parallel corpora. Global candidate indexes run over
// the corpora in order, then over lines.
class CandidatePool {
 public:
  CandidatePool() = default;
  explicit CandidatePool(std::vector<ParallelCorpus> corpora);

  std::size_t size() const { return offsets_.back(); }
  bool empty() const { return size() == 0; }
  const std::vector<ParallelCorpus>& corpora() const { return corpora_; }

  const Sentence& source(std::size_t global) const;
  const std::string& target(std::size_t global) const;
  Provenance locate(std::size_t global) const;
  std::size_t global_index(std::string_view corpus_id, std::uint64_t line_no) const;

 private:
  std::size_t corpus_of(std::size_t global) const;

  std::vector<ParallelCorpus> corpora_;
  std::vector<std::size_t> offsets_{0};
};

// Lines of a UTF-8 text file. A trailing CR on each line is dropped and a
// missing final newline is fine. Throws IoError / EncodingError.
std::vector<std::string> read_lines(const std::filesystem::path& path);

// Streaming form of read_lines; `fn(line, line_no)` gets 0-based numbers
// and may move from `line`.
void for_each_line(const std::filesystem::path& path,
                   const std::function<void(std::string&, std::size_t)>& fn);

std::vector<Sentence> to_sentences(std::vector<std::string> lines);

ParallelCorpus load_parallel_corpus(const std::filesystem::path& source_path,
                                    const std::filesystem::path& target_path,
                                    std::string corpus_id);

TestSet load_test_set(const std::filesystem::path& path);

// Throws ConfigError on duplicate or empty ids.
CandidatePool concat_corpora(std::vector<ParallelCorpus> corpora);

struct Selection;

// Writes <prefix>.src, <prefix>.tgt and <prefix>.meta.tsv.
void write_selection(const Selection& selection, const CandidatePool& pool,
                     const std::filesystem::path& out_prefix);

// Meta TSV header and row rendering, shared with the stats reader.
inline constexpr std::string_view kMetaHeader = "rank\tscore\tcorpus_id\tline_no";
std::string format_score(double score);

}  // namespace tsel

#endif  // TSEL_CORPUS_HPP_
