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

#include "tsel/bpe.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <unordered_set>

#include "tsel/error.hpp"
#include "tsel/utf8.hpp"

namespace tsel::bpe {

namespace {

std::string pair_key(std::string_view left, std::string_view right) {
  std::string key;
  key.reserve(left.size() + right.size() + 1);
  key.append(left).push_back(' ');
  key.append(right);
  return key;
}

}  // namespace

MergeTable::MergeTable(std::vector<SymbolPair> merges, std::string header)
    : merges_(std::move(merges)), header_(std::move(header)) {
  ranks_.reserve(merges_.size());
  for (std::size_t i = 0; i < merges_.size(); ++i) {
    if (!ranks_.emplace(pair_key(merges_[i].first, merges_[i].second), i).second) {
      throw ConfigError("duplicate merge '" + merges_[i].first + " " + merges_[i].second + "'");
    }
  }
}

std::optional<std::size_t> MergeTable::rank(std::string_view left, std::string_view right) const {
  auto it = ranks_.find(pair_key(left, right));
  if (it == ranks_.end()) return std::nullopt;
  return it->second;
}

void check_marker_free(std::string_view token) {
  if (token.find(kEndOfWord) != std::string_view::npos ||
      token.find(kContinuation) != std::string_view::npos) {
    throw MalformedInputError("token '" + std::string(token) + "' contains a reserved BPE marker");
  }
}

std::vector<std::string> word_symbols(std::string_view word) {
  auto symbols = utf8::code_points(word);
  if (!symbols.empty()) symbols.back().append(kEndOfWord);
  return symbols;
}

WordCounts count_words(const std::vector<std::vector<std::string>>& corpus) {
  std::map<std::string, std::uint64_t> counts;
  for (const auto& line : corpus) {
    for (const auto& tok : line) ++counts[tok];
  }
  return {counts.begin(), counts.end()};
}

// ---------------------------------------------------------------- learning

namespace {

class Learner {
 public:
  explicit Learner(const WordCounts& words) : queue_(ByPriority{this}) {
    for (const auto& [word, freq] : words) {
      check_marker_free(word);
      if (word.empty() || freq == 0) continue;
      Word w{{}, freq};
      for (auto& s : word_symbols(word)) w.symbols.push_back(intern(s));
      words_.push_back(std::move(w));
    }
    for (std::uint32_t wi = 0; wi < words_.size(); ++wi) {
      const auto& syms = words_[wi].symbols;
      for (std::size_t i = 0; i + 1 < syms.size(); ++i) {
        std::uint64_t k = key(syms[i], syms[i + 1]);
        counts_[k] += static_cast<std::int64_t>(words_[wi].freq);
        where_[k].push_back(wi);
      }
    }
    for (const auto& [k, count] : counts_) queue_.insert({count, left(k), right(k)});
  }

  MergeTable run(std::size_t num_merges) {
    std::vector<SymbolPair> merges;
    while (merges.size() < num_merges && !queue_.empty()) {
      Candidate best = *queue_.begin();
      if (best.count < 2) break;
      queue_.erase(queue_.begin());
      const std::uint64_t k = key(best.left, best.right);
      used_.insert(k);
      merges.emplace_back(symbols_[best.left], symbols_[best.right]);
      merge(best.left, best.right);
    }
    return MergeTable(std::move(merges));
  }

 private:
  struct Word {
    std::vector<std::uint32_t> symbols;
    std::uint64_t freq;
  };

  struct Candidate {
    std::int64_t count;
    std::uint32_t left;
    std::uint32_t right;
  };

  // Highest count first, then the lexicographically smallest pair.
  struct ByPriority {
    const Learner* self;
    bool operator()(const Candidate& a, const Candidate& b) const {
      if (a.count != b.count) return a.count > b.count;
      const auto& s = self->symbols_;
      if (a.left != b.left) return s[a.left] < s[b.left];
      return s[a.right] < s[b.right];
    }
  };

  static std::uint64_t key(std::uint32_t l, std::uint32_t r) {
    return (static_cast<std::uint64_t>(l) << 32) | r;
  }
  static std::uint32_t left(std::uint64_t k) { return static_cast<std::uint32_t>(k >> 32); }
  static std::uint32_t right(std::uint64_t k) { return static_cast<std::uint32_t>(k); }

  std::uint32_t intern(const std::string& s) {
    auto it = ids_.find(s);
    if (it != ids_.end()) return it->second;
    auto id = static_cast<std::uint32_t>(symbols_.size());
    symbols_.push_back(s);
    ids_.emplace(s, id);
    return id;
  }

  void merge(std::uint32_t l, std::uint32_t r) {
    const std::uint32_t joined = intern(symbols_[l] + symbols_[r]);
    auto& affected = where_[key(l, r)];
    std::sort(affected.begin(), affected.end());
    affected.erase(std::unique(affected.begin(), affected.end()), affected.end());
    const std::vector<std::uint32_t> list = std::move(affected);
    where_.erase(key(l, r));

    std::unordered_map<std::uint64_t, std::int64_t> delta;
    for (std::uint32_t wi : list) {
      Word& w = words_[wi];
      auto& syms = w.symbols;
      bool present = false;
      for (std::size_t i = 0; i + 1 < syms.size() && !present; ++i) {
        present = syms[i] == l && syms[i + 1] == r;
      }
      if (!present) continue;
      const auto f = static_cast<std::int64_t>(w.freq);
      for (std::size_t i = 0; i + 1 < syms.size(); ++i) delta[key(syms[i], syms[i + 1])] -= f;
      std::vector<std::uint32_t> merged;
      merged.reserve(syms.size());
      for (std::size_t i = 0; i < syms.size();) {
        if (i + 1 < syms.size() && syms[i] == l && syms[i + 1] == r) {
          merged.push_back(joined);
          i += 2;
        } else {
          merged.push_back(syms[i++]);
        }
      }
      syms = std::move(merged);
      for (std::size_t i = 0; i + 1 < syms.size(); ++i) {
        std::uint64_t k = key(syms[i], syms[i + 1]);
        delta[k] += f;
        if (syms[i] == joined || syms[i + 1] == joined) where_[k].push_back(wi);
      }
    }

    for (const auto& [k, d] : delta) {
      if (d == 0) continue;
      auto& count = counts_[k];
      const bool eligible = !used_.contains(k);
      if (eligible && count > 0) queue_.erase({count, left(k), right(k)});
      count += d;
      if (eligible && count > 0) queue_.insert({count, left(k), right(k)});
    }
  }

  std::vector<std::string> symbols_;
  StringMap<std::uint32_t> ids_;
  std::vector<Word> words_;
  std::unordered_map<std::uint64_t, std::int64_t> counts_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> where_;
  std::unordered_set<std::uint64_t> used_;
  std::set<Candidate, ByPriority> queue_;
};

}  // namespace

MergeTable learn_bpe(const WordCounts& words, std::size_t num_merges) {
  if (num_merges == 0) {
    for (const auto& [word, freq] : words) check_marker_free(word);
    return MergeTable();
  }
  return Learner(words).run(num_merges);
}

MergeTable learn_bpe(const std::vector<std::vector<std::string>>& corpus, std::size_t num_merges) {
  return learn_bpe(count_words(corpus), num_merges);
}

// ---------------------------------------------------------------- applying

std::vector<std::string> segment_word(std::string_view word, const MergeTable& merges) {
  std::vector<std::string> syms = word_symbols(word);
  // Visiting, in increasing rank, only the merges that currently have an
  // adjacent occurrence is equivalent to one pass per table entry: skipped
  // entries would have matched nothing.
  std::size_t floor = 0;
  bool first = true;
  while (syms.size() > 1) {
    std::optional<std::size_t> next;
    for (std::size_t i = 0; i + 1 < syms.size(); ++i) {
      auto r = merges.rank(syms[i], syms[i + 1]);
      if (r && (first || *r > floor) && (!next || *r < *next)) next = r;
    }
    if (!next) break;
    const auto& [l, r] = merges.merges()[*next];
    std::vector<std::string> merged;
    merged.reserve(syms.size());
    for (std::size_t i = 0; i < syms.size();) {
      if (i + 1 < syms.size() && syms[i] == l && syms[i + 1] == r) {
        merged.push_back(syms[i] + syms[i + 1]);
        i += 2;
      } else {
        merged.push_back(std::move(syms[i++]));
      }
    }
    syms = std::move(merged);
    floor = *next;
    first = false;
  }
  return syms;
}

void Encoder::encode_word(std::string_view word, std::vector<std::string>& out) {
  auto it = cache_.find(std::string(word));
  if (it == cache_.end()) {
    check_marker_free(word);
    auto syms = segment_word(word, merges_);
    for (std::size_t i = 0; i < syms.size(); ++i) {
      if (i + 1 < syms.size()) {
        syms[i].append(kContinuation);
      } else {
        syms[i].resize(syms[i].size() - kEndOfWord.size());
      }
    }
    it = cache_.emplace(std::string(word), std::move(syms)).first;
  }
  out.insert(out.end(), it->second.begin(), it->second.end());
}

std::vector<std::string> Encoder::encode(std::span<const std::string> tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) encode_word(t, out);
  return out;
}

std::vector<std::string> apply_bpe(std::span<const std::string> tokens, const MergeTable& merges) {
  return Encoder(merges).encode(tokens);
}

std::vector<std::string> unapply_bpe(std::span<const std::string> subwords) {
  std::vector<std::string> out;
  std::string pending;
  bool open = false;
  for (const auto& s : subwords) {
    std::string_view v = s;
    if (v.ends_with(kContinuation)) {
      pending.append(v.substr(0, v.size() - kContinuation.size()));
      open = true;
    } else {
      pending.append(v);
      out.push_back(std::move(pending));
      pending.clear();
      open = false;
    }
  }
  if (open) throw MalformedInputError("dangling '@@' continuation on final token");
  return out;
}

// ---------------------------------------------------------------- codec file

void write_merge_table(const MergeTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << table.header() << '\n';
  for (const auto& [l, r] : table.merges()) out << l << ' ' << r << '\n';
  out.flush();
  if (!out) throw IoError("write failure on '" + path.string() + "'");
}

MergeTable read_merge_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || !line.starts_with('#')) {
    throw ParseError("'" + path.string() + "' line 1: expected a '#' version header");
  }
  std::string header = line;
  std::vector<SymbolPair> merges;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    auto sp = line.find(' ');
    if (sp == std::string::npos || sp == 0 || sp + 1 == line.size() ||
        line.find(' ', sp + 1) != std::string::npos) {
      throw ParseError("'" + path.string() + "' line " + std::to_string(line_no) +
                       ": expected 'left right'");
    }
    merges.emplace_back(line.substr(0, sp), line.substr(sp + 1));
  }
  try {
    return MergeTable(std::move(merges), std::move(header));
  } catch (const ConfigError& e) {
    throw ParseError("'" + path.string() + "': " + e.what());
  }
}

}  // namespace tsel::bpe
