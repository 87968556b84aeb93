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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <spawn.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <fcntl.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "oracle.hpp"
#include "test_util.hpp"
#include "tsel/bpe.hpp"
#include "tsel/cli.hpp"
#include "tsel/corpus.hpp"
#include "tsel/features.hpp"
#include "tsel/selection.hpp"

extern char** environ;

using namespace tsel;
using namespace tsel::testing;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Records the first failure; later ones only count.
class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (failures_++ == 0) first_ = what;
  }
  bool ok() const { return failures_ == 0; }
  std::string failure() const {
    return first_ + (failures_ > 1 ? " (+" + std::to_string(failures_ - 1) + " more)" : "");
  }

 private:
  std::size_t failures_ = 0;
  std::string first_;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::vector<oracle::Pick> picks(const Selection& sel) {
  std::vector<oracle::Pick> out;
  for (const auto& e : sel.entries) out.push_back({e.global_index, e.score});
  return out;
}

struct ChildResult {
  int exit_code = -1;
  double seconds = 0.0;
  long max_rss_kb = 0;
};

// Runs the CLI with stdout and stderr sent to `log`.
ChildResult run_cli(const std::vector<std::string>& args, const std::filesystem::path& log) {
  std::vector<std::string> argv_store;
  argv_store.push_back(TSEL_BINARY);
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  argv.push_back(nullptr);

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, 1, log.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  posix_spawn_file_actions_adddup2(&actions, 1, 2);

  ChildResult r;
  auto start = Clock::now();
  pid_t pid = 0;
  int rc = posix_spawn(&pid, argv[0], &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) throw std::runtime_error("cannot spawn " + argv_store[0]);
  int status = 0;
  rusage usage{};
  if (wait4(pid, &status, 0, &usage) < 0) throw std::runtime_error("wait4 failed");
  r.seconds = seconds_since(start);
  r.max_rss_kb = usage.ru_maxrss;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
  return r;
}

// Zipf-distributed words over w0..w{vocab-1}.
class ZipfWords {
 public:
  explicit ZipfWords(std::size_t vocab) : cumulative_(vocab) {
    double sum = 0.0;
    for (std::size_t r = 0; r < vocab; ++r) cumulative_[r] = sum += 1.0 / static_cast<double>(r + 1);
  }

  std::string sentence(std::mt19937_64& rng, int min_len, int max_len) {
    std::uniform_int_distribution<int> len(min_len, max_len);
    std::uniform_real_distribution<double> u(0.0, cumulative_.back());
    std::string s;
    for (int i = 0, n = len(rng); i < n; ++i) {
      auto r = std::upper_bound(cumulative_.begin(), cumulative_.end(), u(rng)) - cumulative_.begin();
      r = std::min<std::ptrdiff_t>(r, static_cast<std::ptrdiff_t>(cumulative_.size()) - 1);
      if (i) s.push_back(' ');
      s += 'w';
      s += std::to_string(r);
    }
    return s;
  }

  void write(const std::filesystem::path& path, std::size_t lines, std::mt19937_64& rng, int min_len,
             int max_len) {
    std::ofstream out(path, std::ios::binary);
    std::string buf;
    for (std::size_t i = 0; i < lines; ++i) {
      buf += sentence(rng, min_len, max_len);
      buf += '\n';
      if (buf.size() > (1u << 20)) {
        out << buf;
        buf.clear();
      }
    }
    out << buf;
  }

 private:
  std::vector<double> cumulative_;
};

unsigned max_threads() { return std::max(4u, std::thread::hardware_concurrency()); }

// ------------------------------------------------------------------ 1

Outcome oracle_equivalence() {
  auto start = Clock::now();
  Checker check;
  std::mt19937_64 rng(20260101);
  std::size_t compared = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto size = std::uniform_int_distribution<std::size_t>(100, 500)(rng);
    const auto test_size = std::uniform_int_distribution<std::size_t>(5, 20)(rng);
    auto lines = random_lines(rng, size, 50, 1, 20);
    auto tests = random_lines(rng, test_size, 50, 1, 20);
    const int lo = std::uniform_int_distribution<int>(1, 2)(rng);
    const int hi = std::uniform_int_distribution<int>(lo, 3)(rng);
    const bool by_occ = trial % 3 != 2;
    const std::string tag = "pool " + std::to_string(trial);
    auto pool = pool_of(lines);
    auto test = test_of(tests);

    TfidfConfig tc;
    tc.ngram = {lo, hi};
    auto tsel_run = tfidf_select(pool, test, size, tc);
    auto tref = oracle::tfidf_select(lines, tests, size, lo, hi);
    check.expect(picks(tsel_run) == tref.picks, tag + ": tfidf differs");

    InrConfig ic;
    ic.ngram = {lo, hi};
    ic.t = std::array<std::uint64_t, 5>{1, 2, 5, 20, 80}[trial % 5];
    ic.count_mode = by_occ ? CountMode::occurrences : CountMode::sentences;
    auto isel = inr_select(pool, test, size, ic);
    auto iref = oracle::inr_select(lines, tests, size, ic.t, lo, hi, by_occ);
    check.expect(picks(isel) == iref.picks && isel.exhausted == iref.exhausted,
                 tag + ": inr differs");

    FdaConfig fc;
    fc.ngram = {lo, hi};
    fc.d = std::array<double, 4>{0.5, 0.3, 0.9, 1.0}[trial % 4];
    fc.c = std::array<double, 3>{0.0, 0.5, 1.0}[trial % 3];
    fc.count_mode = ic.count_mode;
    auto fsel = fda_select(pool, test, size, fc);
    auto fref = oracle::fda_select(lines, tests, size, fc.d, fc.c, 1.0, lo, hi, by_occ);
    check.expect(picks(fsel) == fref.picks && fsel.exhausted == fref.exhausted,
                 tag + ": fda differs");
    compared += tsel_run.entries.size() + isel.entries.size() + fsel.entries.size();
  }
  double secs = seconds_since(start);
  check.expect(secs < 30.0, "took " + fmt(secs) + " s");
  if (!check.ok()) return {false, check.failure()};
  return {true, "20 pools, " + std::to_string(compared) + " ranked picks identical, " + fmt(secs) + " s"};
}

// ------------------------------------------------------------------ 2

Outcome fda_hand_scores() {
  auto pool = pool_of({"a b c", "a b c"});
  auto sel = fda_select(pool, test_of({"a b c"}), 2, FdaConfig{});
  if (sel.entries.size() != 2) return {false, "expected 2 picks"};
  double first = sel.entries[0].score;
  double second = sel.entries[1].score;
  bool ok = std::abs(first - 2.0) <= 1e-12 && std::abs(second - 1.0) <= 1e-12 &&
            sel.entries[0].global_index == 0;
  return {ok, "scores " + fmt(first, 12) + ", " + fmt(second, 12)};
}

// ------------------------------------------------------------------ 3

Outcome inr_exhaustion() {
  InrConfig cfg;
  cfg.t = 2;
  cfg.ngram = {1, 1};
  auto sel = inr_select(pool_of({"a a", "a"}), test_of({"a b"}), 2, cfg);
  bool ok = sel.entries.size() == 1 && sel.exhausted && sel.entries[0].global_index == 0;
  return {ok, "selected " + std::to_string(sel.entries.size()) + ", exhausted " +
                  (sel.exhausted ? "yes" : "no")};
}

// ------------------------------------------------------------------ 4

std::string words_from(std::mt19937_64& rng, const std::string& prefix, int vocab, int min_len,
                       int max_len) {
  std::uniform_int_distribution<int> len(min_len, max_len);
  std::uniform_int_distribution<int> word(0, vocab - 1);
  std::string s;
  for (int i = 0, n = len(rng); i < n; ++i) {
    if (i) s.push_back(' ');
    s += prefix + std::to_string(word(rng));
  }
  return s;
}

Outcome positive_before_zero() {
  Checker check;
  for (int seed = 0; seed < 50; ++seed) {
    std::mt19937_64 rng(1000 + seed);
    const std::string tag = "seed " + std::to_string(seed);
    std::vector<std::string> tests;
    for (int i = 0; i < 10; ++i) tests.push_back(words_from(rng, "t", 30, 2, 12));
    std::set<std::string> test_words;
    for (const auto& s : tests) {
      for (const auto& w : oracle::split(s)) test_words.insert(w);
    }
    std::vector<std::string> lines;
    std::vector<bool> planted;
    std::bernoulli_distribution coin(0.5);
    const int size = std::uniform_int_distribution<int>(50, 300)(rng);
    for (int i = 0; i < size; ++i) {
      if (coin(rng)) {
        // Filler words plus at least one test word.
        std::string s = words_from(rng, "f", 30, 0, 8);
        auto it = test_words.begin();
        std::advance(it, std::uniform_int_distribution<std::size_t>(0, test_words.size() - 1)(rng));
        s = s.empty() ? *it : *it + " " + s;
        lines.push_back(s);
        planted.push_back(true);
      } else {
        lines.push_back(words_from(rng, "f", 30, 1, 10));
        planted.push_back(false);
      }
    }
    auto pool = pool_of(lines);
    auto test = test_of(tests);

    auto first = score_dump(pool, test, FdaConfig{});
    for (int i = 0; i < size; ++i) {
      check.expect((first[i] > 0.0) == planted[i], tag + ": initial score sign");
    }

    FdaConfig fc;
    auto fsel = fda_select(pool, test, size, fc);
    InrConfig ic;
    ic.t = std::uniform_int_distribution<std::uint64_t>(1, 80)(rng);
    auto isel = inr_select(pool, test, size, ic);

    for (const auto* sel : {&fsel, &isel}) {
      const std::string name = std::string(to_string(sel->method));
      bool seen_filler = false;
      for (const auto& e : sel->entries) {
        check.expect(e.score > 0.0, tag + ": " + name + " picked a zero score");
        if (!planted[e.global_index]) seen_filler = true;
        check.expect(!(seen_filler && planted[e.global_index]),
                     tag + ": " + name + " picked planted after filler");
        check.expect(planted[e.global_index], tag + ": " + name + " picked filler");
      }
    }
    // FDA scores never reach zero, so every planted sentence is taken.
    std::size_t planted_count = std::count(planted.begin(), planted.end(), true);
    check.expect(fsel.entries.size() == planted_count, tag + ": fda missed planted sentences");

    // Planted sentences INR left behind must have no remaining score.
    std::map<std::string, std::uint64_t> counts;
    std::vector<bool> taken(size, false);
    auto grams = oracle::test_ngrams(tests, 1, 3);
    for (const auto& e : isel.entries) {
      taken[e.global_index] = true;
      for (const auto& [g, c] : oracle::ngram_counts(lines[e.global_index], 1, 3)) {
        if (grams.count(g)) counts[g] += c;
      }
    }
    for (int i = 0; i < size; ++i) {
      if (!planted[i] || taken[i]) continue;
      for (const auto& [g, c] : oracle::ngram_counts(lines[i], 1, 3)) {
        check.expect(!grams.count(g) || counts[g] >= ic.t, tag + ": inr left a positive planted sentence");
      }
    }
  }
  if (!check.ok()) return {false, check.failure()};
  return {true, "50 seeds, no zero-score or filler picks"};
}

// ------------------------------------------------------------------ 5

Outcome tfidf_invariance() {
  Checker check;
  std::mt19937_64 rng(55);
  double worst_base = 0.0;
  double worst_self = 0.0;

  // Vectors built from a real pool under three logarithm bases.
  auto lines = random_lines(rng, 300, 40, 1, 15);
  auto pool = pool_of(lines);
  NgramConfig cfg{1, 3};
  auto idf = compute_idf(pool, cfg, 1);
  auto sentences = to_sentences(random_lines(rng, 200, 40, 1, 15));
  for (std::size_t i = 0; i + 1 < sentences.size(); i += 2) {
    const auto& a = sentences[i];
    const auto& b = sentences[i + 1];
    double natural = cosine_sim(tfidf_vector(a, idf, cfg), tfidf_vector(b, idf, cfg));
    for (double base : {2.0, 10.0, 3.7}) {
      double other = cosine_sim(tfidf_vector(a, idf, cfg, base), tfidf_vector(b, idf, cfg, base));
      worst_base = std::max(worst_base, std::abs(natural - other));
    }
  }

  // Random nonzero vectors: self-similarity and rescaling by 1 / ln(base).
  std::uniform_int_distribution<int> nterms(1, 30);
  std::uniform_int_distribution<int> term(0, 199);
  std::uniform_real_distribution<double> weight(0.001, 20.0);
  for (int i = 0; i < 1000; ++i) {
    std::vector<std::pair<std::string, double>> a, b;
    for (int k = 0, n = nterms(rng); k < n; ++k) a.emplace_back("x" + std::to_string(term(rng)), weight(rng));
    for (int k = 0, n = nterms(rng); k < n; ++k) b.emplace_back("x" + std::to_string(term(rng)), weight(rng));
    SparseVector u(a), v(b);
    worst_self = std::max(worst_self, std::abs(cosine_sim(u, u) - 1.0));
    double base = 2.0 + i % 9;
    auto scaled = [&](std::vector<std::pair<std::string, double>> e) {
      for (auto& [t, w] : e) w /= std::log(base);
      return SparseVector(std::move(e));
    };
    worst_base = std::max(worst_base, std::abs(cosine_sim(u, v) - cosine_sim(scaled(a), scaled(b))));
  }
  check.expect(worst_base <= 1e-9, "base change moved cosine by " + std::to_string(worst_base));
  check.expect(worst_self <= 1e-9, "self-similarity off by " + std::to_string(worst_self));
  if (!check.ok()) return {false, check.failure()};
  char buf[128];
  std::snprintf(buf, sizeof buf, "max base drift %.1e, max self drift %.1e", worst_base, worst_self);
  return {true, buf};
}

// ------------------------------------------------------------------ 6

std::string random_word(std::mt19937_64& rng, const std::vector<std::string>& alphabet, int max_len) {
  std::uniform_int_distribution<int> len(1, max_len);
  std::uniform_int_distribution<std::size_t> ch(0, alphabet.size() - 1);
  std::string w;
  for (int i = 0, n = len(rng); i < n; ++i) w += alphabet[ch(rng)];
  return w;
}

Outcome bpe_checks() {
  Checker check;

  // Classic hand-simulated corpus.
  bpe::WordCounts classic{{"low", 5}, {"lower", 2}, {"newest", 6}, {"widest", 3}};
  auto table = bpe::learn_bpe(classic, 4);
  std::vector<bpe::SymbolPair> expect{{"e", "s"}, {"es", "t</w>"}, {"l", "o"}, {"e", "w"}};
  check.expect(table.merges() == expect, "classic corpus merges");

  // Random corpora against the recount-every-iteration oracle.
  std::mt19937_64 rng(66);
  const std::vector<std::string> ascii{"a", "b", "c", "d", "e"};
  std::size_t corpora = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::map<std::string, std::uint64_t> words;
    const int types = std::uniform_int_distribution<int>(1, 20)(rng);
    while (static_cast<int>(words.size()) < types) {
      words[random_word(rng, ascii, 8)] = std::uniform_int_distribution<std::uint64_t>(1, 9)(rng);
    }
    const std::size_t merges = std::uniform_int_distribution<std::size_t>(1, 50)(rng);
    bpe::WordCounts wc(words.begin(), words.end());
    auto mine = bpe::learn_bpe(wc, merges);
    auto ref = oracle::learn_bpe(words, merges);
    check.expect(mine.merges() == ref, "trial " + std::to_string(trial) + ": merge tables differ");
    for (int k = 0; k < 10; ++k) words.emplace(random_word(rng, ascii, 10), 0);  // unseen words too
    for (const auto& [w, f] : words) {
      check.expect(bpe::segment_word(w, mine) == oracle::segment(w, ref),
                   "trial " + std::to_string(trial) + ": segmentation of '" + w + "' differs");
    }
    ++corpora;
  }

  // Round trip on random marker-free lines, including multi-byte text and
  // lone '@' characters.
  const std::vector<std::string> mixed{"a", "b", "c", "d", "e", "f", "@", "<", "/", "w", ">",
                                       "\xc3\xa9", "\xc3\x9f", "\xe4\xb8\xad", "\xf0\x9f\x99\x82"};
  std::vector<std::vector<std::string>> lines;
  std::uniform_int_distribution<int> len(0, 12);
  while (lines.size() < 10000) {
    std::vector<std::string> toks;
    for (int i = 0, n = len(rng); i < n; ++i) {
      std::string w;
      do {
        w = random_word(rng, mixed, 9);
      } while (w.find("@@") != std::string::npos || w.find("</w>") != std::string::npos);
      toks.push_back(w);
    }
    lines.push_back(std::move(toks));
  }
  auto codec = bpe::learn_bpe(std::vector<std::vector<std::string>>(lines.begin(), lines.begin() + 2000), 300);
  bpe::Encoder enc(codec);
  std::size_t split_words = 0;
  for (const auto& toks : lines) {
    auto pieces = enc.encode(toks);
    split_words += pieces.size() - toks.size();
    check.expect(bpe::unapply_bpe(pieces) == toks, "round trip failed");
  }
  check.expect(split_words > 0, "round trip never split a word");
  if (!check.ok()) return {false, check.failure()};
  return {true, std::to_string(corpora) + " oracle corpora match; 10000-line round trip identical"};
}

// ------------------------------------------------------------------ 7

Outcome determinism() {
  TempDir dir;
  std::mt19937_64 rng(77);
  ZipfWords zipf(5000);
  zipf.write(dir.path() / "a.src", 60000, rng, 1, 30);
  zipf.write(dir.path() / "a.tgt", 60000, rng, 1, 30);
  zipf.write(dir.path() / "b.src", 40000, rng, 1, 30);
  zipf.write(dir.path() / "b.tgt", 40000, rng, 1, 30);
  zipf.write(dir.path() / "test.src", 500, rng, 5, 25);

  Checker check;
  const std::string many = std::to_string(max_threads());
  std::string timing;
  for (const char* method : {"fda", "inr", "tfidf"}) {
    std::map<std::string, std::string> outputs[2];
    int k = 0;
    for (const std::string& threads : {std::string("1"), many}) {
      auto prefix = dir.path() / (std::string(method) + "_" + threads);
      auto r = run_cli({"select", "--method", method, "--corpus", "a", (dir.path() / "a.src").string(),
                        (dir.path() / "a.tgt").string(), "--corpus", "b", (dir.path() / "b.src").string(),
                        (dir.path() / "b.tgt").string(), "--test", (dir.path() / "test.src").string(),
                        "--size", "20K", "--threads", threads, "--out", prefix.string()},
                       dir.path() / "log.txt");
      check.expect(r.exit_code == 0, std::string(method) + " with " + threads + " threads exited " +
                                         std::to_string(r.exit_code) + ": " + read_file(dir.path() / "log.txt"));
      for (const char* ext : {".src", ".tgt", ".meta.tsv"}) {
        std::filesystem::path p = prefix.string() + ext;
        outputs[k][ext] = std::filesystem::exists(p) ? read_file(p) : std::string();
      }
      timing += (timing.empty() ? "" : ", ") + std::string(method) + "/" + threads + " " + fmt(r.seconds, 1) + "s";
      ++k;
    }
    for (const char* ext : {".src", ".tgt", ".meta.tsv"}) {
      check.expect(!outputs[0][ext].empty() && outputs[0][ext] == outputs[1][ext],
                   std::string(method) + ext + " differs between 1 and " + many + " threads");
    }
  }
  if (!check.ok()) return {false, check.failure()};
  return {true, "100000-line pool, 1 vs " + many + " threads identical (" + timing + ")"};
}

// ------------------------------------------------------------------ 8

Outcome throughput() {
  TempDir dir;
  std::mt19937_64 rng(88);
  ZipfWords zipf(30000);
  zipf.write(dir.path() / "pool.src", 1000000, rng, 5, 25);
  zipf.write(dir.path() / "pool.tgt", 1000000, rng, 5, 25);
  zipf.write(dir.path() / "test.src", 2000, rng, 5, 25);
  auto r = run_cli({"select", "--method", "fda", "--corpus", "pool", (dir.path() / "pool.src").string(),
                    (dir.path() / "pool.tgt").string(), "--test", (dir.path() / "test.src").string(),
                    "--size", "100K", "--out", (dir.path() / "sel").string()},
                   dir.path() / "log.txt");
  double gib = static_cast<double>(r.max_rss_kb) / (1024.0 * 1024.0);
  std::string detail = fmt(r.seconds, 1) + " s, peak RSS " + fmt(gib, 2) + " GiB";
  if (r.exit_code != 0) return {false, "exit " + std::to_string(r.exit_code) + ": " + read_file(dir.path() / "log.txt")};
  std::size_t selected = 0;
  {
    std::ifstream in(dir.path() / "sel.src");
    std::string line;
    while (std::getline(in, line)) ++selected;
  }
  Checker check;
  check.expect(selected == 100000, "selected " + std::to_string(selected) + " lines");
  check.expect(r.seconds < 600.0, "too slow: " + detail);
  check.expect(gib < 8.0, "too much memory: " + detail);
  if (!check.ok()) return {false, check.failure()};
  return {true, "1000000-line pool, 100000 selected in " + detail};
}

// ------------------------------------------------------------------ 9

Outcome provenance_report() {
  TempDir dir;
  Checker check;
  struct Case {
    std::vector<std::pair<std::string, std::size_t>> parts;
    std::string tsv;
    std::string table;
  };
  std::vector<Case> cases{
      {{{"base", 52}, {"rapid2016", 48}},
       "corpus_id\tcount\tpercent\nbase\t52\t52\nrapid2016\t48\t48\n",
       "corpus     lines     %\nbase          52   52%\nrapid2016     48   48%\ntotal        100      \n"},
      {{{"a", 1}, {"b", 2}}, "corpus_id\tcount\tpercent\na\t1\t33\nb\t2\t67\n", ""},
      {{{"x", 89}, {"y", 11}}, "corpus_id\tcount\tpercent\nx\t89\t89\ny\t11\t11\n", ""},
      {{{"p", 1}, {"q", 1}, {"r", 1}}, "corpus_id\tcount\tpercent\np\t1\t33\nq\t1\t33\nr\t1\t33\n", ""},
      {{{"big", 199}, {"small", 1}}, "corpus_id\tcount\tpercent\nbig\t199\t100\nsmall\t1\t1\n", ""},
      {{{"h", 7}, {"k", 1}}, "corpus_id\tcount\tpercent\nh\t7\t88\nk\t1\t13\n", ""},
  };
  int index = 0;
  for (const auto& c : cases) {
    std::vector<ParallelCorpus> corpora;
    for (const auto& [id, count] : c.parts) {
      std::vector<std::string> lines;
      for (std::size_t i = 0; i < count; ++i) lines.push_back(id + " line " + std::to_string(i));
      corpora.emplace_back(id, to_sentences(lines), lines);
    }
    auto pool = concat_corpora(std::move(corpora));
    // Interleave corpora so the report cannot rely on row order.
    Selection sel;
    std::vector<std::size_t> order(pool.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::mt19937_64 rng(index);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t r = 0; r < order.size(); ++r) {
      auto p = pool.locate(order[r]);
      sel.entries.push_back({r, order[r], 1.0, std::string(p.corpus_id), p.line_no});
    }
    sel.requested = order.size();
    auto prefix = dir.path() / ("sel" + std::to_string(index));
    write_selection(sel, pool, prefix);
    auto meta = prefix.string() + ".meta.tsv";

    auto r = run_cli({"stats", meta, "--tsv"}, dir.path() / "out.tsv");
    check.expect(r.exit_code == 0 && read_file(dir.path() / "out.tsv") == c.tsv,
                 "case " + std::to_string(index) + ": tsv was\n" + read_file(dir.path() / "out.tsv"));
    if (!c.table.empty()) {
      std::ostringstream table;
      cli::cmd_stats(meta, false, table);
      check.expect(table.str() == c.table, "case " + std::to_string(index) + ": table was\n" + table.str());
    }
    ++index;
  }
  if (!check.ok()) return {false, check.failure()};
  return {true, std::to_string(cases.size()) + " compositions, rows match hand-computed rounding"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"oracle equivalence", oracle_equivalence},
      {"FDA hand-computed scores", fda_hand_scores},
      {"INR exhaustion and threshold", inr_exhaustion},
      {"positive before zero", positive_before_zero},
      {"TF-IDF base invariance and self-similarity", tfidf_invariance},
      {"BPE oracle and round trip", bpe_checks},
      {"determinism under parallelism", determinism},
      {"throughput", throughput},
      {"provenance report format", provenance_report},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  [" << i + 1 << "] " << criteria[i].name << ": " << o.detail
              << std::endl;
  }
  std::cout << criteria.size() - failed << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
