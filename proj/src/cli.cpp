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

#include "tsel/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <map>

#include "tsel/bpe.hpp"
#include "tsel/corpus.hpp"
#include "tsel/error.hpp"
#include "tsel/report.hpp"
#include "tsel/threads.hpp"
#include "tsel/utf8.hpp"

namespace tsel::cli {

std::size_t parse_size(std::string_view text) {
  std::size_t mult = 1;
  std::string_view digits = text;
  if (!digits.empty() && (digits.back() == 'K' || digits.back() == 'k')) {
    mult = 1000;
    digits.remove_suffix(1);
  } else if (!digits.empty() && (digits.back() == 'M' || digits.back() == 'm')) {
    mult = 1000000;
    digits.remove_suffix(1);
  }
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size()) {
    throw ConfigError("bad size '" + std::string(text) + "'");
  }
  if (value == 0) throw ConfigError("size must be >= 1");
  return value * mult;
}

void RunConfig::validate() const {
  auto reject = [&](bool set, const char* flag) {
    if (set) {
      throw ConfigError(std::string(flag) + " does not apply to method " +
                        std::string(to_string(method)));
    }
  };
  reject(t.has_value() && method != Method::inr, "--threshold");
  reject(seed_counts.has_value() && method != Method::inr, "--seed-counts");
  reject(d.has_value() && method != Method::fda, "--decay");
  reject(c.has_value() && method != Method::fda, "--exponent");
  reject(init.has_value() && method != Method::fda, "--init");
  reject(count_mode.has_value() && method == Method::tfidf, "--count-mode");
  reject(tfidf_per_sentence && method != Method::tfidf, "--tfidf-per-sentence");
  if (corpora.empty()) throw ConfigError("at least one --corpus is required");
  ngram.validate();
}

MethodConfig RunConfig::method_config() const {
  switch (method) {
    case Method::tfidf:
      return TfidfConfig{ngram, tfidf_per_sentence};
    case Method::inr: {
      InrConfig cfg;
      cfg.ngram = ngram;
      if (t) cfg.t = *t;
      if (count_mode) cfg.count_mode = *count_mode;
      cfg.validate();
      return cfg;
    }
    case Method::fda: {
      FdaConfig cfg;
      cfg.ngram = ngram;
      if (d) cfg.d = *d;
      if (c) cfg.c = *c;
      if (init) cfg.init = *init;
      if (count_mode) cfg.count_mode = *count_mode;
      cfg.validate();
      return cfg;
    }
  }
  throw ConfigError("unknown method");
}

namespace {

CandidatePool load_pool(const std::vector<CorpusSpec>& specs) {
  std::vector<std::future<ParallelCorpus>> loads;
  for (const auto& s : specs) {
    loads.push_back(std::async(std::launch::async, [&s] {
      return load_parallel_corpus(s.source, s.target, s.id);
    }));
  }
  std::vector<ParallelCorpus> corpora;
  for (auto& f : loads) corpora.push_back(f.get());
  return concat_corpora(std::move(corpora));
}

struct Inputs {
  CandidatePool pool;
  TestSet test;
  MethodConfig method;
};

Inputs load_inputs(const RunConfig& cfg) {
  cfg.validate();
  MethodConfig method = cfg.method_config();
  CandidatePool pool = load_pool(cfg.corpora);
  TestSet test = load_test_set(cfg.test);
  if (cfg.seed_counts) {
    auto& inr = std::get<InrConfig>(method);
    auto seed = to_sentences(read_lines(*cfg.seed_counts));
    inr.seed = count_test_ngrams(seed, test, inr.ngram, inr.count_mode);
  }
  return {std::move(pool), std::move(test), std::move(method)};
}

unsigned threads_of(const RunConfig& cfg) {
  return cfg.threads == 0 ? default_threads() : cfg.threads;
}

}  // namespace

SelectSummary cmd_select(const RunConfig& cfg, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  if (cfg.size < 1) throw ConfigError("--size must be >= 1");
  if (cfg.out_prefix.empty()) throw ConfigError("--out is required");
  Inputs in = load_inputs(cfg);
  Selection sel = select(in.pool, in.test, cfg.size, in.method, threads_of(cfg));
  if (sel.entries.empty()) {
    throw Error("no candidate scored above zero; nothing to write");
  }
  write_selection(sel, in.pool, cfg.out_prefix);
  SelectSummary summary;
  summary.selected = sel.entries.size();
  summary.requested = sel.requested;
  summary.exhausted = sel.exhausted;
  summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  char wall[32];
  std::snprintf(wall, sizeof wall, "%.3f", summary.wall_seconds);
  out << "method\t" << to_string(sel.method) << '\n'
      << "selected\t" << summary.selected << '\n'
      << "requested\t" << summary.requested << '\n'
      << "exhausted\t" << (summary.exhausted ? "yes" : "no") << '\n'
      << "wall_seconds\t" << wall << '\n';
  return summary;
}

void cmd_score(const RunConfig& cfg, std::ostream& out) {
  Inputs in = load_inputs(cfg);
  auto scores = score_dump(in.pool, in.test, in.method, threads_of(cfg));
  out << "global_index\tcorpus_id\tline_no\tscore\n";
  for (std::size_t i = 0; i < scores.size(); ++i) {
    Provenance p = in.pool.locate(i);
    out << i << '\t' << p.corpus_id << '\t' << p.line_no << '\t' << format_score(scores[i]) << '\n';
  }
}

void cmd_stats(const std::filesystem::path& meta_tsv, bool tsv, std::ostream& out) {
  auto entries = read_meta_tsv(meta_tsv);
  auto report = provenance_stats(entries);
  if (tsv) {
    write_report_tsv(report, out);
  } else {
    write_report_table(report, out);
  }
}

namespace {

// Opens `path` for reading, "-" meaning standard input.
class Input {
 public:
  explicit Input(const std::filesystem::path& path) : name_(path.string()) {
    if (path == "-") return;
    file_.open(path, std::ios::binary);
    if (!file_) throw IoError("cannot open '" + name_ + "'");
  }
  std::istream& stream() { return file_.is_open() ? file_ : std::cin; }
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  std::ifstream file_;
};

class Output {
 public:
  explicit Output(const std::filesystem::path& path) : name_(path.string()) {
    if (path == "-") return;
    file_.open(path, std::ios::binary | std::ios::trunc);
    if (!file_) throw IoError("cannot open '" + name_ + "' for writing");
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  void finish() {
    stream().flush();
    if (!stream()) throw IoError("write failure on '" + name_ + "'");
  }

 private:
  std::string name_;
  std::ofstream file_;
};

// Calls fn(tokens, line_no) for every line of `in`, validating UTF-8.
template <class Fn>
void for_each_token_line(Input& in, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in.stream(), line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!utf8::is_valid(line)) {
      throw EncodingError("'" + in.name() + "' line " + std::to_string(line_no) + ": invalid UTF-8");
    }
    try {
      fn(Sentence(std::move(line), line_no - 1).token_strings());
    } catch (const MalformedInputError& e) {
      throw MalformedInputError("'" + in.name() + "' line " + std::to_string(line_no) + ": " + e.what());
    }
    line.clear();
  }
}

void write_tokens(std::ostream& out, const std::vector<std::string>& tokens) {
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out << ' ';
    out << tokens[i];
  }
  out << '\n';
}

}  // namespace

void cmd_bpe_learn(const std::vector<std::filesystem::path>& inputs, std::size_t num_merges,
                   const std::filesystem::path& codec_out) {
  std::map<std::string, std::uint64_t> counts;
  for (const auto& path : inputs) {
    Input in(path);
    for_each_token_line(in, [&](const std::vector<std::string>& tokens) {
      for (const auto& t : tokens) {
        bpe::check_marker_free(t);
        ++counts[t];
      }
    });
  }
  auto table = bpe::learn_bpe(bpe::WordCounts(counts.begin(), counts.end()), num_merges);
  bpe::write_merge_table(table, codec_out);
}

void cmd_bpe_apply(const std::filesystem::path& codec, const std::filesystem::path& in_path,
                   const std::filesystem::path& out_path) {
  auto table = bpe::read_merge_table(codec);
  bpe::Encoder encoder(table);
  Input in(in_path);
  Output out(out_path);
  for_each_token_line(in, [&](const std::vector<std::string>& tokens) {
    write_tokens(out.stream(), encoder.encode(tokens));
  });
  out.finish();
}

void cmd_bpe_unapply(const std::filesystem::path& in_path, const std::filesystem::path& out_path) {
  Input in(in_path);
  Output out(out_path);
  for_each_token_line(in, [&](const std::vector<std::string>& tokens) {
    write_tokens(out.stream(), bpe::unapply_bpe(tokens));
  });
  out.finish();
}

// ---------------------------------------------------------------- command line

namespace {

struct RawRunOptions {
  std::string method;
  std::string size;
  std::vector<std::string> corpus;
  std::string test;
  int min_order = 1;
  int max_order = 3;
  std::uint64_t t = 0;
  double d = 0, c = 0, init = 0;
  std::string count_mode;
  std::string seed_counts;
  bool per_sentence = false;
  unsigned threads = 0;
  std::string out;
};

struct RunFlags {
  CLI::Option* t;
  CLI::Option* d;
  CLI::Option* c;
  CLI::Option* init;
  CLI::Option* count_mode;
  CLI::Option* seed_counts;
  CLI::Option* threads;
};

RunFlags add_run_options(CLI::App* cmd, RawRunOptions& o) {
  cmd->add_option("--method", o.method, "Selection method")
      ->required()
      ->check(CLI::IsMember({"tfidf", "inr", "fda"}));
  cmd->add_option("--corpus", o.corpus, "Candidate corpus: ID SOURCE TARGET (repeatable)")
      ->expected(3)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
      ->required();
  cmd->add_option("--test", o.test, "Test set (source side)")->required();
  cmd->add_option("--min-order", o.min_order, "Smallest n-gram order")->capture_default_str();
  cmd->add_option("--max-order", o.max_order, "Largest n-gram order")->capture_default_str();
  RunFlags f{};
  f.t = cmd->add_option("--threshold", o.t, "INR infrequency threshold t [80]");
  f.d = cmd->add_option("--decay", o.d, "FDA decay base d [0.5]");
  f.c = cmd->add_option("--exponent", o.c, "FDA polynomial decay exponent c [0]");
  f.init = cmd->add_option("--init", o.init, "FDA initial feature value [1.0]");
  f.count_mode = cmd->add_option("--count-mode", o.count_mode,
                                 "How selected-pool counts grow: occurrences|sentences")
                     ->check(CLI::IsMember({"occurrences", "sentences"}));
  f.seed_counts = cmd->add_option("--seed-counts", o.seed_counts,
                                  "INR: corpus whose n-gram counts seed the selected pool");
  cmd->add_flag("--tfidf-per-sentence", o.per_sentence,
                "TF-IDF: top sentences per test sentence, keeping duplicates");
  f.threads = cmd->add_option("--threads", o.threads, "Worker threads [$TSEL_THREADS or all cores]");
  return f;
}

RunConfig to_run_config(const RawRunOptions& o, const RunFlags& f) {
  RunConfig cfg;
  cfg.method = parse_method(o.method);
  for (std::size_t i = 0; i + 2 < o.corpus.size(); i += 3) {
    cfg.corpora.push_back({o.corpus[i], o.corpus[i + 1], o.corpus[i + 2]});
  }
  if (o.corpus.size() % 3 != 0) throw ConfigError("--corpus takes ID SOURCE TARGET");
  cfg.test = o.test;
  cfg.ngram = {o.min_order, o.max_order};
  if (f.t->count()) cfg.t = o.t;
  if (f.d->count()) cfg.d = o.d;
  if (f.c->count()) cfg.c = o.c;
  if (f.init->count()) cfg.init = o.init;
  if (f.count_mode->count()) cfg.count_mode = parse_count_mode(o.count_mode);
  if (f.seed_counts->count()) cfg.seed_counts = o.seed_counts;
  cfg.tfidf_per_sentence = o.per_sentence;
  if (f.threads->count()) {
    if (o.threads == 0) throw ConfigError("--threads must be >= 1");
    cfg.threads = o.threads;
  }
  cfg.validate();
  return cfg;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Transductive data selection for machine translation corpora", "tsel"};
  app.require_subcommand(1);

  RawRunOptions sel_opts;
  auto* sel = app.add_subcommand("select", "Select the candidate pairs most relevant to a test set");
  RunFlags sel_flags = add_run_options(sel, sel_opts);
  sel->add_option("--size", sel_opts.size, "Number of pairs to select (suffixes K, M)")->required();
  sel->add_option("--out", sel_opts.out, "Output prefix for .src/.tgt/.meta.tsv")->required();

  RawRunOptions score_opts;
  auto* score = app.add_subcommand("score", "Dump every candidate's initial score as TSV");
  RunFlags score_flags = add_run_options(score, score_opts);
  score->add_option("--out", score_opts.out, "Output file [stdout]");

  std::string meta_path;
  bool stats_tsv = false;
  auto* stats = app.add_subcommand("stats", "Per-corpus composition of a selection");
  stats->add_option("meta", meta_path, "Meta TSV written by select")->required();
  stats->add_flag("--tsv", stats_tsv, "Emit TSV instead of an aligned table");

  std::vector<std::string> learn_inputs;
  std::size_t merges = 0;
  std::string codec_out;
  auto* learn = app.add_subcommand("bpe-learn", "Learn BPE merge operations");
  learn->add_option("--input", learn_inputs, "Tokenized text (repeat for joint learning)")
      ->required()
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  learn->add_option("--merges", merges, "Number of merge operations")->required();
  learn->add_option("--codec", codec_out, "Merge table to write")->required();

  std::string codec_in, apply_in = "-", apply_out = "-";
  auto* apply = app.add_subcommand("bpe-apply", "Segment text with a merge table");
  apply->add_option("--codec", codec_in, "Merge table")->required();
  apply->add_option("--input", apply_in, "Input text ['-' = stdin]");
  apply->add_option("--output", apply_out, "Output text ['-' = stdout]");

  std::string unapply_in = "-", unapply_out = "-";
  auto* unapply = app.add_subcommand("bpe-unapply", "Undo BPE segmentation");
  unapply->add_option("--input", unapply_in, "Input text ['-' = stdin]");
  unapply->add_option("--output", unapply_out, "Output text ['-' = stdout]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sel->parsed()) {
      RunConfig cfg = to_run_config(sel_opts, sel_flags);
      cfg.size = parse_size(sel_opts.size);
      cfg.out_prefix = sel_opts.out;
      cmd_select(cfg, out);
    } else if (score->parsed()) {
      RunConfig cfg = to_run_config(score_opts, score_flags);
      if (score_opts.out.empty() || score_opts.out == "-") {
        cmd_score(cfg, out);
      } else {
        Output file(score_opts.out);
        cmd_score(cfg, file.stream());
        file.finish();
      }
    } else if (stats->parsed()) {
      cmd_stats(meta_path, stats_tsv, out);
    } else if (learn->parsed()) {
      std::vector<std::filesystem::path> paths(learn_inputs.begin(), learn_inputs.end());
      cmd_bpe_learn(paths, merges, codec_out);
    } else if (apply->parsed()) {
      cmd_bpe_apply(codec_in, apply_in, apply_out);
    } else if (unapply->parsed()) {
      cmd_bpe_unapply(unapply_in, unapply_out);
    }
  } catch (const ConfigError& e) {
    err << "tsel: usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "tsel: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace tsel::cli
