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

#ifndef TSEL_CLI_HPP_
#define TSEL_CLI_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tsel/selection.hpp"

namespace tsel::cli {

struct CorpusSpec {
  std::string id;
  std::filesystem::path source;
  std::filesystem::path target;
};

// Parameters of a `select` or `score` run. Method-specific values are
// optional so that setting one for the wrong method can be rejected.
struct RunConfig {
  Method method = Method::fda;
  std::size_t size = 0;
  std::vector<CorpusSpec> corpora;
  std::filesystem::path test;
  NgramConfig ngram;
  std::optional<std::uint64_t> t;
  std::optional<double> d;
  std::optional<double> c;
  std::optional<double> init;
  std::optional<CountMode> count_mode;
  std::optional<std::filesystem::path> seed_counts;
  bool tfidf_per_sentence = false;
  unsigned threads = 0;
  std::filesystem::path out_prefix;

  // Throws ConfigError for parameters that do not apply to `method`.
  void validate() const;
  MethodConfig method_config() const;
};

// "100000", "100K", "1M" -> count. Throws ConfigError.
std::size_t parse_size(std::string_view text);

struct SelectSummary {
  std::size_t selected = 0;
  std::size_t requested = 0;
  bool exhausted = false;
  double wall_seconds = 0.0;
};

SelectSummary cmd_select(const RunConfig& cfg, std::ostream& out);
void cmd_score(const RunConfig& cfg, std::ostream& out);
void cmd_stats(const std::filesystem::path& meta_tsv, bool tsv, std::ostream& out);
void cmd_bpe_learn(const std::vector<std::filesystem::path>& inputs, std::size_t num_merges,
                   const std::filesystem::path& codec_out);
void cmd_bpe_apply(const std::filesystem::path& codec, const std::filesystem::path& in,
                   const std::filesystem::path& out);
void cmd_bpe_unapply(const std::filesystem::path& in, const std::filesystem::path& out);

// Full command line entry point. Returns the process exit status:
// 0 on success, 2 for usage errors, 1 for data or I/O errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tsel::cli

#endif  // TSEL_CLI_HPP_
