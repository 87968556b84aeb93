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

#ifndef TSEL_REPORT_HPP_
#define TSEL_REPORT_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "tsel/selection.hpp"

namespace tsel {

struct CorpusShare {
  std::uint64_t count = 0;
  int percent = 0;  // round(100 * count / total), halves away from zero
};

// Composition of a selection by originating corpus.
struct ProvenanceReport {
  std::map<std::string, CorpusShare> per_corpus;
  std::uint64_t total = 0;
};

// Throws ConfigError on an empty selection.
ProvenanceReport provenance_stats(const Selection& selection);
ProvenanceReport provenance_stats(std::span<const SelectionEntry> entries);

void write_report_tsv(const ProvenanceReport& report, std::ostream& out);
void write_report_table(const ProvenanceReport& report, std::ostream& out);

// Equal-width histogram over [min score, max score]. All-equal scores
// give a single bucket; an empty selection gives no buckets.
std::vector<std::uint64_t> score_histogram(std::span<const SelectionEntry> entries,
                                           std::size_t buckets);

// Reads a meta TSV written by write_selection. The file does not record
// global indexes; entries get their row position instead. Throws
// ParseError naming the offending line.
std::vector<SelectionEntry> read_meta_tsv(const std::filesystem::path& path);

}  // namespace tsel

#endif  // TSEL_REPORT_HPP_
