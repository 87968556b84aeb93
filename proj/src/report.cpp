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

#include "tsel/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>

#include "tsel/error.hpp"

namespace tsel {

ProvenanceReport provenance_stats(std::span<const SelectionEntry> entries) {
  if (entries.empty()) throw ConfigError("provenance report needs a non-empty selection");
  ProvenanceReport report;
  report.total = entries.size();
  for (const auto& e : entries) ++report.per_corpus[e.corpus_id].count;
  for (auto& [id, share] : report.per_corpus) {
    share.percent = static_cast<int>(
        std::round(100.0 * static_cast<double>(share.count) / static_cast<double>(report.total)));
  }
  return report;
}

ProvenanceReport provenance_stats(const Selection& selection) {
  return provenance_stats(selection.entries);
}

void write_report_tsv(const ProvenanceReport& report, std::ostream& out) {
  out << "corpus_id\tcount\tpercent\n";
  for (const auto& [id, share] : report.per_corpus) {
    out << id << '\t' << share.count << '\t' << share.percent << '\n';
  }
}

void write_report_table(const ProvenanceReport& report, std::ostream& out) {
  std::size_t id_width = std::string_view("corpus").size();
  std::size_t count_width = std::string_view("lines").size();
  for (const auto& [id, share] : report.per_corpus) {
    id_width = std::max(id_width, id.size());
    count_width = std::max(count_width, std::to_string(share.count).size());
  }
  count_width = std::max(count_width, std::to_string(report.total).size());
  auto row = [&](std::string_view id, const std::string& count, const std::string& pct) {
    out << std::left << std::setw(static_cast<int>(id_width)) << id << "  " << std::right
        << std::setw(static_cast<int>(count_width)) << count << "  " << std::setw(4) << pct << '\n';
  };
  row("corpus", "lines", "%");
  for (const auto& [id, share] : report.per_corpus) {
    row(id, std::to_string(share.count), std::to_string(share.percent) + "%");
  }
  row("total", std::to_string(report.total), "");
}

std::vector<std::uint64_t> score_histogram(std::span<const SelectionEntry> entries,
                                           std::size_t buckets) {
  if (buckets < 1) throw ConfigError("histogram needs at least one bucket");
  if (entries.empty()) return {};
  auto [lo_it, hi_it] = std::minmax_element(
      entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.score < b.score; });
  const double lo = lo_it->score;
  const double hi = hi_it->score;
  if (!(hi > lo)) return {entries.size()};
  std::vector<std::uint64_t> counts(buckets, 0);
  const double width = (hi - lo) / static_cast<double>(buckets);
  for (const auto& e : entries) {
    auto b = static_cast<std::size_t>((e.score - lo) / width);
    ++counts[std::min(b, buckets - 1)];
  }
  return counts;
}

namespace {

template <class T>
bool parse_number(std::string_view field, T& out) {
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
  return ec == std::errc() && ptr == field.data() + field.size();
}

}  // namespace

std::vector<SelectionEntry> read_meta_tsv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  auto fail = [&](std::size_t line_no, const std::string& what) {
    return ParseError("'" + path.string() + "' line " + std::to_string(line_no) + ": " + what);
  };
  std::string line;
  std::size_t line_no = 0;
  std::vector<SelectionEntry> entries;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != kMetaHeader) throw fail(line_no, "expected header '" + std::string(kMetaHeader) + "'");
      continue;
    }
    std::vector<std::string_view> fields;
    std::string_view rest = line;
    for (;;) {
      auto tab = rest.find('\t');
      fields.push_back(rest.substr(0, tab));
      if (tab == std::string_view::npos) break;
      rest.remove_prefix(tab + 1);
    }
    if (fields.size() != 4) throw fail(line_no, "expected 4 tab-separated fields");
    SelectionEntry e;
    if (!parse_number(fields[0], e.rank)) throw fail(line_no, "bad rank");
    if (!parse_number(fields[1], e.score)) throw fail(line_no, "bad score");
    if (fields[2].empty()) throw fail(line_no, "empty corpus id");
    e.corpus_id = std::string(fields[2]);
    if (!parse_number(fields[3], e.line_no)) throw fail(line_no, "bad line number");
    e.global_index = entries.size();
    entries.push_back(std::move(e));
  }
  if (line_no == 0) throw fail(1, "empty file");
  return entries;
}

}  // namespace tsel
