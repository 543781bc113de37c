// Copyright 2026 The tokparity Authors
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

#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tokparity/geometry.hpp"
#include "tokparity/metrics.hpp"

namespace tokparity {

inline constexpr int kReportSchema = 1;

std::string tool_version();

struct AuditReport {
  std::string corpus_name;
  LanguageCode pivot{"en"};
  std::vector<FertilityStats> rows;
  std::optional<std::vector<std::pair<std::string, GeometryReport>>> geometry;
  std::string tool_version;
  std::chrono::sys_seconds timestamp{};

  bool operator==(const AuditReport&) const = default;
};

// Sorts rows by (provider, model, lang) and rejects duplicate
// (tokenizer, lang) pairs. Provider/model compare case-insensitively first,
// so "anthropic" < "HF" < "openai".
AuditReport make_report(std::string corpus_name, LanguageCode pivot,
                        std::vector<FertilityStats> rows,
                        std::chrono::sys_seconds timestamp);

bool report_row_less(const FertilityStats& a, const FertilityStats& b);

std::string format_timestamp(std::chrono::sys_seconds t);
std::chrono::sys_seconds parse_timestamp(std::string_view text);

// Columns: provider model lang mean_input_tokens ratio_vs_en n_rows; with
// `extended`, also std_input_tokens tokens_per_word byte_fallback_rate
// incomplete. The ratio column keeps its name whatever the pivot.
std::string emit_tsv(const AuditReport& report, bool extended = false);
std::string emit_markdown(const AuditReport& report, bool extended = false);
std::string emit_json(const AuditReport& report);
AuditReport parse_json(std::string_view text);

struct ConvergenceEntry {
  std::string a;
  std::string b;
  std::size_t k = 0;
  SubspaceConvergence result;
};

struct ProbeEntry {
  std::string set;
  std::string target;
  std::vector<std::string> pos;
  std::vector<std::string> neg;
  double association = 0.0;
};

// Output of the geometry command: one report per set, pairwise convergence
// for every pair of sets, and association probes.
struct GeometryAudit {
  std::vector<std::pair<std::string, GeometryReport>> sets;
  std::vector<ConvergenceEntry> convergence;
  std::vector<ProbeEntry> probes;
  std::string tool_version;
  std::chrono::sys_seconds timestamp{};
};

std::string emit_geometry_json(const GeometryAudit& audit);
std::string emit_geometry_markdown(const GeometryAudit& audit);

// Bar of U+2588 blocks, length round(20 * ratio / max_ratio).
std::string ratio_bar(double ratio, double max_ratio);

}  // namespace tokparity
