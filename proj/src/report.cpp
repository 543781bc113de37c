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

#include "tokparity/report.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <ctime>
#include <set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "tokparity/error.hpp"

namespace tokparity {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fold(const std::string& s) {
  std::string out = s;
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

int compare_text(const std::string& a, const std::string& b) {
  const std::string fa = fold(a);
  const std::string fb = fold(b);
  if (fa != fb) return fa < fb ? -1 : 1;
  if (a != b) return a < b ? -1 : 1;
  return 0;
}

std::string fallback_cell(const FertilityStats& s) {
  return s.byte_fallback_rate ? format_ratio(*s.byte_fallback_rate) : "NA";
}

ordered_json geometry_to_json(const GeometryReport& g) {
  ordered_json j;
  j["anisotropy"] = g.anisotropy;
  j["anisotropy_pairs"] = g.anisotropy_pairs;
  j["anisotropy_sampled"] = g.anisotropy_sampled;
  j["seed"] = g.seed;
  j["singular_values"] = g.singular_values;
  j["uncentered_singular_values"] = g.uncentered_singular_values;
  j["effective_rank"] = g.effective_rank;
  j["participation_ratio"] = g.participation_ratio;
  return j;
}

GeometryReport geometry_from_json(const nlohmann::json& j) {
  GeometryReport g;
  g.anisotropy = j.at("anisotropy").get<double>();
  g.anisotropy_pairs = j.at("anisotropy_pairs").get<std::size_t>();
  g.anisotropy_sampled = j.at("anisotropy_sampled").get<bool>();
  g.seed = j.at("seed").get<std::uint64_t>();
  g.singular_values = j.at("singular_values").get<std::vector<double>>();
  g.uncentered_singular_values =
      j.at("uncentered_singular_values").get<std::vector<double>>();
  g.effective_rank = j.at("effective_rank").get<double>();
  g.participation_ratio = j.at("participation_ratio").get<double>();
  return g;
}

}  // namespace

std::string tool_version() {
#ifdef TOKPARITY_VERSION
  return TOKPARITY_VERSION;
#else
  return "0.0.0";
#endif
}

bool report_row_less(const FertilityStats& a, const FertilityStats& b) {
  if (int c = compare_text(a.tokenizer.provider, b.tokenizer.provider)) return c < 0;
  if (int c = compare_text(a.tokenizer.model, b.tokenizer.model)) return c < 0;
  if (a.lang != b.lang) return a.lang < b.lang;
  return a.tokenizer.kind < b.tokenizer.kind;
}

AuditReport make_report(std::string corpus_name, LanguageCode pivot,
                        std::vector<FertilityStats> rows,
                        std::chrono::sys_seconds timestamp) {
  std::sort(rows.begin(), rows.end(), report_row_less);
  std::set<std::pair<TokenizerId, LanguageCode>> seen;
  for (const FertilityStats& s : rows) {
    if (!seen.emplace(s.tokenizer, s.lang).second) {
      throw ValidationError("duplicate report row for " + s.tokenizer.provider +
                            "/" + s.tokenizer.model + " " + s.lang.str());
    }
  }
  AuditReport report;
  report.corpus_name = std::move(corpus_name);
  report.pivot = std::move(pivot);
  report.rows = std::move(rows);
  report.tool_version = tool_version();
  report.timestamp = timestamp;
  return report;
}

std::string format_timestamp(std::chrono::sys_seconds t) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::chrono::sys_seconds parse_timestamp(std::string_view text) {
  std::tm tm{};
  const std::string s(text);
  const char* end = strptime(s.c_str(), "%Y-%m-%dT%H:%M:%SZ", &tm);
  if (end == nullptr || *end != '\0') {
    throw ValidationError("timestamp '" + s + "' is not YYYY-MM-DDTHH:MM:SSZ");
  }
  return std::chrono::sys_seconds(std::chrono::seconds(timegm(&tm)));
}

std::string emit_tsv(const AuditReport& report, bool extended) {
  std::string out = "provider\tmodel\tlang\tmean_input_tokens\tratio_vs_en\tn_rows";
  if (extended) out += "\tstd_input_tokens\ttokens_per_word\tbyte_fallback_rate\tincomplete";
  out += '\n';
  for (const FertilityStats& s : report.rows) {
    out += fmt::format("{}\t{}\t{}\t{}\t{}\t{}", s.tokenizer.provider,
                       s.tokenizer.model, s.lang.str(),
                       format_mean(s.mean_input_tokens),
                       format_ratio(s.ratio_vs_pivot), s.n_rows);
    if (extended) {
      out += fmt::format("\t{}\t{}\t{}\t{}", format_mean(s.std_input_tokens),
                         format_ratio(s.tokens_per_word), fallback_cell(s),
                         s.incomplete ? "true" : "false");
    }
    out += '\n';
  }
  return out;
}

std::string ratio_bar(double ratio, double max_ratio) {
  if (max_ratio <= 0.0 || ratio <= 0.0) return "";
  const auto blocks = static_cast<std::size_t>(std::lround(20.0 * ratio / max_ratio));
  std::string bar;
  for (std::size_t i = 0; i < blocks; ++i) bar += "█";
  return bar;
}

std::string emit_markdown(const AuditReport& report, bool extended) {
  double max_ratio = 0.0;
  for (const FertilityStats& s : report.rows) max_ratio = std::max(max_ratio, s.ratio_vs_pivot);

  std::string out = "| provider | model | lang | mean_input_tokens | ratio_vs_en | n_rows |";
  std::string sep = "|---|---|---|---:|---:|---:|";
  if (extended) {
    out += " std_input_tokens | tokens_per_word | byte_fallback_rate |";
    sep += "---:|---:|---:|";
  }
  out += " ratio |\n";
  sep += "---|\n";
  out += sep;
  for (const FertilityStats& s : report.rows) {
    out += fmt::format("| {} | {} | {} | {} | {} | {}{} |", s.tokenizer.provider,
                       s.tokenizer.model, s.lang.str(),
                       format_mean(s.mean_input_tokens),
                       format_ratio(s.ratio_vs_pivot), s.n_rows,
                       s.incomplete ? " (incomplete)" : "");
    if (extended) {
      out += fmt::format(" {} | {} | {} |", format_mean(s.std_input_tokens),
                         format_ratio(s.tokens_per_word), fallback_cell(s));
    }
    out += fmt::format(" {} |\n", ratio_bar(s.ratio_vs_pivot, max_ratio));
  }
  return out;
}

std::string emit_json(const AuditReport& report) {
  ordered_json doc;
  doc["schema"] = kReportSchema;
  doc["tool_version"] = report.tool_version;
  doc["timestamp"] = format_timestamp(report.timestamp);
  doc["corpus_name"] = report.corpus_name;
  doc["pivot"] = report.pivot.str();
  ordered_json rows = ordered_json::array();
  for (const FertilityStats& s : report.rows) {
    ordered_json r;
    r["provider"] = s.tokenizer.provider;
    r["model"] = s.tokenizer.model;
    r["kind"] = to_string(s.tokenizer.kind);
    r["lang"] = s.lang.str();
    r["n_rows"] = s.n_rows;
    r["mean_input_tokens"] = s.mean_input_tokens;
    r["std_input_tokens"] = s.std_input_tokens;
    r["tokens_per_word"] = s.tokens_per_word;
    r["ratio_vs_en"] = s.ratio_vs_pivot;
    r["ratio_vs_pivot"] = s.ratio_vs_pivot;
    r["byte_fallback_rate"] = s.byte_fallback_rate
                                  ? ordered_json(*s.byte_fallback_rate)
                                  : ordered_json(nullptr);
    r["incomplete"] = s.incomplete;
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  if (report.geometry) {
    ordered_json geo = ordered_json::array();
    for (const auto& [label, g] : *report.geometry) {
      ordered_json entry;
      entry["label"] = label;
      entry["report"] = geometry_to_json(g);
      geo.push_back(std::move(entry));
    }
    doc["geometry"] = std::move(geo);
  }
  return doc.dump(2) + "\n";
}

AuditReport parse_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
    if (doc.at("schema").get<int>() != kReportSchema) {
      throw ValidationError("unsupported report schema");
    }
    AuditReport report;
    report.tool_version = doc.at("tool_version").get<std::string>();
    report.timestamp = parse_timestamp(doc.at("timestamp").get<std::string>());
    report.corpus_name = doc.at("corpus_name").get<std::string>();
    report.pivot = LanguageCode(doc.at("pivot").get<std::string>());
    for (const auto& r : doc.at("rows")) {
      FertilityStats s;
      s.tokenizer = TokenizerId(r.at("provider").get<std::string>(),
                                r.at("model").get<std::string>(),
                                tokenizer_kind_from_string(r.at("kind").get<std::string>()));
      s.lang = LanguageCode(r.at("lang").get<std::string>());
      s.n_rows = r.at("n_rows").get<std::size_t>();
      s.mean_input_tokens = r.at("mean_input_tokens").get<double>();
      s.std_input_tokens = r.at("std_input_tokens").get<double>();
      s.tokens_per_word = r.at("tokens_per_word").get<double>();
      s.ratio_vs_pivot = r.at("ratio_vs_pivot").get<double>();
      if (!r.at("byte_fallback_rate").is_null()) {
        s.byte_fallback_rate = r.at("byte_fallback_rate").get<double>();
      }
      s.incomplete = r.at("incomplete").get<bool>();
      report.rows.push_back(std::move(s));
    }
    if (doc.contains("geometry")) {
      report.geometry.emplace();
      for (const auto& g : doc.at("geometry")) {
        report.geometry->emplace_back(g.at("label").get<std::string>(),
                                      geometry_from_json(g.at("report")));
      }
    }
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("report JSON: ") + e.what());
  }
}

}  // namespace tokparity

namespace tokparity {

std::string emit_geometry_json(const GeometryAudit& audit) {
  ordered_json doc;
  doc["schema"] = kReportSchema;
  doc["tool_version"] = audit.tool_version;
  doc["timestamp"] = format_timestamp(audit.timestamp);
  ordered_json sets = ordered_json::array();
  for (const auto& [label, g] : audit.sets) {
    ordered_json entry;
    entry["label"] = label;
    entry["report"] = geometry_to_json(g);
    sets.push_back(std::move(entry));
  }
  doc["sets"] = std::move(sets);
  ordered_json conv = ordered_json::array();
  for (const ConvergenceEntry& c : audit.convergence) {
    ordered_json entry;
    entry["a"] = c.a;
    entry["b"] = c.b;
    entry["k"] = c.k;
    entry["centroid_cosine"] = c.result.centroid_cosine;
    entry["mean_principal_angle_cos"] = c.result.mean_principal_angle_cos;
    entry["principal_angle_cosines"] = c.result.principal_angle_cosines;
    conv.push_back(std::move(entry));
  }
  doc["convergence"] = std::move(conv);
  ordered_json probes = ordered_json::array();
  for (const ProbeEntry& p : audit.probes) {
    ordered_json entry;
    entry["set"] = p.set;
    entry["target"] = p.target;
    entry["pos"] = p.pos;
    entry["neg"] = p.neg;
    entry["association"] = p.association;
    probes.push_back(std::move(entry));
  }
  doc["probes"] = std::move(probes);
  return doc.dump(2) + "\n";
}

std::string emit_geometry_markdown(const GeometryAudit& audit) {
  std::string out =
      "| set | anisotropy | effective_rank | participation_ratio | top singular values |\n"
      "|---|---:|---:|---:|---|\n";
  for (const auto& [label, g] : audit.sets) {
    std::string top;
    for (std::size_t i = 0; i < g.singular_values.size() && i < 5; ++i) {
      if (i) top += ", ";
      top += fmt::format("{:.4g}", g.singular_values[i]);
    }
    out += fmt::format("| {} | {:.4f} | {:.4f} | {:.4f} | {} |\n", label,
                       g.anisotropy, g.effective_rank, g.participation_ratio, top);
  }
  if (!audit.convergence.empty()) {
    out += "\n| a | b | k | centroid_cosine | mean_principal_angle_cos |\n"
           "|---|---|---:|---:|---:|\n";
    for (const ConvergenceEntry& c : audit.convergence) {
      out += fmt::format("| {} | {} | {} | {:.4f} | {:.4f} |\n", c.a, c.b, c.k,
                         c.result.centroid_cosine, c.result.mean_principal_angle_cos);
    }
  }
  if (!audit.probes.empty()) {
    out += "\n| set | target | association |\n|---|---|---:|\n";
    for (const ProbeEntry& p : audit.probes) {
      out += fmt::format("| {} | {} | {:.4f} |\n", p.set, p.target, p.association);
    }
  }
  return out;
}

}  // namespace tokparity
