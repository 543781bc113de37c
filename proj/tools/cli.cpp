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

#include "cli.hpp"

#include <chrono>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "tokparity/corpus.hpp"
#include "tokparity/engine.hpp"
#include "tokparity/error.hpp"
#include "tokparity/geometry.hpp"
#include "tokparity/metrics.hpp"
#include "tokparity/report.hpp"
#include "tokparity/trainer.hpp"

namespace tokparity::cli {

namespace {

struct AuditArgs {
  std::string corpus;
  std::string pivot = "en";
  std::vector<std::string> engines;
  std::string normalization = "nfc";
  std::size_t overhead = 0;
  std::string format = "tsv";
  std::string out;
  bool allow_partial = false;
  bool extended = false;
  std::uint64_t seed = 0;
  std::string timestamp;
  std::string cassette;
  std::string pretokenizer = "unicode-category";
};

struct GeometryArgs {
  std::vector<std::string> embeddings;
  std::size_t k = 1;
  std::string probes;
  std::string format = "json";
  std::string out;
  std::uint64_t seed = 0;
  std::string timestamp;
};

struct TrainArgs {
  std::string corpus;
  std::size_t vocab_size = 0;
  std::vector<std::string> weights;
  std::string out;
  std::string pivot = "en";
  std::string pretokenizer = "unicode-category";
};

std::chrono::sys_seconds resolve_timestamp(const std::string& text) {
  if (!text.empty()) return parse_timestamp(text);
  return std::chrono::time_point_cast<std::chrono::seconds>(
      std::chrono::system_clock::now());
}

void write_output(const std::string& path, const std::string& data,
                  std::ostream& out) {
  if (path.empty() || path == "-") {
    out << data;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error("cannot write " + path);
  file << data;
}

int cmd_audit(const AuditArgs& args, std::ostream& out, std::ostream& err) {
  const ParallelCorpus corpus = load_corpus_file(args.corpus);
  const LanguageCode pivot(args.pivot);
  if (!corpus.has_language(pivot)) {
    throw ValidationError("pivot '" + pivot.str() + "' is not a language of " +
                          args.corpus);
  }

  EngineOptions engine_options;
  engine_options.pretokenizer.mode = pretoken_mode_from_string(args.pretokenizer);
  if (!args.cassette.empty()) {
    engine_options.cassette = std::make_shared<Cassette>(args.cassette);
  }
  TokenizeOptions tok_options;
  tok_options.normalization = normalization_from_string(args.normalization);
  tok_options.allow_partial = args.allow_partial;
  tok_options.keep_encodings = false;
  AggregateOptions agg_options;
  agg_options.overhead = args.overhead;

  std::vector<FertilityStats> rows;
  bool partial = false;
  for (const std::string& spec_text : args.engines) {
    const Engine engine = load_engine(parse_engine_spec(spec_text), engine_options);
    const CorpusTokenization results = tokenize_corpus(corpus, engine, tok_options);
    for (const auto& [key, message] : results.failures) {
      err << fmt::format("warning: {}/{} {} row {}: {}\n", engine.id().provider,
                         engine.id().model, key.lang.str(), key.row_id, message);
    }
    partial = partial || !results.failures.empty();
    auto stats = aggregate(results, corpus, pivot, agg_options);
    rows.insert(rows.end(), stats.begin(), stats.end());
  }
  if (engine_options.cassette) engine_options.cassette->save();

  const AuditReport report =
      make_report(corpus.name(), pivot, std::move(rows), resolve_timestamp(args.timestamp));
  std::string data;
  if (args.format == "tsv") {
    data = emit_tsv(report, args.extended);
  } else if (args.format == "json") {
    data = emit_json(report);
  } else if (args.format == "md") {
    data = emit_markdown(report, args.extended);
  } else {
    throw ValidationError("unknown format '" + args.format + "'");
  }
  write_output(args.out, data, out);
  return partial ? kPartial : kOk;
}

int cmd_geometry(const GeometryArgs& args, std::ostream& out) {
  std::vector<EmbeddingSet> sets;
  for (const std::string& path : args.embeddings) sets.push_back(load_embeddings(path));
  for (std::size_t i = 1; i < sets.size(); ++i) {
    if (sets[i].dim() != sets[0].dim()) {
      throw ValidationError(fmt::format("dimension mismatch: {} has {}, {} has {}",
                                        sets[0].label(), sets[0].dim(),
                                        sets[i].label(), sets[i].dim()));
    }
  }

  AnisotropyOptions options;
  options.seed = args.seed;
  GeometryAudit audit;
  audit.tool_version = tool_version();
  audit.timestamp = resolve_timestamp(args.timestamp);
  for (const EmbeddingSet& set : sets) audit.sets.emplace_back(set.label(), spectrum(set, options));
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      audit.convergence.push_back({sets[i].label(), sets[j].label(), args.k,
                                   subspace_convergence(sets[i], sets[j], args.k)});
    }
  }

  if (!args.probes.empty()) {
    std::ifstream in(args.probes);
    if (!in) throw Error("cannot open probes file " + args.probes);
    nlohmann::json probes;
    try {
      in >> probes;
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("probes file: " + std::string(e.what()));
    }
    for (const auto& probe : probes) {
      const std::string target = probe.at("target").get<std::string>();
      const auto pos = probe.at("pos").get<std::vector<std::string>>();
      const auto neg = probe.at("neg").get<std::vector<std::string>>();
      const std::string only = probe.value("set", std::string());
      bool applied = false;
      for (const EmbeddingSet& set : sets) {
        if (!only.empty() && set.label() != only) continue;
        audit.probes.push_back(
            {set.label(), target, pos, neg, association_probe(set, target, pos, neg)});
        applied = true;
      }
      if (!applied) throw LookupError(only);
    }
  }

  std::string data;
  if (args.format == "json") {
    data = emit_geometry_json(audit);
  } else if (args.format == "md") {
    data = emit_geometry_markdown(audit);
  } else {
    throw ValidationError("unknown format '" + args.format + "'");
  }
  write_output(args.out, data, out);
  return kOk;
}

std::map<LanguageCode, double> parse_weights(const std::vector<std::string>& items,
                                             const ParallelCorpus& corpus) {
  std::map<LanguageCode, double> weights;
  for (const LanguageCode& lang : corpus.languages()) weights[lang] = 1.0;
  for (const std::string& item : items) {
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size()) {
      throw ValidationError("weight '" + item + "' is not lang=float");
    }
    double value = 0.0;
    std::size_t used = 0;
    try {
      value = std::stod(item.substr(eq + 1), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() - eq - 1) {
      throw ValidationError("weight '" + item + "' is not lang=float");
    }
    weights[LanguageCode(item.substr(0, eq))] = value;
  }
  return weights;
}

int cmd_train(const TrainArgs& args, std::ostream& out) {
  const ParallelCorpus corpus = load_corpus_file(args.corpus);
  const LanguageCode pivot(args.pivot);
  if (!corpus.has_language(pivot)) {
    throw ValidationError("pivot '" + pivot.str() + "' is not a corpus language");
  }
  const auto weights = parse_weights(args.weights, corpus);
  TrainOptions options;
  options.pretokenizer.mode = pretoken_mode_from_string(args.pretokenizer);
  const BpeModel model = train_bpe(corpus, args.vocab_size, weights, options);
  if (args.out.empty()) throw ValidationError("--out is required");
  write_output(args.out, serialize_rank_vocabulary(model), out);

  const TokenizerId base_id("local", "bytes", TokenizerKind::kBpeByte);
  const TokenizerId trained_id("local", "trained", TokenizerKind::kBpeByte);
  const Engine before(base_id, std::make_shared<const BpeModel>(
                                   BpeModel::byte_identity(options.pretokenizer)));
  const Engine after(trained_id, std::make_shared<const BpeModel>(model));
  const auto before_stats = aggregate(tokenize_corpus(corpus, before), corpus, pivot);
  const auto after_stats = aggregate(tokenize_corpus(corpus, after), corpus, pivot);

  const auto repeats = repeat_factors(corpus, weights);
  out << fmt::format("# trained {} entries ({} merges); wrote {}\n", model.vocab_size(),
                     model.vocab_size() - 256, args.out);
  out << "lang\trepeats\tbytes_mean\tbytes_ratio_vs_" << pivot.str()
      << "\ttrained_mean\ttrained_ratio_vs_" << pivot.str() << "\ttrained_tokens_per_word\n";
  for (std::size_t i = 0; i < after_stats.size(); ++i) {
    const FertilityStats& b = before_stats[i];
    const FertilityStats& a = after_stats[i];
    out << fmt::format("{}\t{}\t{}\t{}\t{}\t{}\t{}\n", a.lang.str(), repeats.at(a.lang),
                       format_mean(b.mean_input_tokens), format_ratio(b.ratio_vs_pivot),
                       format_mean(a.mean_input_tokens), format_ratio(a.ratio_vs_pivot),
                       format_ratio(a.tokens_per_word));
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tokenization-parity and embedding-geometry audits", "tokparity"};
  app.require_subcommand(1);

  AuditArgs audit;
  CLI::App* audit_cmd = app.add_subcommand("audit", "Tokenize a parallel corpus and report per-language token inflation");
  audit_cmd->add_option("--corpus", audit.corpus, "UTF-8 TSV corpus")->required();
  audit_cmd->add_option("--pivot", audit.pivot, "Reference language for ratios");
  audit_cmd->add_option("--engine", audit.engines,
                        "bpe:<rank file>[@provider/model], unigram:<json>[@provider/model], "
                        "remote:<provider>/<model>")
      ->required();
  audit_cmd->add_option("--normalization", audit.normalization)->check(CLI::IsMember({"nfc", "none"}));
  audit_cmd->add_option("--overhead", audit.overhead, "Tokens added to every row");
  audit_cmd->add_option("--format", audit.format)->check(CLI::IsMember({"tsv", "json", "md"}));
  audit_cmd->add_option("--out", audit.out, "Output path (default: stdout)");
  audit_cmd->add_flag("--allow-partial", audit.allow_partial);
  audit_cmd->add_flag("--extended", audit.extended);
  audit_cmd->add_option("--seed", audit.seed);
  audit_cmd->add_option("--timestamp", audit.timestamp, "Fixed report time, YYYY-MM-DDTHH:MM:SSZ");
  audit_cmd->add_option("--cassette", audit.cassette, "Replay/record file for remote counts");
  audit_cmd->add_option("--pretokenizer", audit.pretokenizer)
      ->check(CLI::IsMember({"none", "whitespace", "unicode-category"}));

  GeometryArgs geometry;
  CLI::App* geometry_cmd = app.add_subcommand("geometry", "Audit embedding sets for anisotropy and collapse");
  geometry_cmd->add_option("--embeddings", geometry.embeddings, "Embedding file (repeatable)")->required();
  geometry_cmd->add_option("-k,--k", geometry.k, "Principal subspace size for convergence");
  geometry_cmd->add_option("--probes", geometry.probes, "JSON list of {target, pos, neg[, set]}");
  geometry_cmd->add_option("--format", geometry.format)->check(CLI::IsMember({"json", "md"}));
  geometry_cmd->add_option("--out", geometry.out);
  geometry_cmd->add_option("--seed", geometry.seed);
  geometry_cmd->add_option("--timestamp", geometry.timestamp);

  TrainArgs train;
  CLI::App* train_cmd = app.add_subcommand("train", "Train a byte-level BPE with per-language oversampling");
  train_cmd->add_option("--corpus", train.corpus)->required();
  train_cmd->add_option("--vocab-size", train.vocab_size)->required();
  train_cmd->add_option("--weight", train.weights, "lang=float (repeatable; default 1)");
  train_cmd->add_option("--out", train.out, "Rank vocabulary output path")->required();
  train_cmd->add_option("--pivot", train.pivot);
  train_cmd->add_option("--pretokenizer", train.pretokenizer)
      ->check(CLI::IsMember({"none", "whitespace", "unicode-category"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }

  try {
    if (audit_cmd->parsed()) return cmd_audit(audit, out, err);
    if (geometry_cmd->parsed()) return cmd_geometry(geometry, out);
    if (train_cmd->parsed()) return cmd_train(train, out);
  } catch (const RemoteError& e) {
    err << "error: RemoteError::" << to_string(e.kind()) << ": " << e.what() << "\n";
    return kError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}

}  // namespace tokparity::cli
