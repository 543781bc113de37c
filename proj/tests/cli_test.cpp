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

#include <cstdlib>
#include <filesystem>
#include <map>
#include <set>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "test_util.hpp"
#include "tokparity/corpus.hpp"
#include "tokparity/remote.hpp"

namespace tokparity {
namespace {

using testing::read_file;
using testing::source_path;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  Result r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string fixture() { return source_path("fixtures/appendix2.tsv").string(); }
std::string mistral() {
  return "unigram:" + source_path("models/mistral-7b-v0.1.unigram.json").string() + "@HF/mistral-7b";
}
std::string o200k(const std::string& model = "gpt-4.1") {
  return "bpe:" + source_path("models/o200k_base.tiktoken").string() + "@openai/" + model;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    ::unsetenv("TOKPARITY_ANTHROPIC_KEY");
    dir_ = std::filesystem::temp_directory_path() /
           ("tokparity_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::remove_all(dir_);
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  void write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name) << text;
  }

 private:
  std::filesystem::path dir_;
};

// TSV cell (row, column) of the data table.
std::string cell(const std::string& tsv, const std::string& lang, std::size_t column) {
  std::istringstream in(tsv);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string c;
    while (std::getline(ls, c, '\t')) cells.push_back(c);
    if (cells.size() > column && cells[2] == lang) return cells[column];
    if (cells.size() > column && cells[0] == lang) return cells[column];
  }
  return "";
}

TEST_F(CliTest, AuditMistralEnglish) {
  const Result r = run({"audit", "--corpus", fixture(), "--engine", mistral(), "--pivot", "en",
                        "--format", "tsv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("HF\tmistral-7b\ten\t8.4\t1.0\t10\n"), std::string::npos) << r.out;
}

TEST_F(CliTest, AuditGoldenJsonIsStable) {
  const std::vector<std::string> args = {"audit", "--corpus", fixture(), "--engine", mistral(),
                                         "--engine", o200k(), "--format", "json",
                                         "--timestamp", "2026-01-01T00:00:00Z"};
  const Result a = run(args);
  const Result b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, read_file(source_path("tests/data/appendix2_report.json")));
}

TEST_F(CliTest, AuditWritesOutFileAndMarkdown) {
  const Result r = run({"audit", "--corpus", fixture(), "--engine", o200k(), "--format", "md",
                        "--out", path("r.md"), "--extended"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const std::string md = read_file(path("r.md"));
  EXPECT_EQ(std::count(md.begin(), md.end(), '\n'), 7);
}

TEST_F(CliTest, ThreeOpenAiModelsAgree) {
  const Result r = run({"audit", "--corpus", fixture(), "--engine", o200k("gpt-4.1"), "--engine",
                        o200k("gpt-4.1-mini"), "--engine", o200k("gpt-4o-mini")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::map<std::string, std::set<std::string>> per_lang;
  std::getline(in, line);
  while (std::getline(in, line)) {
    const auto second_tab = line.find('\t', line.find('\t') + 1);
    const std::string rest = line.substr(second_tab + 1);
    per_lang[rest.substr(0, rest.find('\t'))].insert(rest);
  }
  ASSERT_EQ(per_lang.size(), 5u);
  for (const auto& [lang, variants] : per_lang) EXPECT_EQ(variants.size(), 1u) << lang;
}

TEST_F(CliTest, MissingCorpusNamesPath) {
  const Result r = run({"audit", "--corpus", "/no/such/corpus.tsv", "--engine", mistral()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("/no/such/corpus.tsv"), std::string::npos) << r.err;
}

TEST_F(CliTest, RemoteWithoutCredentialIsAuth) {
  const Result r = run({"audit", "--corpus", fixture(), "--engine", "remote:anthropic/claude-sonnet-4-5-20250929"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("RemoteError::Auth"), std::string::npos) << r.err;
}

TEST_F(CliTest, NoCredentialFlag) {
  const Result r = run({"audit", "--corpus", fixture(), "--engine", "remote:anthropic/x", "--api-key", "k"});
  EXPECT_EQ(r.code, 1);
}

TEST_F(CliTest, RemoteFromCassetteAndPartial) {
  const ParallelCorpus corpus = load_corpus_file(fixture());
  Cassette full(path("full.json"));
  Cassette partial(path("partial.json"));
  for (std::size_t i = 0; i < corpus.rows().size(); ++i) {
    for (const auto& lang : corpus.languages()) {
      const std::string key = Cassette::key("anthropic", "claude", corpus.text(i, lang));
      full.record(key, 15);
      if (!(lang.str() == "fr" && i == 3)) partial.record(key, 15);
    }
  }
  full.save();
  partial.save();

  const Result ok = run({"audit", "--corpus", fixture(), "--engine", "remote:anthropic/claude",
                         "--cassette", path("full.json"), "--extended"});
  ASSERT_EQ(ok.code, 0) << ok.err;
  EXPECT_NE(ok.out.find("anthropic\tclaude\tfr\t15.0\t1.0\t10\t0.0\t"), std::string::npos) << ok.out;
  EXPECT_NE(ok.out.find("\tNA\tfalse"), std::string::npos);

  const Result strict = run({"audit", "--corpus", fixture(), "--engine", "remote:anthropic/claude",
                             "--cassette", path("partial.json")});
  EXPECT_EQ(strict.code, 1);
  const Result loose = run({"audit", "--corpus", fixture(), "--engine", "remote:anthropic/claude",
                            "--cassette", path("partial.json"), "--allow-partial", "--extended"});
  EXPECT_EQ(loose.code, 2) << loose.err;
  EXPECT_NE(loose.out.find("anthropic\tclaude\tfr\t15.0\t1.0\t9\t"), std::string::npos) << loose.out;
  EXPECT_NE(loose.out.find("\tNA\ttrue"), std::string::npos);
  EXPECT_NE(loose.err.find("fr row 4"), std::string::npos) << loose.err;
}

TEST_F(CliTest, OverheadShiftsMeans) {
  const Result r = run({"audit", "--corpus", fixture(), "--engine", mistral(), "--overhead", "3"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(cell(r.out, "en", 3), "11.4");
}

TEST_F(CliTest, GeometryRankOneAndIdenticalSets) {
  write("a.emb", "4 3\nw0 1 2 3\nw1 2 4 6\nw2 -1 -2 -3\nw3 0.5 1 1.5\n");
  write("b.emb", "4 3\nw0 1 2 3\nw1 2 4 6\nw2 -1 -2 -3\nw3 0.5 1 1.5\n");
  write("probes.json", R"([{"target":"w0","pos":["w1","w2"],"neg":["w1","w2"]}])");
  const Result r = run({"geometry", "--embeddings", path("a.emb"), "--embeddings", path("b.emb"),
                        "-k", "1", "--probes", path("probes.json"), "--timestamp",
                        "2026-01-01T00:00:00Z"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_NEAR(doc["sets"][0]["report"]["effective_rank"].get<double>(), 1.0, 1e-9);
  EXPECT_NEAR(doc["convergence"][0]["centroid_cosine"].get<double>(), 1.0, 1e-9);
  EXPECT_NEAR(doc["convergence"][0]["mean_principal_angle_cos"].get<double>(), 1.0, 1e-9);
  ASSERT_EQ(doc["probes"].size(), 2u);
  EXPECT_EQ(doc["probes"][0]["association"].get<double>(), 0.0);
}

TEST_F(CliTest, GeometryErrors) {
  write("a.emb", "2 2\nx 1 0\ny 0 1\n");
  write("c.emb", "2 3\nx 1 0 0\ny 0 1 0\n");
  write("p.json", R"([{"target":"nope","pos":["x"],"neg":["y"]}])");
  EXPECT_EQ(run({"geometry", "--embeddings", path("a.emb"), "--embeddings", path("c.emb")}).code, 1);
  const Result lookup = run({"geometry", "--embeddings", path("a.emb"), "--probes", path("p.json")});
  EXPECT_EQ(lookup.code, 1);
  EXPECT_NE(lookup.err.find("nope"), std::string::npos);
}

TEST_F(CliTest, TrainUniformAndOversampled) {
  const Result flat = run({"train", "--corpus", fixture(), "--vocab-size", "600", "--out", path("flat.tiktoken")});
  ASSERT_EQ(flat.code, 0) << flat.err;
  const Result over = run({"train", "--corpus", fixture(), "--vocab-size", "600", "--weight", "en=1",
                           "--weight", "ar_msa=8", "--weight", "darija_ar=8", "--out", path("over.tiktoken")});
  ASSERT_EQ(over.code, 0) << over.err;
  const double flat_ratio = std::stod(cell(flat.out, "ar_msa", 5));
  const double over_ratio = std::stod(cell(over.out, "ar_msa", 5));
  EXPECT_LT(over_ratio, flat_ratio) << flat.out << over.out;
  EXPECT_EQ(cell(over.out, "ar_msa", 1), "8");

  const Result audit = run({"audit", "--corpus", fixture(), "--engine", "bpe:" + path("flat.tiktoken")});
  ASSERT_EQ(audit.code, 0) << audit.err;
  EXPECT_NE(audit.out.find("local\tflat\ten\t"), std::string::npos);
}

TEST_F(CliTest, TrainErrors) {
  EXPECT_EQ(run({"train", "--corpus", fixture(), "--vocab-size", "100", "--out", path("m")}).code, 1);
  EXPECT_EQ(run({"train", "--corpus", fixture(), "--vocab-size", "300", "--weight", "ar_msa:8",
                 "--out", path("m")}).code, 1);
  EXPECT_EQ(run({"train", "--corpus", fixture(), "--vocab-size", "300", "--weight", "ar_msa=x",
                 "--out", path("m")}).code, 1);
  EXPECT_EQ(run({"train", "--corpus", fixture(), "--vocab-size", "300", "--weight", "de=2",
                 "--out", path("m")}).code, 1);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"audit", "--corpus", fixture()}).code, 1);
  EXPECT_EQ(run({"audit", "--corpus", fixture(), "--engine", mistral(), "--format", "xml"}).code, 1);
  EXPECT_EQ(run({"audit", "--corpus", fixture(), "--engine", mistral(), "--pivot", "de"}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(CliTest, BinaryExitCodes) {
  const std::string bin = TOKPARITY_CLI_PATH;
  EXPECT_EQ(std::system((bin + " audit --corpus /no/such.tsv --engine bpe:x 2>/dev/null").c_str()),
            1 << 8);
  EXPECT_EQ(std::system((bin + " audit --corpus " + fixture() + " --engine " + mistral() +
                         " --out " + path("x.tsv")).c_str()),
            0);
}

}  // namespace
}  // namespace tokparity
