// Copyright 2026 The paradox-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "oracles.hpp"
#include "paradox/harness/explain.hpp"
#include "paradox/harness/run.hpp"
#include "paradox/harness/selftest.hpp"

namespace {

using namespace paradox::harness;

std::string pr_source() { return oracle::read_source("experiments/pr_box.exp"); }
std::string fr_source() { return oracle::read_source("experiments/fr_quantum.exp"); }

std::set<std::string> fact_texts(const Reasoning& r) {
  std::set<std::string> out;
  for (const auto& f : r.kb.facts()) out.insert(f.text());
  return out;
}

std::string strip_comments(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    out += line + "\n";
  }
  return out;
}

ReasoningOptions without_w_to_a() {
  ReasoningOptions opt;
  opt.drop_trust.push_back({{"W", 4}, {"A", 1}});
  return opt;
}

TEST(PrBox, FourReplayableCertificates) {
  auto rep = run_source(pr_source());
  const std::vector<std::pair<std::string, std::string>> want{
      {"A@1", "K_A[(a=0 => a=1) & (a=1 => a=0)]"},
      {"B@2", "K_B[(b=0 => b=1) & (b=1 => b=0)]"},
      {"U@3", "K_U[(a~=0 => a~=1) & (a~=1 => a~=0)]"},
      {"W@4", "K_W[(b~=0 => b~=1) & (b~=1 => b~=0)]"}};
  const auto& certs = rep.reasoning.certificates;
  ASSERT_EQ(certs.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    EXPECT_EQ(certs[i].agent.key(), want[i].first);
    EXPECT_EQ(certs[i].statement, want[i].second);
    EXPECT_EQ(certs[i].form, "bidirectional");
    auto replay = rep.reasoning.kb.replay(certs[i].derivation);
    EXPECT_TRUE(replay.ok) << replay.error;
  }
  EXPECT_EQ(rep.reasoning.verdict, Verdict::kContradiction);
  EXPECT_EQ(rep.exit_code(), kExitContradiction);
}

TEST(PrBox, WignerDerivationMatchesGoldenTrace) {
  auto rep = run_source(pr_source());
  const auto& w = rep.reasoning.certificates.back();
  auto golden = strip_comments(oracle::read_source("tests/golden/pr_box_w_trace.txt"));
  EXPECT_EQ(rep.reasoning.kb.trace(w.derivation), golden);
}

TEST(PrBox, TrustCollapseAlongTheChain) {
  auto rep = run_source(pr_source());
  auto trace = rep.reasoning.kb.trace(rep.reasoning.certificates.back().derivation);
  for (const char* step : {"| K_W(b~=0 => a~=1) |", "| K_W K_U(a~=1 => b=1) |", "| K_W K_U K_B(b=1 => a=1) |",
                           "| K_W K_U K_B K_A(a=1 => b~=1) |", "| A -> B", "| B -> U", "| U -> W"}) {
    EXPECT_NE(trace.find(step), std::string::npos) << step;
  }
  auto a = trace.find("K_W K_U K_B(a=1 => b~=1) | A -> B");
  auto b = trace.find("K_W K_U(a=1 => b~=1) | B -> U");
  auto c = trace.find("K_W(a=1 => b~=1) | U -> W");
  ASSERT_NE(a, std::string::npos);
  ASSERT_NE(b, std::string::npos);
  ASSERT_NE(c, std::string::npos);
  EXPECT_LT(a, b);
  EXPECT_LT(b, c);
}

TEST(PrBox, SupportRelationsFollowFromTheBox) {
  auto rep = run_source(pr_source());
  std::vector<std::string> relations;
  for (const auto& p : rep.physics.pairs) relations.push_back(p.relation);
  // PR box: outputs agree unless both settings are 1.
  EXPECT_EQ(relations, (std::vector<std::string>{"a = b", "a = b~", "b = a~", "a~ != b~"}));
  ASSERT_TRUE(rep.physics.effective_matches_initial.has_value());
  EXPECT_TRUE(*rep.physics.effective_matches_initial);
}

TEST(PrBox, EveryObservedOutcomeStillYieldsCertificates) {
  const std::vector<std::pair<std::string, std::string>> owners{{"A", "a"}, {"B", "b"}, {"U", "a~"}, {"W", "b~"}};
  std::size_t runs = 0;
  for (const auto& [agent, variable] : owners) {
    for (const char* value : {"0", "1"}) {
      ReasoningOptions opt;
      opt.use_selection = false;
      opt.observations.push_back({agent, variable, value});
      auto rep = run_source(pr_source(), opt);
      EXPECT_FALSE(rep.reasoning.certificates.empty()) << agent << " observed " << variable << "=" << value;
      for (const auto& c : rep.reasoning.certificates) EXPECT_TRUE(rep.reasoning.kb.replay(c.derivation).ok);
      auto facts = fact_texts(rep.reasoning);
      std::string own = "K_" + agent + "(" + variable + "=" + value + ")";
      EXPECT_TRUE(facts.count(own)) << own;
      ++runs;
    }
  }
  EXPECT_EQ(runs, 8u);
}

TEST(PrBox, MeasurementStructureIsAsserted) {
  auto rep = run_source(pr_source());
  std::size_t measurement = 0;
  for (const auto& e : rep.reasoning.kb.log()) measurement += e.rule == "measurement";
  // Per variable: 3 other agents, 1 disjunction and 2 exclusions each.
  EXPECT_EQ(measurement, 4u * 3u * 3u);
  auto facts = fact_texts(rep.reasoning);
  bool found = false;
  for (const auto& f : facts) found |= f.rfind("K_B(K_A(", 0) == 0 || f.rfind("K_B((K_A", 0) == 0;
  EXPECT_TRUE(found);
}

TEST(Ablation, DroppingWToAHaltsTheChainAtStepFour) {
  auto rep = run_source(pr_source(), without_w_to_a());
  EXPECT_TRUE(rep.reasoning.certificates.empty());
  EXPECT_EQ(rep.reasoning.verdict, Verdict::kConsistent);
  EXPECT_EQ(rep.exit_code(), kExitConsistent);
  auto facts = fact_texts(rep.reasoning);
  EXPECT_TRUE(facts.count("K_W(b~=0 => a~=1)"));
  EXPECT_TRUE(facts.count("K_W K_U(a~=1 => b=1)"));
  EXPECT_TRUE(facts.count("K_W K_U K_B(b=1 => a=1)"));
  EXPECT_FALSE(facts.count("K_W K_U K_B K_A(a=1 => b~=1)"));
  EXPECT_EQ(rep.reasoning.kb.theory().size(), 6u);
}

TEST(Ablation, ShallowDepthExhaustsTheBound) {
  ReasoningOptions opt;
  opt.depth = 3;
  auto rep = run_source(pr_source(), opt);
  EXPECT_TRUE(rep.reasoning.certificates.empty());
  EXPECT_TRUE(rep.reasoning.closure.paths_truncated);
  EXPECT_EQ(rep.reasoning.verdict, Verdict::kBoundExhausted);
  EXPECT_EQ(rep.exit_code(), kExitConsistent);
}

TEST(Quantum, SelectionProbabilityAndSupport) {
  auto rep = run_source(fr_source());
  ASSERT_TRUE(rep.physics.selection_probability.has_value());
  EXPECT_EQ(*rep.physics.selection_probability, "1/12");
  std::vector<std::string> relations;
  for (const auto& p : rep.physics.pairs) relations.push_back(p.relation);
  EXPECT_EQ(relations, (std::vector<std::string>{"(a, b) in {(0,0), (1,0), (1,1)}", "(a, w) in {(0,ok), (0,fail), (1,fail)}",
                                                 "(b, u) in {(0,fail), (1,ok), (1,fail)}",
                                                 "(u, w) in {(ok,ok), (ok,fail), (fail,ok), (fail,fail)}"}));
}

TEST(Quantum, SupportAgreesWithFloatingPointOracle) {
  auto rep = run_source(fr_source());
  auto final_state = oracle::fr_final();
  auto projector = [](const std::string& var, const std::string& value) {
    if (var == "a") return oracle::z(2, value == "1");
    if (var == "b") return oracle::z(3, value == "1");
    if (var == "u") return oracle::okfail(0, 2, value == "ok");
    return oracle::okfail(1, 3, value == "ok");
  };
  for (const auto& p : rep.physics.pairs) {
    const auto& x = rep.physics.variables[p.first];
    const auto& y = rep.physics.variables[p.second];
    for (std::size_t v = 0; v < x.values.size(); ++v)
      for (std::size_t w = 0; w < y.values.size(); ++w) {
        double pr = oracle::probability(final_state, {projector(x.name, x.values[v]), projector(y.name, y.values[w])});
        EXPECT_EQ(static_cast<bool>(p.table.possible[v][w]), pr > 1e-12) << x.name << "=" << x.values[v] << ", " << y.name << "=" << y.values[w];
      }
  }
}

TEST(Quantum, ConsistentWithoutSelection) {
  ReasoningOptions opt;
  opt.use_selection = false;
  auto rep = run_source(fr_source(), opt);
  EXPECT_TRUE(rep.reasoning.certificates.empty());
  EXPECT_EQ(rep.exit_code(), kExitConsistent);
}

TEST(Quantum, SelectionGivesWignerADirectCertificate) {
  auto rep = run_source(fr_source());
  ASSERT_FALSE(rep.reasoning.certificates.empty());
  const auto& c = rep.reasoning.certificates.back();
  EXPECT_EQ(c.agent.key(), "W@4");
  EXPECT_EQ(c.form, "direct");
  EXPECT_EQ(c.statement, "K_W[w=ok & w=fail]");
  EXPECT_TRUE(rep.reasoning.kb.replay(c.derivation).ok);
  auto trace = rep.reasoning.kb.trace(c.derivation);
  EXPECT_NE(trace.find("K_W(u=ok)"), std::string::npos);
}

TEST(Selftest, EmbeddedExperimentMatchesBundledFile) {
  const std::string embedded = kPrBoxExperiment;
  const auto file = pr_source();
  ASSERT_GE(file.size(), embedded.size());
  EXPECT_EQ(file.substr(file.size() - embedded.size()), embedded);
}

TEST(Selftest, AllChecksPass) {
  auto results = selftest({true, true, true});
  EXPECT_EQ(results.size(), 11u);
  for (const auto& r : results) EXPECT_TRUE(r.pass) << r.name << ": " << r.detail;
}

TEST(Explain, RejectsBadTimeAndAgent) {
  auto exp = load_experiment(pr_source());
  EXPECT_THROW(explain(exp, 9), ExplainError);
  EXPECT_THROW(explain(exp, 2, std::string("Z")), ExplainError);
  auto text = explain(exp, 3);
  EXPECT_NE(text.find("viewpoint A@1 at t=3"), std::string::npos);
  EXPECT_NE(text.find("viewpoint W@4 at t=3\n  has not measured yet"), std::string::npos);
}

TEST(Report, DigestIsFnv1a) {
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
}

TEST(Report, JsonSchemaFields) {
  auto rep = run_source(pr_source());
  auto j = to_json(rep);
  EXPECT_EQ(j["schema"], "paradox-lab/run-report/1");
  EXPECT_EQ(j["theory"], "boxworld");
  EXPECT_EQ(j["logic"]["status"], "contradiction");
  EXPECT_EQ(j["logic"]["certificates"].size(), 4u);
  EXPECT_EQ(j["exit_code"], 10);
  for (const auto& c : j["logic"]["certificates"]) EXPECT_TRUE(c["replayed"].get<bool>());
}

// Command-line behaviour through the built executable.

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() / ("paradox_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
                                                    ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name), std::ios::binary) << text;
    return path(name);
  }

  int run(const std::string& args) const {
    std::string cmd = std::string("\"") + PARADOX_CLI_PATH + "\" " + args + " > \"" + path("stdout.txt") + "\" 2> \"" +
                      path("stderr.txt") + "\"";
    int status = std::system(cmd.c_str());
#ifdef WEXITSTATUS
    return WEXITSTATUS(status);
#else
    return status;
#endif
  }

  std::string out() const { return read_file(path("stdout.txt")); }
  std::string err() const { return read_file(path("stderr.txt")); }

  std::filesystem::path dir_;
};

TEST_F(Cli, PrBoxExitsWithContradiction) {
  EXPECT_EQ(run("run \"" + oracle::source_path("experiments/pr_box.exp") + "\""), 10);
  EXPECT_NE(out().find("status: contradiction"), std::string::npos);
  EXPECT_NE(out().find("certificate W@4: K_W[(b~=0 => b~=1) & (b~=1 => b~=0)]"), std::string::npos);
}

TEST_F(Cli, QuantumWithoutSelectIsConsistent) {
  EXPECT_EQ(run("run --no-select \"" + oracle::source_path("experiments/fr_quantum.exp") + "\""), 0);
  EXPECT_NE(out().find("status: consistent"), std::string::npos);
  EXPECT_EQ(run("run \"" + oracle::source_path("experiments/fr_quantum.exp") + "\""), 10);
}

TEST_F(Cli, ShallowDepthReportsBoundExhausted) {
  EXPECT_EQ(run("run --depth 3 \"" + oracle::source_path("experiments/pr_box.exp") + "\""), 0);
  EXPECT_NE(out().find("status: bound exhausted"), std::string::npos);
}

TEST_F(Cli, UsageAndInputErrorsExitOne) {
  EXPECT_EQ(run("run"), 1);
  EXPECT_EQ(run("run \"" + path("missing.exp") + "\""), 1);
  EXPECT_EQ(run("run --depth 40 \"" + oracle::source_path("experiments/pr_box.exp") + "\""), 1);
  auto broken = write("broken.exp", "THEORY boxworld\nSTATE\n  system P $gbit\n");
  EXPECT_EQ(run("run \"" + broken + "\""), 1);
  EXPECT_NE(err().find("line 3"), std::string::npos);
  auto invalid = pr_source();
  invalid.replace(invalid.find("A@1 -> B@2"), 10, "A@1 -> B@5");
  EXPECT_EQ(run("run \"" + write("invalid.exp", invalid) + "\""), 1);
  EXPECT_NE(err().find("E_TRUST_REF"), std::string::npos);
}

TEST_F(Cli, PhysicsErrorExitsTwo) {
  auto src = fr_source();
  src.replace(src.find("basis Z outcome a"), 7, "basis X");
  EXPECT_EQ(run("run \"" + write("xcopy.exp", src) + "\""), 2);
  EXPECT_NE(err().find("physics error"), std::string::npos);
}

TEST_F(Cli, JsonReportIsDeterministic) {
  auto exp = oracle::source_path("experiments/pr_box.exp");
  ASSERT_EQ(run("run --json \"" + path("one.json") + "\" --trace \"" + path("trace.txt") + "\" \"" + exp + "\""), 10);
  ASSERT_EQ(run("run --json \"" + path("two.json") + "\" \"" + exp + "\""), 10);
  auto one = read_file(path("one.json"));
  EXPECT_EQ(one, read_file(path("two.json")));
  auto j = nlohmann::json::parse(one);
  EXPECT_EQ(j["schema"], "paradox-lab/run-report/1");
  EXPECT_EQ(j["digest"], "fnv1a64:" + fnv1a_hex(pr_source()));
  EXPECT_EQ(j["trace"].size(), run_source(pr_source()).reasoning.kb.log().size());
  auto trace = read_file(path("trace.txt"));
  EXPECT_EQ(static_cast<std::size_t>(std::count(trace.begin(), trace.end(), '\n')), j["trace"].size());
}

TEST_F(Cli, ClosureDumpQueryListsFacts) {
  auto src = pr_source();
  src.replace(src.find("find-contradiction"), 18, "closure-dump");
  EXPECT_EQ(run("run \"" + write("dump.exp", src) + "\""), 10);
  auto text = out();
  EXPECT_NE(text.find("fact K_W K_U K_B K_A(a=1 => b~=1)\n"), std::string::npos);
  std::size_t facts = 0;
  for (std::size_t pos = 0; (pos = text.find("fact ", pos)) != std::string::npos; pos += 5) facts += pos == 0 || text[pos - 1] == '\n';
  EXPECT_EQ(facts, run_source(pr_source()).reasoning.kb.facts().size());
}

TEST_F(Cli, ExplainAndSelftest) {
  EXPECT_EQ(run("explain --at 4 --agent W \"" + oracle::source_path("experiments/pr_box.exp") + "\""), 0);
  EXPECT_NE(out().find("viewpoint W@4 at t=4"), std::string::npos);
  EXPECT_EQ(run("explain --at 99 \"" + oracle::source_path("experiments/pr_box.exp") + "\""), 1);
  EXPECT_EQ(run("selftest --all"), 0);
  EXPECT_NE(out().find("all checks passed"), std::string::npos);
}

}  // namespace
