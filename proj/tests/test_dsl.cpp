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

#include <random>
#include <sstream>

#include "fuzz.hpp"
#include "oracles.hpp"
#include "paradox/dsl/parser.hpp"
#include "paradox/dsl/validate.hpp"

namespace {

using namespace paradox::dsl;

std::string pr_source() { return oracle::read_source("experiments/pr_box.exp"); }
std::string fr_source() { return oracle::read_source("experiments/fr_quantum.exp"); }

std::string replace_once(std::string s, const std::string& from, const std::string& to) {
  auto pos = s.find(from);
  if (pos == std::string::npos) throw std::runtime_error("fixture text not found: " + from);
  return s.replace(pos, from.size(), to);
}

int line_of(const std::string& source, const std::string& text) {
  auto pos = source.find(text);
  if (pos == std::string::npos) throw std::runtime_error("fixture text not found: " + text);
  return 1 + static_cast<int>(std::count(source.begin(), source.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
}

bool has_code(const std::vector<Diagnostic>& d, const std::string& code, int line) {
  for (const auto& x : d)
    if (x.code == code && x.line == line) return true;
  return false;
}

TEST(Parser, PrBoxStructure) {
  auto exp = parse(pr_source());
  EXPECT_EQ(exp.theory, Theory::kBoxWorld);
  ASSERT_EQ(exp.systems.size(), 2u);
  ASSERT_EQ(exp.agents.size(), 4u);
  EXPECT_EQ(*exp.agents[0].memory, "MA");
  ASSERT_EQ(exp.events.size(), 4u);
  const auto& u = exp.events[2];
  EXPECT_TRUE(u.lab);
  EXPECT_EQ(u.target, "A");
  EXPECT_EQ(*u.setting_name, "X~");
  EXPECT_EQ(u.setting.text(), "X ^ 1");
  EXPECT_EQ(*resolve_setting(exp, u.setting), 1);
  EXPECT_EQ(exp.trust.size(), 4u);
  EXPECT_TRUE(exp.selections.empty());
  EXPECT_EQ(exp.query, Query::kFindContradiction);
  EXPECT_TRUE(validate(exp).empty());
}

TEST(Parser, FrQuantumStructure) {
  auto exp = parse(fr_source());
  EXPECT_EQ(exp.theory, Theory::kQuantum);
  EXPECT_EQ(exp.inits[0].builtin, "hardy");
  EXPECT_EQ(*exp.events[3].basis, "okfail");
  ASSERT_EQ(exp.selections.size(), 1u);
  ASSERT_EQ(exp.selections[0].atoms.size(), 2u);
  EXPECT_EQ(exp.selections[0].atoms[0].variable, "u");
  EXPECT_EQ(exp.selections[0].atoms[1].value, "ok");
  EXPECT_FALSE(exp.selections[0].by.has_value());
  EXPECT_TRUE(validate(exp).empty());
  EXPECT_EQ(outcome_values(exp.events[2]), (std::vector<std::string>{"ok", "fail"}));
  EXPECT_EQ(outcome_values(exp.events[0]), (std::vector<std::string>{"0", "1"}));
}

TEST(Parser, RoundTripOnBundledFiles) {
  for (const auto& src : {pr_source(), fr_source()}) {
    auto exp = parse(src);
    auto printed = print(exp);
    auto again = parse(printed);
    EXPECT_EQ(again, exp);
    EXPECT_EQ(print(again), printed);
  }
}

TEST(Parser, XorSymbolAndSelectOnFollowingLines) {
  auto src = replace_once(pr_source(), "X ^ 1", "X \xE2\x8A\x95 1");
  src = replace_once(src, "QUERY", "SELECT\n  a = 1 by W\n\nQUERY");
  auto exp = parse(src);
  EXPECT_EQ(exp.events[2].setting.text(), "X ^ 1");
  ASSERT_EQ(exp.selections.size(), 1u);
  EXPECT_EQ(*exp.selections[0].by, "W");
  EXPECT_EQ(exp.selections[0].atoms[0].variable, "a");
}

TEST(Parser, FirstBlockMustBeTheory) {
  try {
    parse("STATE\n  system P gbit\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1);
    EXPECT_EQ(e.kind(), ErrorKind::kSyntax);
  }
}

TEST(Parser, DuplicateBlockReportsHeaderLine) {
  auto src = pr_source();
  auto dup = replace_once(src, "MODEL\n", "STATE\n");
  try {
    parse(dup);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), line_of(src, "MODEL\n"));
  }
}

TEST(Lexer, HugeNumberIsLexicalError) {
  auto src = replace_once(pr_source(), "A time 1", "A time 99999999999");
  try {
    parse(src);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kLexical);
    EXPECT_EQ(e.line(), line_of(src, "A time 99999999999"));
    EXPECT_GT(e.column(), 1);
  }
}

TEST(Lexer, UnknownCharacterIsLexicalError) {
  try {
    parse("THEORY boxworld\nSTATE\n  system P $gbit\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kLexical);
    EXPECT_EQ(e.line(), 3);
    EXPECT_EQ(e.column(), 12);
  }
}

TEST(Lexer, CommentsAndBlankLinesAreIgnored) {
  auto src = replace_once(pr_source(), "  system P gbit", "  system P gbit   # first half\n\n# note\n");
  EXPECT_EQ(parse(src), parse(pr_source()));
}

TEST(Validate, EveryDiagnosticCode) {
  const auto base = pr_source();
  struct Case {
    std::string from, to, code, line_text;
  };
  std::vector<Case> cases{
      {"2 B measures R", "2 A measures R", code::kMemReuse, "2 A measures R"},
      {"A@1 -> B@2", "A@1 -> B@5", code::kTrustRef, "A@1 -> B@5"},
      {"2 B measures R setting Y = 0 outcome b", "0 B measures R setting Y = 0 outcome b", code::kTimeOrder, "0 B measures"},
      {"1 A measures P", "1 A measures Q", code::kUndeclared, "1 A measures Q"},
      {"X = 0", "X = 2", code::kSettingRange, "X = 2"},
      {"U models A update copy", "U models B update copy", code::kModelTarget, "U models B"},
      {"3 U measures", "5 U measures", code::kAgentTime, "5 U measures"},
      {"QUERY", "SELECT z = 1\nQUERY", code::kSelectRef, "SELECT z = 1"},
      {"system R gbit", "system P gbit", code::kDupDecl, "system P gbit\n  init"},
      {"system P gbit", "system P qubit", code::kSystemType, "system P qubit"},
      {"init pr_box P R", "init hardy P R", code::kInitState, "init hardy"},
  };
  for (const auto& c : cases) {
    auto src = replace_once(base, c.from, c.to);
    auto diags = validate(parse(src));
    int line = line_of(src, c.line_text);
    std::string all;
    for (const auto& d : diags) all += d.text() + "\n";
    EXPECT_TRUE(has_code(diags, c.code, line)) << c.code << " at line " << line << ", got:\n" << all;
    EXPECT_TRUE(std::is_sorted(diags.begin(), diags.end(), [](const auto& a, const auto& b) { return a.line < b.line; }));
  }
}

TEST(Validate, DiagnosticText) {
  Diagnostic d{code::kTrustRef, 7, "no agent B@5"};
  EXPECT_EQ(d.text(), "line 7: E_TRUST_REF: no agent B@5");
}

void check_fuzz(const std::string& name, const std::string& source) {
  auto cases = fuzz::single_token_corruptions(source, 100, 20260418);
  ASSERT_EQ(cases.size(), 100u);
  for (const auto& c : cases) {
    auto lines = fuzz::reported_lines(c.text);
    std::string seen;
    for (int l : lines) seen += " " + std::to_string(l);
    EXPECT_TRUE(fuzz::reports_line(c.text, c.line)) << name << ": token " << c.original << " -> " << c.poison << " on line " << c.line << ", reported:" << seen;
  }
}

TEST(Fuzz, PrBoxSingleTokenCorruptionsReportTheirLine) { check_fuzz("pr_box", pr_source()); }

TEST(Fuzz, FrQuantumSingleTokenCorruptionsReportTheirLine) { check_fuzz("fr_quantum", fr_source()); }

}  // namespace
