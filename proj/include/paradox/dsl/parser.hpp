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

#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "paradox/dsl/experiment.hpp"
#include "paradox/dsl/lexer.hpp"

namespace paradox::dsl {

namespace detail {

/// Cursor over the tokens of one line.
class LineCursor {
 public:
  explicit LineCursor(const SourceLine& line) : line_(line) {}

  bool done() const { return pos_ >= line_.tokens.size(); }
  const Token* peek() const { return done() ? nullptr : &line_.tokens[pos_]; }

  [[noreturn]] void fail(const std::string& what, std::set<std::string> expected) const {
    int col = done() ? end_column() : line_.tokens[pos_].column;
    std::string found = done() ? "end of line" : describe(line_.tokens[pos_]);
    throw ParseError(ErrorKind::kSyntax, line_.number, col, what.empty() ? "unexpected " + found : what + ", found " + found,
                     std::move(expected));
  }

  std::string ident(const std::string& role) {
    auto t = peek();
    if (!t || t->kind != TokenKind::kIdent) fail("", {role});
    if (reserved_words().count(t->text)) fail("'" + t->text + "' is a reserved word", {role});
    ++pos_;
    return t->text;
  }

  void word(const std::string& w) {
    auto t = peek();
    if (!t || t->kind != TokenKind::kIdent || t->text != w) fail("", {"'" + w + "'"});
    ++pos_;
  }

  bool accept_word(const std::string& w) {
    auto t = peek();
    if (t && t->kind == TokenKind::kIdent && t->text == w) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string one_of(const std::set<std::string>& words) {
    auto t = peek();
    if (!t || t->kind != TokenKind::kIdent || !words.count(t->text)) {
      std::set<std::string> quoted;
      for (const auto& w : words) quoted.insert("'" + w + "'");
      fail("", quoted);
    }
    ++pos_;
    return t->text;
  }

  void symbol(const std::string& s) {
    auto t = peek();
    if (!t || t->kind != TokenKind::kSymbol || t->text != s) fail("", {"'" + s + "'"});
    ++pos_;
  }

  bool accept_symbol(const std::string& s) {
    auto t = peek();
    if (t && t->kind == TokenKind::kSymbol && t->text == s) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool at_number() const {
    auto t = peek();
    return t && t->kind == TokenKind::kNumber;
  }

  std::string number_text(const std::string& role) {
    auto t = peek();
    if (!t || t->kind != TokenKind::kNumber) fail("", {role});
    ++pos_;
    return t->text;
  }

  long long integer(const std::string& role) {
    auto t = peek();
    if (!t || t->kind != TokenKind::kNumber || t->text.find('/') != std::string::npos) fail("", {role});
    ++pos_;
    return std::stoll(t->text);
  }

  void end() const {
    if (!done()) fail("", {"end of line"});
  }

 private:
  int end_column() const {
    if (line_.tokens.empty()) return 1;
    const auto& last = line_.tokens.back();
    return last.column + static_cast<int>(last.text.size());
  }

  const SourceLine& line_;
  std::size_t pos_ = 0;
};

inline SettingExpr parse_setting_expr(LineCursor& c) {
  SettingExpr e;
  if (c.at_number()) {
    e.value = c.integer("setting value");
    return e;
  }
  auto t = c.peek();
  if (!t || t->kind != TokenKind::kIdent) c.fail("", {"setting value", "setting name"});
  e.base = c.ident("setting name");
  c.symbol("^");
  e.value = c.integer("integer");
  return e;
}

inline void parse_select(LineCursor& c, Experiment& exp, int line) {
  Selection s;
  s.line = line;
  do {
    SelectAtom a;
    a.variable = c.ident("outcome variable");
    c.symbol("=");
    if (c.at_number()) {
      a.value = std::to_string(c.integer("outcome value"));
    } else {
      a.value = c.ident("outcome value");
    }
    s.atoms.push_back(std::move(a));
  } while (c.accept_symbol(","));
  if (c.accept_word("by")) s.by = c.ident("agent name");
  c.end();
  exp.selections.push_back(std::move(s));
}

}  // namespace detail

/// Parses an experiment description. Throws ParseError at the first
/// lexical or syntax error; cross-references are checked by validate().
inline Experiment parse(std::string_view source) {
  Experiment exp;
  std::string block;
  std::set<std::string> seen;
  bool have_theory = false;
  for (const auto& line : lex(source)) {
    detail::LineCursor c(line);
    const Token& head = line.tokens.front();
    if (head.kind == TokenKind::kKeyword) {
      if (!have_theory && head.text != "THEORY") {
        throw ParseError(ErrorKind::kSyntax, line.number, head.column, "experiment must start with THEORY", {"THEORY"});
      }
      if (head.text != "SELECT" && seen.count(head.text)) {
        throw ParseError(ErrorKind::kSyntax, line.number, head.column, "block " + head.text + " appears twice");
      }
      seen.insert(head.text);
      block = head.text;
      std::vector<Token> rest(line.tokens.begin() + 1, line.tokens.end());
      SourceLine tail{line.number, rest};
      detail::LineCursor r(tail);
      if (block == "THEORY") {
        auto t = r.one_of({"boxworld", "quantum"});
        exp.theory = t == "boxworld" ? Theory::kBoxWorld : Theory::kQuantum;
        have_theory = true;
        r.end();
      } else if (block == "QUERY") {
        auto q = r.one_of({"find-contradiction", "closure-dump"});
        exp.query = q == "find-contradiction" ? Query::kFindContradiction : Query::kClosureDump;
        r.end();
      } else if (block == "SELECT") {
        if (!r.done()) detail::parse_select(r, exp, line.number);
      } else {
        r.end();
      }
      continue;
    }
    if (!have_theory) {
      throw ParseError(ErrorKind::kSyntax, line.number, head.column, "experiment must start with THEORY", {"THEORY"});
    }
    if (block == "STATE") {
      auto kw = c.one_of({"system", "init"});
      if (kw == "system") {
        SystemDecl s;
        s.line = line.number;
        s.name = c.ident("system name");
        s.type = c.one_of({"gbit", "qubit"});
        c.end();
        exp.systems.push_back(std::move(s));
      } else {
        InitDecl i;
        i.line = line.number;
        i.builtin = c.one_of({"pr_box", "hardy", "uniform", "gbit"});
        i.systems.push_back(c.ident("system name"));
        while (!c.done() && c.peek()->kind == TokenKind::kIdent) i.systems.push_back(c.ident("system name"));
        while (c.at_number()) i.params.push_back(c.number_text("probability"));
        c.end();
        exp.inits.push_back(std::move(i));
      }
    } else if (block == "AGENTS") {
      AgentDecl a;
      a.line = line.number;
      a.name = c.ident("agent name");
      c.word("time");
      a.time = static_cast<int>(c.integer("time index"));
      if (c.accept_word("memory")) {
        a.memory = c.ident("memory name");
        a.memory_type = c.one_of({"gbit", "qubit"});
      }
      c.end();
      exp.agents.push_back(std::move(a));
    } else if (block == "EVENTS") {
      Event e;
      e.line = line.number;
      e.time = static_cast<int>(c.integer("time index"));
      e.agent = c.ident("agent name");
      c.word("measures");
      e.lab = c.accept_word("lab");
      e.target = c.ident(e.lab ? "agent name" : "system name");
      auto how = c.one_of({"setting", "basis"});
      if (how == "setting") {
        e.setting_name = c.ident("setting name");
        c.symbol("=");
        e.setting = detail::parse_setting_expr(c);
      } else {
        e.basis = c.one_of({"Z", "X", "okfail"});
      }
      c.word("outcome");
      e.outcome = c.ident("outcome variable");
      c.end();
      exp.events.push_back(std::move(e));
    } else if (block == "MODEL") {
      ModelDecl m;
      m.line = line.number;
      m.modeler = c.ident("agent name");
      c.word("models");
      m.target = c.ident("agent name");
      c.word("update");
      m.policy = c.ident("update policy");
      c.end();
      exp.models.push_back(std::move(m));
    } else if (block == "TRUST") {
      TrustDecl t;
      t.line = line.number;
      t.from = c.ident("agent name");
      c.symbol("@");
      t.from_time = static_cast<int>(c.integer("time index"));
      c.symbol("->");
      t.to = c.ident("agent name");
      c.symbol("@");
      t.to_time = static_cast<int>(c.integer("time index"));
      c.end();
      exp.trust.push_back(std::move(t));
    } else if (block == "SELECT") {
      detail::parse_select(c, exp, line.number);
    } else {
      // THEORY and QUERY take no entry lines.
      std::set<std::string> expected(block_keywords().begin(), block_keywords().end());
      throw ParseError(ErrorKind::kSyntax, line.number, head.column, "entry outside a block", expected);
    }
  }
  if (!have_theory) throw ParseError(ErrorKind::kSyntax, 1, 1, "empty experiment", {"THEORY"});
  return exp;
}

}  // namespace paradox::dsl
