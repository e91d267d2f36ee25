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

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "paradox/errors.hpp"

namespace paradox::logic {

/// An agent at one moment: the same person before and after an event are
/// different reasoners.
struct AgentId {
  std::string name;
  int time = 0;

  std::string key() const { return name + "@" + std::to_string(time); }
  friend bool operator==(const AgentId&, const AgentId&) = default;
  friend auto operator<=>(const AgentId&, const AgentId&) = default;
};

enum class FormulaKind { kAtom, kNot, kAnd, kOr, kImplies, kKnows };

/// Immutable formula tree with structural sharing. Two formulas are equal
/// iff their canonical keys are equal.
class Formula {
 public:
  static Formula atom(std::string variable, std::string value) {
    auto n = std::make_shared<Node>();
    n->kind = FormulaKind::kAtom;
    n->variable = std::move(variable);
    n->value = std::move(value);
    return Formula(finish(std::move(n)));
  }
  static Formula negation(Formula f) { return unary(FormulaKind::kNot, std::move(f)); }
  static Formula conjunction(std::vector<Formula> parts) { return nary(FormulaKind::kAnd, std::move(parts)); }
  static Formula disjunction(std::vector<Formula> parts) { return nary(FormulaKind::kOr, std::move(parts)); }
  static Formula implies(Formula lhs, Formula rhs) {
    auto n = std::make_shared<Node>();
    n->kind = FormulaKind::kImplies;
    n->children = {std::move(lhs), std::move(rhs)};
    return Formula(finish(std::move(n)));
  }
  static Formula knows(AgentId agent, Formula body) {
    auto n = std::make_shared<Node>();
    n->kind = FormulaKind::kKnows;
    n->agent = std::move(agent);
    n->children = {std::move(body)};
    return Formula(finish(std::move(n)));
  }
  /// K_{p1} K_{p2} ... K_{pn} body; an empty prefix gives body itself.
  static Formula knows_chain(const std::vector<AgentId>& prefix, Formula body) {
    for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) body = knows(*it, std::move(body));
    return body;
  }

  FormulaKind kind() const { return node_->kind; }
  const std::string& variable() const { return node_->variable; }
  const std::string& value() const { return node_->value; }
  const AgentId& agent() const { return node_->agent; }
  const std::vector<Formula>& children() const { return node_->children; }
  const Formula& child(std::size_t i = 0) const { return node_->children.at(i); }
  const Formula& lhs() const { return child(0); }
  const Formula& rhs() const { return child(1); }

  bool is_atom() const { return kind() == FormulaKind::kAtom; }
  bool is_knows() const { return kind() == FormulaKind::kKnows; }
  bool is_implication() const { return kind() == FormulaKind::kImplies; }

  /// Canonical identity, with agents as name@time.
  const std::string& key() const { return node_->key; }
  /// Human-readable text with agents by name.
  const std::string& text() const { return node_->text; }

  /// Leading K operators, outermost first.
  std::vector<AgentId> prefix() const {
    std::vector<AgentId> out;
    const Formula* f = this;
    while (f->is_knows()) {
      out.push_back(f->agent());
      f = &f->child();
    }
    return out;
  }
  /// The formula under all leading K operators.
  Formula body() const {
    Formula f = *this;
    while (f.is_knows()) f = f.child();
    return f;
  }

  std::size_t depth() const { return prefix().size(); }

  friend bool operator==(const Formula& a, const Formula& b) { return a.key() == b.key(); }

 private:
  struct Node {
    FormulaKind kind = FormulaKind::kAtom;
    std::string variable, value;
    AgentId agent;
    std::vector<Formula> children;
    std::string key, text;
  };

  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static Formula unary(FormulaKind k, Formula f) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->children = {std::move(f)};
    return Formula(finish(std::move(n)));
  }
  static Formula nary(FormulaKind k, std::vector<Formula> parts) {
    if (parts.empty()) throw StructuralError("empty conjunction or disjunction");
    if (parts.size() == 1) return parts.front();
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->children = std::move(parts);
    return Formula(finish(std::move(n)));
  }

  static std::shared_ptr<const Node> finish(std::shared_ptr<Node> n) {
    auto join = [&](const char* op, bool use_key) {
      std::string s = "(";
      for (std::size_t i = 0; i < n->children.size(); ++i) {
        if (i) s += op;
        s += use_key ? n->children[i].key() : n->children[i].text();
      }
      return s + ")";
    };
    switch (n->kind) {
      case FormulaKind::kAtom:
        n->key = n->text = n->variable + "=" + n->value;
        break;
      case FormulaKind::kNot:
        n->key = "!" + wrap(n->children[0].key(), n->children[0]);
        n->text = "!" + wrap(n->children[0].text(), n->children[0]);
        break;
      case FormulaKind::kAnd:
        n->key = join(" & ", true);
        n->text = join(" & ", false);
        break;
      case FormulaKind::kOr:
        n->key = join(" | ", true);
        n->text = join(" | ", false);
        break;
      case FormulaKind::kImplies:
        n->key = join(" => ", true);
        n->text = join(" => ", false);
        break;
      case FormulaKind::kKnows: {
        const auto& c = n->children[0];
        n->key = "K[" + n->agent.key() + "]" + (c.is_knows() ? " " + c.key() : wrap(c.key(), c, true));
        n->text = "K_" + n->agent.name + (c.is_knows() ? " " + c.text() : wrap(c.text(), c, true));
        break;
      }
    }
    return n;
  }

  static std::string wrap(const std::string& s, const Formula& f, bool always = false) {
    if (!always && f.is_atom()) return s;
    if (!s.empty() && s.front() == '(') return s;
    return "(" + s + ")";
  }

  std::shared_ptr<const Node> node_;
};

inline Formula atom(std::string variable, std::string value) { return Formula::atom(std::move(variable), std::move(value)); }
inline Formula implies(Formula a, Formula b) { return Formula::implies(std::move(a), std::move(b)); }
inline Formula knows(AgentId i, Formula f) { return Formula::knows(std::move(i), std::move(f)); }
inline Formula negation(Formula f) { return Formula::negation(std::move(f)); }

}  // namespace paradox::logic
