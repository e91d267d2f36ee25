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

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "paradox/errors.hpp"
#include "paradox/logic/formula.hpp"

namespace paradox::logic {

/// Raised when a requested knowledge prefix is deeper than the engine bound.
class DepthBoundError : public Error {
 public:
  using Error::Error;
};

/// from ~> to: agent `to` trusts agent `from`, licensing
/// K_to K_from phi => K_to phi.
struct TrustEdge {
  AgentId from;
  AgentId to;

  std::string text() const { return from.name + " -> " + to.name; }
  std::string key() const { return from.key() + " -> " + to.key(); }
  friend bool operator==(const TrustEdge&, const TrustEdge&) = default;
  friend auto operator<=>(const TrustEdge&, const TrustEdge&) = default;
};

class TrustRelation {
 public:
  void add(const AgentId& from, const AgentId& to) {
    TrustEdge e{from, to};
    if (std::find(edges_.begin(), edges_.end(), e) == edges_.end()) edges_.push_back(e);
  }
  bool remove(const AgentId& from, const AgentId& to) {
    auto it = std::find(edges_.begin(), edges_.end(), TrustEdge{from, to});
    if (it == edges_.end()) return false;
    edges_.erase(it);
    return true;
  }
  bool trusts(const AgentId& truster, const AgentId& trusted) const {
    return std::find(edges_.begin(), edges_.end(), TrustEdge{trusted, truster}) != edges_.end();
  }
  const std::vector<TrustEdge>& edges() const { return edges_; }

 private:
  std::vector<TrustEdge> edges_;
};

/// A statement of the shared theory: `body` as known by `owner`. It is
/// common knowledge that the owner knows it.
struct TheoryEntry {
  Formula body;
  std::optional<AgentId> owner;
  std::string source;
};

enum class RuleStatus { kDerived, kAlreadyKnown, kPremisesAbsent, kRefused };

inline const char* to_string(RuleStatus s) {
  switch (s) {
    case RuleStatus::kDerived:
      return "derived";
    case RuleStatus::kAlreadyKnown:
      return "already known";
    case RuleStatus::kPremisesAbsent:
      return "premises absent";
    case RuleStatus::kRefused:
      return "refused";
  }
  return "?";
}

struct RuleResult {
  RuleStatus status = RuleStatus::kPremisesAbsent;
  std::optional<std::size_t> fact;
  std::string message;
  bool derived() const { return status == RuleStatus::kDerived; }
};

struct LogEntry {
  std::string rule;
  std::vector<std::size_t> premises;  // fact indices
  std::size_t conclusion = 0;         // fact index
  std::optional<TrustEdge> edge;
  std::optional<std::size_t> theory;  // theory entry for common-knowledge
  std::size_t position = 0;           // prefix length (distribution) or collapse position (trust)
};

struct EngineOptions {
  std::size_t depth = 4;
  bool positive_introspection = false;
  bool closed_world = false;
  std::size_t max_facts = 100000;
};

struct ClosureReport {
  std::size_t rounds = 0;
  std::size_t facts = 0;
  bool paths_truncated = false;  // some trust path was longer than the depth bound
  bool fact_limit_hit = false;
};

struct Certificate {
  AgentId agent;
  std::string variable;
  std::string form;                 // "bidirectional" or "direct"
  std::vector<std::size_t> facts;   // the contradicting facts
  std::vector<std::size_t> derivation;  // log entry indices, ascending
  std::string statement;
};

struct ReplayReport {
  bool ok = true;
  std::size_t checked = 0;
  std::string error;
  explicit operator bool() const { return ok; }
};

/// Forward-chaining engine over K-prefixed formulas with trust.
class KnowledgeBase {
 public:
  static constexpr const char* kRuleCommonKnowledge = "common-knowledge";
  static constexpr const char* kRuleDistribution = "distribution";
  static constexpr const char* kRuleChain = "chain";
  static constexpr const char* kRuleTrust = "trust";
  static constexpr const char* kRuleIntrospection = "introspection";
  static constexpr const char* kRuleNegIntrospection = "negative-introspection";

  explicit KnowledgeBase(EngineOptions opt = {}) : opt_(opt) {}

  const EngineOptions& options() const { return opt_; }

  void add_agent(const AgentId& a) {
    if (std::find(agents_.begin(), agents_.end(), a) == agents_.end()) agents_.push_back(a);
  }
  const std::vector<AgentId>& agents() const { return agents_; }

  void declare_variable(const std::string& name, std::vector<std::string> domain, std::optional<AgentId> owner = {}) {
    if (domain.empty()) throw DomainError("variable '" + name + "' needs a nonempty domain");
    if (variables_.count(name)) throw DomainError("variable '" + name + "' declared twice");
    variables_[name] = {std::move(domain), std::move(owner)};
    variable_order_.push_back(name);
  }
  const std::vector<std::string>& variable_order() const { return variable_order_; }

  TrustRelation& trust() { return trust_; }
  const TrustRelation& trust() const { return trust_; }

  std::size_t add_theory(TheoryEntry e) {
    check_symbols(e.body);
    if (e.owner) check_agent(*e.owner);
    theory_.push_back(std::move(e));
    return theory_.size() - 1;
  }
  const std::vector<TheoryEntry>& theory() const { return theory_; }

  /// Premise introduced from outside the axioms (observations, measurement
  /// structure, post-selection). Replay accepts exactly these as given.
  RuleResult assert_fact(const Formula& f, const std::string& rule) {
    check_symbols(f);
    if (auto idx = find(f)) return {RuleStatus::kAlreadyKnown, idx, "already known"};
    auto idx = push(f, LogEntry{rule, {}, 0, {}, {}, 0});
    inputs_.insert(f.key());
    return {RuleStatus::kDerived, idx, ""};
  }

  std::optional<std::size_t> find(const Formula& f) const {
    auto it = index_.find(f.key());
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  bool contains(const Formula& f) const { return find(f).has_value(); }

  const std::vector<Formula>& facts() const { return facts_; }
  const std::vector<LogEntry>& log() const { return log_; }
  /// Log entry that produced fact `i`.
  const LogEntry& origin(std::size_t i) const { return log_.at(origin_.at(i)); }

  // ---- rules -------------------------------------------------------------

  RuleResult rule_common_knowledge(const std::vector<AgentId>& prefix, std::size_t theory_index) {
    if (theory_index >= theory_.size()) return {RuleStatus::kPremisesAbsent, {}, "no such theory entry"};
    if (prefix.size() > opt_.depth) {
      throw DepthBoundError("prefix of length " + std::to_string(prefix.size()) + " exceeds the depth bound " +
                            std::to_string(opt_.depth));
    }
    for (const auto& a : prefix) check_agent(a);
    auto f = Formula::knows_chain(prefix, theory_[theory_index].body);
    if (auto idx = find(f)) return {RuleStatus::kAlreadyKnown, idx, ""};
    return {RuleStatus::kDerived, push(f, LogEntry{kRuleCommonKnowledge, {}, 0, {}, theory_index, prefix.size()}), ""};
  }

  /// K_P phi and K_P (phi => psi) give K_P psi.
  RuleResult rule_distribution(const std::vector<AgentId>& prefix, const Formula& phi, const Formula& implication) {
    if (!implication.is_implication() || !(implication.lhs() == phi)) {
      return {RuleStatus::kPremisesAbsent, {}, "second premise is not an implication from the first"};
    }
    auto p1 = find(Formula::knows_chain(prefix, phi));
    auto p2 = find(Formula::knows_chain(prefix, implication));
    if (!p1 || !p2) return {RuleStatus::kPremisesAbsent, {}, "premises not known"};
    return derive(Formula::knows_chain(prefix, implication.rhs()), LogEntry{kRuleDistribution, {*p1, *p2}, 0, {}, {}, prefix.size()});
  }

  /// K_P (phi => psi) and K_P (psi => chi) give K_P (phi => chi).
  RuleResult rule_chain(const std::vector<AgentId>& prefix, const Formula& first, const Formula& second) {
    if (!first.is_implication() || !second.is_implication() || !(first.rhs() == second.lhs())) {
      return {RuleStatus::kPremisesAbsent, {}, "implications do not chain"};
    }
    auto p1 = find(Formula::knows_chain(prefix, first));
    auto p2 = find(Formula::knows_chain(prefix, second));
    if (!p1 || !p2) return {RuleStatus::kPremisesAbsent, {}, "premises not known"};
    return derive(Formula::knows_chain(prefix, implies(first.lhs(), second.rhs())),
                  LogEntry{kRuleChain, {*p1, *p2}, 0, {}, {}, prefix.size()});
  }

  /// K_O K_truster K_trusted phi gives K_O K_truster phi when the truster
  /// trusts the trusted agent.
  RuleResult rule_trust(const AgentId& truster, const AgentId& trusted, const Formula& phi,
                        const std::vector<AgentId>& outer = {}) {
    auto full = outer;
    full.push_back(truster);
    full.push_back(trusted);
    auto premise = find(Formula::knows_chain(full, phi));
    if (!premise) return {RuleStatus::kPremisesAbsent, {}, "premise not known"};
    if (!trust_.trusts(truster, trusted)) {
      return {RuleStatus::kPremisesAbsent, {}, "no trust edge " + trusted.key() + " -> " + truster.key()};
    }
    full.pop_back();
    return derive(Formula::knows_chain(full, phi),
                  LogEntry{kRuleTrust, {*premise}, 0, TrustEdge{trusted, truster}, {}, outer.size()});
  }

  RuleResult rule_introspection(const AgentId& agent, const Formula& phi, bool positive,
                                const std::vector<AgentId>& outer = {}) {
    auto inner = outer;
    inner.push_back(agent);
    if (positive) {
      auto premise = find(Formula::knows_chain(inner, phi));
      if (!premise) return {RuleStatus::kPremisesAbsent, {}, "premise not known"};
      auto deeper = inner;
      deeper.push_back(agent);
      return derive(Formula::knows_chain(deeper, phi), LogEntry{kRuleIntrospection, {*premise}, 0, {}, {}, outer.size()});
    }
    if (!opt_.closed_world) return {RuleStatus::kRefused, {}, "negative introspection needs the closed-world flag"};
    if (find(Formula::knows_chain(inner, phi))) return {RuleStatus::kPremisesAbsent, {}, "the agent does know it"};
    auto concl = Formula::knows_chain(inner, negation(Formula::knows_chain({agent}, phi)));
    return derive(concl, LogEntry{kRuleNegIntrospection, {}, 0, {}, {}, outer.size()});
  }

  // ---- closure -----------------------------------------------------------

  /// Trust paths p1..pk (each p_m trusts p_{m+1}) that end at `owner`, no
  /// agent repeated, length at most the depth bound.
  std::vector<std::vector<AgentId>> trust_paths_to(const AgentId& owner, bool* truncated = nullptr) const {
    std::vector<std::vector<AgentId>> out;
    std::vector<std::vector<AgentId>> frontier{{owner}};
    while (!frontier.empty()) {
      std::vector<std::vector<AgentId>> next;
      for (const auto& path : frontier) {
        out.push_back(path);
        for (const auto& e : trust_.edges()) {
          if (!(e.from == path.front())) continue;
          if (std::find(path.begin(), path.end(), e.to) != path.end()) continue;
          if (path.size() + 1 > opt_.depth) {
            if (truncated) *truncated = true;
            continue;
          }
          auto longer = path;
          longer.insert(longer.begin(), e.to);
          next.push_back(std::move(longer));
        }
      }
      frontier = std::move(next);
    }
    return out;
  }

  /// Applies common knowledge, distribution, trust and (optionally)
  /// positive introspection in rounds until nothing new appears.
  ClosureReport derive_closure() {
    ClosureReport rep;
    bool changed = true;
    while (changed) {
      changed = false;
      ++rep.rounds;
      for (std::size_t t = 0; t < theory_.size(); ++t) {
        if (!theory_[t].owner) continue;
        for (const auto& path : trust_paths_to(*theory_[t].owner, &rep.paths_truncated))
          changed |= rule_common_knowledge(path, t).derived();
      }
      changed |= distribution_pass();
      changed |= trust_pass();
      if (opt_.positive_introspection) changed |= introspection_pass();
      if (facts_.size() > opt_.max_facts) {
        rep.fact_limit_hit = true;
        break;
      }
    }
    rep.facts = facts_.size();
    return rep;
  }

  // ---- contradictions ----------------------------------------------------

  /// At most one certificate per agent, own variables first.
  std::vector<Certificate> find_contradictions() const {
    std::vector<Certificate> out;
    for (const auto& agent : agents_) {
      std::vector<std::string> order;
      for (const auto& v : variable_order_)
        if (variables_.at(v).owner && *variables_.at(v).owner == agent) order.push_back(v);
      for (const auto& v : variable_order_)
        if (std::find(order.begin(), order.end(), v) == order.end()) order.push_back(v);
      for (const auto& v : order) {
        if (auto c = bidirectional(agent, v)) {
          out.push_back(std::move(*c));
          break;
        }
        if (auto c = direct(agent, v)) {
          out.push_back(std::move(*c));
          break;
        }
      }
    }
    for (auto& c : out) c.derivation = slice(c.facts);
    return out;
  }

  /// Log entries needed to derive `targets`, ascending.
  std::vector<std::size_t> slice(const std::vector<std::size_t>& targets) const {
    std::set<std::size_t> entries;
    std::vector<std::size_t> stack = targets;
    std::set<std::size_t> seen;
    while (!stack.empty()) {
      auto f = stack.back();
      stack.pop_back();
      if (!seen.insert(f).second) continue;
      entries.insert(origin_.at(f));
      for (auto p : log_[origin_.at(f)].premises) stack.push_back(p);
    }
    return {entries.begin(), entries.end()};
  }

  // ---- replay ------------------------------------------------------------

  /// Re-derives every listed log entry from the axioms and the asserted
  /// inputs, checking each rule application. With no list, the whole log.
  ReplayReport replay(std::optional<std::vector<std::size_t>> entries = std::nullopt) const {
    std::vector<std::size_t> ids;
    if (entries) {
      ids = *entries;
    } else {
      for (std::size_t i = 0; i < log_.size(); ++i) ids.push_back(i);
    }
    std::set<std::string> have;
    ReplayReport rep;
    auto fail = [&](std::size_t i, const std::string& why) {
      rep.ok = false;
      rep.error = "log entry " + std::to_string(i) + " (" + log_[i].rule + "): " + why;
      return rep;
    };
    for (auto i : ids) {
      const auto& e = log_.at(i);
      const auto& concl = facts_.at(e.conclusion);
      for (auto p : e.premises)
        if (!have.count(facts_.at(p).key())) return fail(i, "premise '" + facts_[p].text() + "' not yet derived");
      auto expected = recompute(e);
      if (!expected) return fail(i, "rule does not apply");
      if (!(*expected == concl)) return fail(i, "rule yields '" + expected->text() + "', log says '" + concl.text() + "'");
      have.insert(concl.key());
      ++rep.checked;
    }
    if (!entries && have.size() != facts_.size()) {
      rep.ok = false;
      rep.error = "replayed set differs from the derived set";
    }
    return rep;
  }

  // ---- export ------------------------------------------------------------

  /// "rule | premises | conclusion | trust-edge" for one log entry.
  std::string trace_line(std::size_t i) const {
    const auto& e = log_.at(i);
    std::string premises;
    if (e.theory) {
      const auto& t = theory_[*e.theory];
      premises = "T[" + (t.owner ? t.owner->name : std::string("*")) + "]: " + t.body.text();
    }
    for (auto p : e.premises) {
      if (!premises.empty()) premises += " ; ";
      premises += facts_[p].text();
    }
    if (premises.empty()) premises = "-";
    return e.rule + " | " + premises + " | " + facts_[e.conclusion].text() + " | " + (e.edge ? e.edge->text() : "-");
  }

  std::string trace(const std::vector<std::size_t>& entries) const {
    std::string out;
    for (auto i : entries) out += trace_line(i) + "\n";
    return out;
  }

 private:
  struct Variable {
    std::vector<std::string> domain;
    std::optional<AgentId> owner;
  };

  void check_agent(const AgentId& a) const {
    if (!agents_.empty() && std::find(agents_.begin(), agents_.end(), a) == agents_.end()) {
      throw DomainError("unknown agent " + a.key());
    }
  }

  void check_symbols(const Formula& f) const {
    switch (f.kind()) {
      case FormulaKind::kAtom:
        if (!variables_.empty()) {
          auto it = variables_.find(f.variable());
          if (it == variables_.end()) throw DomainError("unknown variable '" + f.variable() + "'");
          const auto& d = it->second.domain;
          if (std::find(d.begin(), d.end(), f.value()) == d.end()) {
            throw DomainError("value '" + f.value() + "' outside the domain of '" + f.variable() + "'");
          }
        }
        return;
      case FormulaKind::kKnows:
        check_agent(f.agent());
        [[fallthrough]];
      default:
        for (const auto& c : f.children()) check_symbols(c);
    }
  }

  std::size_t push(const Formula& f, LogEntry e) {
    std::size_t idx = facts_.size();
    facts_.push_back(f);
    index_.emplace(f.key(), idx);
    e.conclusion = idx;
    origin_.push_back(log_.size());
    log_.push_back(std::move(e));
    return idx;
  }

  RuleResult derive(const Formula& f, LogEntry e) {
    if (auto idx = find(f)) return {RuleStatus::kAlreadyKnown, idx, ""};
    return {RuleStatus::kDerived, push(f, std::move(e)), ""};
  }

  static std::vector<AgentId> take(const std::vector<AgentId>& p, std::size_t n) { return {p.begin(), p.begin() + n}; }

  /// Strips the first n K operators.
  static std::optional<Formula> strip(Formula f, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!f.is_knows()) return std::nullopt;
      f = f.child();
    }
    return f;
  }

  std::optional<Formula> recompute(const LogEntry& e) const {
    const auto& concl = facts_[e.conclusion];
    if (e.rule == kRuleCommonKnowledge) {
      if (!e.theory || *e.theory >= theory_.size() || e.position > opt_.depth) return std::nullopt;
      auto prefix = concl.prefix();
      if (prefix.size() < e.position) return std::nullopt;
      return Formula::knows_chain(take(prefix, e.position), theory_[*e.theory].body);
    }
    if (e.rule == kRuleDistribution || e.rule == kRuleChain) {
      if (e.premises.size() != 2) return std::nullopt;
      const auto& f1 = facts_[e.premises[0]];
      const auto& f2 = facts_[e.premises[1]];
      auto prefix = f1.prefix();
      if (prefix.size() < e.position) return std::nullopt;
      prefix = take(prefix, e.position);
      auto b1 = strip(f1, e.position), b2 = strip(f2, e.position);
      if (!b1 || !b2 || !(Formula::knows_chain(prefix, *b2) == f2) || !b2->is_implication()) return std::nullopt;
      if (e.rule == kRuleDistribution) {
        if (!(b2->lhs() == *b1)) return std::nullopt;
        return Formula::knows_chain(prefix, b2->rhs());
      }
      if (!b1->is_implication() || !(b1->rhs() == b2->lhs())) return std::nullopt;
      return Formula::knows_chain(prefix, implies(b1->lhs(), b2->rhs()));
    }
    if (e.rule == kRuleTrust) {
      if (e.premises.size() != 1 || !e.edge) return std::nullopt;
      const auto& f = facts_[e.premises[0]];
      auto prefix = f.prefix();
      std::size_t m = e.position;
      if (m + 1 >= prefix.size()) return std::nullopt;
      if (!(prefix[m] == e.edge->to) || !(prefix[m + 1] == e.edge->from)) return std::nullopt;
      if (!trust_.trusts(e.edge->to, e.edge->from)) return std::nullopt;
      auto rest = strip(f, m + 2);
      auto shorter = take(prefix, m + 1);
      return Formula::knows_chain(shorter, *rest);
    }
    if (e.rule == kRuleIntrospection) {
      if (e.premises.size() != 1) return std::nullopt;
      const auto& f = facts_[e.premises[0]];
      auto prefix = f.prefix();
      if (e.position >= prefix.size()) return std::nullopt;
      auto rest = strip(f, e.position + 1);
      auto deeper = take(prefix, e.position + 1);
      deeper.push_back(prefix[e.position]);
      return Formula::knows_chain(deeper, *rest);
    }
    if (e.rule == kRuleNegIntrospection) {
      if (!opt_.closed_world) return std::nullopt;
      return concl;
    }
    if (inputs_.count(concl.key()) && e.premises.empty()) return concl;
    return std::nullopt;
  }

  bool distribution_pass() {
    bool changed = false;
    // Group implication facts by their full prefix, in first-seen order.
    std::map<std::string, std::size_t> group_of;
    std::vector<std::vector<std::size_t>> groups;
    const std::size_t n = facts_.size();
    for (std::size_t i = 0; i < n; ++i) {
      auto body = facts_[i].body();
      if (!body.is_implication()) continue;
      std::string key;
      for (const auto& a : facts_[i].prefix()) key += a.key() + "/";
      auto [it, fresh] = group_of.emplace(key, groups.size());
      if (fresh) groups.emplace_back();
      groups[it->second].push_back(i);
    }
    for (const auto& g : groups) {
      auto prefix = facts_[g.front()].prefix();
      std::map<std::string, std::vector<std::size_t>> by_lhs;
      for (auto i : g) by_lhs[facts_[i].body().lhs().key()].push_back(i);
      for (auto i : g) {
        auto imp = facts_[i].body();
        changed |= rule_distribution(prefix, imp.lhs(), imp).derived();
        auto it = by_lhs.find(imp.rhs().key());
        if (it == by_lhs.end()) continue;
        for (auto j : it->second) {
          auto next = facts_[j].body();
          if (next.rhs() == imp.lhs()) continue;  // would give phi => phi
          changed |= rule_chain(prefix, imp, next).derived();
        }
      }
    }
    return changed;
  }

  /// Facts produced here are themselves visited, so a deep prefix collapses
  /// all the way within one pass.
  bool trust_pass() {
    bool changed = false;
    for (std::size_t i = 0; i < facts_.size(); ++i) {
      auto prefix = facts_[i].prefix();
      if (prefix.size() < 2) continue;
      auto body = facts_[i].body();
      for (std::size_t m = prefix.size() - 1; m-- > 0;) {
        if (!trust_.trusts(prefix[m], prefix[m + 1])) continue;
        auto inner = Formula::knows_chain({prefix.begin() + m + 2, prefix.end()}, body);
        changed |= rule_trust(prefix[m], prefix[m + 1], inner, take(prefix, m)).derived();
      }
    }
    return changed;
  }

  bool introspection_pass() {
    bool changed = false;
    const std::size_t n = facts_.size();
    for (std::size_t i = 0; i < n; ++i) {
      auto prefix = facts_[i].prefix();
      if (prefix.empty() || prefix.size() >= opt_.depth) continue;
      auto inner = Formula::knows_chain({prefix.begin() + 1, prefix.end()}, facts_[i].body());
      // Only the outermost operator is introspected; nested ones arise from
      // facts that already have that shape.
      changed |= rule_introspection(prefix[0], inner, true).derived();
    }
    return changed;
  }

  /// Top-level facts K_agent(body), in fact order.
  std::vector<std::size_t> top_level(const AgentId& agent) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < facts_.size(); ++i) {
      const auto& f = facts_[i];
      if (f.is_knows() && f.agent() == agent && !f.child().is_knows()) out.push_back(i);
    }
    return out;
  }

  std::optional<Certificate> bidirectional(const AgentId& agent, const std::string& var) const {
    const auto& domain = variables_.at(var).domain;
    if (domain.size() < 2) return std::nullopt;
    std::vector<std::size_t> chosen;
    for (const auto& v : domain) {
      std::optional<std::size_t> hit;
      for (auto i : top_level(agent)) {
        const auto& b = facts_[i].child();
        if (!b.is_implication() || !b.lhs().is_atom() || b.lhs().variable() != var || b.lhs().value() != v) continue;
        const auto& r = b.rhs();
        bool refutes = (r.is_atom() && r.variable() == var && r.value() != v) ||
                       (r.kind() == FormulaKind::kNot && r.child() == b.lhs());
        if (refutes) {
          hit = i;
          break;
        }
      }
      if (!hit) return std::nullopt;
      chosen.push_back(*hit);
    }
    std::string stmt = "K_" + agent.name + "[";
    for (std::size_t k = 0; k < chosen.size(); ++k) stmt += (k ? " & " : "") + facts_[chosen[k]].child().text();
    return Certificate{agent, var, "bidirectional", chosen, {}, stmt + "]"};
  }

  std::optional<Certificate> direct(const AgentId& agent, const std::string& var) const {
    std::optional<std::size_t> first;
    for (auto i : top_level(agent)) {
      const auto& b = facts_[i].child();
      if (b.is_atom() && b.variable() == var) {
        if (first && facts_[*first].child().value() != b.value()) {
          return Certificate{agent, var, "direct", {*first, i}, {},
                             "K_" + agent.name + "[" + facts_[*first].child().text() + " & " + b.text() + "]"};
        }
        if (!first) first = i;
      }
    }
    if (!first) return std::nullopt;
    auto neg = find(knows(agent, negation(facts_[*first].child())));
    if (neg) {
      return Certificate{agent, var, "direct", {*first, *neg}, {},
                         "K_" + agent.name + "[" + facts_[*first].child().text() + " & " + facts_[*neg].child().text() + "]"};
    }
    return std::nullopt;
  }

  EngineOptions opt_;
  std::vector<AgentId> agents_;
  std::map<std::string, Variable> variables_;
  std::vector<std::string> variable_order_;
  TrustRelation trust_;
  std::vector<TheoryEntry> theory_;
  std::vector<Formula> facts_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::size_t> origin_;
  std::vector<LogEntry> log_;
  std::set<std::string> inputs_;
};

}  // namespace paradox::logic
