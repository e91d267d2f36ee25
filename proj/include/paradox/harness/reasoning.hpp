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

#include <string>
#include <utility>
#include <vector>

#include "paradox/dsl/experiment.hpp"
#include "paradox/harness/physics.hpp"
#include "paradox/logic/knowledge_base.hpp"
#include "paradox/logic/support.hpp"

namespace paradox::harness {

/// An agent's own outcome, given to that agent before closure.
struct Observation {
  std::string agent;
  std::string variable;
  std::string value;
};

struct ReasoningOptions {
  std::size_t depth = 4;
  bool use_selection = true;
  bool positive_introspection = false;
  std::vector<Observation> observations;
  std::vector<logic::TrustEdge> drop_trust;
};

enum class Verdict { kConsistent, kContradiction, kBoundExhausted };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kConsistent:
      return "consistent";
    case Verdict::kContradiction:
      return "contradiction";
    default:
      return "bound exhausted";
  }
}

struct Reasoning {
  logic::KnowledgeBase kb;
  logic::ClosureReport closure;
  std::vector<logic::Certificate> certificates;
  Verdict verdict = Verdict::kConsistent;
};

namespace detail {

inline logic::AgentId agent_id(const dsl::Experiment& exp, const std::string& name) {
  const dsl::AgentDecl* a = exp.agent(name);
  if (!a) throw StructuralError("unknown agent '" + name + "'");
  return {a->name, a->time};
}

/// The agent that post-selects when a SELECT line names nobody: the one
/// acting last.
inline logic::AgentId default_selector(const dsl::Experiment& exp) {
  const dsl::AgentDecl* last = nullptr;
  for (const auto& a : exp.agents)
    if (!last || a.time > last->time) last = &a;
  if (!last) throw StructuralError("experiment declares no agents");
  return {last->name, last->time};
}

}  // namespace detail

/// Theory entries, measurement structure and seeds for the knowledge base,
/// then closure and the contradiction search.
inline Reasoning reason(const dsl::Experiment& exp, const PhysicsResult& phys, const ReasoningOptions& opt = {}) {
  Reasoning r{logic::KnowledgeBase({opt.depth, opt.positive_introspection, false}), {}, {}, Verdict::kConsistent};
  auto& kb = r.kb;
  for (const auto& a : exp.agents) kb.add_agent({a.name, a.time});
  for (const auto& v : phys.variables) kb.declare_variable(v.name, v.values, v.owner);
  for (const auto& t : exp.trust) {
    logic::TrustEdge e{{t.from, t.from_time}, {t.to, t.to_time}};
    if (std::find(opt.drop_trust.begin(), opt.drop_trust.end(), e) == opt.drop_trust.end()) kb.trust().add(e.from, e.to);
  }

  // A reasoner only adopts conclusions about an agent it trusts.
  std::vector<std::vector<std::vector<logic::Formula>>> consequents(phys.variables.size());
  for (std::size_t i = 0; i < phys.variables.size(); ++i) consequents[i].resize(phys.variables[i].values.size());
  for (const auto& p : phys.pairs) {
    for (int dir = 0; dir < 2; ++dir) {
      const auto& x = phys.variables[dir == 0 ? p.first : p.second];
      const auto& y = phys.variables[dir == 0 ? p.second : p.first];
      logic::SupportTable t = p.table;
      if (dir == 1) {
        logic::SupportTable tr;
        tr.possible.assign(t.cols(), std::vector<bool>(t.rows(), false));
        for (std::size_t v = 0; v < t.rows(); ++v)
          for (std::size_t w = 0; w < t.cols(); ++w) tr.possible[w][v] = t.possible[v][w];
        t = tr;
      }
      if (!kb.trust().trusts(x.owner, y.owner)) continue;
      for (std::size_t v = 0; v < x.values.size(); ++v) {
        if (!t.row_possible(v)) continue;
        for (const auto& c : logic::implications_from_table(t, v, y.name, y.values)) {
          kb.add_theory({logic::implies(logic::atom(x.name, x.values[v]), c), x.owner, "support of " + x.name + ", " + y.name});
          consequents[x.event][v].push_back(c);
        }
      }
    }
  }

  // Every other agent knows that the measuring agent will know exactly one
  // outcome together with its consequences, and that these exclude the rest.
  for (const auto& x : phys.variables) {
    std::vector<logic::Formula> phi;
    for (std::size_t v = 0; v < x.values.size(); ++v) {
      std::vector<logic::Formula> parts{logic::atom(x.name, x.values[v])};
      for (const auto& c : consequents[x.event][v]) parts.push_back(c);
      phi.push_back(logic::Formula::conjunction(parts));
    }
    for (const auto& a : exp.agents) {
      logic::AgentId j{a.name, a.time};
      if (j == x.owner) continue;
      std::vector<logic::Formula> branches;
      for (const auto& f : phi) branches.push_back(logic::knows(x.owner, f));
      kb.assert_fact(logic::knows(j, logic::Formula::disjunction(branches)), "measurement");
      for (std::size_t v = 0; v < phi.size(); ++v)
        for (std::size_t w = 0; w < phi.size(); ++w)
          if (v != w) {
            kb.assert_fact(logic::knows(j, logic::implies(logic::knows(x.owner, phi[v]),
                                                          logic::knows(x.owner, logic::negation(phi[w])))),
                           "measurement");
          }
    }
  }

  if (opt.use_selection) {
    for (const auto& s : exp.selections) {
      auto who = s.by ? detail::agent_id(exp, *s.by) : detail::default_selector(exp);
      for (const auto& atom : s.atoms) kb.assert_fact(logic::knows(who, logic::atom(atom.variable, atom.value)), "post-selection");
    }
  }
  for (const auto& o : opt.observations) {
    kb.assert_fact(logic::knows(detail::agent_id(exp, o.agent), logic::atom(o.variable, o.value)), "observation");
  }

  r.closure = kb.derive_closure();
  r.certificates = kb.find_contradictions();
  if (!r.certificates.empty()) {
    r.verdict = Verdict::kContradiction;
  } else if (r.closure.paths_truncated) {
    r.verdict = Verdict::kBoundExhausted;
  }
  return r;
}

}  // namespace paradox::harness
