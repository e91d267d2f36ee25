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
#include <climits>
#include <optional>
#include <string>
#include <vector>

#include "paradox/dsl/experiment.hpp"
#include "paradox/dsl/validate.hpp"
#include "paradox/errors.hpp"
#include "paradox/gpt/state_vector.hpp"
#include "paradox/logic/formula.hpp"
#include "paradox/logic/support.hpp"
#include "paradox/memory/memory_update.hpp"
#include "paradox/quantum/ket.hpp"

namespace paradox::harness {

using gpt::StateVector;

struct VariableInfo {
  std::string name;
  logic::AgentId owner;
  std::vector<std::string> values;
  std::size_t event = 0;
};

/// Joint support of two events' outcomes.
struct PairSupport {
  std::size_t first = 0;  // event indices
  std::size_t second = 0;
  logic::SupportTable table;
  std::string relation;
};

struct Snapshot {
  int time = 0;
  std::string label;
  std::string text;
};

struct SuperglueFlag {
  std::string lab;
  bool superglued = false;
  std::string witness;
};

struct PhysicsResult {
  std::vector<VariableInfo> variables;  // one per event
  std::vector<PairSupport> pairs;
  std::vector<Snapshot> states;
  std::vector<SuperglueFlag> superglue;
  std::optional<bool> effective_matches_initial;
  std::vector<std::string> updates;
  std::optional<std::string> selection_probability;
};

/// "x = y", "x != y" or the list of possible value pairs.
inline std::string describe_relation(const logic::SupportTable& t, const VariableInfo& x, const VariableInfo& y) {
  if (t.rows() == 2 && t.cols() == 2) {
    const auto& p = t.possible;
    if (p[0][0] && p[1][1] && !p[0][1] && !p[1][0]) return x.name + " = " + y.name;
    if (!p[0][0] && !p[1][1] && p[0][1] && p[1][0]) return x.name + " != " + y.name;
  }
  std::string s = "(" + x.name + ", " + y.name + ") in {";
  bool first = true;
  for (std::size_t v = 0; v < t.rows(); ++v)
    for (std::size_t w = 0; w < t.cols(); ++w)
      if (t.possible[v][w]) {
        s += std::string(first ? "" : ", ") + "(" + x.values[v] + "," + y.values[w] + ")";
        first = false;
      }
  return s + "}";
}

namespace detail {

inline std::size_t system_index(const dsl::Experiment& exp, const std::string& name) {
  for (std::size_t i = 0; i < exp.systems.size(); ++i)
    if (exp.systems[i].name == name) return i;
  throw StructuralError("unknown system '" + name + "'");
}

/// The system an event reads: its own target, or the target of the agent
/// whose lab it measures.
inline std::size_t event_system(const dsl::Experiment& exp, const dsl::Event& e) {
  if (!e.lab) return system_index(exp, e.target);
  const dsl::Event* inner = exp.event_by(e.target);
  if (!inner || inner->lab) throw StructuralError("lab of " + e.target + " holds no measured system");
  return system_index(exp, inner->target);
}

inline std::vector<VariableInfo> variables(const dsl::Experiment& exp) {
  std::vector<VariableInfo> out;
  for (std::size_t i = 0; i < exp.events.size(); ++i) {
    const auto& e = exp.events[i];
    out.push_back({e.outcome, {e.agent, e.time}, dsl::outcome_values(e), i});
  }
  return out;
}

// ---- box world ------------------------------------------------------------

inline StateVector initial_box_state(const dsl::Experiment& exp) {
  std::vector<std::string> order;
  std::optional<StateVector> acc;
  for (const auto& init : exp.inits) {
    StateVector s = init.builtin == "pr_box" ? gpt::make_pr_box()
                    : init.builtin == "gbit"
                        ? gpt::make_gbit(Rational::parse(init.params.at(0)), Rational::parse(init.params.at(1)))
                        : gpt::make_uniform(gpt::SystemSignature::gbits(init.systems.size()));
    acc = acc ? gpt::tensor(*acc, s) : s;
    order.insert(order.end(), init.systems.begin(), init.systems.end());
  }
  if (!acc) throw StructuralError("experiment has no initial state");
  std::vector<std::size_t> perm;
  for (const auto& s : exp.systems) {
    auto it = std::find(order.begin(), order.end(), s.name);
    if (it == order.end()) throw StructuralError("system '" + s.name + "' has no initial state");
    perm.push_back(static_cast<std::size_t>(it - order.begin()));
  }
  return gpt::permute(*acc, perm);
}

struct BoxTimeline {
  StateVector initial;
  StateVector current;
  std::vector<bool> glued;  // per system
  std::vector<Snapshot> snapshots;
  std::vector<std::string> updates;
};

/// Applies every modelled measurement with time <= `until` as a memory
/// update on the measured system.
inline BoxTimeline box_timeline(const dsl::Experiment& exp, int until = INT_MAX) {
  auto initial = initial_box_state(exp);
  BoxTimeline tl{initial, initial, std::vector<bool>(exp.systems.size(), false), {}, {}};
  tl.snapshots.push_back({0, "initial", gpt::to_text(initial)});
  for (const auto& e : exp.events) {
    if (e.time > until) break;
    const dsl::ModelDecl* m = exp.model_of(e.agent);
    if (e.lab || !m) {
      tl.snapshots.push_back({e.time, e.agent + " measures " + (e.lab ? "lab " : "") + e.target + " (no update)",
                              gpt::to_text(tl.current)});
      continue;
    }
    auto map = memory::build_memory_update({gpt::kGbit, {}, memory::parse_policy(m->policy)});
    auto idx = system_index(exp, e.target);
    tl.current = memory::apply_update(map, tl.current, idx);
    tl.glued[idx] = true;
    tl.updates.push_back(m->modeler + " models " + e.agent + ":\n" + memory::format_update_blocks(map));
    tl.snapshots.push_back({e.time, m->modeler + " models " + e.agent + " measuring " + e.target,
                            gpt::to_text(tl.current)});
  }
  return tl;
}

/// The one-gbit-per-system view of a partially updated state.
inline StateVector effective_state(const BoxTimeline& tl) {
  StateVector s = tl.current;
  for (std::size_t i = 0; i < tl.glued.size(); ++i)
    if (tl.glued[i]) s = memory::compress_subsystem(s, i);
  return s;
}

inline std::size_t box_setting(const dsl::Experiment& exp, const dsl::Event& e) {
  auto v = dsl::resolve_setting(exp, e.setting);
  if (!v) throw StructuralError("unresolved setting in event at line " + std::to_string(e.line));
  return static_cast<std::size_t>(*v);
}

inline void box_physics(const dsl::Experiment& exp, PhysicsResult& out) {
  auto tl = box_timeline(exp);
  out.states = tl.snapshots;
  out.updates = tl.updates;
  auto eff = effective_state(tl);
  out.effective_matches_initial = eff == tl.initial;
  for (std::size_t i = 0; i < tl.glued.size(); ++i) {
    if (!tl.glued[i]) continue;
    std::vector<std::size_t> rest(tl.glued.size() - 1, 0);
    auto lab = gpt::marginal(tl.current, {i}, rest);
    auto split = lab.reinterpret(memory::GlueLayout{}.unmerged());
    auto sg = memory::detect_superglue(split, 1);
    std::string owner;
    for (const auto& e : exp.events)
      if (!e.lab && detail::system_index(exp, e.target) == i) owner = e.agent;
    out.superglue.push_back({owner, sg.superglued, sg.witness ? sg.witness->describe() : ""});
  }
  for (std::size_t i = 0; i < exp.events.size(); ++i) {
    for (std::size_t j = i + 1; j < exp.events.size(); ++j) {
      auto si = event_system(exp, exp.events[i]), sj = event_system(exp, exp.events[j]);
      if (si == sj) continue;
      auto t = logic::support_table(eff, si, box_setting(exp, exp.events[i]), sj, box_setting(exp, exp.events[j]));
      out.pairs.push_back({i, j, t, describe_relation(t, out.variables[i], out.variables[j])});
    }
  }
}

// ---- quantum ----------------------------------------------------------------

struct QubitLayout {
  std::vector<std::size_t> system;                 // per declared system
  std::vector<std::optional<std::size_t>> memory;  // per declared agent
  std::size_t count = 0;
};

inline QubitLayout qubit_layout(const dsl::Experiment& exp) {
  QubitLayout q;
  for (std::size_t i = 0; i < exp.systems.size(); ++i) q.system.push_back(q.count++);
  for (const auto& a : exp.agents) q.memory.push_back(a.memory ? std::optional<std::size_t>(q.count++) : std::nullopt);
  if (q.count > quantum::kMaxQubits) {
    throw NotImplementedAtScale("quantum experiments hold at most " + std::to_string(quantum::kMaxQubits) + " qubits");
  }
  return q;
}

inline std::optional<std::size_t> memory_qubit(const dsl::Experiment& exp, const QubitLayout& q, const std::string& agent) {
  for (std::size_t i = 0; i < exp.agents.size(); ++i)
    if (exp.agents[i].name == agent) return q.memory[i];
  return std::nullopt;
}

/// Systems as prepared, memories cleared to |0>, in layout order.
inline quantum::Ket initial_ket(const dsl::Experiment& exp, const QubitLayout& q) {
  std::vector<std::string> order;
  std::optional<quantum::Ket> acc;
  for (const auto& init : exp.inits) {
    quantum::Ket k = quantum::Ket::basis(1, 0);
    if (init.builtin == "hardy") {
      k = quantum::hardy_state();
    } else {
      // Uniform computational-basis statistics: |+> on every system.
      quantum::Complex h{quantum::inv_sqrt2()};
      k = quantum::Ket(1, {h, h});
      for (std::size_t i = 1; i < init.systems.size(); ++i) k = quantum::tensor(k, quantum::Ket(1, {h, h}));
    }
    acc = acc ? quantum::tensor(*acc, k) : k;
    order.insert(order.end(), init.systems.begin(), init.systems.end());
  }
  if (!acc) throw StructuralError("experiment has no initial state");
  for (std::size_t i = 0; i < exp.systems.size(); ++i) {
    if (i >= order.size() || order[i] != exp.systems[i].name) {
      throw StructuralError("quantum initial states must list systems in declaration order");
    }
  }
  for (std::size_t i = exp.systems.size(); i < q.count; ++i) acc = quantum::tensor(*acc, quantum::Ket::basis(1, 0));
  return *acc;
}

struct QuantumTimeline {
  QubitLayout layout;
  quantum::Ket initial;
  quantum::Ket current;
  std::vector<quantum::Measurement> sites;  // per event
  std::vector<Snapshot> snapshots;
};

inline QuantumTimeline quantum_timeline(const dsl::Experiment& exp, int until = INT_MAX) {
  auto layout = qubit_layout(exp);
  auto k0 = initial_ket(exp, layout);
  QuantumTimeline tl{layout, k0, k0, {}, {{0, "initial", k0.str()}}};
  for (const auto& e : exp.events) {
    const dsl::ModelDecl* m = exp.model_of(e.agent);
    auto mem = memory_qubit(exp, layout, e.lab ? e.target : e.agent);
    if (e.lab) {
      auto sys = layout.system[event_system(exp, e)];
      if (!mem) throw StructuralError("lab of " + e.target + " has no memory");
      tl.sites.push_back(quantum::okfail_measurement(sys, *mem));
    } else {
      auto sys = layout.system[system_index(exp, e.target)];
      const bool copied = m && mem;
      if (copied && *e.basis != "Z") throw DomainError("only computational-basis outcomes can be copied into memory");
      std::size_t q = copied ? *mem : sys;
      tl.sites.push_back(*e.basis == "X" ? quantum::x_measurement(q) : quantum::z_measurement(q));
      if (copied && e.time <= until) tl.current = quantum::cnot_memory(tl.current, sys, *mem);
    }
    if (e.time <= until) {
      tl.snapshots.push_back({e.time, e.agent + " measures " + (e.lab ? "lab " : "") + e.target, tl.current.str()});
    }
  }
  return tl;
}

inline bool disjoint(const quantum::Measurement& a, const quantum::Measurement& b) {
  for (auto q : a.qubits)
    if (std::find(b.qubits.begin(), b.qubits.end(), q) != b.qubits.end()) return false;
  return true;
}

inline void quantum_physics(const dsl::Experiment& exp, PhysicsResult& out) {
  auto tl = quantum_timeline(exp);
  out.states = tl.snapshots;
  for (std::size_t i = 0; i < exp.events.size(); ++i) {
    for (std::size_t j = i + 1; j < exp.events.size(); ++j) {
      if (!disjoint(tl.sites[i], tl.sites[j])) continue;
      logic::SupportTable t;
      const auto& mi = tl.sites[i];
      const auto& mj = tl.sites[j];
      t.possible.assign(mi.vectors.size(), std::vector<bool>(mj.vectors.size(), false));
      for (std::size_t v = 0; v < mi.vectors.size(); ++v)
        for (std::size_t w = 0; w < mj.vectors.size(); ++w)
          t.possible[v][w] = !quantum::joint_probability(tl.current, {{mi, v}, {mj, w}}).is_zero();
      out.pairs.push_back({i, j, t, describe_relation(t, out.variables[i], out.variables[j])});
    }
  }
  std::vector<std::pair<quantum::Measurement, std::size_t>> selected;
  for (const auto& s : exp.selections) {
    for (const auto& atom : s.atoms) {
      for (std::size_t i = 0; i < exp.events.size(); ++i) {
        if (exp.events[i].outcome != atom.variable) continue;
        const auto& vals = out.variables[i].values;
        auto v = static_cast<std::size_t>(std::find(vals.begin(), vals.end(), atom.value) - vals.begin());
        selected.emplace_back(tl.sites[i], v);
      }
    }
  }
  if (!selected.empty()) {
    bool ok = true;
    for (std::size_t a = 0; a < selected.size(); ++a)
      for (std::size_t b = a + 1; b < selected.size(); ++b) ok &= disjoint(selected[a].first, selected[b].first);
    if (ok) out.selection_probability = quantum::joint_probability(tl.current, selected).str();
  }
}

}  // namespace detail

/// Runs the experiment's physics and extracts the pairwise outcome
/// supports the reasoning is built on.
inline PhysicsResult run_physics(const dsl::Experiment& exp) {
  PhysicsResult out;
  out.variables = detail::variables(exp);
  if (exp.theory == dsl::Theory::kBoxWorld) {
    detail::box_physics(exp, out);
  } else {
    detail::quantum_physics(exp, out);
  }
  return out;
}

}  // namespace paradox::harness
