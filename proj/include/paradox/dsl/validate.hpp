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
#include <string>
#include <vector>

#include "paradox/dsl/experiment.hpp"
#include "paradox/rational.hpp"

namespace paradox::dsl {

/// Stable diagnostic codes.
namespace code {
inline constexpr const char* kMemReuse = "E_MEM_REUSE";
inline constexpr const char* kTrustRef = "E_TRUST_REF";
inline constexpr const char* kTimeOrder = "E_TIME_ORDER";
inline constexpr const char* kUndeclared = "E_UNDECLARED";
inline constexpr const char* kSettingRange = "E_SETTING_RANGE";
inline constexpr const char* kModelTarget = "E_MODEL_TARGET";
inline constexpr const char* kAgentTime = "E_AGENT_TIME";
inline constexpr const char* kSelectRef = "E_SELECT_REF";
inline constexpr const char* kDupDecl = "E_DUP_DECL";
inline constexpr const char* kSystemType = "E_SYSTEM_TYPE";
inline constexpr const char* kInitState = "E_INIT_STATE";
}  // namespace code

struct Diagnostic {
  std::string code;
  int line = 0;
  std::string message;

  std::string text() const { return "line " + std::to_string(line) + ": " + code + ": " + message; }
};

/// Outcome labels of a measurement event.
inline std::vector<std::string> outcome_values(const Event& e) {
  if (e.basis && *e.basis == "okfail") return {"ok", "fail"};
  return {"0", "1"};
}

/// Numeric value of a setting expression, following references to earlier
/// events' settings. Nullopt when a reference does not resolve.
inline std::optional<long long> resolve_setting(const Experiment& exp, const SettingExpr& s, int hops = 0) {
  if (!s.base) return s.value;
  if (hops > static_cast<int>(exp.events.size())) return std::nullopt;
  const Event* ref = exp.event_with_setting(*s.base);
  if (!ref || ref->basis) return std::nullopt;
  auto v = resolve_setting(exp, ref->setting, hops + 1);
  if (!v) return std::nullopt;
  return *v ^ s.value;
}

inline std::vector<Diagnostic> validate(const Experiment& exp) {
  std::vector<Diagnostic> out;
  auto diag = [&](const char* c, int line, std::string msg) { out.push_back({c, line, std::move(msg)}); };
  const bool quantum = exp.theory == Theory::kQuantum;
  const std::string want_type = quantum ? "qubit" : "gbit";

  std::set<std::string> names;
  for (const auto& s : exp.systems) {
    if (!names.insert(s.name).second) diag(code::kDupDecl, s.line, "system '" + s.name + "' declared twice");
    if (s.type != want_type) diag(code::kSystemType, s.line, "a " + std::string(to_string(exp.theory)) + " system must be a " + want_type);
  }
  std::set<std::string> agent_names;
  for (const auto& a : exp.agents) {
    if (!agent_names.insert(a.name).second) diag(code::kDupDecl, a.line, "agent '" + a.name + "' declared twice");
    if (a.memory) {
      if (!names.insert(*a.memory).second) diag(code::kDupDecl, a.line, "name '" + *a.memory + "' declared twice");
      if (a.memory_type != want_type) diag(code::kSystemType, a.line, "memory of " + a.name + " must be a " + want_type);
    }
  }

  std::set<std::string> initialised;
  for (const auto& i : exp.inits) {
    for (const auto& s : i.systems) {
      if (!exp.system(s)) diag(code::kUndeclared, i.line, "system '" + s + "' is not declared");
      if (!initialised.insert(s).second) diag(code::kInitState, i.line, "system '" + s + "' initialised twice");
    }
    std::size_t systems = 0, params = 0;
    bool q = false;
    if (i.builtin == "pr_box") systems = 2;
    if (i.builtin == "hardy") systems = 2, q = true;
    if (i.builtin == "gbit") systems = 1, params = 2;
    if (i.builtin == "uniform") systems = i.systems.size();
    if (i.systems.size() != systems || i.params.size() != params) {
      diag(code::kInitState, i.line, "'" + i.builtin + "' takes " + std::to_string(systems) + " systems and " +
                                         std::to_string(params) + " parameters");
    }
    if (q != quantum && i.builtin != "uniform") diag(code::kInitState, i.line, "'" + i.builtin + "' does not belong to this theory");
    for (const auto& p : i.params) {
      try {
        auto r = Rational::parse(p);
        if (r < 0 || r > 1) diag(code::kInitState, i.line, "parameter " + p + " is not a probability");
      } catch (const std::exception&) {
        diag(code::kInitState, i.line, "parameter " + p + " is not a rational number");
      }
    }
  }
  for (const auto& s : exp.systems)
    if (!initialised.count(s.name)) diag(code::kInitState, s.line, "system '" + s.name + "' has no initial state");

  std::set<std::string> outcomes, settings, measured_systems;
  std::map<std::string, int> measuring_agents;
  int last_time = 0;
  for (const auto& e : exp.events) {
    const AgentDecl* a = exp.agent(e.agent);
    if (!a) {
      diag(code::kUndeclared, e.line, "agent '" + e.agent + "' is not declared");
    } else if (a->time != e.time) {
      diag(code::kAgentTime, e.line, "agent " + e.agent + " acts at time " + std::to_string(a->time));
      diag(code::kAgentTime, a->line,
           "agent " + e.agent + " is declared at time " + std::to_string(a->time) + " but its event at line " +
               std::to_string(e.line) + " happens at time " + std::to_string(e.time));
    }
    if (e.time <= last_time) diag(code::kTimeOrder, e.line, "event times must strictly increase");
    last_time = std::max(last_time, e.time);
    if (measuring_agents.count(e.agent)) {
      diag(code::kMemReuse, e.line, "agent " + e.agent + " already recorded an outcome at line " + std::to_string(measuring_agents[e.agent]));
    }
    measuring_agents.emplace(e.agent, e.line);
    if (e.lab) {
      const AgentDecl* t = exp.agent(e.target);
      if (!t) {
        diag(code::kUndeclared, e.line, "lab of undeclared agent '" + e.target + "'");
      } else {
        const Event* inner = exp.event_by(e.target);
        if (!inner || inner->lab || !t->memory) {
          diag(code::kModelTarget, e.line, "agent " + e.target + " has no measured system and memory to measure");
        } else if (inner->time >= e.time) {
          diag(code::kTimeOrder, e.line, "lab of " + e.target + " measured before its measurement");
        }
        const ModelDecl* m = exp.model_of(e.target);
        if (!m || m->modeler != e.agent) diag(code::kModelTarget, e.line, "no MODEL entry for " + e.agent + " modelling " + e.target);
      }
    } else {
      if (!exp.system(e.target)) {
        diag(code::kUndeclared, e.line, "system '" + e.target + "' is not declared");
      } else if (!measured_systems.insert(e.target).second) {
        diag(code::kMemReuse, e.line, "system '" + e.target + "' is measured twice");
      }
    }
    if (e.basis) {
      if (!quantum) diag(code::kSettingRange, e.line, "measurement bases belong to quantum experiments");
      if (quantum && e.lab != (*e.basis == "okfail")) {
        diag(code::kSettingRange, e.line, e.lab ? "lab measurements use basis okfail" : "basis okfail needs a lab");
      }
    } else {
      if (quantum) diag(code::kSettingRange, e.line, "quantum measurements name a basis");
      if (e.setting_name && !settings.insert(*e.setting_name).second) {
        diag(code::kDupDecl, e.line, "setting '" + *e.setting_name + "' declared twice");
      }
      if (e.setting.base && !exp.event_with_setting(*e.setting.base)) {
        diag(code::kUndeclared, e.line, "setting '" + *e.setting.base + "' is not declared");
      } else {
        auto v = resolve_setting(exp, e.setting);
        if (!v || *v < 0 || *v > 1) diag(code::kSettingRange, e.line, "setting " + e.setting.text() + " outside 0..1");
      }
    }
    if (!outcomes.insert(e.outcome).second) diag(code::kDupDecl, e.line, "outcome '" + e.outcome + "' declared twice");
  }

  for (const auto& m : exp.models) {
    if (!exp.agent(m.modeler) || !exp.agent(m.target)) {
      diag(code::kUndeclared, m.line, "MODEL names an undeclared agent");
      continue;
    }
    const Event* inner = exp.event_by(m.target);
    if (!inner || inner->lab) diag(code::kModelTarget, m.line, m.target + " does not measure a system");
    bool measures_lab = false;
    for (const auto& e : exp.events) measures_lab |= e.lab && e.agent == m.modeler && e.target == m.target;
    if (!measures_lab) diag(code::kModelTarget, m.line, m.modeler + " never measures the lab of " + m.target);
    static const std::set<std::string> box{"copy", "swap-flip"}, qm{"cnot"};
    if (!(quantum ? qm : box).count(m.policy)) diag(code::kModelTarget, m.line, "unknown update policy '" + m.policy + "'");
  }

  for (const auto& t : exp.trust) {
    for (auto [n, time] : {std::pair{t.from, t.from_time}, std::pair{t.to, t.to_time}}) {
      const AgentDecl* a = exp.agent(n);
      if (!a || a->time != time) diag(code::kTrustRef, t.line, "no agent " + n + "@" + std::to_string(time));
    }
  }

  for (const auto& s : exp.selections) {
    if (s.by && !exp.agent(*s.by)) diag(code::kSelectRef, s.line, "selecting agent '" + *s.by + "' is not declared");
    for (const auto& a : s.atoms) {
      const Event* ev = nullptr;
      for (const auto& e : exp.events)
        if (e.outcome == a.variable) ev = &e;
      if (!ev) {
        diag(code::kSelectRef, s.line, "'" + a.variable + "' is not an outcome");
        continue;
      }
      auto vals = outcome_values(*ev);
      if (std::find(vals.begin(), vals.end(), a.value) == vals.end()) {
        diag(code::kSelectRef, s.line, "'" + a.value + "' is not a value of " + a.variable);
      }
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Diagnostic& x, const Diagnostic& y) { return x.line < y.line; });
  return out;
}

}  // namespace paradox::dsl
