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

#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace paradox::dsl {

enum class Theory { kBoxWorld, kQuantum };
enum class Query { kFindContradiction, kClosureDump };

inline const char* to_string(Theory t) { return t == Theory::kBoxWorld ? "boxworld" : "quantum"; }
inline const char* to_string(Query q) { return q == Query::kFindContradiction ? "find-contradiction" : "closure-dump"; }

// Every declaration remembers its source line for diagnostics. Line numbers
// take no part in equality, so a reprinted experiment compares equal.

struct SystemDecl {
  std::string name;
  std::string type;  // gbit | qubit
  int line = 0;
  auto tie() const { return std::tie(name, type); }
};

struct InitDecl {
  std::string builtin;               // pr_box | hardy | uniform | gbit
  std::vector<std::string> systems;
  std::vector<std::string> params;   // rational literals, as written
  int line = 0;
  auto tie() const { return std::tie(builtin, systems, params); }
};

struct AgentDecl {
  std::string name;
  int time = 0;
  std::optional<std::string> memory;
  std::optional<std::string> memory_type;
  int line = 0;
  auto tie() const { return std::tie(name, time, memory, memory_type); }
};

/// A literal setting, or another event's setting xor a constant.
struct SettingExpr {
  std::optional<std::string> base;
  long long value = 0;
  auto tie() const { return std::tie(base, value); }

  std::string text() const {
    if (!base) return std::to_string(value);
    return *base + " ^ " + std::to_string(value);
  }
};

struct Event {
  int time = 0;
  std::string agent;
  bool lab = false;          // measures another agent's lab (system plus memory)
  std::string target;        // system name, or agent name when `lab`
  std::optional<std::string> setting_name;
  SettingExpr setting;
  std::optional<std::string> basis;  // quantum measurements
  std::string outcome;
  int line = 0;
  auto tie() const { return std::tie(time, agent, lab, target, setting_name, setting, basis, outcome); }
};

struct ModelDecl {
  std::string modeler;
  std::string target;
  std::string policy;
  int line = 0;
  auto tie() const { return std::tie(modeler, target, policy); }
};

struct TrustDecl {
  std::string from;
  int from_time = 0;
  std::string to;
  int to_time = 0;
  int line = 0;
  auto tie() const { return std::tie(from, from_time, to, to_time); }
};

struct SelectAtom {
  std::string variable;
  std::string value;
  auto tie() const { return std::tie(variable, value); }
};

struct Selection {
  std::vector<SelectAtom> atoms;
  std::optional<std::string> by;
  int line = 0;
  auto tie() const { return std::tie(atoms, by); }
};

template <class T>
  requires requires(const T& t) { t.tie(); }
bool operator==(const T& a, const T& b) {
  return a.tie() == b.tie();
}

struct Experiment {
  Theory theory = Theory::kBoxWorld;
  std::vector<SystemDecl> systems;
  std::vector<InitDecl> inits;
  std::vector<AgentDecl> agents;
  std::vector<Event> events;
  std::vector<ModelDecl> models;
  std::vector<TrustDecl> trust;
  std::vector<Selection> selections;
  Query query = Query::kFindContradiction;

  friend bool operator==(const Experiment& a, const Experiment& b) {
    return std::tie(a.theory, a.systems, a.inits, a.agents, a.events, a.models, a.trust, a.selections, a.query) ==
           std::tie(b.theory, b.systems, b.inits, b.agents, b.events, b.models, b.trust, b.selections, b.query);
  }

  const AgentDecl* agent(const std::string& name) const {
    for (const auto& a : agents)
      if (a.name == name) return &a;
    return nullptr;
  }
  const SystemDecl* system(const std::string& name) const {
    for (const auto& s : systems)
      if (s.name == name) return &s;
    return nullptr;
  }
  const Event* event_by(const std::string& agent_name) const {
    for (const auto& e : events)
      if (e.agent == agent_name) return &e;
    return nullptr;
  }
  const Event* event_with_setting(const std::string& setting) const {
    for (const auto& e : events)
      if (e.setting_name && *e.setting_name == setting) return &e;
    return nullptr;
  }
  const ModelDecl* model_of(const std::string& target) const {
    for (const auto& m : models)
      if (m.target == target) return &m;
    return nullptr;
  }
};

/// Canonical text form; parsing it yields an equal experiment.
inline std::string print(const Experiment& e) {
  std::ostringstream os;
  os << "THEORY " << to_string(e.theory) << "\n";
  os << "STATE\n";
  for (const auto& s : e.systems) os << "  system " << s.name << " " << s.type << "\n";
  for (const auto& i : e.inits) {
    os << "  init " << i.builtin;
    for (const auto& s : i.systems) os << " " << s;
    for (const auto& p : i.params) os << " " << p;
    os << "\n";
  }
  os << "AGENTS\n";
  for (const auto& a : e.agents) {
    os << "  " << a.name << " time " << a.time;
    if (a.memory) os << " memory " << *a.memory << " " << a.memory_type.value_or("gbit");
    os << "\n";
  }
  os << "EVENTS\n";
  for (const auto& ev : e.events) {
    os << "  " << ev.time << " " << ev.agent << " measures " << (ev.lab ? "lab " : "") << ev.target;
    if (ev.basis) {
      os << " basis " << *ev.basis;
    } else {
      os << " setting " << ev.setting_name.value_or("S") << " = " << ev.setting.text();
    }
    os << " outcome " << ev.outcome << "\n";
  }
  os << "MODEL\n";
  for (const auto& m : e.models) os << "  " << m.modeler << " models " << m.target << " update " << m.policy << "\n";
  os << "TRUST\n";
  for (const auto& t : e.trust) os << "  " << t.from << "@" << t.from_time << " -> " << t.to << "@" << t.to_time << "\n";
  for (const auto& s : e.selections) {
    os << "SELECT ";
    for (std::size_t i = 0; i < s.atoms.size(); ++i) os << (i ? ", " : "") << s.atoms[i].variable << " = " << s.atoms[i].value;
    if (s.by) os << " by " << *s.by;
    os << "\n";
  }
  os << "QUERY " << to_string(e.query) << "\n";
  return os.str();
}

}  // namespace paradox::dsl
