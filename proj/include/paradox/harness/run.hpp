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

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "paradox/dsl/parser.hpp"
#include "paradox/dsl/validate.hpp"
#include "paradox/harness/physics.hpp"
#include "paradox/harness/reasoning.hpp"

namespace paradox::harness {

inline constexpr int kExitConsistent = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitPhysics = 2;
inline constexpr int kExitContradiction = 10;

inline constexpr const char* kReportSchema = "paradox-lab/run-report/1";

/// The experiment parsed but failed cross-reference checks.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<dsl::Diagnostic> diags)
      : std::runtime_error(join(diags)), diagnostics_(std::move(diags)) {}
  const std::vector<dsl::Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  static std::string join(const std::vector<dsl::Diagnostic>& d) {
    std::string s;
    for (const auto& x : d) s += (s.empty() ? "" : "\n") + x.text();
    return s;
  }
  std::vector<dsl::Diagnostic> diagnostics_;
};

/// 64-bit FNV-1a, printed as 16 hex digits.
inline std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline dsl::Experiment load_experiment(std::string_view source) {
  auto exp = dsl::parse(source);
  auto diags = dsl::validate(exp);
  if (!diags.empty()) throw ValidationError(std::move(diags));
  return exp;
}

struct RunReport {
  std::string digest;
  dsl::Experiment experiment;
  PhysicsResult physics;
  Reasoning reasoning;

  int exit_code() const {
    return reasoning.verdict == Verdict::kContradiction ? kExitContradiction : kExitConsistent;
  }
};

inline RunReport run_source(std::string_view source, const ReasoningOptions& opt = {}) {
  auto exp = load_experiment(source);
  auto phys = run_physics(exp);
  auto r = reason(exp, phys, opt);
  return {fnv1a_hex(source), std::move(exp), std::move(phys), std::move(r)};
}

/// Every log entry of the run, one trace line each.
inline std::string full_trace(const Reasoning& r) {
  std::string out;
  for (std::size_t i = 0; i < r.kb.log().size(); ++i) out += r.kb.trace_line(i) + "\n";
  return out;
}

inline nlohmann::ordered_json trace_entry_json(const logic::KnowledgeBase& kb, std::size_t i) {
  const auto& e = kb.log()[i];
  nlohmann::ordered_json j;
  j["index"] = i;
  j["rule"] = e.rule;
  auto premises = nlohmann::ordered_json::array();
  for (auto p : e.premises) premises.push_back(kb.facts()[p].text());
  j["premises"] = premises;
  if (e.theory) j["theory_entry"] = *e.theory;
  j["conclusion"] = kb.facts()[e.conclusion].text();
  if (e.edge) {
    j["trust_edge"] = {{"from", e.edge->from.key()}, {"to", e.edge->to.key()}};
  } else {
    j["trust_edge"] = nullptr;
  }
  return j;
}

inline nlohmann::ordered_json to_json(const RunReport& rep) {
  using J = nlohmann::ordered_json;
  J j;
  j["schema"] = kReportSchema;
  j["digest"] = "fnv1a64:" + rep.digest;
  j["theory"] = dsl::to_string(rep.experiment.theory);

  J phys;
  J states = J::array();
  for (const auto& s : rep.physics.states) states.push_back({{"time", s.time}, {"label", s.label}, {"state", s.text}});
  phys["states"] = states;
  J pairs = J::array();
  for (const auto& p : rep.physics.pairs) {
    const auto& x = rep.physics.variables[p.first];
    const auto& y = rep.physics.variables[p.second];
    J support = J::array();
    for (std::size_t v = 0; v < p.table.rows(); ++v)
      for (std::size_t w = 0; w < p.table.cols(); ++w)
        if (p.table.possible[v][w]) support.push_back({x.values[v], y.values[w]});
    pairs.push_back({{"agents", {x.owner.key(), y.owner.key()}},
                     {"variables", {x.name, y.name}},
                     {"relation", p.relation},
                     {"support", support}});
  }
  phys["effective_boxes"] = pairs;
  J sg = J::array();
  for (const auto& s : rep.physics.superglue) sg.push_back({{"lab", s.lab}, {"superglued", s.superglued}, {"witness", s.witness}});
  phys["superglue"] = sg;
  if (rep.physics.effective_matches_initial) {
    phys["effective_matches_initial"] = *rep.physics.effective_matches_initial;
  } else {
    phys["effective_matches_initial"] = nullptr;
  }
  if (rep.physics.selection_probability) {
    phys["selection_probability"] = *rep.physics.selection_probability;
  } else {
    phys["selection_probability"] = nullptr;
  }
  j["physics"] = phys;

  const auto& kb = rep.reasoning.kb;
  J logic;
  logic["theory_entries"] = kb.theory().size();
  logic["facts"] = rep.reasoning.closure.facts;
  logic["rounds"] = rep.reasoning.closure.rounds;
  logic["depth_bound"] = kb.options().depth;
  logic["paths_truncated"] = rep.reasoning.closure.paths_truncated;
  J certs = J::array();
  for (const auto& c : rep.reasoning.certificates) {
    J d = J::array();
    for (auto i : c.derivation) d.push_back(trace_entry_json(kb, i));
    certs.push_back({{"agent", c.agent.key()},
                     {"variable", c.variable},
                     {"form", c.form},
                     {"statement", c.statement},
                     {"replayed", kb.replay(c.derivation).ok},
                     {"derivation", d}});
  }
  logic["certificates"] = certs;
  logic["status"] = to_string(rep.reasoning.verdict);
  j["logic"] = logic;
  j["exit_code"] = rep.exit_code();
  return j;
}

inline std::string trace_json(const Reasoning& r) {
  auto arr = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < r.kb.log().size(); ++i) arr.push_back(trace_entry_json(r.kb, i));
  return arr.dump(2) + "\n";
}

/// Every fact of the closed knowledge base, one per line.
inline std::string closure_dump(const Reasoning& r) {
  std::string out;
  for (const auto& f : r.kb.facts()) out += "fact " + f.text() + "\n";
  return out;
}

/// Human-readable run summary for standard output.
inline std::string summary(const RunReport& rep) {
  std::ostringstream os;
  os << "experiment " << rep.digest << " (" << dsl::to_string(rep.experiment.theory) << ")\n";
  for (const auto& p : rep.physics.pairs) {
    const auto& x = rep.physics.variables[p.first];
    const auto& y = rep.physics.variables[p.second];
    os << "  support " << x.owner.name << "/" << y.owner.name << ": " << p.relation << "\n";
  }
  if (rep.physics.effective_matches_initial) {
    os << "  effective box after memory updates "
       << (*rep.physics.effective_matches_initial ? "equals" : "differs from") << " the initial state\n";
  }
  for (const auto& s : rep.physics.superglue) {
    os << "  lab " << s.lab << (s.superglued ? " superglued: " + s.witness : " not superglued") << "\n";
  }
  if (rep.physics.selection_probability) os << "  post-selection probability " << *rep.physics.selection_probability << "\n";
  const auto& r = rep.reasoning;
  os << "closure: " << r.closure.facts << " facts, " << r.kb.theory().size() << " theory entries, " << r.closure.rounds
     << " rounds\n";
  for (const auto& c : r.certificates) {
    os << "certificate " << c.agent.key() << ": " << c.statement << " (" << c.form << ", " << c.derivation.size()
       << " steps)\n";
  }
  os << "status: " << to_string(r.verdict) << "\n";
  return os.str();
}

}  // namespace paradox::harness
