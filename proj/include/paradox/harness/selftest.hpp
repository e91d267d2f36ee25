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

#include <functional>
#include <string>
#include <vector>

#include "paradox/gpt/polytope.hpp"
#include "paradox/harness/run.hpp"
#include "paradox/memory/memory_update.hpp"
#include "paradox/quantum/ket.hpp"

namespace paradox::harness {

/// The bundled four-agent PR-box experiment, kept in sync with
/// experiments/pr_box.exp by the test suite.
inline constexpr const char* kPrBoxExperiment = R"(# Four agents around a shared PR box. Alice and Bob measure their halves;
# Ursula and Wigner then measure the labs of Alice and Bob with flipped
# settings.
THEORY boxworld

STATE
  system P gbit
  system R gbit
  init pr_box P R

AGENTS
  A time 1 memory MA gbit
  B time 2 memory MB gbit
  U time 3
  W time 4

EVENTS
  1 A measures P setting X = 0 outcome a
  2 B measures R setting Y = 0 outcome b
  3 U measures lab A setting X~ = X ^ 1 outcome a~
  4 W measures lab B setting Y~ = Y ^ 1 outcome b~

MODEL
  U models A update copy
  W models B update copy

TRUST
  A@1 -> B@2
  B@2 -> U@3
  U@3 -> W@4
  W@4 -> A@1

QUERY find-contradiction
)";

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SelftestScope {
  bool theorems = false;
  bool quantum = false;
  bool logic = false;
};

namespace detail {

inline CheckResult check(const std::string& name, const std::function<std::string()>& body) {
  try {
    auto failure = body();
    return {name, failure.empty(), failure};
  } catch (const std::exception& e) {
    return {name, false, std::string("exception: ") + e.what()};
  }
}

inline std::vector<CheckResult> theorem_checks() {
  std::vector<CheckResult> out;
  out.push_back(check("one-gbit polytope has 4 vertices", [] {
    auto v = gpt::enumerate_ns_vertices(gpt::SystemSignature::gbits(1));
    return v.size() == 4 ? "" : "found " + std::to_string(v.size());
  }));
  out.push_back(check("two-gbit polytope: 24 no-signalling vertices, 8 above the local CHSH bound", [] {
    auto v = gpt::enumerate_ns_vertices(gpt::SystemSignature::gbits(2));
    std::size_t ns = 0, nonlocal = 0;
    for (const auto& s : v) {
      ns += gpt::is_no_signalling(s).ok;
      nonlocal += gpt::max_chsh_value(s) > 3;
    }
    if (v.size() != 24 || ns != 24 || nonlocal != 8) {
      return "vertices " + std::to_string(v.size()) + ", no-signalling " + std::to_string(ns) + ", nonlocal " +
             std::to_string(nonlocal);
    }
    return std::string();
  }));
  out.push_back(check("memory update is a valid operation on every two-gbit vertex", [] {
    auto rep = gpt::validate_operation(memory::build_memory_update().base,
                                       gpt::enumerate_ns_vertices(gpt::SystemSignature::gbits(2)));
    return rep.ok ? "" : std::string("violation found");
  }));
  out.push_back(check("memory update is information preserving", [] {
    return memory::check_information_preserving(memory::build_memory_update()).ok ? "" : std::string("counterexample found");
  }));
  out.push_back(check("effective boxes after both updates reproduce every two-gbit vertex and the PR box", [] {
    std::size_t bad = 0;
    for (const auto& v : gpt::enumerate_ns_vertices(gpt::SystemSignature::gbits(2))) bad += !memory::bipartite_preservation_check(v).ok;
    if (!memory::bipartite_preservation_check(gpt::make_pr_box()).ok) ++bad;
    return bad == 0 ? "" : std::to_string(bad) + " failures";
  }));
  out.push_back(check("updated (1,0) gbit is superglued, (1/2,1/2) is not", [] {
    auto map = memory::build_memory_update();
    auto glued = [&](Rational p, Rational q) {
      auto after = memory::apply_update(map, gpt::make_gbit(p, q), 0);
      return memory::detect_superglue(after.reinterpret(map.layout.unmerged()), 1).superglued;
    };
    if (!glued(1, 0)) return std::string("(1,0) not flagged");
    if (glued(Rational(1, 2), Rational(1, 2))) return std::string("(1/2,1/2) flagged");
    return std::string();
  }));
  return out;
}

inline std::vector<CheckResult> quantum_checks() {
  using namespace quantum;
  std::vector<CheckResult> out;
  // Qubits P, R, MA, MB after both memories copied their system.
  auto final_ket = [] {
    auto k = tensor(tensor(hardy_state(), Ket::basis(1, 0)), Ket::basis(1, 0));
    return cnot_memory(cnot_memory(k, 0, 2), 1, 3);
  };
  out.push_back(check("P(u=ok, w=ok) = 1/12", [&] {
    auto p = joint_probability(final_ket(), {{okfail_measurement(0, 2), 0}, {okfail_measurement(1, 3), 0}});
    return p == Surd(Rational(1, 12)) ? "" : "got " + p.str();
  }));
  out.push_back(check("support zeros: u=ok forces b=1, b=1 forces a=1, a=1 forces w=fail", [&] {
    auto k = final_ket();
    auto zero = [&](const Measurement& m1, std::size_t o1, const Measurement& m2, std::size_t o2) {
      return joint_probability(k, {{m1, o1}, {m2, o2}}).is_zero();
    };
    if (!zero(okfail_measurement(0, 2), 0, z_measurement(3), 0)) return std::string("P(u=ok, b=0) != 0");
    if (!zero(z_measurement(3), 1, z_measurement(2), 0)) return std::string("P(b=1, a=0) != 0");
    if (!zero(z_measurement(2), 1, okfail_measurement(1, 3), 0)) return std::string("P(a=1, w=ok) != 0");
    return std::string();
  }));
  return out;
}

inline std::vector<CheckResult> logic_checks() {
  std::vector<CheckResult> out;
  out.push_back(check("PR-box experiment: a replayable certificate for each of A, B, U, W", [] {
    auto rep = run_source(kPrBoxExperiment);
    const std::vector<std::string> want{"K_A[(a=0 => a=1) & (a=1 => a=0)]", "K_B[(b=0 => b=1) & (b=1 => b=0)]",
                                        "K_U[(a~=0 => a~=1) & (a~=1 => a~=0)]", "K_W[(b~=0 => b~=1) & (b~=1 => b~=0)]"};
    const auto& certs = rep.reasoning.certificates;
    if (certs.size() != want.size()) return "found " + std::to_string(certs.size()) + " certificates";
    for (std::size_t i = 0; i < want.size(); ++i) {
      if (certs[i].statement != want[i]) return "certificate " + certs[i].statement;
      if (!rep.reasoning.kb.replay(certs[i].derivation).ok) return "replay failed for " + want[i];
    }
    return std::string();
  }));
  out.push_back(check("PR-box chain for W: nested statements and trust collapse", [] {
    auto rep = run_source(kPrBoxExperiment);
    const auto& kb = rep.reasoning.kb;
    const auto& w = rep.reasoning.certificates.back();
    std::string trace = kb.trace(w.derivation);
    for (const char* step : {"| K_W(b~=0 => a~=1) |", "| K_W K_U(a~=1 => b=1) |", "| K_W K_U K_B(b=1 => a=1) |",
                             "| K_W K_U K_B K_A(a=1 => b~=1) |",
                             "trust | K_W K_U K_B K_A(a=1 => b~=1) | K_W K_U K_B(a=1 => b~=1) | A -> B",
                             "trust | K_W K_U K_B(a=1 => b~=1) | K_W K_U(a=1 => b~=1) | B -> U",
                             "trust | K_W K_U(a=1 => b~=1) | K_W(a=1 => b~=1) | U -> W"}) {
      if (trace.find(step) == std::string::npos) return std::string("missing: ") + step;
    }
    return std::string();
  }));
  out.push_back(check("without the W -> A edge no certificate is derived", [] {
    ReasoningOptions opt;
    opt.drop_trust.push_back({{"W", 4}, {"A", 1}});
    auto rep = run_source(kPrBoxExperiment, opt);
    return rep.reasoning.certificates.empty() ? "" : std::string("certificate still derived");
  }));
  return out;
}

}  // namespace detail

inline std::vector<CheckResult> selftest(const SelftestScope& scope) {
  std::vector<CheckResult> out;
  auto add = [&](std::vector<CheckResult> v) { out.insert(out.end(), v.begin(), v.end()); };
  if (scope.theorems) add(detail::theorem_checks());
  if (scope.quantum) add(detail::quantum_checks());
  if (scope.logic) add(detail::logic_checks());
  return out;
}

}  // namespace paradox::harness
