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
#include <stdexcept>
#include <string>
#include <vector>

#include "paradox/dsl/experiment.hpp"
#include "paradox/harness/physics.hpp"

namespace paradox::harness {

/// Bad arguments to explain (unknown agent, time outside the timeline).
class ExplainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

/// Fiducial X/Y/Z statistics of `qubits` of `k`, in the box-world layout on
/// signature (3,2)^n. Works for reduced (mixed) states as well.
inline std::vector<quantum::Surd> fiducial_on(const quantum::Ket& k, const std::vector<std::size_t>& qubits) {
  gpt::SystemSignature sig(std::vector<gpt::Subsystem>(qubits.size(), gpt::kQubitFiducial));
  std::vector<quantum::Surd> out(sig.dimension());
  for (std::size_t s = 0; s < sig.joint_settings(); ++s) {
    auto settings = sig.decode_settings(s);
    for (std::size_t o = 0; o < sig.joint_outcomes(); ++o) {
      auto outcomes = sig.decode_outcomes(o);
      std::vector<std::pair<quantum::Measurement, std::size_t>> ev;
      for (std::size_t i = 0; i < qubits.size(); ++i) {
        auto q = qubits[i];
        ev.emplace_back(settings[i] == 0   ? quantum::x_measurement(q)
                        : settings[i] == 1 ? quantum::y_measurement(q)
                                           : quantum::z_measurement(q),
                        outcomes[i]);
      }
      out[s * sig.joint_outcomes() + o] = quantum::joint_probability(k, ev);
    }
  }
  return out;
}

inline std::string fiducial_text(const std::vector<quantum::Surd>& v, std::size_t per_block) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) {
    os << (i % per_block == 0 ? (i ? " |" : "") : "") << " " << v[i].str();
  }
  return os.str();
}

/// The normalised state of the other qubits after outcome `v` of a
/// single-qubit measurement, or nullopt when the norm is not in the field.
inline std::optional<quantum::Ket> condition(const quantum::Ket& k, const quantum::Measurement& m, std::size_t v,
                                             quantum::Surd& probability) {
  probability = quantum::joint_probability(k, {{m, v}});
  if (probability.is_zero() || !probability.is_rational()) return std::nullopt;
  auto root = quantum::Surd::sqrt(probability.rational_part());
  if (!root) return std::nullopt;
  auto amp = quantum::contract(k.amplitudes(), k.qubits(), m.qubits, m.vectors[v]);
  for (auto& a : amp) a = a / *root;
  return quantum::Ket(k.qubits() - m.qubits.size(), std::move(amp));
}

inline std::string other_qubits_label(const std::vector<std::string>& names, const std::vector<std::size_t>& removed) {
  std::string s;
  for (std::size_t q = 0; q < names.size(); ++q)
    if (std::find(removed.begin(), removed.end(), q) == removed.end()) s += (s.empty() ? "" : ",") + names[q];
  return s;
}

}  // namespace detail

/// What each agent (or only `agent`) describes at time `t`: the initial
/// state at t=0, conditional boxes for agents who measured a system, and
/// effective boxes shared with other parties for agents who measured a lab.
inline std::string explain(const dsl::Experiment& exp, int t, const std::optional<std::string>& agent = std::nullopt) {
  int last = 0;
  for (const auto& e : exp.events) last = std::max(last, e.time);
  if (t < 0 || t > last) throw ExplainError("time " + std::to_string(t) + " is outside the timeline 0.." + std::to_string(last));
  if (agent && !exp.agent(*agent)) throw ExplainError("no agent named '" + *agent + "'");
  const bool box = exp.theory == dsl::Theory::kBoxWorld;
  std::ostringstream os;

  if (t == 0) {
    os << "t=0 initial state\n";
    if (box) {
      os << gpt::to_text(detail::initial_box_state(exp));
    } else {
      auto layout = detail::qubit_layout(exp);
      auto k = detail::initial_ket(exp, layout);
      os << "ket " << k.str() << "\n";
      for (std::size_t i = 0; i < exp.systems.size(); ++i) {
        os << "fiducial " << exp.systems[i].name << ":" << detail::fiducial_text(detail::fiducial_on(k, {layout.system[i]}), 2)
           << "\n";
      }
    }
    return os.str();
  }

  auto phys = run_physics(exp);
  std::optional<detail::BoxTimeline> btl;
  std::optional<StateVector> eff;
  std::optional<detail::QuantumTimeline> qtl;
  std::vector<std::string> qubit_names;
  if (box) {
    btl = detail::box_timeline(exp, t);
    eff = detail::effective_state(*btl);
  } else {
    qtl = detail::quantum_timeline(exp, t);
    for (const auto& s : exp.systems) qubit_names.push_back(s.name);
    for (const auto& a : exp.agents)
      if (a.memory) qubit_names.push_back(*a.memory);
  }

  for (std::size_t ei = 0; ei < exp.events.size(); ++ei) {
    const auto& e = exp.events[ei];
    if (agent && e.agent != *agent) continue;
    os << "viewpoint " << e.agent << "@" << e.time << " at t=" << t << "\n";
    if (e.time > t) {
      os << "  has not measured yet\n";
      continue;
    }
    const auto& x = phys.variables[ei];
    if (!e.lab) {
      if (box) {
        auto sys = detail::system_index(exp, e.target);
        auto setting = detail::box_setting(exp, e);
        for (std::size_t v = 0; v < x.values.size(); ++v) {
          auto own = gpt::marginal(*eff, {sys});
          if (own.at({setting}, {v}).is_zero()) continue;
          auto cb = gpt::conditional_box(*eff, sys, setting, v);
          os << "  given " << x.name << "=" << x.values[v] << " (probability " << cb.probability.str()
             << "), box on the other systems:\n";
          std::istringstream lines(gpt::to_text(cb.rest));
          for (std::string l; std::getline(lines, l);) os << "    " << l << "\n";
        }
      } else {
        const auto& m = qtl->sites[ei];
        for (std::size_t v = 0; v < m.vectors.size(); ++v) {
          quantum::Surd p;
          auto rest = detail::condition(qtl->current, m, v, p);
          if (p.is_zero()) continue;
          os << "  given " << x.name << "=" << x.values[v] << " (probability " << p.str() << ")\n";
          if (!rest) {
            os << "    conditional state not representable exactly\n";
            continue;
          }
          os << "    state of " << detail::other_qubits_label(qubit_names, m.qubits) << ": " << rest->str() << "\n";
          // Boxes handed to the agents who later measure a lab.
          for (const auto& later : exp.events) {
            if (!later.lab || later.time <= e.time) continue;
            const auto& site = qtl->sites[static_cast<std::size_t>(&later - exp.events.data())];
            bool overlap = false;
            for (auto q : site.qubits) overlap |= std::find(m.qubits.begin(), m.qubits.end(), q) != m.qubits.end();
            if (overlap) continue;
            std::vector<std::size_t> local;
            for (auto q : site.qubits) local.push_back(q - static_cast<std::size_t>(std::count_if(
                                                              m.qubits.begin(), m.qubits.end(), [&](auto r) { return r < q; })));
            os << "    box for " << later.agent << " (lab " << later.target << "), fiducial X/Y/Z statistics:"
               << detail::fiducial_text(detail::fiducial_on(*rest, local), 4) << "\n";
          }
        }
      }
    }
    for (const auto& p : phys.pairs) {
      std::size_t other = p.first == ei ? p.second : p.second == ei ? p.first : exp.events.size();
      if (other == exp.events.size() || exp.events[other].time > t) continue;
      if (!e.lab && !exp.events[other].lab) {
        if (!box) os << "  shares with " << exp.events[other].agent << ": " << p.relation << "\n";
        continue;
      }
      os << "  effective box with " << exp.events[other].agent << "@" << exp.events[other].time << ": " << p.relation;
      if (box) {
        auto si = detail::event_system(exp, e), so = detail::event_system(exp, exp.events[other]);
        auto pair = gpt::marginal(*eff, {std::min(si, so), std::max(si, so)}, std::vector<std::size_t>(eff->signature().size() - 2, 0));
        os << (pair == gpt::make_pr_box() ? " (PR box)" : "");
        os << " at " << (e.setting_name ? *e.setting_name : x.name) << "=" << detail::box_setting(exp, e) << ", "
           << (exp.events[other].setting_name ? *exp.events[other].setting_name : "") << "="
           << detail::box_setting(exp, exp.events[other]);
      }
      os << "\n";
    }
  }
  return os.str();
}

}  // namespace paradox::harness
