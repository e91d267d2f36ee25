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
#include <vector>

#include "paradox/errors.hpp"
#include "paradox/gpt/polytope.hpp"
#include "paradox/gpt/transformation.hpp"
#include "paradox/gpt/wiring.hpp"

namespace paradox::memory {

using gpt::StateVector;
using gpt::Subsystem;
using gpt::SystemSignature;
using gpt::Transformation;

enum class StarredPolicy {
  kCopy,      // unmatched setting blocks also copy: a' = m xor a
  kSwapFlip,  // unmatched setting blocks anti-copy: a' = m xor a xor 1
};

inline const char* to_string(StarredPolicy p) { return p == StarredPolicy::kCopy ? "copy" : "swap-flip"; }

inline StarredPolicy parse_policy(const std::string& s) {
  if (s == "copy") return StarredPolicy::kCopy;
  if (s == "swap-flip") return StarredPolicy::kSwapFlip;
  throw DomainError("unknown update policy '" + s + "'");
}

/// A deterministic gbit: outcome `at0` for X=0 and `at1` for X=1.
struct PureGbit {
  std::size_t at0 = 0;
  std::size_t at1 = 0;
  StateVector state() const { return gpt::pure_gbit(at0, at1); }
  friend bool operator==(const PureGbit&, const PureGbit&) = default;
};

/// How a measured system and its memory bits sit inside one glued
/// subsystem. A system with k outcomes needs ceil(log2 k) memory bits, each
/// an (n,2) subsystem sharing the system's n settings.
struct GlueLayout {
  Subsystem system = gpt::kGbit;

  std::size_t memory_bits() const {
    std::size_t b = 0;
    while ((std::size_t{1} << b) < system.outcomes) ++b;
    return b == 0 ? 1 : b;
  }
  Subsystem memory() const { return {system.settings, 2}; }

  SystemSignature unmerged() const {
    std::vector<Subsystem> parts{system};
    for (std::size_t i = 0; i < memory_bits(); ++i) parts.push_back(memory());
    return SystemSignature(parts);
  }
  Subsystem glued() const {
    auto u = unmerged();
    return {u.joint_settings(), u.joint_outcomes()};
  }

  /// Glued setting index where every memory setting equals the system's.
  std::size_t matched_setting(std::size_t x) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i <= memory_bits(); ++i) idx = idx * system.settings + x;
    return idx;
  }
  /// Glued outcome index where the memory bits spell the system outcome,
  /// most significant bit in the first memory.
  std::size_t matched_outcome(std::size_t a) const { return a * (std::size_t{1} << memory_bits()) + a; }

  friend bool operator==(const GlueLayout&, const GlueLayout&) = default;
};

struct MemoryUpdateMap {
  Transformation base;  // unmerged system+memory in, one glued subsystem out
  StarredPolicy policy = StarredPolicy::kCopy;
  GlueLayout layout;
  PureGbit memory_initial;

  /// Initial state of all memory bits, in layout order.
  StateVector memory_state() const {
    std::optional<StateVector> acc;
    for (std::size_t i = 0; i < layout.memory_bits(); ++i) {
      StateVector one = layout.system.settings == 2 && layout.system.outcomes == 2
                            ? memory_initial.state()
                            : StateVector(SystemSignature{layout.memory()}, zero_memory(layout.system.settings));
      acc = acc ? gpt::tensor(*acc, one) : one;
    }
    return *acc;
  }

 private:
  static std::vector<Rational> zero_memory(std::size_t n) {
    std::vector<Rational> e;
    for (std::size_t s = 0; s < n; ++s) {
      e.push_back(1);
      e.push_back(0);
    }
    return e;
  }
};

struct UpdateOptions {
  Subsystem system = gpt::kGbit;
  PureGbit memory_initial{};
  StarredPolicy policy = StarredPolicy::kCopy;
};

/// Block-diagonal controlled-not update. In a block whose memory settings
/// all match the system setting X, memory bit j ends as (initial value) xor
/// (bit j of a), so a fresh memory reads exactly a. Unmatched blocks follow
/// the policy. The output is one glued subsystem.
inline MemoryUpdateMap build_memory_update(const UpdateOptions& opt = {}) {
  GlueLayout layout{opt.system};
  const bool is_gbit = opt.system == gpt::kGbit;
  if (!is_gbit && opt.memory_initial != PureGbit{}) {
    throw DomainError("non-default memory initial states are only supported for gbit systems");
  }
  const auto in = layout.unmerged();
  SystemSignature out{layout.glued()};
  const std::size_t b = layout.memory_bits();
  gpt::SparseMatrix m(out.dimension(), in.dimension());
  const std::size_t k = in.joint_outcomes();
  for (std::size_t s = 0; s < in.joint_settings(); ++s) {
    auto settings = in.decode_settings(s);
    bool matched = true;
    for (std::size_t j = 1; j <= b; ++j) matched = matched && settings[j] == settings[0];
    for (std::size_t o = 0; o < k; ++o) {
      auto outcomes = in.decode_outcomes(o);
      std::size_t a = outcomes[0];
      std::vector<std::size_t> res = outcomes;
      for (std::size_t j = 1; j <= b; ++j) {
        std::size_t bit = (a >> (b - j)) & 1;
        std::size_t c = 0;
        if (is_gbit) c = settings[j] == 0 ? opt.memory_initial.at0 : opt.memory_initial.at1;
        std::size_t flip = (!matched && opt.policy == StarredPolicy::kSwapFlip) ? 1 : 0;
        res[j] = outcomes[j] ^ bit ^ c ^ flip;
      }
      m.set(s * k + in.outcome_index(res), s * k + o, 1);
    }
  }
  return {Transformation(in, out, {{"update", std::move(m)}}), opt.policy, layout, opt.memory_initial};
}

/// The memory-update circuit with the memory's measurement fixed to X2 = 0:
/// measure the system with X, the memory with 0, report (a1, a2 xor a1).
/// Agrees with the block-diagonal update on inputs whose memory is fresh.
inline Transformation fixed_setting_memory_circuit() {
  auto in = SystemSignature::gbits(2);
  auto w = gpt::BipartiteTransformation::from_functions(
      in, SystemSignature{Subsystem{4, 4}}, [](std::size_t s) { return s / 2; }, [](std::size_t, std::size_t) { return 0; },
      [](std::size_t, std::size_t a1, std::size_t a2) { return a1 * 2 + (a2 ^ a1); });
  return gpt::compile_wiring(gpt::Wiring{w}, in);
}

/// Ursula's read-out of a glued gbit pair: measure the system with X~ and
/// the memory with 0, undo the copy and discard the memory.
inline Transformation ursula_readout() {
  auto in = SystemSignature::gbits(2);
  auto w = gpt::BipartiteTransformation::from_functions(
      in, SystemSignature{gpt::kGbit}, [](std::size_t s) { return s; }, [](std::size_t, std::size_t) { return 0; },
      [](std::size_t, std::size_t a, std::size_t) { return a; });
  return gpt::compile_wiring(gpt::Wiring{w}, in).with_input_signature(SystemSignature{Subsystem{4, 4}});
}

/// Applies `map` to subsystem `index` of `state`: fresh memory is appended,
/// moved next to the system and the pair replaced by one glued subsystem.
inline StateVector apply_update(const MemoryUpdateMap& map, const StateVector& state, std::size_t index) {
  const auto& sig = state.signature();
  if (index >= sig.size()) throw StructuralError("update target out of range");
  if (sig[index] != map.layout.system) {
    throw StructuralError("update expects subsystem " + map.layout.system.str() + ", found " + sig[index].str());
  }
  auto with_mem = gpt::tensor(state, map.memory_state());
  const std::size_t n = sig.size(), b = map.layout.memory_bits();
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i <= index; ++i) order.push_back(i);
  for (std::size_t j = 0; j < b; ++j) order.push_back(n + j);
  for (std::size_t i = index + 1; i < n; ++i) order.push_back(i);
  auto placed = gpt::permute(with_mem, order);
  auto full = gpt::embed(map.base, placed.signature(), index, 1 + b);
  return gpt::apply_deterministic(full, placed);
}

/// One-gbit view of a measurement-updated system+memory.
struct EffectiveBoxView {
  StateVector parent;
  StateVector compressed;
  GlueLayout layout;

  std::size_t parent_setting(std::size_t x) const { return layout.matched_setting(x); }
  std::size_t parent_outcome(std::size_t a) const { return layout.matched_outcome(a); }
};

/// Replaces glued subsystem `index` by its effective system: reads only the
/// matched-setting blocks and the outcomes where memory equals system.
inline StateVector compress_subsystem(const StateVector& state, std::size_t index, const GlueLayout& layout = {}) {
  const auto& sig = state.signature();
  if (index >= sig.size()) throw StructuralError("compress target out of range");
  if (sig[index] != layout.glued()) {
    throw StructuralError("subsystem " + std::to_string(index) + " is " + sig[index].str() + ", expected glued " +
                          layout.glued().str());
  }
  const std::size_t n = layout.system.settings, k = layout.system.outcomes;
  std::vector<Subsystem> parts = sig.subsystems();
  parts[index] = layout.system;
  SystemSignature out(parts);
  std::vector<Rational> e(out.dimension());
  gpt::detail::for_each_entry(sig, [&](std::size_t flat, const auto& s, const auto& o) {
    std::optional<std::size_t> x;
    for (std::size_t c = 0; c < n; ++c)
      if (s[index] == layout.matched_setting(c)) x = c;
    if (!x) return;
    std::optional<std::size_t> a;
    for (std::size_t c = 0; c < k; ++c)
      if (o[index] == layout.matched_outcome(c)) a = c;
    if (!a) {
      if (!state[flat].is_zero()) {
        throw DomainError("not a measurement-updated state: matched setting " + std::to_string(*x) +
                          " has weight on mismatched memory outcome " + std::to_string(o[index]));
      }
      return;
    }
    auto ns = s;
    auto no = o;
    ns[index] = *x;
    no[index] = *a;
    e[out.index(ns, no)] = state[flat];
  });
  try {
    return StateVector(std::move(out), std::move(e));
  } catch (const DomainError& ex) {
    throw DomainError(std::string("not a measurement-updated state: ") + ex.what());
  }
}

/// Accepts either one glued subsystem or the unmerged system+memory list.
inline EffectiveBoxView compress(const StateVector& state, const GlueLayout& layout = {}) {
  StateVector glued = state.signature() == layout.unmerged() ? state.reinterpret(SystemSignature{layout.glued()}) : state;
  if (glued.signature() != SystemSignature{layout.glued()}) {
    throw StructuralError("compress expects a glued " + layout.glued().str() + " state, got " + state.signature().str());
  }
  return {glued, compress_subsystem(glued, 0, layout), layout};
}

struct PreservationCounterexample {
  unsigned relabeling = 0;
  std::string relabeling_name;
  std::size_t vertex = 0;
  std::string detail;
};

struct PreservationReport {
  bool ok = true;
  std::optional<PreservationCounterexample> counterexample;
  explicit operator bool() const { return ok; }
};

/// For every deterministic gbit relabelling E and every gbit vertex P,
/// checks that the lifted operation update(E(compress(update(P)))) has the
/// effective statistics E(P).
inline PreservationReport check_information_preserving(const MemoryUpdateMap& update) {
  if (update.layout.system != gpt::kGbit) throw StructuralError("information preservation is checked for gbit updates");
  const auto vertices = gpt::enumerate_ns_vertices(SystemSignature{gpt::kGbit});
  const SystemSignature gbit{gpt::kGbit};
  for (unsigned r = 0; r < 8; ++r) {
    auto op = gpt::compile_wiring(gpt::Wiring{gpt::gbit_relabeling(r)}, gbit);
    for (std::size_t v = 0; v < vertices.size(); ++v) {
      auto fail = [&](std::string why) {
        return PreservationReport{false, PreservationCounterexample{r, gpt::describe_gbit_relabeling(r), v, std::move(why)}};
      };
      auto expected = gpt::apply_deterministic(op, vertices[v]);
      try {
        auto stored = apply_update(update, vertices[v], 0);
        auto lifted = apply_update(update, gpt::apply_deterministic(op, compress(stored, update.layout).compressed), 0);
        auto got = compress(lifted, update.layout).compressed;
        if (got != expected) return fail("effective statistics " + gpt::to_text(got) + "differ from " + gpt::to_text(expected));
      } catch (const Error& e) {
        return fail(e.what());
      }
    }
  }
  return {true, std::nullopt};
}

struct BipartitePreservation {
  bool ok = false;
  StateVector after_bob;  // [P, RB]
  StateVector glued;      // [PA, RB]
  StateVector effective;  // [A~, B~]
};

/// Bob updates R with a fresh memory, Alice updates P with a fresh memory,
/// then both glued pairs are compressed and compared with `initial`.
inline BipartitePreservation bipartite_preservation_check(const StateVector& initial, const MemoryUpdateMap& update) {
  if (initial.signature() != SystemSignature::gbits(2)) throw StructuralError("expected a two-gbit state");
  auto after_bob = apply_update(update, initial, 1);
  auto glued = apply_update(update, after_bob, 0);
  auto effective = compress_subsystem(compress_subsystem(glued, 0, update.layout), 1, update.layout);
  return {effective == initial, after_bob, glued, effective};
}

inline BipartitePreservation bipartite_preservation_check(const StateVector& initial) {
  return bipartite_preservation_check(initial, build_memory_update());
}

struct SuperglueReport {
  bool superglued = false;
  std::optional<gpt::SignallingWitness> witness;
};

/// Reads `state` as left (first `left_count` subsystems) versus right and
/// reports whether the two sides signal to each other.
inline SuperglueReport detect_superglue(const StateVector& state, std::size_t left_count) {
  const auto& sig = state.signature();
  if (left_count == 0 || left_count >= sig.size()) throw StructuralError("split must leave both sides nonempty");
  auto two = sig.merged(0, left_count);
  two = two.merged(1, two.size() - 1);
  auto ns = gpt::is_no_signalling(state.reinterpret(two));
  return {!ns.ok, ns.witness};
}

/// Same, for a state whose parts were merged: `split` gives the two sides.
inline SuperglueReport detect_superglue(const StateVector& state, const SystemSignature& split) {
  if (split.size() != 2) throw StructuralError("split must name exactly two sides");
  auto ns = gpt::is_no_signalling(state.reinterpret(split));
  return {!ns.ok, ns.witness};
}

/// The update matrix in block form, one setting block per group of rows.
inline std::string format_update_blocks(const MemoryUpdateMap& map) {
  const auto& m = map.base.branches().front().matrix;
  const auto& in = map.base.input_signature();
  const std::size_t k = in.joint_outcomes();
  std::ostringstream os;
  os << "memory update (" << to_string(map.policy) << "), input " << in.str() << ", output "
     << map.base.output_signature().str() << "\n";
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (r % k == 0) {
      auto s = in.decode_settings(r / k);
      os << "block X=" << s[0] << " X'=";
      for (std::size_t j = 1; j < s.size(); ++j) os << s[j];
      os << "\n";
    }
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c % k == 0 && c) os << " |";
      os << ' ' << m.at(r, c).str();
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace paradox::memory
