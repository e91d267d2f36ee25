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
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "paradox/errors.hpp"
#include "paradox/gpt/transformation.hpp"

namespace paradox::gpt {

/// Single-system relabelling: new setting s reads old setting
/// setting_map[s], and old outcome o is reported as outcome_maps[s][o].
struct Relabeling {
  std::vector<std::size_t> setting_map;
  std::vector<std::vector<std::size_t>> outcome_maps;
  std::size_t output_outcomes = 0;  // 0 means "same as input"
};

/// Sequential two-system measurement: measure the first system with
/// `first_setting`, choose the second setting from the first outcome, and
/// report outcome[a'][b'].
struct BipartiteMeasurement {
  std::size_t first_setting = 0;
  std::vector<std::size_t> second_setting;           // indexed by a'
  std::vector<std::vector<std::size_t>> outcome;     // [a'][b'] -> final outcome
  std::size_t num_outcomes = 2;
};

/// Two-system transformation circuit onto `output`. For every output joint
/// setting s: X' = first_setting[s], Y' = second_setting[s][a'], and the
/// output joint outcome is outcome[s][a'][b'].
struct BipartiteTransformation {
  SystemSignature output;
  std::vector<std::size_t> first_setting;
  std::vector<std::vector<std::size_t>> second_setting;
  std::vector<std::vector<std::vector<std::size_t>>> outcome;

  /// Tabulates the circuit from callables. f1(s), f2(s, a'), f3(s, a', b')
  /// receive the output joint setting index.
  template <class F1, class F2, class F3>
  static BipartiteTransformation from_functions(const SystemSignature& input, SystemSignature output, F1 f1, F2 f2, F3 f3) {
    if (input.size() != 2) throw StructuralError("bipartite circuit needs a two-subsystem input");
    BipartiteTransformation t{std::move(output), {}, {}, {}};
    const std::size_t ka = input[0].outcomes, kb = input[1].outcomes;
    for (std::size_t s = 0; s < t.output.joint_settings(); ++s) {
      t.first_setting.push_back(f1(s));
      t.second_setting.emplace_back();
      t.outcome.emplace_back();
      for (std::size_t a = 0; a < ka; ++a) {
        t.second_setting.back().push_back(f2(s, a));
        t.outcome.back().emplace_back();
        for (std::size_t b = 0; b < kb; ++b) t.outcome.back().back().push_back(f3(s, a, b));
      }
    }
    return t;
  }
};

struct Wiring;

struct WeightedWiring {
  Rational weight;
  std::shared_ptr<const Wiring> wiring;
};

struct Mixture {
  std::vector<WeightedWiring> parts;
};

struct Wiring {
  std::variant<Relabeling, BipartiteMeasurement, BipartiteTransformation, Mixture> kind;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw StructuralError("malformed wiring: " + what);
}

inline Transformation compile(const Relabeling& w, const SystemSignature& sig) {
  require(sig.size() == 1, "relabelling acts on a single subsystem");
  const auto in = sig[0];
  const std::size_t n_out = w.setting_map.size();
  const std::size_t k_out = w.output_outcomes ? w.output_outcomes : in.outcomes;
  require(n_out > 0, "no settings");
  require(w.outcome_maps.size() == n_out, "one outcome map per setting");
  SystemSignature out{Subsystem{n_out, k_out}};
  SparseMatrix m(out.dimension(), sig.dimension());
  for (std::size_t s = 0; s < n_out; ++s) {
    require(w.setting_map[s] < in.settings, "setting out of range");
    require(w.outcome_maps[s].size() == in.outcomes, "outcome map has wrong length");
    for (std::size_t o = 0; o < in.outcomes; ++o) {
      require(w.outcome_maps[s][o] < k_out, "outcome out of range");
      m.add(s * k_out + w.outcome_maps[s][o], w.setting_map[s] * in.outcomes + o, 1);
    }
  }
  return Transformation(sig, out, {{"id", std::move(m)}});
}

inline Transformation compile(const BipartiteMeasurement& w, const SystemSignature& sig) {
  require(sig.size() == 2, "bipartite measurement needs two subsystems");
  const auto A = sig[0], B = sig[1];
  require(w.first_setting < A.settings, "first setting out of range");
  require(w.second_setting.size() == A.outcomes, "second setting table has wrong length");
  require(w.outcome.size() == A.outcomes, "outcome table has wrong length");
  require(w.num_outcomes > 0, "no outcomes");
  SystemSignature out{Subsystem{1, 1}};
  std::vector<SparseMatrix> mats(w.num_outcomes, SparseMatrix(1, sig.dimension()));
  for (std::size_t a = 0; a < A.outcomes; ++a) {
    require(w.second_setting[a] < B.settings, "second setting out of range");
    require(w.outcome[a].size() == B.outcomes, "outcome row has wrong length");
    for (std::size_t b = 0; b < B.outcomes; ++b) {
      require(w.outcome[a][b] < w.num_outcomes, "final outcome out of range");
      std::size_t col = sig.index(std::vector<std::size_t>{w.first_setting, w.second_setting[a]}, std::vector<std::size_t>{a, b});
      mats[w.outcome[a][b]].add(0, col, 1);
    }
  }
  std::vector<Branch> branches;
  for (std::size_t i = 0; i < mats.size(); ++i) branches.push_back({std::to_string(i), std::move(mats[i])});
  return Transformation(sig, out, std::move(branches));
}

inline Transformation compile(const BipartiteTransformation& w, const SystemSignature& sig) {
  require(sig.size() == 2, "bipartite transformation needs two subsystems");
  const auto A = sig[0], B = sig[1];
  const auto& out = w.output;
  const std::size_t ns = out.joint_settings(), ko = out.joint_outcomes();
  require(w.first_setting.size() == ns && w.second_setting.size() == ns && w.outcome.size() == ns,
          "tables must cover every output setting");
  SparseMatrix m(out.dimension(), sig.dimension());
  for (std::size_t s = 0; s < ns; ++s) {
    require(w.first_setting[s] < A.settings, "X' out of range");
    require(w.second_setting[s].size() == A.outcomes && w.outcome[s].size() == A.outcomes, "tables must cover every a'");
    for (std::size_t a = 0; a < A.outcomes; ++a) {
      require(w.second_setting[s][a] < B.settings, "Y' out of range");
      require(w.outcome[s][a].size() == B.outcomes, "tables must cover every b'");
      for (std::size_t b = 0; b < B.outcomes; ++b) {
        require(w.outcome[s][a][b] < ko, "output outcome out of range");
        std::size_t col =
            sig.index(std::vector<std::size_t>{w.first_setting[s], w.second_setting[s][a]}, std::vector<std::size_t>{a, b});
        m.add(s * ko + w.outcome[s][a][b], col, 1);
      }
    }
  }
  return Transformation(sig, out, {{"id", std::move(m)}});
}

}  // namespace detail

inline Transformation compile_wiring(const Wiring& wiring, const SystemSignature& sig);

namespace detail {

inline Transformation compile(const Mixture& w, const SystemSignature& sig) {
  require(!w.parts.empty(), "empty mixture");
  Rational total;
  std::optional<Transformation> acc;
  for (const auto& part : w.parts) {
    require(part.wiring != nullptr, "null mixture component");
    require(part.weight >= 0, "negative mixture weight");
    total += part.weight;
    auto t = compile_wiring(*part.wiring, sig);
    if (!acc) {
      std::vector<Branch> scaled;
      for (const auto& b : t.branches()) scaled.push_back({b.label, b.matrix.scaled(part.weight)});
      acc.emplace(t.input_signature(), t.output_signature(), std::move(scaled));
      continue;
    }
    require(t.output_signature() == acc->output_signature() && t.branches().size() == acc->branches().size(),
            "mixture components disagree in shape");
    std::vector<Branch> sum;
    for (std::size_t i = 0; i < t.branches().size(); ++i) {
      require(t.branches()[i].label == acc->branches()[i].label, "mixture components disagree in branch labels");
      sum.push_back({t.branches()[i].label, acc->branches()[i].matrix + t.branches()[i].matrix.scaled(part.weight)});
    }
    acc.emplace(acc->input_signature(), acc->output_signature(), std::move(sum));
  }
  require(total == 1, "mixture weights sum to " + total.str());
  return *acc;
}

}  // namespace detail

/// Builds the matrices of a wiring by tracing the circuit over every
/// (setting, outcome) pair.
inline Transformation compile_wiring(const Wiring& wiring, const SystemSignature& sig) {
  return std::visit([&](const auto& w) { return detail::compile(w, sig); }, wiring.kind);
}

/// The eight deterministic relabellings of a gbit: optional setting swap
/// times an optional outcome flip per setting. Index bits: 0 = swap,
/// 1 = flip at new setting 0, 2 = flip at new setting 1.
inline Relabeling gbit_relabeling(unsigned index) {
  bool swap = index & 1;
  Relabeling r;
  r.setting_map = swap ? std::vector<std::size_t>{1, 0} : std::vector<std::size_t>{0, 1};
  for (unsigned s = 0; s < 2; ++s) {
    bool flip = (index >> (s + 1)) & 1;
    r.outcome_maps.push_back(flip ? std::vector<std::size_t>{1, 0} : std::vector<std::size_t>{0, 1});
  }
  return r;
}

inline std::string describe_gbit_relabeling(unsigned index) {
  std::string s = (index & 1) ? "swap settings" : "keep settings";
  if (index & 2) s += ", flip outcome at X=0";
  if (index & 4) s += ", flip outcome at X=1";
  return s;
}

}  // namespace paradox::gpt
