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
#include <string>
#include <vector>

#include "paradox/errors.hpp"
#include "paradox/gpt/state_vector.hpp"
#include "paradox/quantum/field.hpp"

namespace paradox::quantum {

inline constexpr std::size_t kMaxQubits = 4;

/// Normalized pure state of up to four qubits with exact amplitudes.
/// Basis index bit (n-1-q) is qubit q, so qubit 0 is the leftmost ket label.
class Ket {
 public:
  Ket(std::size_t qubits, std::vector<Complex> amplitudes) : n_(qubits), amp_(std::move(amplitudes)) {
    if (n_ == 0 || n_ > kMaxQubits) throw StructuralError("kets have 1 to 4 qubits");
    if (amp_.size() != (std::size_t{1} << n_)) throw StructuralError("amplitude count does not match qubit count");
    Surd norm;
    for (const auto& a : amp_) norm += a.norm2();
    if (norm != Surd(1)) throw DomainError("ket is not normalized: squared norm " + norm.str());
  }

  static Ket basis(std::size_t qubits, std::size_t index) {
    std::vector<Complex> a(std::size_t{1} << qubits);
    a.at(index) = 1;
    return Ket(qubits, std::move(a));
  }

  std::size_t qubits() const { return n_; }
  const std::vector<Complex>& amplitudes() const { return amp_; }
  const Complex& amplitude(std::size_t index) const { return amp_.at(index); }

  std::size_t bit(std::size_t index, std::size_t qubit) const { return (index >> (n_ - 1 - qubit)) & 1; }

  friend bool operator==(const Ket&, const Ket&) = default;

  std::string str() const {
    std::string s;
    for (std::size_t i = 0; i < amp_.size(); ++i) {
      if (amp_[i].is_zero()) continue;
      if (!s.empty()) s += " + ";
      s += "(" + amp_[i].str() + ")|";
      for (std::size_t q = 0; q < n_; ++q) s += static_cast<char>('0' + bit(i, q));
      s += ">";
    }
    return s;
  }

 private:
  std::size_t n_;
  std::vector<Complex> amp_;
};

inline Surd inv_sqrt2() { return Surd(0, Rational(1, 2), 0, 0); }
inline Surd inv_sqrt3() { return Surd(0, 0, Rational(1, 3), 0); }

inline Ket tensor(const Ket& a, const Ket& b) {
  std::vector<Complex> out;
  for (const auto& x : a.amplitudes())
    for (const auto& y : b.amplitudes()) out.push_back(x * y);
  return Ket(a.qubits() + b.qubits(), std::move(out));
}

/// 1/sqrt3 (|00> + |10> + |11>) on registers (P, R).
inline Ket hardy_state() {
  Complex c{inv_sqrt3()};
  return Ket(2, {c, 0, c, c});
}

inline Ket cnot(const Ket& k, std::size_t control, std::size_t target) {
  if (control >= k.qubits() || target >= k.qubits() || control == target) throw StructuralError("bad CNOT qubits");
  std::vector<Complex> out(k.amplitudes().size());
  const std::size_t tmask = std::size_t{1} << (k.qubits() - 1 - target);
  for (std::size_t i = 0; i < out.size(); ++i) out[k.bit(i, control) ? i ^ tmask : i] = k.amplitude(i);
  return Ket(k.qubits(), std::move(out));
}

/// Coherent copy of `system`'s computational basis into a cleared memory.
inline Ket cnot_memory(const Ket& k, std::size_t system, std::size_t memory) {
  if (memory >= k.qubits()) throw StructuralError("memory qubit out of range");
  for (std::size_t i = 0; i < k.amplitudes().size(); ++i) {
    if (k.bit(i, memory) && !k.amplitude(i).is_zero()) throw DomainError("memory qubit is not cleared to |0>");
  }
  return cnot(k, system, memory);
}

/// Measurement on a group of qubits in an orthonormal family of vectors.
/// The family may be incomplete; the uncovered weight is reported apart.
struct Measurement {
  std::vector<std::size_t> qubits;
  std::vector<std::vector<Complex>> vectors;
  std::vector<std::string> labels;
};

inline Measurement z_measurement(std::size_t q) { return {{q}, {{1, 0}, {0, 1}}, {"0", "1"}}; }

inline Measurement x_measurement(std::size_t q) {
  Complex h{inv_sqrt2()};
  return {{q}, {{h, h}, {h, -h}}, {"+", "-"}};
}

inline Measurement y_measurement(std::size_t q) {
  Complex h{inv_sqrt2()};
  Complex ih{Surd(), inv_sqrt2()};
  return {{q}, {{h, ih}, {h, -ih}}, {"+i", "-i"}};
}

/// ok = (|00> - |11>)/sqrt2, fail = (|00> + |11>)/sqrt2 on (q1, q2).
inline Measurement okfail_measurement(std::size_t q1, std::size_t q2) {
  Complex h{inv_sqrt2()};
  return {{q1, q2}, {{h, 0, 0, -h}, {h, 0, 0, h}}, {"ok", "fail"}};
}

/// <v| on `qubits` applied to the amplitude vector; the result lives on the
/// remaining qubits (in their original order) and is not normalized.
inline std::vector<Complex> contract(const std::vector<Complex>& amp, std::size_t n, const std::vector<std::size_t>& qubits,
                                     const std::vector<Complex>& v) {
  const std::size_t m = qubits.size();
  if (v.size() != (std::size_t{1} << m)) throw StructuralError("contraction vector has wrong length");
  std::vector<bool> used(n, false);
  for (auto q : qubits) {
    if (q >= n || used[q]) throw StructuralError("bad qubit list in contraction");
    used[q] = true;
  }
  std::vector<std::size_t> rest;
  for (std::size_t q = 0; q < n; ++q)
    if (!used[q]) rest.push_back(q);
  std::vector<Complex> out(std::size_t{1} << rest.size());
  for (std::size_t i = 0; i < amp.size(); ++i) {
    if (amp[i].is_zero()) continue;
    std::size_t j = 0, r = 0;
    for (auto q : qubits) j = (j << 1) | ((i >> (n - 1 - q)) & 1);
    for (auto q : rest) r = (r << 1) | ((i >> (n - 1 - q)) & 1);
    if (v[j].is_zero()) continue;
    out[r] += v[j].conj() * amp[i];
  }
  return out;
}

/// Probability that every listed measurement yields the listed outcome.
/// The measurements must act on disjoint qubits.
inline Surd joint_probability(const Ket& k, const std::vector<std::pair<Measurement, std::size_t>>& events) {
  std::vector<Complex> amp = k.amplitudes();
  std::vector<std::size_t> alive(k.qubits());
  for (std::size_t q = 0; q < alive.size(); ++q) alive[q] = q;
  for (const auto& [m, outcome] : events) {
    std::vector<std::size_t> local;
    for (auto q : m.qubits) {
      auto it = std::find(alive.begin(), alive.end(), q);
      if (it == alive.end()) throw StructuralError("measurements overlap on qubit " + std::to_string(q));
      local.push_back(static_cast<std::size_t>(it - alive.begin()));
    }
    amp = contract(amp, alive.size(), local, m.vectors.at(outcome));
    std::vector<std::size_t> next;
    for (std::size_t p = 0; p < alive.size(); ++p)
      if (std::find(local.begin(), local.end(), p) == local.end()) next.push_back(alive[p]);
    alive = std::move(next);
  }
  Surd p;
  for (const auto& a : amp) p += a.norm2();
  return p;
}

struct OutcomeBranch {
  std::string label;
  Surd probability;
  std::optional<Ket> post;  // empty when the probability is 0 or its root leaves the field
};

struct OkFailResult {
  OutcomeBranch ok;
  OutcomeBranch fail;
  Surd residual;  // weight outside span{|00>, |11>}
};

/// Projective ok/fail measurement of (q1, q2) with exact post-states.
inline OkFailResult okfail_measure(const Ket& k, std::size_t q1, std::size_t q2) {
  auto m = okfail_measurement(q1, q2);
  auto branch = [&](std::size_t idx) {
    OutcomeBranch b{m.labels[idx], joint_probability(k, {{m, idx}}), std::nullopt};
    if (b.probability.is_zero() || !b.probability.is_rational()) return b;
    auto root = Surd::sqrt(b.probability.rational_part());
    if (!root) return b;
    // |v><v| psi / sqrt(p), with |v> re-expanded on the measured pair.
    auto reduced = contract(k.amplitudes(), k.qubits(), {q1, q2}, m.vectors[idx]);
    std::vector<Complex> out(k.amplitudes().size());
    const std::size_t n = k.qubits();
    for (std::size_t i = 0; i < out.size(); ++i) {
      std::size_t j = (k.bit(i, q1) << 1) | k.bit(i, q2);
      std::size_t r = 0;
      for (std::size_t q = 0; q < n; ++q)
        if (q != q1 && q != q2) r = (r << 1) | k.bit(i, q);
      out[i] = m.vectors[idx][j] * reduced[r] / *root;
    }
    b.post = Ket(n, std::move(out));
    return b;
  };
  OkFailResult r{branch(0), branch(1), Surd()};
  r.residual = Surd(1) - r.ok.probability - r.fail.probability;
  return r;
}

/// Outcome probabilities of the fiducial X, Y, Z measurements of one qubit,
/// outcome 0 being the +1 eigenvector (|0> for Z).
struct QubitFiducial {
  std::vector<Surd> entries;  // (X:+,-, Y:+,-, Z:0,1)

  /// The equivalent box-world vector on signature (3,2) when all entries
  /// are rational.
  std::optional<gpt::StateVector> to_state_vector() const {
    std::vector<Rational> e;
    for (const auto& x : entries) {
      if (!x.is_rational()) return std::nullopt;
      e.push_back(x.rational_part());
    }
    return gpt::StateVector(gpt::SystemSignature{gpt::kQubitFiducial}, std::move(e));
  }
  friend bool operator==(const QubitFiducial&, const QubitFiducial&) = default;
};

/// Fiducial statistics of qubit `q` of `k` (the reduced state if entangled).
inline QubitFiducial qubit_to_fiducial(const Ket& k, std::size_t q = 0) {
  QubitFiducial f;
  for (const auto& m : {x_measurement(q), y_measurement(q), z_measurement(q)})
    for (std::size_t o = 0; o < 2; ++o) f.entries.push_back(joint_probability(k, {{m, o}}));
  return f;
}

/// Statistics of every product of fiducial qubit measurements, in the
/// box-world layout on signature (3,2)^n.
inline std::vector<Surd> fiducial_vector(const Ket& k) {
  const std::size_t n = k.qubits();
  gpt::SystemSignature sig(std::vector<gpt::Subsystem>(n, gpt::kQubitFiducial));
  std::vector<Surd> out(sig.dimension());
  for (std::size_t s = 0; s < sig.joint_settings(); ++s) {
    auto settings = sig.decode_settings(s);
    for (std::size_t o = 0; o < sig.joint_outcomes(); ++o) {
      auto outcomes = sig.decode_outcomes(o);
      std::vector<std::pair<Measurement, std::size_t>> ev;
      for (std::size_t q = 0; q < n; ++q) {
        Measurement m = settings[q] == 0 ? x_measurement(q) : settings[q] == 1 ? y_measurement(q) : z_measurement(q);
        ev.emplace_back(std::move(m), outcomes[q]);
      }
      out[s * sig.joint_outcomes() + o] = joint_probability(k, ev);
    }
  }
  return out;
}

struct ZxDemo {
  Ket z_update;  // alpha|00> + beta|11>
  Ket x_update;  // (alpha+beta)/sqrt2 |+0> + (alpha-beta)/sqrt2 |-1>
  bool distinguishable = false;
};

/// Post-measurement system+memory states when the observer copies the Z
/// basis versus the X basis of alpha|0> + beta|1>.
inline ZxDemo zx_postmeasurement_demo(const Complex& alpha, const Complex& beta) {
  if (alpha.norm2() + beta.norm2() != Surd(1)) throw DomainError("|alpha|^2 + |beta|^2 must be 1");
  Ket z(2, {alpha, 0, 0, beta});
  Complex h{inv_sqrt2()};
  Complex p = (alpha + beta) * h, m = (alpha - beta) * h;
  // |+>|0> = (|00> + |10>)/sqrt2 and |->|1> = (|01> - |11>)/sqrt2.
  Ket x(2, {p * h, m * h, p * h, -(m * h)});
  bool differ = fiducial_vector(z) != fiducial_vector(x);
  return {std::move(z), std::move(x), differ};
}

}  // namespace paradox::quantum
