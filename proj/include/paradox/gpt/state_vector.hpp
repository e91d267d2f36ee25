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
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "paradox/errors.hpp"
#include "paradox/gpt/signature.hpp"
#include "paradox/rational.hpp"

namespace paradox::gpt {

/// Exact probability vector P(outcomes | settings) on a signature.
///
/// Entries lie in [0,1] and every setting block sums to the same constant
/// c in [0,1]; c = 1 for a normalized state. Unnormalized vectors appear
/// as intermediate branch outputs of measurements.
class StateVector {
 public:
  StateVector(SystemSignature signature, std::vector<Rational> entries)
      : sig_(std::move(signature)), entries_(std::move(entries)) {
    if (entries_.size() != sig_.dimension()) {
      throw StructuralError("state on " + sig_.str() + " needs " + std::to_string(sig_.dimension()) + " entries, got " +
                            std::to_string(entries_.size()));
    }
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (entries_[i] < 0 || entries_[i] > 1) {
        throw DomainError("entry " + std::to_string(i) + " = " + entries_[i].str() + " is not a probability");
      }
    }
    const std::size_t nb = sig_.joint_settings();
    norm_ = block_sum(0);
    for (std::size_t b = 1; b < nb; ++b) {
      if (block_sum(b) != norm_) {
        throw DomainError("block norm depends on the setting: block 0 sums to " + norm_.str() + ", block " +
                          std::to_string(b) + " to " + block_sum(b).str());
      }
    }
    if (norm_ > 1) throw DomainError("block norm " + norm_.str() + " exceeds 1");
  }

  const SystemSignature& signature() const { return sig_; }
  const std::vector<Rational>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  const Rational& operator[](std::size_t i) const { return entries_.at(i); }

  const Rational& at(std::span<const std::size_t> settings, std::span<const std::size_t> outcomes) const {
    return entries_[sig_.index(settings, outcomes)];
  }
  const Rational& at(std::initializer_list<std::size_t> settings, std::initializer_list<std::size_t> outcomes) const {
    std::vector<std::size_t> s(settings), o(outcomes);
    return at(std::span<const std::size_t>(s), std::span<const std::size_t>(o));
  }

  /// The common block sum |P̄|.
  const Rational& norm() const { return norm_; }
  bool normalized() const { return norm_ == 1; }

  std::vector<Rational> block(std::size_t setting_index) const {
    const std::size_t k = sig_.joint_outcomes();
    return {entries_.begin() + setting_index * k, entries_.begin() + (setting_index + 1) * k};
  }

  StateVector renormalized() const {
    if (norm_.is_zero()) throw ZeroProbabilityError("cannot renormalize a zero vector");
    std::vector<Rational> e;
    e.reserve(entries_.size());
    for (const auto& x : entries_) e.push_back(x / norm_);
    return StateVector(sig_, std::move(e));
  }

  /// Same entries read against another signature with the same flat layout
  /// (identical joint setting and joint outcome counts, e.g. merging
  /// adjacent subsystems).
  StateVector reinterpret(SystemSignature sig) const {
    if (sig.joint_settings() != sig_.joint_settings() || sig.joint_outcomes() != sig_.joint_outcomes()) {
      throw StructuralError("cannot reinterpret " + sig_.str() + " as " + sig.str());
    }
    return StateVector(std::move(sig), entries_);
  }

  friend bool operator==(const StateVector& a, const StateVector& b) {
    return a.sig_ == b.sig_ && a.entries_ == b.entries_;
  }

 private:
  Rational block_sum(std::size_t b) const {
    const std::size_t k = sig_.joint_outcomes();
    Rational s;
    for (std::size_t j = 0; j < k; ++j) s += entries_[b * k + j];
    return s;
  }

  SystemSignature sig_;
  std::vector<Rational> entries_;
  Rational norm_;
};

inline StateVector make_gbit(const Rational& p, const Rational& q) {
  if (p < 0 || p > 1 || q < 0 || q > 1) throw DomainError("gbit parameters must lie in [0,1]");
  return StateVector(SystemSignature{kGbit}, {p, 1 - p, q, 1 - q});
}

/// Deterministic gbit that answers `at0` to X=0 and `at1` to X=1.
inline StateVector pure_gbit(std::size_t at0, std::size_t at1) {
  if (at0 > 1 || at1 > 1) throw DomainError("gbit outcomes are 0 or 1");
  return make_gbit(at0 == 0 ? 1 : 0, at1 == 0 ? 1 : 0);
}

inline StateVector make_pr_box() {
  SystemSignature sig = SystemSignature::gbits(2);
  std::vector<Rational> e(sig.dimension());
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y)
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b)
          if ((a ^ b) == (x & y)) e[sig.index(std::vector<std::size_t>{x, y}, std::vector<std::size_t>{a, b})] = Rational(1, 2);
  return StateVector(sig, std::move(e));
}

/// Uniform mixture of all outcomes on every setting.
inline StateVector make_uniform(const SystemSignature& sig) {
  return StateVector(sig, std::vector<Rational>(sig.dimension(), Rational(1, static_cast<std::int64_t>(sig.joint_outcomes()))));
}

inline StateVector tensor(const StateVector& lhs, const StateVector& rhs) {
  const auto& ls = lhs.signature();
  const auto& rs = rhs.signature();
  SystemSignature sig = ls.concat(rs);
  std::vector<Rational> e(sig.dimension());
  const std::size_t lk = ls.joint_outcomes(), rk = rs.joint_outcomes(), rn = rs.joint_settings();
  for (std::size_t lsi = 0; lsi < ls.joint_settings(); ++lsi)
    for (std::size_t rsi = 0; rsi < rn; ++rsi)
      for (std::size_t loi = 0; loi < lk; ++loi)
        for (std::size_t roi = 0; roi < rk; ++roi) {
          std::size_t idx = (lsi * rn + rsi) * (lk * rk) + loi * rk + roi;
          e[idx] = lhs[lsi * lk + loi] * rhs[rsi * rk + roi];
        }
  return StateVector(std::move(sig), std::move(e));
}

namespace detail {

inline void check_index_set(const SystemSignature& sig, const std::vector<std::size_t>& idx, bool allow_empty) {
  if (!allow_empty && idx.empty()) throw StructuralError("empty subsystem selection");
  std::vector<bool> seen(sig.size(), false);
  for (auto i : idx) {
    if (i >= sig.size()) throw StructuralError("subsystem index " + std::to_string(i) + " out of range");
    if (seen[i]) throw StructuralError("subsystem index " + std::to_string(i) + " repeated");
    seen[i] = true;
  }
}

/// Calls fn(settings, outcomes) for every entry of `sig` in flat order.
template <class Fn>
void for_each_entry(const SystemSignature& sig, Fn&& fn) {
  const std::size_t k = sig.joint_outcomes();
  for (std::size_t s = 0; s < sig.joint_settings(); ++s) {
    auto settings = sig.decode_settings(s);
    for (std::size_t o = 0; o < k; ++o) fn(s * k + o, settings, sig.decode_outcomes(o));
  }
}

inline std::string join(const std::vector<std::size_t>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

}  // namespace detail

/// Reorders subsystems: result subsystem i is input subsystem order[i].
inline StateVector permute(const StateVector& state, const std::vector<std::size_t>& order) {
  const auto& sig = state.signature();
  if (order.size() != sig.size()) throw StructuralError("permutation has wrong length");
  detail::check_index_set(sig, order, false);
  std::vector<Subsystem> parts;
  for (auto i : order) parts.push_back(sig[i]);
  SystemSignature out(parts);
  std::vector<Rational> e(out.dimension());
  detail::for_each_entry(sig, [&](std::size_t flat, const auto& s, const auto& o) {
    std::vector<std::size_t> ps(order.size()), po(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      ps[i] = s[order[i]];
      po[i] = o[order[i]];
    }
    e[out.index(ps, po)] = state[flat];
  });
  return StateVector(std::move(out), std::move(e));
}

inline StateVector merge(const StateVector& state, std::size_t first, std::size_t count) {
  return state.reinterpret(state.signature().merged(first, count));
}

/// Marginal on `keep` computed at one fixed choice of the discarded
/// subsystems' settings, without any no-signalling check.
inline StateVector raw_marginal(const StateVector& state, const std::vector<std::size_t>& keep,
                                const std::vector<std::size_t>& their_settings) {
  const auto& sig = state.signature();
  detail::check_index_set(sig, keep, false);
  std::vector<bool> kept(sig.size(), false);
  for (auto i : keep) kept[i] = true;
  if (their_settings.size() != sig.size() - keep.size()) {
    throw StructuralError("expected " + std::to_string(sig.size() - keep.size()) + " settings for discarded subsystems");
  }
  std::vector<Subsystem> parts;
  for (auto i : keep) parts.push_back(sig[i]);
  SystemSignature out(parts);
  std::vector<std::size_t> fixed(sig.size(), 0);
  for (std::size_t i = 0, j = 0; i < sig.size(); ++i) {
    if (kept[i]) continue;
    if (their_settings[j] >= sig[i].settings) throw DomainError("setting out of range for subsystem " + std::to_string(i));
    fixed[i] = their_settings[j++];
  }
  std::vector<Rational> e(out.dimension());
  detail::for_each_entry(sig, [&](std::size_t flat, const auto& s, const auto& o) {
    for (std::size_t i = 0; i < sig.size(); ++i)
      if (!kept[i] && s[i] != fixed[i]) return;
    std::vector<std::size_t> ks, ko;
    for (auto i : keep) {
      ks.push_back(s[i]);
      ko.push_back(o[i]);
    }
    e[out.index(ks, ko)] += state[flat];
  });
  return StateVector(std::move(out), std::move(e));
}

/// Concrete evidence of signalling: summing out subsystem `varied`, the
/// remaining statistics at `co_settings` change between two of its settings.
struct SignallingWitness {
  std::size_t varied = 0;
  std::vector<std::size_t> co_settings;  // full length; the `varied` slot is unused
  std::size_t setting_a = 0;
  std::size_t setting_b = 0;
  std::vector<Rational> marginal_a;  // indexed by the other subsystems' joint outcome
  std::vector<Rational> marginal_b;

  std::string describe() const {
    std::ostringstream os;
    os << "summing out subsystem " << varied << " at co-settings " << detail::join(co_settings) << ": setting "
       << setting_a << " gives (";
    for (std::size_t i = 0; i < marginal_a.size(); ++i) os << (i ? "," : "") << marginal_a[i];
    os << "), setting " << setting_b << " gives (";
    for (std::size_t i = 0; i < marginal_b.size(); ++i) os << (i ? "," : "") << marginal_b[i];
    os << ")";
    return os.str();
  }
};

struct NoSignallingReport {
  bool ok = true;
  std::optional<SignallingWitness> witness;
  explicit operator bool() const { return ok; }
};

namespace detail {

/// Marginal of everything except `varied`, for every co-setting; indexed as
/// [joint setting of the state with varied's setting][other joint outcome].
inline std::optional<SignallingWitness> signalling_from(const StateVector& state, std::size_t varied) {
  const auto& sig = state.signature();
  std::vector<std::size_t> others;
  for (std::size_t i = 0; i < sig.size(); ++i)
    if (i != varied) others.push_back(i);
  std::size_t other_outcomes = 1;
  for (auto i : others) other_outcomes *= sig[i].outcomes;
  // sums[setting_index][other outcome index]
  std::vector<std::vector<Rational>> sums(sig.joint_settings(), std::vector<Rational>(other_outcomes));
  for_each_entry(sig, [&](std::size_t flat, const auto& s, const auto& o) {
    std::size_t oi = 0;
    for (auto i : others) oi = oi * sig[i].outcomes + o[i];
    sums[sig.setting_index(s)][oi] += state[flat];
  });
  for (std::size_t s = 0; s < sig.joint_settings(); ++s) {
    auto settings = sig.decode_settings(s);
    if (settings[varied] != 0) continue;
    for (std::size_t alt = 1; alt < sig[varied].settings; ++alt) {
      auto moved = settings;
      moved[varied] = alt;
      const auto& lhs = sums[s];
      const auto& rhs = sums[sig.setting_index(moved)];
      if (lhs != rhs) return SignallingWitness{varied, settings, 0, alt, lhs, rhs};
    }
  }
  return std::nullopt;
}

}  // namespace detail

inline NoSignallingReport is_no_signalling(const StateVector& state) {
  for (std::size_t i = 0; i < state.signature().size(); ++i) {
    if (auto w = detail::signalling_from(state, i)) return {false, std::move(w)};
  }
  return {true, std::nullopt};
}

/// Marginal on `keep`. The discarded subsystems must not signal to the
/// kept ones: the result is computed at `their_settings` and compared with
/// every other choice of discarded settings.
inline StateVector marginal(const StateVector& state, const std::vector<std::size_t>& keep,
                            const std::vector<std::size_t>& their_settings) {
  auto result = raw_marginal(state, keep, their_settings);
  const auto& sig = state.signature();
  std::vector<std::size_t> dropped;
  for (std::size_t i = 0; i < sig.size(); ++i)
    if (std::find(keep.begin(), keep.end(), i) == keep.end()) dropped.push_back(i);
  if (dropped.empty()) return result;
  std::vector<std::size_t> alt(dropped.size(), 0);
  while (true) {
    auto other = raw_marginal(state, keep, alt);
    if (other.entries() != result.entries()) {
      std::size_t culprit = dropped.front();
      for (std::size_t j = 0; j < dropped.size(); ++j)
        if (alt[j] != their_settings[j]) {
          culprit = dropped[j];
          break;
        }
      throw SignallingError("marginal ill-defined: subsystem " + std::to_string(culprit) + " signals, discarded settings " +
                            detail::join(their_settings) + " and " + detail::join(alt) + " give different marginals");
    }
    std::size_t j = dropped.size();
    while (j-- > 0) {
      if (++alt[j] < sig[dropped[j]].settings) break;
      alt[j] = 0;
    }
    if (j == static_cast<std::size_t>(-1)) break;
  }
  return result;
}

inline StateVector marginal(const StateVector& state, const std::vector<std::size_t>& keep) {
  std::size_t dropped = state.signature().size() - keep.size();
  return marginal(state, keep, std::vector<std::size_t>(dropped, 0));
}

struct ConditionalBox {
  Rational probability;
  StateVector rest;
};

/// What an agent who measured `measured` with `setting` and saw `outcome`
/// assigns to the remaining subsystems.
inline ConditionalBox conditional_box(const StateVector& state, std::size_t measured, std::size_t setting,
                                      std::size_t outcome) {
  const auto& sig = state.signature();
  if (measured >= sig.size()) throw StructuralError("measured subsystem out of range");
  if (sig.size() < 2) throw StructuralError("conditioning needs at least two subsystems");
  if (setting >= sig[measured].settings || outcome >= sig[measured].outcomes) {
    throw DomainError("setting/outcome out of range for subsystem " + std::to_string(measured));
  }
  auto own = marginal(state, {measured});
  Rational p = own.at({setting}, {outcome});
  if (p.is_zero()) {
    throw ZeroProbabilityError("outcome " + std::to_string(outcome) + " at setting " + std::to_string(setting) +
                               " of subsystem " + std::to_string(measured) + " has probability 0");
  }
  std::vector<Subsystem> parts;
  for (std::size_t i = 0; i < sig.size(); ++i)
    if (i != measured) parts.push_back(sig[i]);
  SystemSignature out(parts);
  std::vector<Rational> e(out.dimension());
  detail::for_each_entry(sig, [&](std::size_t flat, const auto& s, const auto& o) {
    if (s[measured] != setting || o[measured] != outcome) return;
    std::vector<std::size_t> rs, ro;
    for (std::size_t i = 0; i < sig.size(); ++i)
      if (i != measured) {
        rs.push_back(s[i]);
        ro.push_back(o[i]);
      }
    e[out.index(rs, ro)] = state[flat] / p;
  });
  return {p, StateVector(std::move(out), std::move(e))};
}

/// Canonical text form:
///
///   state v1
///   signature (2,2) (2,2)
///   block 0 0 : 1/2 0/1 0/1 1/2
///   ...
inline std::string to_text(const StateVector& state) {
  const auto& sig = state.signature();
  std::ostringstream os;
  os << "state v1\nsignature " << sig.str() << "\n";
  const std::size_t k = sig.joint_outcomes();
  for (std::size_t s = 0; s < sig.joint_settings(); ++s) {
    os << "block";
    for (auto x : sig.decode_settings(s)) os << ' ' << x;
    os << " :";
    for (std::size_t o = 0; o < k; ++o) os << ' ' << state[s * k + o].fraction_str();
    os << "\n";
  }
  return os.str();
}

inline StateVector from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  auto next = [&](const char* what) {
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return;
    }
    throw StructuralError(std::string("state text ended before ") + what);
  };
  next("header");
  if (line != "state v1") throw StructuralError("unknown state header '" + line + "'");
  next("signature");
  std::istringstream sl(line);
  std::string word;
  sl >> word;
  if (word != "signature") throw StructuralError("expected 'signature', got '" + word + "'");
  std::vector<Subsystem> parts;
  while (sl >> word) {
    std::size_t n = 0, k = 0;
    char c1 = 0, c2 = 0, c3 = 0;
    std::istringstream ws(word);
    if (!(ws >> c1 >> n >> c2 >> k >> c3) || c1 != '(' || c2 != ',' || c3 != ')') {
      throw StructuralError("malformed subsystem '" + word + "'");
    }
    parts.push_back({n, k});
  }
  SystemSignature sig(parts);
  std::vector<Rational> e;
  e.reserve(sig.dimension());
  for (std::size_t s = 0; s < sig.joint_settings(); ++s) {
    next("all blocks");
    std::istringstream bl(line);
    bl >> word;
    if (word != "block") throw StructuralError("expected 'block', got '" + word + "'");
    for (auto expect : sig.decode_settings(s)) {
      std::size_t got = 0;
      if (!(bl >> got) || got != expect) throw StructuralError("blocks out of canonical order at '" + line + "'");
    }
    bl >> word;
    if (word != ":") throw StructuralError("expected ':' in '" + line + "'");
    for (std::size_t o = 0; o < sig.joint_outcomes(); ++o) {
      if (!(bl >> word)) throw StructuralError("block too short: '" + line + "'");
      try {
        e.push_back(Rational::parse(word));
      } catch (const std::exception& ex) {
        throw StructuralError(std::string("bad entry: ") + ex.what());
      }
    }
    if (bl >> word) throw StructuralError("block too long: '" + line + "'");
  }
  while (std::getline(in, line)) {
    if (!line.empty() && line != "\r") throw StructuralError("trailing content '" + line + "'");
  }
  return StateVector(std::move(sig), std::move(e));
}

}  // namespace paradox::gpt
