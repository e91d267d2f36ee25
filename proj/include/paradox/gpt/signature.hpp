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

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "paradox/errors.hpp"

namespace paradox::gpt {

/// Fiducial structure of one subsystem: how many measurements, how many
/// outcomes each.
struct Subsystem {
  std::size_t settings = 1;
  std::size_t outcomes = 1;

  friend bool operator==(const Subsystem&, const Subsystem&) = default;
  friend auto operator<=>(const Subsystem&, const Subsystem&) = default;

  std::string str() const { return "(" + std::to_string(settings) + "," + std::to_string(outcomes) + ")"; }
};

inline constexpr Subsystem kGbit{2, 2};
inline constexpr Subsystem kClassicalBit{1, 2};
inline constexpr Subsystem kQubitFiducial{3, 2};

/// Ordered list of subsystems. Entry layout of a state vector on this
/// signature is settings-major: index = setting_index * joint_outcomes +
/// outcome_index, where both indices are mixed-radix numbers with
/// subsystem 0 as the most significant digit.
class SystemSignature {
 public:
  SystemSignature() : SystemSignature(std::vector<Subsystem>{kGbit}) {}

  explicit SystemSignature(std::vector<Subsystem> parts) : parts_(std::move(parts)) {
    if (parts_.empty()) throw StructuralError("signature needs at least one subsystem");
    for (const auto& p : parts_) {
      if (p.settings == 0 || p.outcomes == 0) throw StructuralError("subsystem counts must be positive, got " + p.str());
    }
  }
  SystemSignature(std::initializer_list<Subsystem> parts) : SystemSignature(std::vector<Subsystem>(parts)) {}

  static SystemSignature gbits(std::size_t n) { return SystemSignature(std::vector<Subsystem>(n, kGbit)); }

  std::size_t size() const { return parts_.size(); }
  const Subsystem& operator[](std::size_t i) const { return parts_.at(i); }
  const std::vector<Subsystem>& subsystems() const { return parts_; }

  std::size_t joint_settings() const {
    std::size_t n = 1;
    for (const auto& p : parts_) n *= p.settings;
    return n;
  }
  std::size_t joint_outcomes() const {
    std::size_t n = 1;
    for (const auto& p : parts_) n *= p.outcomes;
    return n;
  }
  std::size_t dimension() const { return joint_settings() * joint_outcomes(); }

  std::size_t setting_index(std::span<const std::size_t> settings) const {
    check_len(settings.size());
    std::size_t idx = 0;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (settings[i] >= parts_[i].settings) {
        throw DomainError("setting " + std::to_string(settings[i]) + " out of range for subsystem " + std::to_string(i));
      }
      idx = idx * parts_[i].settings + settings[i];
    }
    return idx;
  }
  std::size_t outcome_index(std::span<const std::size_t> outcomes) const {
    check_len(outcomes.size());
    std::size_t idx = 0;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (outcomes[i] >= parts_[i].outcomes) {
        throw DomainError("outcome " + std::to_string(outcomes[i]) + " out of range for subsystem " + std::to_string(i));
      }
      idx = idx * parts_[i].outcomes + outcomes[i];
    }
    return idx;
  }
  std::size_t index(std::span<const std::size_t> settings, std::span<const std::size_t> outcomes) const {
    return setting_index(settings) * joint_outcomes() + outcome_index(outcomes);
  }

  std::vector<std::size_t> decode_settings(std::size_t idx) const {
    std::vector<std::size_t> out(parts_.size());
    for (std::size_t i = parts_.size(); i-- > 0;) {
      out[i] = idx % parts_[i].settings;
      idx /= parts_[i].settings;
    }
    return out;
  }
  std::vector<std::size_t> decode_outcomes(std::size_t idx) const {
    std::vector<std::size_t> out(parts_.size());
    for (std::size_t i = parts_.size(); i-- > 0;) {
      out[i] = idx % parts_[i].outcomes;
      idx /= parts_[i].outcomes;
    }
    return out;
  }

  SystemSignature concat(const SystemSignature& rhs) const {
    auto parts = parts_;
    parts.insert(parts.end(), rhs.parts_.begin(), rhs.parts_.end());
    return SystemSignature(std::move(parts));
  }

  /// Subsystems [first, first + count) as their own signature.
  SystemSignature slice(std::size_t first, std::size_t count) const {
    if (count == 0 || first + count > parts_.size()) throw StructuralError("signature slice out of range");
    return SystemSignature(std::vector<Subsystem>(parts_.begin() + first, parts_.begin() + first + count));
  }

  /// Replaces the range [first, first + count) by one subsystem whose
  /// settings and outcomes are the products. The flat layout is unchanged.
  SystemSignature merged(std::size_t first, std::size_t count) const {
    auto inner = slice(first, count);
    std::vector<Subsystem> parts(parts_.begin(), parts_.begin() + first);
    parts.push_back({inner.joint_settings(), inner.joint_outcomes()});
    parts.insert(parts.end(), parts_.begin() + first + count, parts_.end());
    return SystemSignature(std::move(parts));
  }

  SystemSignature merged_all() const { return merged(0, parts_.size()); }

  std::string str() const {
    std::string s;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (i) s += ' ';
      s += parts_[i].str();
    }
    return s;
  }

  friend bool operator==(const SystemSignature&, const SystemSignature&) = default;

 private:
  void check_len(std::size_t n) const {
    if (n != parts_.size()) {
      throw StructuralError("expected " + std::to_string(parts_.size()) + " coordinates, got " + std::to_string(n));
    }
  }

  std::vector<Subsystem> parts_;
};

}  // namespace paradox::gpt
