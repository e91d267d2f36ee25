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

#include <string>
#include <vector>

#include "paradox/errors.hpp"
#include "paradox/gpt/state_vector.hpp"
#include "paradox/logic/formula.hpp"

namespace paradox::logic {

/// Which joint outcomes (x, y) of two measurements can occur.
struct SupportTable {
  std::vector<std::vector<bool>> possible;  // [x value][y value]

  std::size_t rows() const { return possible.size(); }
  std::size_t cols() const { return possible.empty() ? 0 : possible.front().size(); }
  bool row_possible(std::size_t v) const {
    for (bool b : possible.at(v))
      if (b) return true;
    return false;
  }
};

/// Possibilistic consequences about y given x = v: a single possible value
/// w gives [y=w]; otherwise each impossible w gives !(y=w).
inline std::vector<Formula> implications_from_table(const SupportTable& table, std::size_t v, const std::string& y,
                                                    const std::vector<std::string>& y_values) {
  if (y_values.size() != table.cols()) throw StructuralError("value list does not match the support table");
  if (!table.row_possible(v)) throw ZeroProbabilityError("conditioning on an outcome that never occurs");
  std::vector<std::size_t> open;
  for (std::size_t w = 0; w < table.cols(); ++w)
    if (table.possible[v][w]) open.push_back(w);
  if (open.size() == 1) return {Formula::atom(y, y_values[open.front()])};
  std::vector<Formula> out;
  for (std::size_t w = 0; w < table.cols(); ++w)
    if (!table.possible[v][w]) out.push_back(negation(Formula::atom(y, y_values[w])));
  return out;
}

struct MeasuredOutcome {
  std::size_t subsystem = 0;
  std::size_t setting = 0;
  std::size_t outcome = 0;
};

struct OtherMeasurement {
  std::size_t subsystem = 0;
  std::size_t setting = 0;
};

/// Support of two subsystems' outcomes at fixed settings, the remaining
/// subsystems summed out (requires the marginal to be well defined).
inline SupportTable support_table(const gpt::StateVector& state, std::size_t first, std::size_t first_setting,
                                  std::size_t second, std::size_t second_setting) {
  const auto& sig = state.signature();
  if (first == second) throw StructuralError("support table needs two distinct subsystems");
  std::vector<std::size_t> rest(sig.size() - 2, 0);
  auto pair = gpt::marginal(state, {first, second}, rest);
  SupportTable t;
  t.possible.assign(sig[first].outcomes, std::vector<bool>(sig[second].outcomes, false));
  for (std::size_t a = 0; a < sig[first].outcomes; ++a)
    for (std::size_t b = 0; b < sig[second].outcomes; ++b)
      t.possible[a][b] = !pair.at({first_setting, second_setting}, {a, b}).is_zero();
  return t;
}

/// Consequences for variable `y` (the other measurement) of the measured
/// outcome, read off the exact zeros of the state.
inline std::vector<Formula> implications_from_support(const gpt::StateVector& state, const MeasuredOutcome& measured,
                                                       const OtherMeasurement& other, const std::string& y,
                                                       const std::vector<std::string>& y_values) {
  if (!gpt::is_no_signalling(state).ok) throw SignallingError("support implications need a no-signalling state");
  auto t = support_table(state, measured.subsystem, measured.setting, other.subsystem, other.setting);
  return implications_from_table(t, measured.outcome, y, y_values);
}

/// Same with outcome labels "0", "1", ...
inline std::vector<Formula> implications_from_support(const gpt::StateVector& state, const MeasuredOutcome& measured,
                                                       const OtherMeasurement& other, const std::string& y) {
  std::vector<std::string> values;
  for (std::size_t w = 0; w < state.signature()[other.subsystem].outcomes; ++w) values.push_back(std::to_string(w));
  return implications_from_support(state, measured, other, y, values);
}

}  // namespace paradox::logic
