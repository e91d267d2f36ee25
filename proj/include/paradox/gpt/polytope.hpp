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
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "paradox/errors.hpp"
#include "paradox/gpt/state_vector.hpp"
#include "paradox/rational.hpp"

namespace paradox::gpt {

using RationalMatrix = std::vector<std::vector<Rational>>;

/// Solves m * x = rhs for square m. Returns nullopt if m is singular.
inline std::optional<std::vector<Rational>> solve_square(RationalMatrix m, std::vector<Rational> rhs) {
  const std::size_t n = m.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col].is_zero()) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(m[piv], m[col]);
    std::swap(rhs[piv], rhs[col]);
    Rational inv = Rational(1) / m[col][col];
    for (std::size_t c = col; c < n; ++c) m[col][c] *= inv;
    rhs[col] *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col].is_zero()) continue;
      Rational f = m[r][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  return rhs;
}

/// The affine hull of the normalized no-signalling set on a signature:
/// every point is particular + sum_k t_k * basis[k].
struct AffineHull {
  std::vector<Rational> particular;
  std::vector<std::vector<Rational>> basis;
};

namespace detail {

/// Equality rows [coefficients | rhs] for normalization and no-signalling.
inline RationalMatrix ns_equalities(const SystemSignature& sig) {
  const std::size_t dim = sig.dimension();
  RationalMatrix rows;
  const std::size_t k = sig.joint_outcomes();
  for (std::size_t s = 0; s < sig.joint_settings(); ++s) {
    std::vector<Rational> row(dim + 1);
    for (std::size_t o = 0; o < k; ++o) row[s * k + o] = 1;
    row[dim] = 1;
    rows.push_back(std::move(row));
  }
  for (std::size_t i = 0; i < sig.size(); ++i) {
    for (std::size_t s = 0; s < sig.joint_settings(); ++s) {
      auto settings = sig.decode_settings(s);
      if (settings[i] == 0) continue;
      auto base = settings;
      base[i] = 0;
      std::size_t s0 = sig.setting_index(base);
      // For each outcome of the others: sum over own outcome at s minus at s0.
      std::map<std::size_t, std::vector<Rational>> by_other;
      for (std::size_t o = 0; o < k; ++o) {
        auto outs = sig.decode_outcomes(o);
        outs[i] = 0;
        std::size_t key = sig.outcome_index(outs);
        auto& row = by_other[key];
        if (row.empty()) row.assign(dim + 1, Rational());
        row[s * k + o] += 1;
        row[s0 * k + o] -= 1;
      }
      for (auto& [key, row] : by_other) rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace detail

inline AffineHull ns_affine_hull(const SystemSignature& sig) {
  const std::size_t dim = sig.dimension();
  auto m = detail::ns_equalities(sig);
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < dim && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && m[p][c].is_zero()) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[r]);
    Rational inv = Rational(1) / m[r][c];
    for (auto& x : m[r]) x *= inv;
    for (std::size_t q = 0; q < m.size(); ++q) {
      if (q == r || m[q][c].is_zero()) continue;
      Rational f = m[q][c];
      for (std::size_t j = 0; j <= dim; ++j) m[q][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  for (std::size_t q = r; q < m.size(); ++q)
    if (!m[q][dim].is_zero()) throw StructuralError("inconsistent no-signalling system");
  AffineHull hull;
  hull.particular.assign(dim, Rational());
  for (std::size_t i = 0; i < pivots.size(); ++i) hull.particular[pivots[i]] = m[i][dim];
  for (std::size_t f = 0; f < dim; ++f) {
    if (std::find(pivots.begin(), pivots.end(), f) != pivots.end()) continue;
    std::vector<Rational> v(dim);
    v[f] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -m[i][f];
    hull.basis.push_back(std::move(v));
  }
  return hull;
}

inline constexpr std::size_t kMaxEnumerationDimension = 16;

/// Vertices of the no-signalling polytope, found by intersecting the affine
/// hull with every choice of `dim(hull)` tight nonnegativity constraints.
/// Sorted in descending lexicographic order of entries.
inline std::vector<StateVector> enumerate_ns_vertices(const SystemSignature& sig) {
  if (sig.size() > 2 || sig.dimension() > kMaxEnumerationDimension) {
    throw NotImplementedAtScale("vertex enumeration not implemented at this scale: " + sig.str());
  }
  const auto hull = ns_affine_hull(sig);
  const std::size_t dim = sig.dimension();
  const std::size_t k = hull.basis.size();
  std::set<std::vector<Rational>, std::greater<>> found;
  if (k == 0) {
    found.insert(hull.particular);
  } else {
    std::vector<std::size_t> pick(k);
    for (std::size_t i = 0; i < k; ++i) pick[i] = i;
    while (true) {
      RationalMatrix m(k, std::vector<Rational>(k));
      std::vector<Rational> rhs(k);
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) m[i][j] = hull.basis[j][pick[i]];
        rhs[i] = -hull.particular[pick[i]];
      }
      if (auto t = solve_square(std::move(m), std::move(rhs))) {
        std::vector<Rational> x = hull.particular;
        for (std::size_t j = 0; j < k; ++j)
          if (!(*t)[j].is_zero())
            for (std::size_t d = 0; d < dim; ++d) x[d] += (*t)[j] * hull.basis[j][d];
        if (std::all_of(x.begin(), x.end(), [](const Rational& v) { return v >= 0; })) found.insert(std::move(x));
      }
      std::size_t i = k;
      while (i-- > 0) {
        if (pick[i] < dim - k + i) break;
      }
      if (i == static_cast<std::size_t>(-1)) break;
      ++pick[i];
      for (std::size_t j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  std::vector<StateVector> out;
  for (const auto& v : found) out.emplace_back(sig, v);
  return out;
}

/// Decides whether `point` is a convex combination of `vertices` with an
/// exact phase-one simplex (Bland's rule). Returns the weights if so.
inline std::optional<std::vector<Rational>> convex_weights(const std::vector<StateVector>& vertices,
                                                           const StateVector& point) {
  if (vertices.empty()) return std::nullopt;
  const std::size_t nv = vertices.size();
  const std::size_t rows = point.size() + 1;
  for (const auto& v : vertices)
    if (v.size() != point.size()) throw StructuralError("vertex/point dimension mismatch");
  // Tableau columns: nv weights, rows artificials, rhs.
  const std::size_t cols = nv + rows;
  RationalMatrix tab(rows, std::vector<Rational>(cols + 1));
  for (std::size_t r = 0; r < rows; ++r) {
    Rational b = r < point.size() ? point[r] : Rational(1);
    for (std::size_t j = 0; j < nv; ++j) tab[r][j] = r < point.size() ? vertices[j][r] : Rational(1);
    tab[r][nv + r] = 1;
    tab[r][cols] = b;  // b >= 0 because points have nonnegative entries
  }
  std::vector<std::size_t> basis(rows);
  for (std::size_t r = 0; r < rows; ++r) basis[r] = nv + r;
  // Reduced costs of minimizing the sum of artificials.
  std::vector<Rational> cost(cols + 1);
  for (std::size_t j = 0; j <= cols; ++j) {
    if (j >= nv && j < cols) continue;
    Rational s;
    for (std::size_t r = 0; r < rows; ++r) s += tab[r][j];
    cost[j] = -s;
  }
  while (true) {
    std::size_t enter = cols;
    for (std::size_t j = 0; j < cols; ++j)
      if (cost[j] < 0) {
        enter = j;
        break;
      }
    if (enter == cols) break;
    std::size_t leave = rows;
    Rational best;
    for (std::size_t r = 0; r < rows; ++r) {
      if (tab[r][enter] <= 0) continue;
      Rational ratio = tab[r][cols] / tab[r][enter];
      if (leave == rows || ratio < best || (ratio == best && basis[r] < basis[leave])) {
        leave = r;
        best = ratio;
      }
    }
    if (leave == rows) break;  // unbounded cannot happen for phase one; be safe
    Rational inv = Rational(1) / tab[leave][enter];
    for (auto& x : tab[leave]) x *= inv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == leave || tab[r][enter].is_zero()) continue;
      Rational f = tab[r][enter];
      for (std::size_t j = 0; j <= cols; ++j) tab[r][j] -= f * tab[leave][j];
    }
    if (!cost[enter].is_zero()) {
      Rational f = cost[enter];
      for (std::size_t j = 0; j <= cols; ++j) cost[j] -= f * tab[leave][j];
    }
    basis[leave] = enter;
  }
  if (!cost[cols].is_zero()) return std::nullopt;
  std::vector<Rational> w(nv);
  for (std::size_t r = 0; r < rows; ++r)
    if (basis[r] < nv) w[basis[r]] = tab[r][cols];
  return w;
}

/// sum over x,y of P(a xor b = xy xor alpha x xor beta y xor gamma | x,y) on
/// a two-gbit state; the local bound is 3 and the algebraic maximum 4.
inline Rational chsh_value(const StateVector& state, unsigned alpha = 0, unsigned beta = 0, unsigned gamma = 0) {
  if (state.signature() != SystemSignature::gbits(2)) throw StructuralError("CHSH needs a two-gbit state");
  Rational total;
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y)
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b)
          if ((a ^ b) == ((x & y) ^ (alpha & x) ^ (beta & y) ^ gamma)) total += state.at({x, y}, {a, b});
  return total;
}

/// Largest value over the eight relabelled CHSH expressions.
inline Rational max_chsh_value(const StateVector& state) {
  Rational best;
  for (unsigned m = 0; m < 8; ++m) best = std::max(best, chsh_value(state, m & 1, (m >> 1) & 1, (m >> 2) & 1));
  return best;
}

/// Extreme points used for signatures beyond enumeration scale: products of
/// deterministic gbits and PR-box relabellings on every pair of gbits with
/// deterministic gbits elsewhere. Not the full vertex set.
inline std::vector<StateVector> gbit_spanning_set(std::size_t n) {
  if (n == 0) throw StructuralError("need at least one gbit");
  auto singles = enumerate_ns_vertices(SystemSignature{kGbit});
  std::vector<StateVector> out;
  std::function<void(std::size_t, std::optional<StateVector>)> products = [&](std::size_t i, std::optional<StateVector> acc) {
    if (i == n) {
      out.push_back(*acc);
      return;
    }
    for (const auto& s : singles) products(i + 1, acc ? tensor(*acc, s) : s);
  };
  products(0, std::nullopt);
  if (n < 2) return out;
  std::vector<StateVector> prs;
  for (const auto& v : enumerate_ns_vertices(SystemSignature::gbits(2)))
    if (max_chsh_value(v) > 3) prs.push_back(v);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      // Build PR on (0,1) followed by deterministic rest, then move into place.
      std::vector<std::size_t> rest;
      for (std::size_t r = 0; r < n; ++r)
        if (r != i && r != j) rest.push_back(r);
      std::vector<StateVector> tails;
      std::function<void(std::size_t, std::optional<StateVector>)> fill = [&](std::size_t d, std::optional<StateVector> acc) {
        if (d == rest.size()) {
          if (acc) tails.push_back(*acc);
          return;
        }
        for (const auto& s : singles) fill(d + 1, acc ? tensor(*acc, s) : s);
      };
      fill(0, std::nullopt);
      // position p in the built state holds original subsystem built_order[p]
      std::vector<std::size_t> built_order{i, j};
      built_order.insert(built_order.end(), rest.begin(), rest.end());
      std::vector<std::size_t> order(n);
      for (std::size_t p = 0; p < n; ++p) order[built_order[p]] = p;
      for (const auto& pr : prs) {
        if (tails.empty()) {
          out.push_back(pr);
          continue;
        }
        for (const auto& t : tails) out.push_back(permute(tensor(pr, t), order));
      }
    }
  return out;
}

}  // namespace paradox::gpt
