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

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "paradox/errors.hpp"
#include "paradox/gpt/state_vector.hpp"
#include "paradox/rational.hpp"

namespace paradox::gpt {

/// Row-compressed exact matrix. Zero entries are never stored.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows) {}

  static SparseMatrix identity(std::size_t n) {
    SparseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
  }

  static SparseMatrix from_dense(const std::vector<std::vector<Rational>>& rows) {
    SparseMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != m.cols_) throw StructuralError("ragged dense matrix");
      for (std::size_t c = 0; c < m.cols_; ++c) m.set(r, c, rows[r][c]);
    }
    return m;
  }

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }

  void set(std::size_t r, std::size_t c, const Rational& v) {
    bounds(r, c);
    if (v.is_zero())
      rows_[r].erase(c);
    else
      rows_[r][c] = v;
  }
  void add(std::size_t r, std::size_t c, const Rational& v) { set(r, c, at(r, c) + v); }

  Rational at(std::size_t r, std::size_t c) const {
    bounds(r, c);
    auto it = rows_[r].find(c);
    return it == rows_[r].end() ? Rational() : it->second;
  }

  const std::map<std::size_t, Rational>& row(std::size_t r) const { return rows_.at(r); }

  std::vector<Rational> operator*(const std::vector<Rational>& v) const {
    if (v.size() != cols_) throw StructuralError("matrix/vector size mismatch");
    std::vector<Rational> out(rows_.size());
    for (std::size_t r = 0; r < rows_.size(); ++r)
      for (const auto& [c, x] : rows_[r]) out[r] += x * v[c];
    return out;
  }

  SparseMatrix operator*(const SparseMatrix& rhs) const {
    if (cols_ != rhs.rows()) throw StructuralError("matrix product size mismatch");
    SparseMatrix out(rows(), rhs.cols());
    for (std::size_t r = 0; r < rows(); ++r)
      for (const auto& [k, x] : rows_[r])
        for (const auto& [c, y] : rhs.rows_[k]) out.add(r, c, x * y);
    return out;
  }

  SparseMatrix scaled(const Rational& f) const {
    SparseMatrix out(rows(), cols_);
    for (std::size_t r = 0; r < rows(); ++r)
      for (const auto& [c, x] : rows_[r]) out.set(r, c, x * f);
    return out;
  }

  SparseMatrix operator+(const SparseMatrix& rhs) const {
    if (rows() != rhs.rows() || cols_ != rhs.cols_) throw StructuralError("matrix sum size mismatch");
    SparseMatrix out = *this;
    for (std::size_t r = 0; r < rows(); ++r)
      for (const auto& [c, x] : rhs.rows_[r]) out.add(r, c, x);
    return out;
  }

  /// Sub-block [r0, r0+nr) x [c0, c0+nc) as its own matrix.
  SparseMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    SparseMatrix out(nr, nc);
    for (std::size_t r = 0; r < nr; ++r)
      for (const auto& [c, x] : rows_.at(r0 + r))
        if (c >= c0 && c < c0 + nc) out.set(r, c - c0, x);
    return out;
  }

  bool is_zero() const {
    for (const auto& r : rows_)
      if (!r.empty()) return false;
    return true;
  }

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

 private:
  void bounds(std::size_t r, std::size_t c) const {
    if (r >= rows_.size() || c >= cols_) throw StructuralError("matrix index out of range");
  }

  std::size_t cols_ = 0;
  std::vector<std::map<std::size_t, Rational>> rows_;
};

struct Branch {
  std::string label;
  SparseMatrix matrix;
};

/// Outcome-indexed family {M_i} mapping states on `input` to (unnormalized)
/// states on `output`.
class Transformation {
 public:
  Transformation(SystemSignature input, SystemSignature output, std::vector<Branch> branches)
      : in_(std::move(input)), out_(std::move(output)), branches_(std::move(branches)) {
    if (branches_.empty()) throw StructuralError("transformation needs at least one branch");
    for (const auto& b : branches_) {
      if (b.matrix.rows() != out_.dimension() || b.matrix.cols() != in_.dimension()) {
        throw StructuralError("branch '" + b.label + "' is " + std::to_string(b.matrix.rows()) + "x" +
                              std::to_string(b.matrix.cols()) + ", expected " + std::to_string(out_.dimension()) + "x" +
                              std::to_string(in_.dimension()));
      }
    }
  }

  static Transformation identity(const SystemSignature& sig) {
    return Transformation(sig, sig, {{"id", SparseMatrix::identity(sig.dimension())}});
  }

  const SystemSignature& input_signature() const { return in_; }
  const SystemSignature& output_signature() const { return out_; }
  const std::vector<Branch>& branches() const { return branches_; }
  bool deterministic() const { return branches_.size() == 1; }

  /// Same matrices, output read against a layout-equivalent signature.
  Transformation with_output_signature(SystemSignature sig) const {
    if (sig.joint_settings() != out_.joint_settings() || sig.joint_outcomes() != out_.joint_outcomes()) {
      throw StructuralError("output signature " + sig.str() + " is not layout-equivalent to " + out_.str());
    }
    return Transformation(in_, std::move(sig), branches_);
  }
  Transformation with_input_signature(SystemSignature sig) const {
    if (sig.joint_settings() != in_.joint_settings() || sig.joint_outcomes() != in_.joint_outcomes()) {
      throw StructuralError("input signature " + sig.str() + " is not layout-equivalent to " + in_.str());
    }
    return Transformation(std::move(sig), out_, branches_);
  }

  friend bool operator==(const Transformation&, const Transformation&) = default;

 private:
  SystemSignature in_;
  SystemSignature out_;
  std::vector<Branch> branches_;
};

/// `second` after `first`, branch-wise: labels are joined with '/'.
inline Transformation compose(const Transformation& second, const Transformation& first) {
  if (first.output_signature().dimension() != second.input_signature().dimension() ||
      first.output_signature().joint_settings() != second.input_signature().joint_settings()) {
    throw StructuralError("cannot compose: " + first.output_signature().str() + " feeds " + second.input_signature().str());
  }
  std::vector<Branch> out;
  for (const auto& b1 : first.branches())
    for (const auto& b2 : second.branches()) {
      std::string label = first.deterministic() ? b2.label : second.deterministic() ? b1.label : b1.label + "/" + b2.label;
      out.push_back({label, b2.matrix * b1.matrix});
    }
  return Transformation(first.input_signature(), second.output_signature(), std::move(out));
}

struct BranchResult {
  std::string label;
  Rational probability;
  std::optional<StateVector> post;  // empty when the branch never happens
};

namespace detail {

/// Block sums of a raw vector on `sig`; nullopt when they differ.
inline std::optional<Rational> common_block_norm(const SystemSignature& sig, const std::vector<Rational>& v) {
  const std::size_t k = sig.joint_outcomes();
  std::optional<Rational> norm;
  for (std::size_t s = 0; s < sig.joint_settings(); ++s) {
    Rational sum;
    for (std::size_t o = 0; o < k; ++o) sum += v[s * k + o];
    if (norm && *norm != sum) return std::nullopt;
    norm = sum;
  }
  return norm;
}

}  // namespace detail

inline std::vector<BranchResult> apply(const Transformation& t, const StateVector& state) {
  if (state.signature().dimension() != t.input_signature().dimension() ||
      state.signature().joint_settings() != t.input_signature().joint_settings()) {
    throw StructuralError("transformation expects " + t.input_signature().str() + ", state is " + state.signature().str());
  }
  std::vector<BranchResult> out;
  for (const auto& b : t.branches()) {
    auto raw = b.matrix * state.entries();
    auto norm = detail::common_block_norm(t.output_signature(), raw);
    if (!norm) throw InvalidOperation("invalid operation on this state: branch '" + b.label + "' has setting-dependent norm");
    if (norm->is_zero()) {
      out.push_back({b.label, *norm, std::nullopt});
      continue;
    }
    for (auto& x : raw) x /= *norm;
    try {
      out.push_back({b.label, *norm, StateVector(t.output_signature(), std::move(raw))});
    } catch (const DomainError& e) {
      throw InvalidOperation("invalid operation on this state: branch '" + b.label + "': " + e.what());
    }
  }
  return out;
}

/// Single-branch application returning the post-state directly.
inline StateVector apply_deterministic(const Transformation& t, const StateVector& state) {
  if (!t.deterministic()) throw StructuralError("transformation has several branches");
  auto r = apply(t, state);
  if (!r.front().post) throw InvalidOperation("deterministic transformation annihilated the state");
  if (r.front().probability != state.norm()) throw InvalidOperation("deterministic transformation changed the norm");
  return *r.front().post;
}

enum class OpCondition { kNormRange, kNormSum, kOutputState };

inline const char* to_string(OpCondition c) {
  switch (c) {
    case OpCondition::kNormRange:
      return "op1 (0 <= |M_i P| <= 1)";
    case OpCondition::kNormSum:
      return "op2 (sum_i |M_i P| = 1)";
    case OpCondition::kOutputState:
      return "op3 (M_i P is a state)";
  }
  return "?";
}

struct OperationViolation {
  OpCondition condition;
  std::size_t vertex = 0;
  std::string branch;
  std::string detail;
};

struct ValidationReport {
  bool ok = true;
  std::optional<OperationViolation> violation;
  explicit operator bool() const { return ok; }
};

/// Checks op1-op3 on every vertex. The output no-signalling check uses the
/// transformation's declared output signature, so a merged output subsystem
/// is judged as one system.
inline ValidationReport validate_operation(const Transformation& t, const std::vector<StateVector>& vertices) {
  const auto& osig = t.output_signature();
  for (std::size_t v = 0; v < vertices.size(); ++v) {
    const auto& in = vertices[v].entries();
    if (in.size() != t.input_signature().dimension()) throw StructuralError("vertex dimension mismatch");
    std::vector<std::vector<Rational>> raws;
    Rational total;
    for (const auto& b : t.branches()) {
      raws.push_back(b.matrix * in);
      auto norm = detail::common_block_norm(osig, raws.back());
      if (!norm) return {false, OperationViolation{OpCondition::kOutputState, v, b.label, "setting-dependent block norm"}};
      if (*norm < 0 || *norm > 1) {
        return {false, OperationViolation{OpCondition::kNormRange, v, b.label, "norm " + norm->str()}};
      }
      total += *norm;
    }
    if (total != 1) return {false, OperationViolation{OpCondition::kNormSum, v, "", "norms sum to " + total.str()}};
    for (std::size_t i = 0; i < raws.size(); ++i) {
      const auto& label = t.branches()[i].label;
      for (const auto& x : raws[i]) {
        if (x < 0 || x > 1) return {false, OperationViolation{OpCondition::kOutputState, v, label, "entry " + x.str()}};
      }
      StateVector out(osig, raws[i]);
      if (out.norm().is_zero()) continue;
      auto ns = is_no_signalling(out.renormalized());
      if (!ns) return {false, OperationViolation{OpCondition::kOutputState, v, label, "signalling output: " + ns.witness->describe()}};
    }
  }
  return {true, std::nullopt};
}

/// Lifts `t`, acting on subsystems [first, first + count) of `full`, to the
/// whole signature. Those subsystems are replaced by t's output subsystems.
inline Transformation embed(const Transformation& t, const SystemSignature& full, std::size_t first, std::size_t count) {
  auto local_in = full.slice(first, count);
  if (local_in.joint_settings() != t.input_signature().joint_settings() ||
      local_in.joint_outcomes() != t.input_signature().joint_outcomes()) {
    throw StructuralError("embedded transformation expects " + t.input_signature().str() + ", slice is " + local_in.str());
  }
  std::vector<Subsystem> parts(full.subsystems().begin(), full.subsystems().begin() + first);
  for (const auto& p : t.output_signature().subsystems()) parts.push_back(p);
  parts.insert(parts.end(), full.subsystems().begin() + first + count, full.subsystems().end());
  SystemSignature out_sig(parts);

  // Split the full joint index into (before, local, after) digits.
  auto prod = [](const SystemSignature& s, std::size_t a, std::size_t b, bool settings) {
    std::size_t n = 1;
    for (std::size_t i = a; i < b; ++i) n *= settings ? s[i].settings : s[i].outcomes;
    return n;
  };
  const std::size_t n = full.size();
  const std::size_t s_after = prod(full, first + count, n, true), o_after = prod(full, first + count, n, false);
  const std::size_t s_before = prod(full, 0, first, true), o_before = prod(full, 0, first, false);
  const std::size_t ls_in = local_in.joint_settings(), lo_in = local_in.joint_outcomes();
  const auto& osig = t.output_signature();
  const std::size_t ls_out = osig.joint_settings(), lo_out = osig.joint_outcomes();
  const std::size_t in_k = full.joint_outcomes(), out_k = out_sig.joint_outcomes();

  std::vector<Branch> branches;
  for (const auto& b : t.branches()) {
    SparseMatrix m(out_sig.dimension(), full.dimension());
    for (std::size_t sb = 0; sb < s_before; ++sb)
      for (std::size_t sa = 0; sa < s_after; ++sa)
        for (std::size_t ob = 0; ob < o_before; ++ob)
          for (std::size_t oa = 0; oa < o_after; ++oa)
            for (std::size_t lrow = 0; lrow < osig.dimension(); ++lrow) {
              std::size_t ls = lrow / lo_out, lo = lrow % lo_out;
              std::size_t row = ((sb * ls_out + ls) * s_after + sa) * out_k + (ob * lo_out + lo) * o_after + oa;
              for (const auto& [lcol, x] : b.matrix.row(lrow)) {
                std::size_t cs = lcol / lo_in, co = lcol % lo_in;
                std::size_t col = ((sb * ls_in + cs) * s_after + sa) * in_k + (ob * lo_in + co) * o_after + oa;
                m.set(row, col, x);
              }
            }
    branches.push_back({b.label, std::move(m)});
  }
  return Transformation(full, std::move(out_sig), std::move(branches));
}

}  // namespace paradox::gpt
