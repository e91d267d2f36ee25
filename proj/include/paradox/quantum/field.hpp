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

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>

#include "paradox/rational.hpp"

namespace paradox::quantum {

/// Element a + b*sqrt2 + c*sqrt3 + d*sqrt6 of Q(sqrt2, sqrt3).
class Surd {
 public:
  Surd() = default;
  Surd(Rational a) : a_(a) {}  // NOLINT: rationals embed implicitly
  Surd(std::int64_t a) : a_(a) {}  // NOLINT
  Surd(Rational a, Rational b, Rational c, Rational d) : a_(a), b_(b), c_(c), d_(d) {}

  static Surd sqrt2() { return {0, 1, 0, 0}; }
  static Surd sqrt3() { return {0, 0, 1, 0}; }
  static Surd sqrt6() { return {0, 0, 0, 1}; }

  const Rational& rational_part() const { return a_; }
  const Rational& sqrt2_part() const { return b_; }
  const Rational& sqrt3_part() const { return c_; }
  const Rational& sqrt6_part() const { return d_; }

  bool is_zero() const { return a_.is_zero() && b_.is_zero() && c_.is_zero() && d_.is_zero(); }
  bool is_rational() const { return b_.is_zero() && c_.is_zero() && d_.is_zero(); }

  double to_double() const {
    return a_.to_double() + b_.to_double() * std::sqrt(2.0) + c_.to_double() * std::sqrt(3.0) +
           d_.to_double() * std::sqrt(6.0);
  }

  Surd operator-() const { return {-a_, -b_, -c_, -d_}; }
  Surd& operator+=(const Surd& o) {
    a_ += o.a_;
    b_ += o.b_;
    c_ += o.c_;
    d_ += o.d_;
    return *this;
  }
  Surd& operator-=(const Surd& o) { return *this += -o; }
  Surd& operator*=(const Surd& o) {
    const auto& [e, f, g, h] = std::tie(o.a_, o.b_, o.c_, o.d_);
    Surd r{a_ * e + 2 * b_ * f + 3 * c_ * g + 6 * d_ * h,  //
           a_ * f + b_ * e + 3 * c_ * h + 3 * d_ * g,      //
           a_ * g + c_ * e + 2 * b_ * h + 2 * d_ * f,      //
           a_ * h + d_ * e + b_ * g + c_ * f};
    return *this = r;
  }
  Surd& operator/=(const Surd& o) { return *this *= o.inverse(); }

  Surd inverse() const {
    if (is_zero()) throw std::domain_error("division by zero in Q(sqrt2,sqrt3)");
    // x * conj2(x) lies in Q(sqrt3); times its conj3 lands in Q.
    Surd c2{a_, -b_, c_, -d_};
    Surd y = *this * c2;
    Surd c3{y.a_, 0, -y.c_, 0};
    Surd n = y * c3;
    return c2 * c3 * Surd(Rational(1) / n.a_);
  }

  friend Surd operator+(Surd a, const Surd& b) { return a += b; }
  friend Surd operator-(Surd a, const Surd& b) { return a -= b; }
  friend Surd operator*(Surd a, const Surd& b) { return a *= b; }
  friend Surd operator/(Surd a, const Surd& b) { return a /= b; }
  friend bool operator==(const Surd&, const Surd&) = default;

  /// Exact square root of a nonnegative rational when it lies in the field.
  static std::optional<Surd> sqrt(const Rational& r) {
    if (r < 0) return std::nullopt;
    if (r.is_zero()) return Surd();
    for (std::int64_t s : {1, 2, 3, 6}) {
      // r = m^2 * s  <=>  r / s is a rational square.
      Rational q = r / Rational(s);
      auto root = [](std::int64_t v) -> std::optional<std::int64_t> {
        auto t = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<long double>(v))));
        for (auto c : {t - 1, t, t + 1})
          if (c >= 0 && c * c == v) return c;
        return std::nullopt;
      };
      auto n = root(q.num());
      auto d = root(q.den());
      if (n && d) {
        Rational m(*n, *d);
        switch (s) {
          case 1:
            return Surd(m);
          case 2:
            return Surd(0, m, 0, 0);
          case 3:
            return Surd(0, 0, m, 0);
          default:
            return Surd(0, 0, 0, m);
        }
      }
    }
    return std::nullopt;
  }

  std::string str() const {
    std::string s;
    auto term = [&](const Rational& v, const char* unit) {
      if (v.is_zero()) return;
      std::string t = v.str();
      if (*unit) t = (v == 1 ? std::string() : v == -1 ? std::string("-") : t + "*") + unit;
      if (!s.empty()) s += t[0] == '-' ? " - " + t.substr(1) : " + " + t;
      else s = t;
    };
    term(a_, "");
    term(b_, "sqrt2");
    term(c_, "sqrt3");
    term(d_, "sqrt6");
    return s.empty() ? "0" : s;
  }

 private:
  Rational a_, b_, c_, d_;
};

/// Complex number with real and imaginary parts in Q(sqrt2, sqrt3).
struct Complex {
  Surd re;
  Surd im;

  Complex() = default;
  Complex(Surd r, Surd i = Surd()) : re(std::move(r)), im(std::move(i)) {}  // NOLINT
  Complex(std::int64_t r) : re(r) {}  // NOLINT

  static Complex i() { return {Surd(), Surd(1)}; }

  Complex conj() const { return {re, -im}; }
  Surd norm2() const { return re * re + im * im; }
  bool is_zero() const { return re.is_zero() && im.is_zero(); }

  Complex operator-() const { return {-re, -im}; }
  Complex& operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Complex& operator-=(const Complex& o) { return *this += -o; }
  Complex& operator*=(const Complex& o) {
    Complex r{re * o.re - im * o.im, re * o.im + im * o.re};
    return *this = r;
  }
  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
  friend Complex operator/(const Complex& a, const Surd& s) { return {a.re / s, a.im / s}; }
  friend bool operator==(const Complex&, const Complex&) = default;

  std::string str() const {
    if (im.is_zero()) return re.str();
    if (re.is_zero()) return "i*(" + im.str() + ")";
    return "(" + re.str() + ") + i*(" + im.str() + ")";
  }
};

}  // namespace paradox::quantum
