// Copyright 2026 The ncpoly Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

#include "ncpoly/errors.hpp"

namespace ncpoly {

using BigInt = mpz_class;

/// Exact rational scalar, always held in lowest terms with a positive
/// denominator. Serialized as "a/b", or "a" when the denominator is 1.
class Rational {
 public:
  Rational() = default;
  template <std::integral T>
  Rational(T value) : value_(static_cast<long>(value)) {}  // NOLINT(google-explicit-constructor)
  Rational(long num, long den) {
    if (den == 0) throw Error(ErrorCode::kParse, "zero denominator");
    value_ = mpq_class(num, den);
    value_.canonicalize();
  }
  explicit Rational(const BigInt& value) : value_(value) {}
  Rational(const BigInt& num, const BigInt& den) {
    if (den == 0) throw Error(ErrorCode::kParse, "zero denominator");
    value_ = mpq_class(num, den);
    value_.canonicalize();
  }
  explicit Rational(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

  /// Accepts "a", "-a", "a/b", "-a/b" in base 10. The sign may only appear
  /// on the numerator. Non-reduced input such as "2/4" is accepted and reduced.
  static Rational parse(std::string_view text) {
    auto fail = [&]() -> Rational {
      throw Error(ErrorCode::kParse, "malformed rational '" + std::string(text) + "'");
    };
    if (text.empty()) return fail();
    const auto slash = text.find('/');
    const std::string_view num = text.substr(0, slash);
    const std::string_view den =
        slash == std::string_view::npos ? std::string_view{} : text.substr(slash + 1);
    auto digits_ok = [](std::string_view s, bool allow_sign) {
      if (allow_sign && !s.empty() && s.front() == '-') s.remove_prefix(1);
      if (s.empty()) return false;
      for (char c : s) {
        if (c < '0' || c > '9') return false;
      }
      return true;
    };
    if (!digits_ok(num, true)) return fail();
    if (slash != std::string_view::npos && !digits_ok(den, false)) return fail();
    BigInt n(std::string(num), 10);
    BigInt d = slash == std::string_view::npos ? BigInt(1) : BigInt(std::string(den), 10);
    if (d == 0) return fail();
    return Rational(n, d);
  }

  std::string to_string() const {
    if (value_.get_den() == 1) return value_.get_num().get_str(10);
    return value_.get_num().get_str(10) + "/" + value_.get_den().get_str(10);
  }

  const BigInt& numerator() const { return value_.get_num(); }
  const BigInt& denominator() const { return value_.get_den(); }
  const mpq_class& raw() const { return value_; }

  bool is_zero() const { return sgn(value_) == 0; }
  bool is_integer() const { return value_.get_den() == 1; }
  int sign() const { return sgn(value_); }
  double to_double() const { return value_.get_d(); }

  Rational abs() const { return Rational(mpq_class(::abs(value_))); }

  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw Error(ErrorCode::kInternal, "division by zero");
    value_ /= o.value_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.value_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.value_, b.value_);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.to_string();
  }

  std::size_t hash() const {
    std::size_t h = mpz_get_ui(value_.get_num_mpz_t());
    h ^= mpz_get_ui(value_.get_den_mpz_t()) * 0x9e3779b97f4a7c15ULL;
    h ^= static_cast<std::size_t>(sgn(value_) + 1) << 1;
    return h;
  }

 private:
  mpq_class value_{0};
};

inline BigInt gcd(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline BigInt lcm(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

}  // namespace ncpoly

template <>
struct std::hash<ncpoly::Rational> {
  std::size_t operator()(const ncpoly::Rational& r) const noexcept { return r.hash(); }
};
