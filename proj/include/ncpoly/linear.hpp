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

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ncpoly/errors.hpp"
#include "ncpoly/matrix.hpp"
#include "ncpoly/rational.hpp"

namespace ncpoly {

struct VarId {
  std::uint32_t value = 0;
  friend auto operator<=>(VarId, VarId) = default;
};

/// Sparse affine function sum_v c_v * x_v + constant. Zero coefficients are
/// never stored.
class AffineExpr {
 public:
  using Terms = std::map<VarId, Rational>;

  AffineExpr() = default;
  explicit AffineExpr(Rational constant) : constant_(std::move(constant)) {}
  AffineExpr(Terms terms, Rational constant) : constant_(std::move(constant)) {
    for (auto& [var, coeff] : terms) {
      if (!coeff.is_zero()) terms_.emplace(var, std::move(coeff));
    }
  }

  static AffineExpr variable(VarId var) { return AffineExpr({{var, Rational(1)}}, Rational(0)); }

  const Terms& terms() const { return terms_; }
  const Rational& constant() const { return constant_; }
  bool is_constant() const { return terms_.empty(); }

  Rational coeff(VarId var) const {
    const auto it = terms_.find(var);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  void add_term(VarId var, const Rational& coeff) {
    if (coeff.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(var, coeff);
    if (!inserted) {
      it->second += coeff;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  void set_constant(Rational c) { constant_ = std::move(c); }
  void add_constant(const Rational& c) { constant_ += c; }

  /// this += k * other
  void add_scaled(const AffineExpr& other, const Rational& k) {
    if (k.is_zero()) return;
    for (const auto& [var, coeff] : other.terms_) add_term(var, coeff * k);
    constant_ += other.constant_ * k;
  }

  AffineExpr scaled(const Rational& k) const {
    AffineExpr out;
    out.add_scaled(*this, k);
    return out;
  }

  /// Replaces var by expr everywhere it occurs.
  void substitute(VarId var, const AffineExpr& expr) {
    const auto it = terms_.find(var);
    if (it == terms_.end()) return;
    const Rational k = it->second;
    terms_.erase(it);
    add_scaled(expr, k);
  }

  /// Values indexed by VarId::value.
  Rational evaluate(std::span<const Rational> values) const {
    mpq_class acc = constant_.raw();
    for (const auto& [var, coeff] : terms_) acc += coeff.raw() * values[var.value].raw();
    return Rational(std::move(acc));
  }

  friend bool operator==(const AffineExpr&, const AffineExpr&) = default;

 private:
  Terms terms_;
  Rational constant_;
};

enum class RowKind { kGeq, kEq };

/// A linear constraint `expr >= 0` or `expr == 0`.
class LinRow {
 public:
  LinRow() = default;
  LinRow(RowKind kind, AffineExpr expr) : kind_(kind), expr_(std::move(expr)) {}
  LinRow(RowKind kind, AffineExpr::Terms terms, Rational constant)
      : kind_(kind), expr_(std::move(terms), std::move(constant)) {}

  static LinRow geq(AffineExpr expr) { return {RowKind::kGeq, std::move(expr)}; }
  static LinRow eq(AffineExpr expr) { return {RowKind::kEq, std::move(expr)}; }

  RowKind kind() const { return kind_; }
  bool is_eq() const { return kind_ == RowKind::kEq; }
  const AffineExpr& expr() const { return expr_; }
  AffineExpr& mutable_expr() { return expr_; }
  const AffineExpr::Terms& terms() const { return expr_.terms(); }
  const Rational& constant() const { return expr_.constant(); }
  Rational coeff(VarId var) const { return expr_.coeff(var); }

  Rational evaluate(std::span<const Rational> values) const { return expr_.evaluate(values); }

  bool satisfied_by(std::span<const Rational> values) const {
    const Rational v = evaluate(values);
    return kind_ == RowKind::kEq ? v.is_zero() : v.sign() >= 0;
  }

  friend bool operator==(const LinRow&, const LinRow&) = default;

  /// Lexicographic order: coefficients compared variable by variable in
  /// VarId order (absent = 0), then the constant, then the kind.
  friend std::strong_ordering operator<=>(const LinRow& a, const LinRow& b) {
    auto ia = a.terms().begin();
    auto ib = b.terms().begin();
    const auto ea = a.terms().end();
    const auto eb = b.terms().end();
    while (ia != ea || ib != eb) {
      if (ib == eb || (ia != ea && ia->first < ib->first)) {
        if (auto c = ia->second <=> Rational(0); c != 0) return c;
        ++ia;
      } else if (ia == ea || ib->first < ia->first) {
        if (auto c = Rational(0) <=> ib->second; c != 0) return c;
        ++ib;
      } else {
        if (auto c = ia->second <=> ib->second; c != 0) return c;
        ++ia;
        ++ib;
      }
    }
    if (auto c = a.constant() <=> b.constant(); c != 0) return c;
    return static_cast<int>(a.kind_) <=> static_cast<int>(b.kind_);
  }

 private:
  RowKind kind_ = RowKind::kGeq;
  AffineExpr expr_;
};

struct LinRowHash {
  std::size_t operator()(const LinRow& row) const noexcept {
    std::size_t h = std::hash<int>{}(static_cast<int>(row.kind()));
    auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
    for (const auto& [var, coeff] : row.terms()) {
      mix(var.value);
      mix(coeff.hash());
    }
    mix(row.constant().hash());
    return h;
  }
};

/// Ordered registry of variable names plus rows over them.
class LinearSystem {
 public:
  VarId add_variable(std::string name) {
    names_.push_back(std::move(name));
    return VarId{static_cast<std::uint32_t>(names_.size() - 1)};
  }

  void add_row(LinRow row) {
    for (const auto& [var, coeff] : row.terms()) {
      if (var.value >= names_.size()) {
        throw Error(ErrorCode::kIndexOutOfRange,
                    "row references unregistered variable " + std::to_string(var.value));
      }
    }
    rows_.push_back(std::move(row));
  }

  std::size_t num_variables() const { return names_.size(); }
  const std::vector<std::string>& variable_names() const { return names_; }
  const std::string& name(VarId var) const { return names_.at(var.value); }
  const std::vector<LinRow>& rows() const { return rows_; }

  bool satisfied_by(std::span<const Rational> values) const {
    return std::all_of(rows_.begin(), rows_.end(),
                       [&](const LinRow& r) { return r.satisfied_by(values); });
  }

  /// Same registry, no rows.
  LinearSystem empty_copy() const {
    LinearSystem out;
    out.names_ = names_;
    return out;
  }

 private:
  std::vector<std::string> names_;
  std::vector<LinRow> rows_;
};

inline std::string to_string(const AffineExpr& expr, const std::function<std::string(VarId)>& name) {
  std::string out;
  for (const auto& [var, coeff] : expr.terms()) {
    const bool negative = coeff.sign() < 0;
    const Rational mag = coeff.abs();
    if (out.empty()) {
      out += negative ? "-" : "";
    } else {
      out += negative ? " - " : " + ";
    }
    if (mag != Rational(1)) out += mag.to_string() + "*";
    out += name(var);
  }
  if (!expr.constant().is_zero() || out.empty()) {
    if (out.empty()) {
      out = expr.constant().to_string();
    } else {
      out += expr.constant().sign() < 0 ? " - " : " + ";
      out += expr.constant().abs().to_string();
    }
  }
  return out;
}

inline std::string to_string(const LinRow& row, const std::function<std::string(VarId)>& name) {
  return to_string(row.expr(), name) + (row.is_eq() ? " = 0" : " >= 0");
}

/// Positive factor k such that k * row has coprime integer coefficients and
/// constant (1 for the zero row).
inline Rational integer_scale(const LinRow& row) {
  BigInt den_lcm = row.constant().denominator();
  for (const auto& [var, coeff] : row.terms()) den_lcm = lcm(den_lcm, coeff.denominator());
  BigInt num_gcd = 0;
  auto fold = [&](const Rational& v) {
    BigInt scaled = v.numerator() * (den_lcm / v.denominator());
    num_gcd = gcd(num_gcd, scaled);
  };
  for (const auto& [var, coeff] : row.terms()) fold(coeff);
  fold(row.constant());
  if (num_gcd == 0) return Rational(1);
  return Rational(den_lcm, num_gcd);
}

/// Deterministic representative of the ray {k * row : k > 0}: integer
/// entries with collective gcd 1. Equalities additionally get a positive
/// leading coefficient (or positive constant when no variables remain).
inline LinRow canonicalize_row(const LinRow& row, Rational* scale_out = nullptr) {
  Rational k = integer_scale(row);
  if (row.is_eq()) {
    const Rational& lead = row.terms().empty() ? row.constant() : row.terms().begin()->second;
    if (lead.sign() < 0) k = -k;
  }
  if (scale_out) *scale_out = k;
  return LinRow(row.kind(), row.expr().scaled(k));
}

/// Result of eliminating all equality rows by substitution.
struct RowReduction {
  /// Eliminated variable -> affine expression in the surviving variables.
  std::map<VarId, AffineExpr> substitutions;
  /// Inequality rows rewritten over the surviving variables.
  LinearSystem reduced;
};

namespace detail {

inline std::vector<std::size_t> preference_ranks(std::size_t num_vars, std::span<const VarId> preference) {
  constexpr std::size_t kUnranked = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> rank(num_vars, kUnranked);
  for (std::size_t i = 0; i < preference.size(); ++i) rank.at(preference[i].value) = i;
  return rank;
}

}  // namespace detail

/// Solves the EQ rows for pivot variables and substitutes them into the GEQ
/// rows. Pivots are chosen per row: the variable appearing earliest in
/// `preference`, else the highest-numbered variable of the row.
inline RowReduction row_reduce_equalities(const LinearSystem& system,
                                          std::span<const VarId> preference = {}) {
  const auto rank = detail::preference_ranks(system.num_variables(), preference);
  auto better = [&](VarId a, VarId b) {
    if (rank[a.value] != rank[b.value]) return rank[a.value] < rank[b.value];
    return a.value > b.value;
  };
  auto apply = [](AffineExpr expr, const std::map<VarId, AffineExpr>& subs) {
    // Substitutions are kept fully back-substituted, so one pass suffices.
    std::vector<VarId> hit;
    for (const auto& [var, coeff] : expr.terms()) {
      if (subs.count(var)) hit.push_back(var);
    }
    for (VarId var : hit) expr.substitute(var, subs.at(var));
    return expr;
  };

  RowReduction out;
  for (const auto& row : system.rows()) {
    if (!row.is_eq()) continue;
    AffineExpr expr = apply(row.expr(), out.substitutions);
    if (expr.is_constant()) {
      if (!expr.constant().is_zero()) {
        throw Error(ErrorCode::kInconsistentSystem,
                    "equalities imply " + expr.constant().to_string() + " = 0");
      }
      continue;
    }
    VarId pivot = expr.terms().begin()->first;
    for (const auto& [var, coeff] : expr.terms()) {
      if (better(var, pivot)) pivot = var;
    }
    // pivot = -(expr - c*pivot) / c
    const Rational c = expr.coeff(pivot);
    AffineExpr solved = expr;
    solved.add_term(pivot, -c);
    solved = solved.scaled(-Rational(1) / c);
    for (auto& [var, sub] : out.substitutions) sub.substitute(pivot, solved);
    out.substitutions.emplace(pivot, std::move(solved));
  }

  out.reduced = system.empty_copy();
  for (const auto& row : system.rows()) {
    if (row.is_eq()) continue;
    AffineExpr expr = apply(row.expr(), out.substitutions);
    if (expr.is_constant()) {
      if (expr.constant().sign() < 0) {
        throw Error(ErrorCode::kInconsistentSystem,
                    "inequality reduces to " + expr.constant().to_string() + " >= 0");
      }
      continue;
    }
    out.reduced.add_row(LinRow::geq(std::move(expr)));
  }
  return out;
}

/// Reduced row echelon basis of a set of equalities, with pivots chosen by a
/// fixed column priority. Reducing a row modulo the basis substitutes every
/// pivot variable, which gives each coset of rows a unique representative.
class EqualityBasis {
 public:
  EqualityBasis() = default;

  /// `priority` lists the variables in pivot-preference order; it must cover
  /// every variable that occurs in `rows`.
  EqualityBasis(std::span<const LinRow> rows, std::span<const VarId> priority) {
    std::unordered_map<std::uint32_t, std::size_t> column_of;
    for (std::size_t c = 0; c < priority.size(); ++c) column_of.emplace(priority[c].value, c);
    const std::size_t n = priority.size();
    Matrix m(0, 0);
    for (const auto& row : rows) {
      Vector dense(n + 1);
      for (const auto& [var, coeff] : row.terms()) {
        const auto it = column_of.find(var.value);
        if (it == column_of.end()) {
          throw Error(ErrorCode::kIndexOutOfRange, "equality uses a variable outside the priority list");
        }
        dense[it->second] = coeff;
      }
      dense[n] = row.constant();
      if (m.rows() == 0) m = Matrix(0, n + 1);
      m.append_row(dense);
    }
    if (m.rows() == 0) return;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto pivots = rref(m, order);
    // A zero row with a nonzero constant column means 0 = c.
    for (std::size_t r = pivots.size(); r < m.rows(); ++r) {
      if (!m(r, n).is_zero()) throw Error(ErrorCode::kInconsistentSystem, "equalities are contradictory");
    }
    for (std::size_t r = 0; r < pivots.size(); ++r) {
      const VarId pivot = priority[pivots[r]];
      AffineExpr solved;
      for (std::size_t c = 0; c < n; ++c) {
        if (c == pivots[r] || m(r, c).is_zero()) continue;
        solved.add_term(priority[c], -m(r, c));
      }
      solved.set_constant(-m(r, n));
      pivots_.emplace(pivot, std::move(solved));
    }
  }

  std::size_t size() const { return pivots_.size(); }
  bool empty() const { return pivots_.empty(); }
  const std::map<VarId, AffineExpr>& pivots() const { return pivots_; }
  bool is_pivot(VarId v) const { return pivots_.count(v) > 0; }

  /// The basis as canonical EQ rows, sorted.
  std::vector<LinRow> rows() const {
    std::vector<LinRow> out;
    for (const auto& [pivot, solved] : pivots_) {
      AffineExpr expr = solved.scaled(Rational(-1));
      expr.add_term(pivot, Rational(1));
      out.push_back(canonicalize_row(LinRow::eq(std::move(expr))));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  AffineExpr reduce(AffineExpr expr) const {
    std::vector<VarId> hit;
    for (const auto& [var, coeff] : expr.terms()) {
      if (pivots_.count(var)) hit.push_back(var);
    }
    for (VarId var : hit) expr.substitute(var, pivots_.at(var));
    return expr;
  }

  LinRow reduce(const LinRow& row) const { return LinRow(row.kind(), reduce(row.expr())); }

  /// reduce + canonicalize: the identity key of a row modulo the equalities.
  LinRow canonical(const LinRow& row) const { return canonicalize_row(reduce(row)); }

  bool contains(std::span<const Rational> point) const {
    for (const auto& [pivot, solved] : pivots_) {
      if (point[pivot.value] != solved.evaluate(point)) return false;
    }
    return true;
  }

 private:
  std::map<VarId, AffineExpr> pivots_;
};

}  // namespace ncpoly
