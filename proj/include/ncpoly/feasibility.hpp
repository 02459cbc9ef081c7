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

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ncpoly/errors.hpp"
#include "ncpoly/linear.hpp"
#include "ncpoly/matrix.hpp"
#include "ncpoly/measurement_polytope.hpp"
#include "ncpoly/nc_system.hpp"
#include "ncpoly/projection.hpp"
#include "ncpoly/scenario.hpp"
#include "ncpoly/simplex.hpp"

namespace ncpoly {

/// Dual vector proving M x = b*, x >= 0 infeasible.
struct Certificate {
  /// Indexed like the rows of NumericF2 (normalization, equivalence, linking).
  Vector y;
  /// y . b*, negative.
  Rational value;
};

struct Feasible {
  /// nu indexed like F2System's nu variables.
  Vector model;
};

struct Infeasible {
  Certificate certificate;
  /// Canonical GEQ row over table coordinates violated by the table.
  LinRow inequality;
  /// Minus the inequality evaluated at the table; positive.
  Rational violation;
};

using Verdict = std::variant<Feasible, Infeasible>;

inline bool is_feasible(const Verdict& v) { return std::holds_alternative<Feasible>(v); }

/// y M for a row vector y.
inline Vector certificate_image(const NumericF2& numeric, std::span<const Rational> y) {
  return numeric.matrix.left_multiply(y);
}

/// True when 0 <= yM <= 1 componentwise and y . b* < 0.
inline bool verify_certificate(const NumericF2& numeric, const Certificate& cert) {
  if (cert.y.size() != numeric.matrix.rows()) return false;
  for (const auto& v : certificate_image(numeric, cert.y)) {
    if (v.sign() < 0 || v > Rational(1)) return false;
  }
  const Rational value = dot(cert.y, numeric.rhs);
  return value.sign() < 0 && value == cert.value;
}

/// True when x >= 0 and M x = b* exactly.
inline bool verify_model(const NumericF2& numeric, std::span<const Rational> x) {
  if (x.size() != numeric.matrix.cols()) return false;
  for (const auto& v : x) {
    if (v.sign() < 0) return false;
  }
  return numeric.matrix.multiply(x) == numeric.rhs;
}

/// Solves min y . b*  s.t.  0 <= y M <= 1 to optimality. When b* lies outside
/// the column space of M that LP is unbounded; the certificate is then a y
/// with y M = 0 and y . b* < 0.
inline Certificate farkas_certificate(const NumericF2& numeric) {
  const Matrix& m = numeric.matrix;
  const std::size_t rows = m.rows(), cols = m.cols();
  if (solve_standard_form(m, numeric.rhs).status != LpStatus::kInfeasible) {
    throw Error(ErrorCode::kPrimalFeasible, "the system admits a nonnegative solution");
  }
  Certificate cert;
  if (auto witness = range_violation_witness(m, numeric.rhs)) {
    cert.y = std::move(*witness);
    Rational value = dot(cert.y, numeric.rhs);
    if (value.sign() > 0) {
      for (auto& v : cert.y) v = -v;
    }
  } else {
    // Variables: y+ (rows), y- (rows), s (cols), t (cols).
    //   M^T y+ - M^T y- - s = 0,   s + t = 1.
    const std::size_t nvars = 2 * rows + 2 * cols;
    Matrix a(2 * cols, nvars);
    Vector b(2 * cols);
    for (std::size_t c = 0; c < cols; ++c) {
      for (std::size_t r = 0; r < rows; ++r) {
        if (m(r, c).is_zero()) continue;
        a(c, r) = m(r, c);
        a(c, rows + r) = -m(r, c);
      }
      a(c, 2 * rows + c) = -1;
      a(cols + c, 2 * rows + c) = 1;
      a(cols + c, 2 * rows + cols + c) = 1;
      b[cols + c] = 1;
    }
    Vector cost(nvars);
    for (std::size_t r = 0; r < rows; ++r) {
      cost[r] = numeric.rhs[r];
      cost[rows + r] = -numeric.rhs[r];
    }
    const LpResult lp = solve_standard_form(a, b, cost);
    if (lp.status != LpStatus::kOptimal) {
      throw Error(ErrorCode::kInternal, "certificate LP did not reach an optimum");
    }
    cert.y.resize(rows);
    for (std::size_t r = 0; r < rows; ++r) cert.y[r] = lp.x[r] - lp.x[rows + r];
  }
  cert.value = dot(cert.y, numeric.rhs);
  if (!verify_certificate(numeric, cert)) {
    throw Error(ErrorCode::kInternal, "certificate failed verification");
  }
  return cert;
}

/// Reads the inequality sum gamma p + gamma_0 >= 0 off a certificate:
/// gamma from the linking block, gamma_0 from the normalization block. When
/// the table lies in the affine hull the row is reduced modulo the hull
/// equalities before canonicalization.
inline std::pair<LinRow, Rational> certificate_to_inequality(const Certificate& cert, const F2System& f2,
                                                             const DataTable& table) {
  const std::size_t norm = f2.num_normalization;
  const std::size_t link = f2.num_normalization + f2.num_equivalence;
  AffineExpr expr;
  for (std::size_t r = 0; r < norm; ++r) expr.add_constant(cert.y.at(r));
  // Linking rows follow the coordinate order.
  for (std::size_t c = 0; c < f2.num_p(); ++c) {
    expr.add_term(VarId{static_cast<std::uint32_t>(c)}, cert.y.at(link + c));
  }
  const LinRow raw = LinRow::geq(std::move(expr));
  const EqualityBasis hull = f2_affine_hull(f2);
  const LinRow row = hull.contains(table.values()) ? hull.canonical(raw) : canonicalize_row(raw);
  return {row, -row.evaluate(table.values())};
}

/// Exact feasibility test of a table against the noncontextual model.
/// Throws MalformedTable when the table is not normalized or puts mass on a
/// padded outcome.
inline Verdict check_table(const F2System& f2, const DataTable& table) {
  const TableReport report = validate_table(f2.scenario, table);
  if (!report.normalized) {
    throw Error(ErrorCode::kMalformedTable, "table entries must lie in [0,1] and sum to 1 per measurement and preparation");
  }
  if (!report.padded_mass.empty()) {
    throw Error(ErrorCode::kMalformedTable, "table gives probability to an outcome that never occurs");
  }
  const NumericF2 numeric = bind_table(f2, table);
  const LpResult lp = solve_standard_form(numeric.matrix, numeric.rhs);
  if (lp.status != LpStatus::kInfeasible) {
    if (!verify_model(numeric, lp.x)) throw Error(ErrorCode::kInternal, "model failed verification");
    return Feasible{lp.x};
  }
  Infeasible out;
  out.certificate = farkas_certificate(numeric);
  std::tie(out.inequality, out.violation) = certificate_to_inequality(out.certificate, f2, table);
  if (out.violation.sign() <= 0) throw Error(ErrorCode::kInternal, "certificate inequality is not violated");
  return out;
}

inline Verdict check_table(const Scenario& scenario, const VertexSet& vertices, const DataTable& table) {
  return check_table(build_f2(scenario, vertices), table);
}

enum class Sense { kMax, kMin };

struct Optimum {
  Rational value;
  Vector model;
  DataTable table;
};

/// Optimizes an affine objective over table coordinates (VarId = flattened
/// coordinate) across all noncontextual tables, as an LP over nu.
inline Optimum optimize(const F2System& f2, const AffineExpr& objective, Sense sense) {
  for (const auto& [var, coeff] : objective.terms()) {
    if (var.value >= f2.num_p()) {
      throw Error(ErrorCode::kIndexOutOfRange, "objective uses a coordinate outside the table");
    }
  }
  Matrix a(0, f2.num_nu());
  Vector b;
  for (const auto& row : f2.system.rows()) {
    if (!row.is_eq()) continue;
    bool uses_p = false;
    for (const auto& [var, coeff] : row.terms()) uses_p = uses_p || f2.is_p(var);
    if (uses_p) continue;
    Vector dense(f2.num_nu());
    for (const auto& [var, coeff] : row.terms()) dense[var.value] = coeff;
    a.append_row(dense);
    b.push_back(-row.constant());
  }
  const Rational flip = sense == Sense::kMax ? Rational(-1) : Rational(1);
  Vector cost(f2.num_nu());
  for (const auto& [var, coeff] : objective.terms()) {
    const Coord c = f2.scenario.unflatten(var.value);
    for (std::size_t k = 1; k <= f2.num_vertices(); ++k) {
      cost[f2.nu(c.j, k).value] += flip * coeff * f2.vertices.value(k - 1, {c.i, c.m});
    }
  }
  const LpResult lp = solve_standard_form(a, b, cost);
  if (lp.status != LpStatus::kOptimal) {
    throw Error(ErrorCode::kInternal, "noncontextual polytope LP did not reach an optimum");
  }
  Optimum out;
  out.model = lp.x;
  out.table = reconstruct_table(f2, lp.x);
  out.value = objective.evaluate(out.table.values());
  return out;
}

inline Optimum optimize(const Scenario& scenario, const VertexSet& vertices, const AffineExpr& objective,
                        Sense sense) {
  return optimize(build_f2(scenario, vertices), objective, sense);
}

}  // namespace ncpoly
