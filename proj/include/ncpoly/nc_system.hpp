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
#include <cstdint>
#include <string>
#include <vector>

#include "ncpoly/errors.hpp"
#include "ncpoly/linear.hpp"
#include "ncpoly/matrix.hpp"
#include "ncpoly/measurement_polytope.hpp"
#include "ncpoly/scenario.hpp"

namespace ncpoly {

/// The finite linear system in the unknowns nu_{P_j}(kappa), with the table
/// probabilities kept as placeholder variables.
///
/// Variables: nu(j, kappa) first, j-major and kappa-minor, then one p variable
/// per table coordinate in CoordIndex order. Rows, in order:
///   g*|V| positivity rows      nu(j,kappa) >= 0
///   g normalization rows       sum_kappa nu(j,kappa) - 1 = 0
///   |OE_P|*|V| equivalence rows (equivalence-major)
///                              sum_j (alpha_j - beta_j) nu(j,kappa) = 0
///   l*g*d linking rows         p(m|i,j) - sum_kappa xi(m|i)(kappa) nu(j,kappa) = 0
struct F2System {
  Scenario scenario;
  VertexSet vertices;
  LinearSystem system;
  std::size_t num_positivity = 0;
  std::size_t num_normalization = 0;
  std::size_t num_equivalence = 0;
  std::size_t num_linking = 0;

  std::size_t num_vertices() const { return vertices.size(); }
  std::size_t num_nu() const { return static_cast<std::size_t>(scenario.preparations) * num_vertices(); }
  std::size_t num_p() const { return scenario.num_coords(); }

  /// kappa is 1-based.
  VarId nu(int j, std::size_t kappa) const {
    return VarId{static_cast<std::uint32_t>((j - 1) * num_vertices() + (kappa - 1))};
  }
  VarId p(const Coord& c) const { return VarId{static_cast<std::uint32_t>(num_nu() + scenario.flatten(c))}; }
  bool is_p(VarId v) const { return v.value >= num_nu(); }
  Coord coord_of(VarId v) const { return scenario.unflatten(v.value - num_nu()); }

  std::vector<VarId> nu_vars() const {
    std::vector<VarId> out;
    for (std::size_t k = 0; k < num_nu(); ++k) out.push_back(VarId{static_cast<std::uint32_t>(k)});
    return out;
  }
};

/// M x = b* of the feasibility problem: the equality rows of F2System (same
/// order: normalization, equivalence, linking) with the table substituted.
struct NumericF2 {
  Matrix matrix;
  Vector rhs;
  std::size_t num_normalization = 0;
  std::size_t num_equivalence = 0;
  std::size_t num_linking = 0;

  std::size_t linking_begin() const { return num_normalization + num_equivalence; }
};

inline F2System build_f2(const Scenario& scenario, const VertexSet& vertices) {
  if (vertices.measurements != scenario.measurements || vertices.outcomes != scenario.outcomes) {
    throw Error(ErrorCode::kDimensionMismatch, "vertex set does not belong to this scenario");
  }
  F2System f2;
  f2.scenario = scenario;
  f2.vertices = vertices;
  const int g = scenario.preparations;
  const std::size_t nv = vertices.size();
  for (int j = 1; j <= g; ++j) {
    for (std::size_t k = 1; k <= nv; ++k) {
      f2.system.add_variable("nu(" + std::to_string(j) + "," + std::to_string(k) + ")");
    }
  }
  for (std::size_t c = 0; c < scenario.num_coords(); ++c) {
    const Coord co = scenario.unflatten(c);
    f2.system.add_variable("p(" + std::to_string(co.m) + "|" + std::to_string(co.i) + "," +
                           std::to_string(co.j) + ")");
  }

  for (int j = 1; j <= g; ++j) {
    for (std::size_t k = 1; k <= nv; ++k) f2.system.add_row(LinRow::geq(AffineExpr::variable(f2.nu(j, k))));
  }
  f2.num_positivity = static_cast<std::size_t>(g) * nv;

  for (int j = 1; j <= g; ++j) {
    AffineExpr expr(Rational(-1));
    for (std::size_t k = 1; k <= nv; ++k) expr.add_term(f2.nu(j, k), Rational(1));
    f2.system.add_row(LinRow::eq(std::move(expr)));
  }
  f2.num_normalization = static_cast<std::size_t>(g);

  for (std::size_t s = 0; s < scenario.prep_equivalences.size(); ++s) {
    const Vector diff = scenario.prep_difference(s);
    for (std::size_t k = 1; k <= nv; ++k) {
      AffineExpr expr;
      for (int j = 1; j <= g; ++j) expr.add_term(f2.nu(j, k), diff[j - 1]);
      f2.system.add_row(LinRow::eq(std::move(expr)));
    }
  }
  f2.num_equivalence = scenario.prep_equivalences.size() * nv;

  for (std::size_t c = 0; c < scenario.num_coords(); ++c) {
    const Coord co = scenario.unflatten(c);
    AffineExpr expr = AffineExpr::variable(f2.p(co));
    for (std::size_t k = 1; k <= nv; ++k) expr.add_term(f2.nu(co.j, k), -vertices.value(k - 1, {co.i, co.m}));
    f2.system.add_row(LinRow::eq(std::move(expr)));
  }
  f2.num_linking = scenario.num_coords();
  return f2;
}

inline NumericF2 bind_table(const F2System& f2, const DataTable& table) {
  if (!table.matches(f2.scenario)) {
    throw Error(ErrorCode::kDimensionMismatch, "table shape does not match the scenario");
  }
  NumericF2 out;
  out.num_normalization = f2.num_normalization;
  out.num_equivalence = f2.num_equivalence;
  out.num_linking = f2.num_linking;
  const std::size_t rows = f2.num_normalization + f2.num_equivalence + f2.num_linking;
  out.matrix = Matrix(rows, f2.num_nu());
  out.rhs.assign(rows, Rational(0));
  std::size_t r = 0;
  for (std::size_t sr = f2.num_positivity; sr < f2.system.rows().size(); ++sr, ++r) {
    const LinRow& row = f2.system.rows()[sr];
    Rational rhs = -row.constant();
    for (const auto& [var, coeff] : row.terms()) {
      if (f2.is_p(var)) {
        // p - sum xi nu = 0  becomes  sum xi nu = p*.
        rhs = table.values()[var.value - f2.num_nu()];
      } else {
        out.matrix(r, var.value) = coeff;
      }
    }
    if (r >= out.linking_begin()) {
      for (std::size_t c = 0; c < out.matrix.cols(); ++c) out.matrix(r, c) = -out.matrix(r, c);
    }
    out.rhs[r] = std::move(rhs);
  }
  return out;
}

/// The table generated by a noncontextual model nu (indexed like F2System's
/// nu variables).
inline DataTable reconstruct_table(const F2System& f2, std::span<const Rational> nu) {
  if (nu.size() != f2.num_nu()) {
    throw Error(ErrorCode::kDimensionMismatch, "model has " + std::to_string(nu.size()) +
                                                   " entries, expected " + std::to_string(f2.num_nu()));
  }
  Vector values(f2.system.num_variables());
  std::copy(nu.begin(), nu.end(), values.begin());
  const auto& rows = f2.system.rows();
  const std::size_t linking_begin = rows.size() - f2.num_linking;
  for (std::size_t r = 0; r < linking_begin; ++r) {
    if (!rows[r].satisfied_by(values)) {
      throw Error(ErrorCode::kInvalidDistribution,
                  "model violates " + to_string(rows[r], [&](VarId v) { return f2.system.name(v); }));
    }
  }
  DataTable table = DataTable::for_scenario(f2.scenario);
  for (std::size_t c = 0; c < f2.scenario.num_coords(); ++c) {
    const Coord co = f2.scenario.unflatten(c);
    Rational v;
    for (std::size_t k = 1; k <= f2.num_vertices(); ++k) {
      v += f2.vertices.value(k - 1, {co.i, co.m}) * nu[f2.nu(co.j, k).value];
    }
    table.set(co, std::move(v));
  }
  return table;
}

}  // namespace ncpoly
