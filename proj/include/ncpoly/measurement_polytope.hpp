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
#include <vector>

#include "ncpoly/double_description.hpp"
#include "ncpoly/errors.hpp"
#include "ncpoly/linear.hpp"
#include "ncpoly/scenario.hpp"

namespace ncpoly {

/// H-representation of the noncontextual measurement-assignment polytope
/// over the l*d response values xi(m|M_i), indexed by Scenario::effect_index.
/// Rows are stored as: l*d positivity rows, then l normalization rows, then
/// one row per measurement equivalence.
struct HPolytope {
  int measurements = 0;
  int outcomes = 0;
  LinearSystem system;
  std::size_t num_positivity = 0;
  std::size_t num_normalization = 0;
  std::size_t num_equivalence = 0;

  std::size_t dimension() const { return static_cast<std::size_t>(measurements) * outcomes; }
};

/// Extremal noncontextual measurement assignments, sorted lexicographically.
/// Vertex kappa (1-based) is vertices[kappa - 1].
struct VertexSet {
  int measurements = 0;
  int outcomes = 0;
  std::vector<Vector> vertices;

  std::size_t size() const { return vertices.size(); }
  const Rational& value(std::size_t kappa_index, const Effect& e) const {
    return vertices.at(kappa_index).at(static_cast<std::size_t>(e.i - 1) * outcomes + (e.m - 1));
  }
};

inline HPolytope build_measurement_H(const Scenario& scenario) {
  HPolytope h;
  h.measurements = scenario.measurements;
  h.outcomes = scenario.outcomes;
  for (std::size_t e = 0; e < scenario.num_effects(); ++e) {
    const Effect eff = scenario.effect_at(e);
    h.system.add_variable("xi(" + std::to_string(eff.m) + "|" + std::to_string(eff.i) + ")");
  }
  for (std::size_t e = 0; e < scenario.num_effects(); ++e) {
    h.system.add_row(LinRow::geq(AffineExpr::variable(VarId{static_cast<std::uint32_t>(e)})));
  }
  h.num_positivity = scenario.num_effects();
  for (int i = 1; i <= scenario.measurements; ++i) {
    AffineExpr expr(Rational(-1));
    for (int m = 1; m <= scenario.outcomes; ++m) {
      expr.add_term(VarId{static_cast<std::uint32_t>(scenario.effect_index({i, m}))}, Rational(1));
    }
    h.system.add_row(LinRow::eq(std::move(expr)));
  }
  h.num_normalization = static_cast<std::size_t>(scenario.measurements);
  for (std::size_t r = 0; r < scenario.meas_equivalences.size(); ++r) {
    const Vector diff = scenario.meas_difference(r);
    AffineExpr expr;
    for (std::size_t e = 0; e < diff.size(); ++e) expr.add_term(VarId{static_cast<std::uint32_t>(e)}, diff[e]);
    h.system.add_row(LinRow::eq(std::move(expr)));
  }
  h.num_equivalence = scenario.meas_equivalences.size();
  return h;
}

/// Double description with normalization rows first, then equivalence rows,
/// then positivity rows.
inline VertexSet enumerate_vertices(const HPolytope& h) {
  std::vector<LinRow> equalities;
  std::vector<LinRow> inequalities;
  const auto& rows = h.system.rows();
  for (std::size_t r = h.num_positivity; r < rows.size(); ++r) equalities.push_back(rows[r]);
  for (std::size_t r = 0; r < h.num_positivity; ++r) inequalities.push_back(rows[r]);
  VertexSet out;
  out.measurements = h.measurements;
  out.outcomes = h.outcomes;
  out.vertices = double_description_vertices(h.dimension(), equalities, inequalities);
  return out;
}

struct Membership {
  bool inside = true;
  /// First violated row (in HPolytope row order) when outside.
  std::optional<LinRow> violated;
  std::size_t violated_index = 0;
};

inline Membership membership(const HPolytope& h, std::span<const Rational> point) {
  if (point.size() != h.dimension()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "point has " + std::to_string(point.size()) + " components, expected " +
                    std::to_string(h.dimension()));
  }
  const auto& rows = h.system.rows();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (!rows[r].satisfied_by(point)) return Membership{false, rows[r], r};
  }
  return {};
}

}  // namespace ncpoly
