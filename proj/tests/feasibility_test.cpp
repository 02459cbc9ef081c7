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

#include <iostream>
#include <random>

#include <gtest/gtest.h>

#include "ncpoly/feasibility.hpp"
#include "test_support.hpp"

namespace ncpoly {
namespace {

using testing::f2_of;
using testing::Q;

// Dense y M and M x recomputed from the bound system, without the library's
// matrix routines.
std::vector<Q> row_times(const NumericF2& n, const Vector& y) {
  std::vector<Q> out(n.matrix.cols());
  for (std::size_t r = 0; r < n.matrix.rows(); ++r) {
    for (std::size_t c = 0; c < n.matrix.cols(); ++c) out[c] += y[r].raw() * n.matrix(r, c).raw();
  }
  return out;
}

// The certificate conditions 0 <= yM <= 1 and y . b* < 0.
::testing::AssertionResult certificate_holds(const NumericF2& n, const Certificate& cert) {
  if (cert.y.size() != n.matrix.rows()) return ::testing::AssertionFailure() << "wrong length";
  for (const auto& v : row_times(n, cert.y)) {
    if (v < 0 || v > 1) return ::testing::AssertionFailure() << "yM entry " << v.get_str();
  }
  Q value = 0;
  for (std::size_t r = 0; r < n.rhs.size(); ++r) value += cert.y[r].raw() * n.rhs[r].raw();
  if (value >= 0) return ::testing::AssertionFailure() << "y.b = " << value.get_str();
  if (value != cert.value.raw()) return ::testing::AssertionFailure() << "stored value differs";
  return ::testing::AssertionSuccess();
}

::testing::AssertionResult model_holds(const NumericF2& n, const Vector& x) {
  if (x.size() != n.matrix.cols()) return ::testing::AssertionFailure() << "wrong length";
  for (const auto& v : x) {
    if (v.sign() < 0) return ::testing::AssertionFailure() << "negative weight";
  }
  for (std::size_t r = 0; r < n.matrix.rows(); ++r) {
    Q lhs = 0;
    for (std::size_t c = 0; c < n.matrix.cols(); ++c) lhs += n.matrix(r, c).raw() * x[c].raw();
    if (lhs != n.rhs[r].raw()) return ::testing::AssertionFailure() << "row " << r << " violated";
  }
  return ::testing::AssertionSuccess();
}

TEST(CheckTable, ContextualPomTable) {
  const Scenario s = testing::pom_scenario();
  const F2System f2 = f2_of(s);
  const DataTable t = testing::contextual_pom_table();
  const Verdict v = check_table(f2, t);
  ASSERT_FALSE(is_feasible(v));
  const auto& inf = std::get<Infeasible>(v);
  EXPECT_TRUE(certificate_holds(bind_table(f2, t), inf.certificate));
  // 1 - (p13 + p24 - p12 - p22) >= 0.
  const NCPolytope poly = project_to_nc_polytope(f2);
  EXPECT_EQ(inf.inequality, hull_basis(poly).canonical(testing::pom_reference_facets(s).back()));
  EXPECT_EQ(inf.violation, Rational(1));
  EXPECT_TRUE(std::binary_search(poly.facets.begin(), poly.facets.end(), inf.inequality));
}

TEST(CheckTable, UniformTableIsFeasible) {
  const Scenario s = testing::pom_scenario();
  const F2System f2 = f2_of(s);
  const DataTable t = testing::binary_table(s, {{Rational(1, 2), Rational(1, 2), Rational(1, 2), Rational(1, 2)},
                                                {Rational(1, 2), Rational(1, 2), Rational(1, 2), Rational(1, 2)}});
  const Verdict v = check_table(f2, t);
  ASSERT_TRUE(is_feasible(v));
  EXPECT_TRUE(model_holds(bind_table(f2, t), std::get<Feasible>(v).model));
  EXPECT_EQ(reconstruct_table(f2, std::get<Feasible>(v).model), t);
}

TEST(CheckTable, QuantumCoinTableViolatesTrineBound) {
  const Scenario s = testing::coin_scenario();
  const F2System f2 = f2_of(s);
  std::vector<std::vector<Rational>> p(3, std::vector<Rational>(6));
  for (int i = 1; i <= 3; ++i) {
    for (int k = 1; k <= 3; ++k) {
      p[i - 1][2 * k - 2] = i == k ? Rational(1) : Rational(1, 4);
      p[i - 1][2 * k - 1] = i == k ? Rational(0) : Rational(3, 4);
    }
  }
  const DataTable t = testing::binary_table(s, p);
  const Verdict v = check_table(f2, t);
  ASSERT_FALSE(is_feasible(v));
  const auto& inf = std::get<Infeasible>(v);
  EXPECT_TRUE(certificate_holds(bind_table(f2, t), inf.certificate));
  const NCPolytope& poly = testing::coin_polytope();
  EXPECT_TRUE(poly.equalities.size() > 0);
  EXPECT_FALSE(poly.contains(t));
  EXPECT_GT(inf.violation.sign(), 0);
  EXPECT_LT(inf.inequality.evaluate(t.values()).sign(), 0);
}

TEST(CheckTable, TableOutsideHullGetsNullSpaceCertificate) {
  const Scenario s = testing::pom_scenario();
  const F2System f2 = f2_of(s);
  const DataTable t = testing::binary_table(s, {{1, 1, 0, 0}, {0, 0, 0, 0}});
  const Verdict v = check_table(f2, t);
  ASSERT_FALSE(is_feasible(v));
  const auto& inf = std::get<Infeasible>(v);
  const NumericF2 n = bind_table(f2, t);
  EXPECT_TRUE(certificate_holds(n, inf.certificate));
  for (const auto& c : row_times(n, inf.certificate.y)) EXPECT_EQ(c, 0);
  EXPECT_GT(inf.violation.sign(), 0);
}

TEST(CheckTable, MalformedTables) {
  const Scenario s = testing::pom_scenario();
  const F2System f2 = f2_of(s);
  DataTable t = testing::contextual_pom_table();
  t.set({1, 1, 1}, Rational(1, 2));
  try {
    check_table(f2, t);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMalformedTable);
  }
  Scenario padded = s;
  padded.outcomes = 3;
  padded = pad_outcomes(validate_scenario(padded), {2, 2});
  const F2System pf2 = f2_of(padded);
  DataTable pt = DataTable::for_scenario(padded);
  for (int i = 1; i <= 2; ++i) {
    for (int j = 1; j <= 4; ++j) pt.set({i, j, 1}, Rational(1));
  }
  EXPECT_TRUE(is_feasible(check_table(pf2, pt)));
  pt.set({2, 2, 1}, Rational(0));
  pt.set({2, 2, 3}, Rational(1));
  try {
    check_table(pf2, pt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMalformedTable);
  }
}

TEST(FarkasCertificate, RefusesFeasibleSystems) {
  const Scenario s = testing::pom_scenario();
  const F2System f2 = f2_of(s);
  const DataTable t = reconstruct_table(f2, Vector(f2.num_nu(), Rational(1, 4)));
  try {
    farkas_certificate(bind_table(f2, t));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPrimalFeasible);
  }
}

TEST(VerifyCertificate, RejectsTamperedVectors) {
  const Scenario s = testing::pom_scenario();
  const F2System f2 = f2_of(s);
  const DataTable t = testing::contextual_pom_table();
  const NumericF2 n = bind_table(f2, t);
  Certificate cert = farkas_certificate(n);
  EXPECT_TRUE(verify_certificate(n, cert));
  Certificate scaled = cert;
  for (auto& y : scaled.y) y *= Rational(5);
  scaled.value *= Rational(5);
  EXPECT_EQ(verify_certificate(n, scaled), certificate_holds(n, scaled));
  Certificate wrong_value = cert;
  wrong_value.value -= Rational(1);
  EXPECT_FALSE(verify_certificate(n, wrong_value));
  EXPECT_FALSE(verify_model(n, Vector(f2.num_nu())));
}

// Feasibility agrees with membership in the projected polytope, and every
// verdict carries a witness that checks out.
TEST(CheckTable, AgreesWithProjectionOnRandomScenarios) {
  std::mt19937 rng(53);
  int scenarios = 0, feasible = 0, infeasible = 0, in_hull_infeasible = 0;
  for (int trial = 0; scenarios < 6 && trial < 100; ++trial) {
    const Scenario s = trial == 0   ? testing::pom_scenario()
                       : trial == 1 ? testing::coin_scenario()
                                    : testing::random_scenario(rng);
    const F2System f2 = f2_of(s);
    if (f2.num_nu() > 40) continue;
    ++scenarios;
    const NCPolytope poly = trial == 1 ? testing::coin_polytope() : project_to_nc_polytope(f2);
    const EqualityBasis hull = hull_basis(poly);
    int tables = 0;
    while (tables < 170) {
      const bool in_hull = tables % 4 != 0;
      auto t = testing::random_table(rng, f2, in_hull);
      if (!t) continue;
      ++tables;
      const Verdict v = check_table(f2, *t);
      const NumericF2 n = bind_table(f2, *t);
      ASSERT_EQ(is_feasible(v), poly.contains(*t));
      if (is_feasible(v)) {
        ++feasible;
        EXPECT_TRUE(model_holds(n, std::get<Feasible>(v).model));
      } else {
        ++infeasible;
        const auto& inf = std::get<Infeasible>(v);
        EXPECT_TRUE(certificate_holds(n, inf.certificate));
        EXPECT_GT(inf.violation.sign(), 0);
        if (hull.contains(t->values())) {
          ++in_hull_infeasible;
          // The row is valid on every model table.
          for (int k = 0; k < 3; ++k) {
            const DataTable m = reconstruct_table(f2, testing::random_model(rng, f2));
            EXPECT_GE(inf.inequality.evaluate(m.values()).sign(), 0);
          }
        }
      }
    }
  }
  std::cout << "feasible " << feasible << ", infeasible " << infeasible << ", in hull " << in_hull_infeasible << "\n";
  EXPECT_GE(scenarios, 5);
  EXPECT_GT(feasible, 50);
  EXPECT_GT(infeasible, 50);
  EXPECT_GT(in_hull_infeasible, 5);
}

TEST(Optimize, PomSuccessBound) {
  const Scenario s = testing::pom_scenario();
  const F2System f2 = f2_of(s);
  AffineExpr success;
  for (auto [i, j, m] : std::vector<std::array<int, 3>>{{1, 1, 1}, {2, 1, 1}, {1, 2, 2}, {2, 2, 2},
                                                          {1, 3, 1}, {2, 3, 2}, {1, 4, 2}, {2, 4, 1}}) {
    success.add_term(testing::coord(s, i, j, m), Rational(1, 8));
  }
  const Optimum best = optimize(f2, success, Sense::kMax);
  EXPECT_EQ(best.value, Rational(3, 4));
  EXPECT_EQ(success.evaluate(best.table.values()), best.value);
  EXPECT_EQ(reconstruct_table(f2, best.model), best.table);
  EXPECT_EQ(optimize(f2, success, Sense::kMin).value, Rational(1, 4));
}

TEST(Optimize, CoinTrineSum) {
  const Scenario s = testing::coin_scenario();
  const F2System f2 = f2_of(s);
  AffineExpr sum;
  for (auto [i, j] : std::vector<std::pair<int, int>>{{1, 1}, {2, 3}, {3, 5}}) sum.add_term(testing::coord(s, i, j), Rational(1));
  EXPECT_EQ(optimize(f2, sum, Sense::kMax).value, Rational(5, 2));
}

// The optimum matches the minimum of the objective over the polytope's
// vertices, found by brute force on the lifted model.
TEST(Optimize, MatchesVertexMaximum) {
  std::mt19937 rng(59);
  for (int trial = 0; trial < 10; ++trial) {
    const Scenario s = testing::random_scenario(rng, 3, 2);
    const F2System f2 = f2_of(s);
    if (f2.num_nu() > 12) continue;
    AffineExpr obj{Rational(static_cast<long>(rng() % 3))};
    for (std::size_t c = 0; c < s.num_coords(); ++c) {
      obj.add_term(VarId{static_cast<std::uint32_t>(c)}, Rational(static_cast<long>(rng() % 7) - 3));
    }
    std::vector<LinRow> eqs, geqs;
    for (const auto& row : f2.system.rows()) {
      bool uses_p = false;
      for (const auto& [v, c] : row.terms()) uses_p = uses_p || f2.is_p(v);
      if (!uses_p) (row.is_eq() ? eqs : geqs).push_back(row);
    }
    std::optional<Rational> best;
    for (const auto& nu : testing::brute_force_vertices(f2.num_nu(), eqs, geqs)) {
      Vector x;
      for (const auto& q : nu) x.emplace_back(q);
      const Rational value = obj.evaluate(reconstruct_table(f2, x).values());
      if (!best || value > *best) best = value;
    }
    ASSERT_TRUE(best);
    EXPECT_EQ(optimize(f2, obj, Sense::kMax).value, *best);
  }
}

TEST(Optimize, RejectsForeignCoordinates) {
  const F2System f2 = f2_of(testing::pom_scenario());
  EXPECT_THROW(optimize(f2, AffineExpr::variable(VarId{99}), Sense::kMax), Error);
}

}  // namespace
}  // namespace ncpoly
