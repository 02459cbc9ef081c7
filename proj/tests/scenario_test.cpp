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

#include <gtest/gtest.h>

#include "ncpoly/scenario.hpp"
#include "test_support.hpp"

namespace ncpoly {
namespace {

bool raises(const Scenario& s, ErrorCode code) {
  try {
    validate_scenario(s);
  } catch (const ValidationError& e) {
    return e.has(code);
  }
  return false;
}

TEST(Scenario, BundledShapesValidate) {
  EXPECT_NO_THROW(testing::pom_scenario());
  EXPECT_NO_THROW(testing::coin_scenario());
  EXPECT_EQ(testing::coin_scenario().num_coords(), 36u);
}

TEST(Scenario, FlattenRoundTrip) {
  const Scenario s = testing::coin_scenario();
  for (std::size_t k = 0; k < s.num_coords(); ++k) EXPECT_EQ(s.flatten(s.unflatten(k)), k);
  EXPECT_EQ(s.flatten({1, 1, 1}), 0u);
  EXPECT_EQ(s.flatten({1, 1, 2}), 1u);
  EXPECT_EQ(s.flatten({1, 2, 1}), 2u);
  EXPECT_EQ(s.flatten({2, 1, 1}), 12u);
}

TEST(Scenario, RejectsTooFewOutcomes) {
  Scenario s;
  s.preparations = 1;
  s.measurements = 1;
  s.outcomes = 1;
  EXPECT_TRUE(raises(s, ErrorCode::kIndexOutOfRange));
}

TEST(Scenario, RejectsNonConvexWeights) {
  Scenario s = testing::pom_scenario();
  s.prep_equivalences[0].lhs[1] = Rational(3, 4);
  EXPECT_TRUE(raises(s, ErrorCode::kNonConvexWeights));
  s = testing::pom_scenario();
  s.prep_equivalences[0].rhs = {{3, Rational(3, 2)}, {4, Rational(-1, 2)}};
  EXPECT_TRUE(raises(s, ErrorCode::kNonConvexWeights));
}

TEST(Scenario, RejectsUnknownProcedures) {
  Scenario s = testing::pom_scenario();
  s.prep_equivalences[0].rhs = {{5, Rational(1)}};
  EXPECT_TRUE(raises(s, ErrorCode::kIndexOutOfRange));
  s = testing::coin_scenario();
  s.meas_equivalences[0].lhs = {{{4, 1}, Rational(1)}};
  EXPECT_TRUE(raises(s, ErrorCode::kIndexOutOfRange));
}

TEST(Scenario, RejectsIdenticalSides) {
  Scenario s = testing::pom_scenario();
  s.prep_equivalences[0].rhs = s.prep_equivalences[0].lhs;
  s.prep_equivalences[0].rhs[3] = Rational(0);
  EXPECT_TRUE(raises(s, ErrorCode::kDegenerateEquivalence));
}

TEST(Scenario, ReportsEveryIssue) {
  Scenario s = testing::pom_scenario();
  s.prep_equivalences[0].lhs[1] = Rational(3, 4);
  s.prep_equivalences[0].rhs = {{9, Rational(1)}};
  try {
    validate_scenario(s);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_TRUE(e.has(ErrorCode::kNonConvexWeights));
    EXPECT_TRUE(e.has(ErrorCode::kIndexOutOfRange));
    EXPECT_GE(e.issues().size(), 2u);
  }
}

TEST(Scenario, PadOutcomes) {
  Scenario s = testing::pom_scenario();
  s.outcomes = 3;
  s = validate_scenario(s);
  const Scenario padded = pad_outcomes(s, {2, 3});
  EXPECT_TRUE(padded.is_padded({1, 1, 3}));
  EXPECT_FALSE(padded.is_padded({2, 1, 3}));
  EXPECT_TRUE(pad_outcomes(s, {3, 3}).true_outcomes.empty());
  try {
    pad_outcomes(s, {4, 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPadExceedsD);
  }
  EXPECT_THROW(pad_outcomes(s, {2}), Error);
}

TEST(DataTable, RangeChecked) {
  DataTable t = DataTable::for_scenario(testing::pom_scenario());
  try {
    t.set({3, 1, 1}, Rational(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIndexOutOfRange);
  }
}

TEST(ValidateTable, FlagsNormalizationAndEquivalences) {
  const Scenario s = testing::pom_scenario();
  const TableReport good = validate_table(s, testing::contextual_pom_table());
  EXPECT_TRUE(good.normalized);
  EXPECT_TRUE(good.respects_equivalences());

  DataTable t = testing::contextual_pom_table();
  t.set({1, 1, 2}, Rational(1, 2));
  EXPECT_FALSE(validate_table(s, t).normalized);

  DataTable skew = testing::binary_table(s, {{1, 1, 0, 0}, {0, 0, 0, 0}});
  const TableReport r = validate_table(s, skew);
  EXPECT_TRUE(r.normalized);
  EXPECT_FALSE(r.respects_equivalences());
  ASSERT_EQ(r.oe_residuals.size(), 1u);
  EXPECT_EQ(r.oe_residuals[0].id, "prep:1");
  EXPECT_EQ(r.oe_residuals[0].max_violation, Rational(1));
}

TEST(ValidateTable, FlagsPaddedMass) {
  Scenario s = testing::pom_scenario();
  s.outcomes = 3;
  s = pad_outcomes(validate_scenario(s), {2, 3});
  DataTable t = DataTable::for_scenario(s);
  for (int i = 1; i <= 2; ++i) {
    for (int j = 1; j <= 4; ++j) t.set({i, j, 1}, Rational(1));
  }
  EXPECT_TRUE(validate_table(s, t).padded_mass.empty());
  t.set({1, 2, 1}, Rational(1, 2));
  t.set({1, 2, 3}, Rational(1, 2));
  const auto report = validate_table(s, t);
  ASSERT_EQ(report.padded_mass.size(), 1u);
  EXPECT_EQ(report.padded_mass[0], (Coord{1, 2, 3}));
}

TEST(ValidateTable, ShapeMismatch) {
  EXPECT_THROW(validate_table(testing::coin_scenario(), testing::contextual_pom_table()), Error);
}

}  // namespace
}  // namespace ncpoly
