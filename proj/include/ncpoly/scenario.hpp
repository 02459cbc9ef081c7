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

#include <compare>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ncpoly/errors.hpp"
#include "ncpoly/linear.hpp"
#include "ncpoly/matrix.hpp"
#include "ncpoly/rational.hpp"

namespace ncpoly {

/// Position (i, j, m) of p(m | M_i, P_j) in a data table. All indices are
/// 1-based: measurement i in 1..l, preparation j in 1..g, outcome m in 1..d.
struct Coord {
  int i = 1;
  int j = 1;
  int m = 1;
  friend auto operator<=>(const Coord&, const Coord&) = default;
};

/// Effect [m | M_i], 1-based.
struct Effect {
  int i = 1;
  int m = 1;
  friend auto operator<=>(const Effect&, const Effect&) = default;
};

/// sum_j lhs[j] P_j  ~  sum_j rhs[j] P_j, both sides convex.
struct PrepEquivalence {
  std::map<int, Rational> lhs;
  std::map<int, Rational> rhs;
};

/// sum lhs[(i,m)] [m|M_i]  ~  sum rhs[(i,m)] [m|M_i], both sides convex.
struct MeasEquivalence {
  std::map<Effect, Rational> lhs;
  std::map<Effect, Rational> rhs;
};

struct Scenario {
  int preparations = 0;  // g
  int measurements = 0;  // l
  int outcomes = 0;      // d
  std::vector<PrepEquivalence> prep_equivalences;
  std::vector<MeasEquivalence> meas_equivalences;
  /// Per-measurement count of outcomes that can actually occur (d*_i); empty
  /// means every measurement uses all d outcomes.
  std::vector<int> true_outcomes;

  std::size_t num_coords() const {
    return static_cast<std::size_t>(measurements) * preparations * outcomes;
  }
  std::size_t num_effects() const { return static_cast<std::size_t>(measurements) * outcomes; }

  /// i major, j middle, m minor.
  std::size_t flatten(const Coord& c) const {
    return (static_cast<std::size_t>(c.i - 1) * preparations + (c.j - 1)) * outcomes + (c.m - 1);
  }
  Coord unflatten(std::size_t index) const {
    const auto d = static_cast<std::size_t>(outcomes);
    const auto g = static_cast<std::size_t>(preparations);
    return Coord{static_cast<int>(index / (g * d)) + 1, static_cast<int>((index / d) % g) + 1,
                 static_cast<int>(index % d) + 1};
  }

  std::size_t effect_index(const Effect& e) const {
    return static_cast<std::size_t>(e.i - 1) * outcomes + (e.m - 1);
  }
  Effect effect_at(std::size_t index) const {
    return Effect{static_cast<int>(index / outcomes) + 1, static_cast<int>(index % outcomes) + 1};
  }

  bool coord_in_range(const Coord& c) const {
    return c.i >= 1 && c.i <= measurements && c.j >= 1 && c.j <= preparations && c.m >= 1 &&
           c.m <= outcomes;
  }

  bool is_padded(const Coord& c) const {
    return !true_outcomes.empty() && c.m > true_outcomes.at(c.i - 1);
  }

  /// alpha - beta over preparations (size g).
  Vector prep_difference(std::size_t s) const {
    Vector v(preparations);
    for (const auto& [j, w] : prep_equivalences.at(s).lhs) v.at(j - 1) += w;
    for (const auto& [j, w] : prep_equivalences.at(s).rhs) v.at(j - 1) -= w;
    return v;
  }

  /// alpha - beta over effects (size l*d).
  Vector meas_difference(std::size_t r) const {
    Vector v(num_effects());
    for (const auto& [e, w] : meas_equivalences.at(r).lhs) v.at(effect_index(e)) += w;
    for (const auto& [e, w] : meas_equivalences.at(r).rhs) v.at(effect_index(e)) -= w;
    return v;
  }
};

/// Every invariant violated by `raw`; empty when the scenario is valid.
inline std::vector<Issue> scenario_issues(const Scenario& raw) {
  std::vector<Issue> issues;
  if (raw.preparations < 1 || raw.measurements < 1 || raw.outcomes < 2) {
    issues.push_back({ErrorCode::kIndexOutOfRange,
                      "need at least 1 preparation, 1 measurement and 2 outcomes"});
    return issues;
  }

  auto check_side = [&](const std::string& where, auto const& side, auto in_range) {
    if (side.empty()) issues.push_back({ErrorCode::kNonConvexWeights, where + " is empty"});
    Rational total;
    for (const auto& [key, w] : side) {
      if (!in_range(key)) issues.push_back({ErrorCode::kIndexOutOfRange, where + " references an unknown procedure"});
      if (w.sign() < 0) issues.push_back({ErrorCode::kNonConvexWeights, where + " has negative weight " + w.to_string()});
      total += w;
    }
    if (!side.empty() && total != Rational(1)) {
      issues.push_back({ErrorCode::kNonConvexWeights, where + " weights sum to " + total.to_string()});
    }
  };
  auto strip_zeros = [](auto side) {
    std::erase_if(side, [](const auto& kv) { return kv.second.is_zero(); });
    return side;
  };

  for (std::size_t s = 0; s < raw.prep_equivalences.size(); ++s) {
    const auto& eq = raw.prep_equivalences[s];
    const std::string name = "preparation equivalence " + std::to_string(s + 1);
    auto in_range = [&](int j) { return j >= 1 && j <= raw.preparations; };
    check_side(name + " lhs", eq.lhs, in_range);
    check_side(name + " rhs", eq.rhs, in_range);
    if (strip_zeros(eq.lhs) == strip_zeros(eq.rhs)) {
      issues.push_back({ErrorCode::kDegenerateEquivalence, name + " has identical sides"});
    }
  }
  for (std::size_t r = 0; r < raw.meas_equivalences.size(); ++r) {
    const auto& eq = raw.meas_equivalences[r];
    const std::string name = "measurement equivalence " + std::to_string(r + 1);
    auto in_range = [&](const Effect& e) {
      return e.i >= 1 && e.i <= raw.measurements && e.m >= 1 && e.m <= raw.outcomes;
    };
    check_side(name + " lhs", eq.lhs, in_range);
    check_side(name + " rhs", eq.rhs, in_range);
    if (strip_zeros(eq.lhs) == strip_zeros(eq.rhs)) {
      issues.push_back({ErrorCode::kDegenerateEquivalence, name + " has identical sides"});
    }
  }
  if (!raw.true_outcomes.empty()) {
    if (raw.true_outcomes.size() != static_cast<std::size_t>(raw.measurements)) {
      issues.push_back({ErrorCode::kDimensionMismatch, "true outcome counts must list every measurement"});
    } else {
      for (int count : raw.true_outcomes) {
        if (count > raw.outcomes) {
          issues.push_back({ErrorCode::kPadExceedsD, "measurement has " + std::to_string(count) +
                                                          " outcomes but d = " + std::to_string(raw.outcomes)});
        } else if (count < 1) {
          issues.push_back({ErrorCode::kIndexOutOfRange, "outcome count must be positive"});
        }
      }
    }
  }
  return issues;
}

inline Scenario validate_scenario(Scenario raw) {
  auto issues = scenario_issues(raw);
  if (!issues.empty()) throw ValidationError(std::move(issues));
  return raw;
}

/// Rewrites a scenario whose measurements have d*_i <= d outcomes into one
/// where every measurement has d outcomes; the extra outcomes never occur.
inline Scenario pad_outcomes(Scenario scenario, std::vector<int> true_counts) {
  if (true_counts.size() != static_cast<std::size_t>(scenario.measurements)) {
    throw Error(ErrorCode::kDimensionMismatch, "expected one outcome count per measurement");
  }
  for (int count : true_counts) {
    if (count > scenario.outcomes) {
      throw Error(ErrorCode::kPadExceedsD, "outcome count " + std::to_string(count) + " exceeds d = " +
                                               std::to_string(scenario.outcomes));
    }
  }
  bool identity = true;
  for (int count : true_counts) identity = identity && count == scenario.outcomes;
  scenario.true_outcomes = identity ? std::vector<int>{} : std::move(true_counts);
  return validate_scenario(std::move(scenario));
}

/// Probabilities p(m | M_i, P_j) stored densely in CoordIndex order.
class DataTable {
 public:
  DataTable() = default;
  DataTable(int measurements, int preparations, int outcomes)
      : measurements_(measurements), preparations_(preparations), outcomes_(outcomes),
        values_(static_cast<std::size_t>(measurements) * preparations * outcomes) {}

  static DataTable for_scenario(const Scenario& s) {
    return DataTable(s.measurements, s.preparations, s.outcomes);
  }

  int measurements() const { return measurements_; }
  int preparations() const { return preparations_; }
  int outcomes() const { return outcomes_; }
  std::size_t size() const { return values_.size(); }

  bool matches(const Scenario& s) const {
    return measurements_ == s.measurements && preparations_ == s.preparations && outcomes_ == s.outcomes;
  }

  const Rational& at(const Coord& c) const { return values_.at(index(c)); }
  void set(const Coord& c, Rational v) { values_.at(index(c)) = std::move(v); }

  const Vector& values() const { return values_; }
  Vector& mutable_values() { return values_; }

  std::size_t index(const Coord& c) const {
    if (c.i < 1 || c.i > measurements_ || c.j < 1 || c.j > preparations_ || c.m < 1 || c.m > outcomes_) {
      throw Error(ErrorCode::kIndexOutOfRange, "table coordinate out of range");
    }
    return (static_cast<std::size_t>(c.i - 1) * preparations_ + (c.j - 1)) * outcomes_ + (c.m - 1);
  }

  friend bool operator==(const DataTable&, const DataTable&) = default;

 private:
  int measurements_ = 0;
  int preparations_ = 0;
  int outcomes_ = 0;
  Vector values_;
};

struct EquivalenceResidual {
  std::string id;  // "prep:<s>" or "meas:<r>", 1-based
  Rational max_violation;
};

struct TableReport {
  /// Entries in [0,1] and each (i,j) block sums to 1.
  bool normalized = true;
  std::vector<EquivalenceResidual> oe_residuals;
  /// Coordinates on never-occurring outcomes that carry nonzero probability.
  std::vector<Coord> padded_mass;

  bool respects_equivalences() const {
    for (const auto& r : oe_residuals) {
      if (!r.max_violation.is_zero()) return false;
    }
    return true;
  }
};

inline TableReport validate_table(const Scenario& scenario, const DataTable& table) {
  if (!table.matches(scenario)) {
    throw Error(ErrorCode::kDimensionMismatch, "table shape does not match the scenario");
  }
  TableReport report;
  const int l = scenario.measurements, g = scenario.preparations, d = scenario.outcomes;
  for (int i = 1; i <= l; ++i) {
    for (int j = 1; j <= g; ++j) {
      Rational total;
      for (int m = 1; m <= d; ++m) {
        const Rational& v = table.at({i, j, m});
        if (v.sign() < 0 || v > Rational(1)) report.normalized = false;
        if (scenario.is_padded({i, j, m}) && !v.is_zero()) report.padded_mass.push_back({i, j, m});
        total += v;
      }
      if (total != Rational(1)) report.normalized = false;
    }
  }
  for (std::size_t s = 0; s < scenario.prep_equivalences.size(); ++s) {
    const Vector diff = scenario.prep_difference(s);
    Rational worst;
    for (int i = 1; i <= l; ++i) {
      for (int m = 1; m <= d; ++m) {
        Rational v;
        for (int j = 1; j <= g; ++j) v += diff[j - 1] * table.at({i, j, m});
        worst = std::max(worst, v.abs());
      }
    }
    report.oe_residuals.push_back({"prep:" + std::to_string(s + 1), worst});
  }
  for (std::size_t r = 0; r < scenario.meas_equivalences.size(); ++r) {
    const Vector diff = scenario.meas_difference(r);
    Rational worst;
    for (int j = 1; j <= g; ++j) {
      Rational v;
      for (std::size_t e = 0; e < diff.size(); ++e) {
        if (diff[e].is_zero()) continue;
        const Effect eff = scenario.effect_at(e);
        v += diff[e] * table.at({eff.i, j, eff.m});
      }
      worst = std::max(worst, v.abs());
    }
    report.oe_residuals.push_back({"meas:" + std::to_string(r + 1), worst});
  }
  return report;
}

}  // namespace ncpoly
