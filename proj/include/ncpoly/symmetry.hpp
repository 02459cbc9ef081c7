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
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ncpoly/errors.hpp"
#include "ncpoly/linear.hpp"
#include "ncpoly/matrix.hpp"
#include "ncpoly/scenario.hpp"

namespace ncpoly {

/// Relabeling of measurements, preparations and outcomes. All maps are
/// 1-based: measurement i becomes measurements[i-1], preparation j becomes
/// preparations[j-1], and outcome m of measurement i becomes
/// outcomes[i-1][m-1].
struct RelabelingSpec {
  std::vector<int> measurements;
  std::vector<int> preparations;
  std::vector<std::vector<int>> outcomes;

  static RelabelingSpec identity(const Scenario& s) {
    RelabelingSpec spec;
    spec.measurements.resize(s.measurements);
    std::iota(spec.measurements.begin(), spec.measurements.end(), 1);
    spec.preparations.resize(s.preparations);
    std::iota(spec.preparations.begin(), spec.preparations.end(), 1);
    spec.outcomes.assign(s.measurements, std::vector<int>(s.outcomes));
    for (auto& o : spec.outcomes) std::iota(o.begin(), o.end(), 1);
    return spec;
  }
};

/// A relabeling compiled to a permutation of the flattened coordinates:
/// coordinate c is sent to perm[c].
struct Relabeling {
  std::vector<std::uint32_t> perm;

  static Relabeling identity(std::size_t n) {
    Relabeling r;
    r.perm.resize(n);
    std::iota(r.perm.begin(), r.perm.end(), std::uint32_t{0});
    return r;
  }

  /// (a * b)(c) = a(b(c)): apply b first.
  friend Relabeling operator*(const Relabeling& a, const Relabeling& b) {
    Relabeling out;
    out.perm.resize(b.perm.size());
    for (std::size_t c = 0; c < b.perm.size(); ++c) out.perm[c] = a.perm[b.perm[c]];
    return out;
  }

  Relabeling inverse() const {
    Relabeling out;
    out.perm.resize(perm.size());
    for (std::size_t c = 0; c < perm.size(); ++c) out.perm[perm[c]] = static_cast<std::uint32_t>(c);
    return out;
  }

  bool is_identity() const {
    for (std::size_t c = 0; c < perm.size(); ++c) {
      if (perm[c] != c) return false;
    }
    return true;
  }

  friend bool operator==(const Relabeling&, const Relabeling&) = default;
  friend auto operator<=>(const Relabeling&, const Relabeling&) = default;
};

struct RelabelingHash {
  std::size_t operator()(const Relabeling& r) const noexcept {
    std::size_t h = 1469598103934665603ULL;
    for (auto v : r.perm) h = (h ^ v) * 1099511628211ULL;
    return h;
  }
};

namespace detail {

inline bool is_permutation_of(const std::vector<int>& p, int n) {
  if (p.size() != static_cast<std::size_t>(n)) return false;
  std::vector<bool> seen(n + 1, false);
  for (int v : p) {
    if (v < 1 || v > n || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

/// True when every vector of `moved` lies in the span of `base`.
inline bool within_span(const std::vector<Vector>& base, const std::vector<Vector>& moved) {
  if (moved.empty()) return true;
  const std::size_t width = moved.front().size();
  Matrix m(0, width);
  for (const auto& v : base) m.append_row(v);
  const std::size_t r = base.empty() ? 0 : rank(m);
  for (const auto& v : moved) {
    Matrix ext = base.empty() ? Matrix(0, width) : m;
    ext.append_row(v);
    if (rank(ext) != r) return false;
  }
  return true;
}

}  // namespace detail

/// Compiles a relabeling and checks that it maps the operational
/// equivalences onto themselves: the span of the preparation difference
/// vectors, and the span of the measurement difference vectors together with
/// the normalization identities, must both be invariant.
inline Relabeling compile_relabeling(const Scenario& s, const RelabelingSpec& spec) {
  if (!detail::is_permutation_of(spec.measurements, s.measurements) ||
      !detail::is_permutation_of(spec.preparations, s.preparations) ||
      spec.outcomes.size() != static_cast<std::size_t>(s.measurements)) {
    throw Error(ErrorCode::kIndexOutOfRange, "relabeling is not a permutation of the scenario's labels");
  }
  for (const auto& o : spec.outcomes) {
    if (!detail::is_permutation_of(o, s.outcomes)) {
      throw Error(ErrorCode::kIndexOutOfRange, "outcome relabeling is not a permutation");
    }
  }

  std::vector<Vector> prep_base, prep_moved;
  for (std::size_t k = 0; k < s.prep_equivalences.size(); ++k) {
    Vector diff = s.prep_difference(k);
    Vector moved(diff.size());
    for (int j = 1; j <= s.preparations; ++j) moved[spec.preparations[j - 1] - 1] = diff[j - 1];
    prep_base.push_back(std::move(diff));
    prep_moved.push_back(std::move(moved));
  }
  std::vector<Vector> meas_base, meas_moved;
  auto move_effects = [&](const Vector& v) {
    Vector out(v.size());
    for (std::size_t e = 0; e < v.size(); ++e) {
      const Effect from = s.effect_at(e);
      const Effect to{spec.measurements[from.i - 1], spec.outcomes[from.i - 1][from.m - 1]};
      out[s.effect_index(to)] = v[e];
    }
    return out;
  };
  for (std::size_t k = 0; k < s.meas_equivalences.size(); ++k) {
    Vector diff = s.meas_difference(k);
    meas_moved.push_back(move_effects(diff));
    meas_base.push_back(std::move(diff));
  }
  for (int i = 2; i <= s.measurements; ++i) {
    Vector v(s.num_effects());
    for (int m = 1; m <= s.outcomes; ++m) {
      v[s.effect_index({i, m})] += 1;
      v[s.effect_index({1, m})] -= 1;
    }
    meas_base.push_back(v);
  }
  if (!detail::within_span(prep_base, prep_moved) || !detail::within_span(meas_base, meas_moved)) {
    throw Error(ErrorCode::kGeneratorBreaksOE, "relabeling does not map the operational equivalences onto themselves");
  }

  Relabeling r;
  r.perm.resize(s.num_coords());
  for (std::size_t c = 0; c < s.num_coords(); ++c) {
    const Coord from = s.unflatten(c);
    const Coord to{spec.measurements[from.i - 1], spec.preparations[from.j - 1],
                   spec.outcomes[from.i - 1][from.m - 1]};
    r.perm[c] = static_cast<std::uint32_t>(s.flatten(to));
  }
  return r;
}

/// Exchanges measurement a[k] with b[k] for every k.
inline RelabelingSpec swap_measurements(const Scenario& s, std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::kParse, "swap blocks differ in length");
  RelabelingSpec spec = RelabelingSpec::identity(s);
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] < 1 || a[k] > s.measurements || b[k] < 1 || b[k] > s.measurements) {
      throw Error(ErrorCode::kIndexOutOfRange, "measurement index out of range");
    }
    spec.measurements[a[k] - 1] = b[k];
    spec.measurements[b[k] - 1] = a[k];
  }
  return spec;
}

/// Exchanges preparation a[k] with b[k] for every k.
inline RelabelingSpec swap_preparations(const Scenario& s, std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::kParse, "swap blocks differ in length");
  RelabelingSpec spec = RelabelingSpec::identity(s);
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] < 1 || a[k] > s.preparations || b[k] < 1 || b[k] > s.preparations) {
      throw Error(ErrorCode::kIndexOutOfRange, "preparation index out of range");
    }
    spec.preparations[a[k] - 1] = b[k];
    spec.preparations[b[k] - 1] = a[k];
  }
  return spec;
}

/// Reverses the outcome order of every listed measurement simultaneously.
inline RelabelingSpec flip_outcomes(const Scenario& s, std::span<const int> measurements) {
  RelabelingSpec spec = RelabelingSpec::identity(s);
  for (int i : measurements) {
    if (i < 1 || i > s.measurements) throw Error(ErrorCode::kIndexOutOfRange, "measurement index out of range");
    std::reverse(spec.outcomes[i - 1].begin(), spec.outcomes[i - 1].end());
  }
  return spec;
}

struct RelabelingGroup {
  std::vector<Relabeling> generators;
  /// Identity first, then breadth-first discovery order.
  std::vector<Relabeling> elements;

  std::size_t order() const { return elements.size(); }
};

inline constexpr std::size_t kGroupCap = 1000000;

/// Closure of the generators under composition. Throws GroupTooLarge past
/// `cap` elements.
inline RelabelingGroup generate_group(std::size_t num_coords, std::vector<Relabeling> generators,
                                      std::size_t cap = kGroupCap) {
  RelabelingGroup group;
  for (const auto& g : generators) {
    if (g.perm.size() != num_coords) throw Error(ErrorCode::kDimensionMismatch, "generator acts on another scenario");
  }
  group.generators = std::move(generators);
  std::unordered_set<Relabeling, RelabelingHash> seen;
  group.elements.push_back(Relabeling::identity(num_coords));
  seen.insert(group.elements.front());
  for (std::size_t head = 0; head < group.elements.size(); ++head) {
    for (const auto& g : group.generators) {
      Relabeling next = g * group.elements[head];
      if (seen.insert(next).second) {
        if (group.elements.size() >= cap) {
          throw Error(ErrorCode::kGroupTooLarge, "relabeling group exceeds " + std::to_string(cap) + " elements");
        }
        group.elements.push_back(std::move(next));
      }
    }
  }
  return group;
}

inline RelabelingGroup generate_group(const Scenario& s, std::span<const RelabelingSpec> specs,
                                      std::size_t cap = kGroupCap) {
  std::vector<Relabeling> gens;
  for (const auto& spec : specs) gens.push_back(compile_relabeling(s, spec));
  return generate_group(s.num_coords(), std::move(gens), cap);
}

/// Moves the coefficient of every coordinate c to g(c), then canonicalizes.
inline LinRow act_on_row(const Relabeling& g, const LinRow& row) {
  AffineExpr expr(row.constant());
  for (const auto& [var, coeff] : row.terms()) {
    if (var.value >= g.perm.size()) throw Error(ErrorCode::kIndexOutOfRange, "row uses a coordinate outside the table");
    expr.add_term(VarId{g.perm[var.value]}, coeff);
  }
  return canonicalize_row(LinRow(row.kind(), std::move(expr)));
}

struct OrbitClass {
  LinRow representative;
  std::size_t orbit_size = 0;
  std::vector<LinRow> members;
};

/// The orbit of `row`, each image reduced modulo `basis` and canonicalized,
/// sorted and deduplicated.
inline std::vector<LinRow> expand_orbit(const LinRow& row, const RelabelingGroup& group,
                                        const EqualityBasis& basis = {}) {
  std::set<LinRow> orbit;
  for (const auto& g : group.elements) orbit.insert(basis.canonical(act_on_row(g, row)));
  return {orbit.begin(), orbit.end()};
}

/// Partitions `rows` into orbits, identifying rows equal modulo `basis`.
/// Classes are sorted by representative, the lexicographically smallest
/// member. Throws RowNotInOrbitClosure when an image leaves the row set.
inline std::vector<OrbitClass> classify_orbits(std::span<const LinRow> rows, const RelabelingGroup& group,
                                               const EqualityBasis& basis = {}, bool keep_members = false) {
  std::set<LinRow> keys;
  for (const auto& row : rows) keys.insert(basis.canonical(row));
  std::set<LinRow> assigned;
  std::vector<OrbitClass> classes;
  for (const auto& key : keys) {
    if (assigned.count(key)) continue;
    std::vector<LinRow> orbit = expand_orbit(key, group, basis);
    for (const auto& member : orbit) {
      if (!keys.count(member)) {
        throw Error(ErrorCode::kRowNotInOrbitClosure, "the group maps a row outside the given set");
      }
      assigned.insert(member);
    }
    OrbitClass cls;
    cls.representative = orbit.front();
    cls.orbit_size = orbit.size();
    if (keep_members) cls.members = std::move(orbit);
    classes.push_back(std::move(cls));
  }
  std::sort(classes.begin(), classes.end(),
            [](const OrbitClass& a, const OrbitClass& b) { return a.representative < b.representative; });
  return classes;
}

/// Equalities every table of the scenario satisfies, written one per
/// constraint: normalization per (i, j), each preparation equivalence per
/// effect, each measurement equivalence per preparation. Canonical, sorted.
inline std::vector<LinRow> natural_equalities(const Scenario& s) {
  std::set<LinRow> out;
  for (int i = 1; i <= s.measurements; ++i) {
    for (int j = 1; j <= s.preparations; ++j) {
      AffineExpr expr(Rational(-1));
      for (int m = 1; m <= s.outcomes; ++m) expr.add_term(VarId{static_cast<std::uint32_t>(s.flatten({i, j, m}))}, Rational(1));
      out.insert(canonicalize_row(LinRow::eq(std::move(expr))));
    }
  }
  for (std::size_t k = 0; k < s.prep_equivalences.size(); ++k) {
    const Vector diff = s.prep_difference(k);
    for (int i = 1; i <= s.measurements; ++i) {
      for (int m = 1; m <= s.outcomes; ++m) {
        AffineExpr expr;
        for (int j = 1; j <= s.preparations; ++j) expr.add_term(VarId{static_cast<std::uint32_t>(s.flatten({i, j, m}))}, diff[j - 1]);
        if (!expr.is_constant()) out.insert(canonicalize_row(LinRow::eq(std::move(expr))));
      }
    }
  }
  for (std::size_t k = 0; k < s.meas_equivalences.size(); ++k) {
    const Vector diff = s.meas_difference(k);
    for (int j = 1; j <= s.preparations; ++j) {
      AffineExpr expr;
      for (std::size_t e = 0; e < diff.size(); ++e) {
        const Effect ef = s.effect_at(e);
        expr.add_term(VarId{static_cast<std::uint32_t>(s.flatten({ef.i, j, ef.m}))}, diff[e]);
      }
      if (!expr.is_constant()) out.insert(canonicalize_row(LinRow::eq(std::move(expr))));
    }
  }
  return {out.begin(), out.end()};
}

/// Symmetry classes of the equalities. Normalization rows form their own
/// orbits as literal rows; every other natural equality is identified
/// modulo normalization, with the last outcome eliminated.
inline std::vector<OrbitClass> classify_equalities(const Scenario& s, const RelabelingGroup& group,
                                                   bool keep_members = false) {
  std::vector<LinRow> normalization;
  for (int i = 1; i <= s.measurements; ++i) {
    for (int j = 1; j <= s.preparations; ++j) {
      AffineExpr expr(Rational(-1));
      for (int m = 1; m <= s.outcomes; ++m) expr.add_term(VarId{static_cast<std::uint32_t>(s.flatten({i, j, m}))}, Rational(1));
      normalization.push_back(canonicalize_row(LinRow::eq(std::move(expr))));
    }
  }
  std::vector<VarId> priority;
  for (int m = s.outcomes; m >= 1; --m) {
    for (int i = 1; i <= s.measurements; ++i) {
      for (int j = 1; j <= s.preparations; ++j) priority.push_back(VarId{static_cast<std::uint32_t>(s.flatten({i, j, m}))});
    }
  }
  const EqualityBasis norm_basis(normalization, priority);
  const std::set<LinRow> norm_set(normalization.begin(), normalization.end());

  std::set<LinRow> assigned;
  std::vector<OrbitClass> classes;
  for (const auto& natural : natural_equalities(s)) {
    const bool is_norm = norm_set.count(natural) > 0;
    const LinRow row = is_norm ? natural : norm_basis.canonical(natural);
    if (row.terms().empty() || assigned.count(row)) continue;
    std::vector<LinRow> orbit = is_norm ? expand_orbit(row, group) : expand_orbit(row, group, norm_basis);
    for (const auto& member : orbit) assigned.insert(member);
    OrbitClass cls;
    cls.representative = orbit.front();
    cls.orbit_size = orbit.size();
    if (keep_members) cls.members = std::move(orbit);
    classes.push_back(std::move(cls));
  }
  std::sort(classes.begin(), classes.end(),
            [](const OrbitClass& a, const OrbitClass& b) { return a.representative < b.representative; });
  return classes;
}

}  // namespace ncpoly
