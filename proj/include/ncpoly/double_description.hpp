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
#include <span>
#include <utility>
#include <vector>

#include "ncpoly/bitset.hpp"
#include "ncpoly/errors.hpp"
#include "ncpoly/linear.hpp"
#include "ncpoly/matrix.hpp"

namespace ncpoly {

namespace detail {

/// Scales v to a primitive integer vector (same direction).
inline void make_primitive(Vector& v) {
  BigInt den = 1;
  for (const auto& x : v) den = lcm(den, x.denominator());
  BigInt g = 0;
  for (const auto& x : v) g = gcd(g, x.numerator() * (den / x.denominator()));
  if (g == 0) return;
  const Rational k(den, g);
  for (auto& x : v) x *= k;
}

}  // namespace detail

/// Vertices of the bounded polyhedron {x : eq rows = 0, geq rows >= 0} in
/// `num_vars` dimensions, by the double description method on the
/// homogenized cone. Equalities fix the starting subspace; inequalities are
/// inserted in the given order. Two rays are combined only when their common
/// tight set has rank k - 2 (k = cone dimension). Vertices are returned sorted
/// lexicographically. Throws EmptyPolytope when the polyhedron is empty.
inline std::vector<Vector> double_description_vertices(std::size_t num_vars,
                                                       std::span<const LinRow> equalities,
                                                       std::span<const LinRow> inequalities) {
  const std::size_t hom = num_vars + 1;  // last coordinate is the homogenizing t
  auto homogenize = [&](const LinRow& row) {
    Vector v(hom);
    for (const auto& [var, coeff] : row.terms()) v.at(var.value) = coeff;
    v[num_vars] = row.constant();
    return v;
  };

  // Parametrize the linear subspace cut out by the equalities: x = B z.
  std::vector<Vector> basis;
  if (equalities.empty()) {
    for (std::size_t c = 0; c < hom; ++c) {
      Vector e(hom);
      e[c] = 1;
      basis.push_back(std::move(e));
    }
  } else {
    Matrix e(0, hom);
    for (const auto& row : equalities) e.append_row(homogenize(row));
    basis = nullspace(std::move(e));
  }
  const std::size_t k = basis.size();
  if (k == 0) throw Error(ErrorCode::kEmptyPolytope, "equalities admit only the origin");

  // Inequalities in z-space, t >= 0 first.
  std::vector<Vector> rows;
  {
    Vector t(hom);
    t[num_vars] = 1;
    std::vector<Vector> hom_rows{t};
    for (const auto& row : inequalities) hom_rows.push_back(homogenize(row));
    for (const auto& h : hom_rows) {
      Vector z(k);
      for (std::size_t c = 0; c < k; ++c) z[c] = dot(h, basis[c]);
      rows.push_back(std::move(z));
    }
  }

  // Initial simplicial cone from the first k independent rows.
  std::vector<std::size_t> initial;
  {
    Matrix acc(0, k);
    for (std::size_t r = 0; r < rows.size() && initial.size() < k; ++r) {
      Matrix trial = acc;
      trial.append_row(rows[r]);
      if (rank(trial) > initial.size()) {
        acc = std::move(trial);
        initial.push_back(r);
      }
    }
  }
  if (initial.size() < k) throw Error(ErrorCode::kInternal, "homogenized cone is not pointed");

  struct Ray {
    Vector z;
    Bitset zeros;
  };
  std::vector<Ray> rays;
  {
    Matrix s(0, k);
    for (auto r : initial) s.append_row(rows[r]);
    for (std::size_t c = 0; c < k; ++c) {
      Vector e(k);
      e[c] = 1;
      auto sol = solve(s, e);
      if (!sol) throw Error(ErrorCode::kInternal, "singular initial basis");
      detail::make_primitive(*sol);
      Ray ray{std::move(*sol), Bitset(rows.size())};
      for (std::size_t c2 = 0; c2 < k; ++c2) {
        if (c2 != c) ray.zeros.set(initial[c2]);
      }
      rays.push_back(std::move(ray));
    }
  }
  std::vector<bool> inserted(rows.size(), false);
  for (auto r : initial) inserted[r] = true;

  auto tight_rank = [&](const Bitset& zeros) {
    Matrix m(0, k);
    for (std::size_t r : zeros.indices()) m.append_row(rows[r]);
    return m.rows() == 0 ? std::size_t{0} : rank(std::move(m));
  };

  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (inserted[r]) continue;
    inserted[r] = true;
    std::vector<Rational> value(rays.size());
    std::vector<std::size_t> pos, neg;
    std::vector<Ray> next;
    for (std::size_t q = 0; q < rays.size(); ++q) {
      value[q] = dot(rows[r], rays[q].z);
      if (value[q].sign() > 0) pos.push_back(q);
      if (value[q].sign() < 0) neg.push_back(q);
    }
    if (neg.empty()) {
      for (std::size_t q = 0; q < rays.size(); ++q) {
        if (value[q].is_zero()) rays[q].zeros.set(r);
      }
      continue;
    }
    for (std::size_t q = 0; q < rays.size(); ++q) {
      if (value[q].sign() < 0) continue;
      Ray ray = rays[q];
      if (value[q].is_zero()) ray.zeros.set(r);
      next.push_back(std::move(ray));
    }
    for (std::size_t p : pos) {
      for (std::size_t n : neg) {
        Bitset common = rays[p].zeros & rays[n].zeros;
        if (k >= 2 && common.count() + 2 < k) continue;
        if (tight_rank(common) + 2 != k) continue;
        Vector z(k);
        for (std::size_t c = 0; c < k; ++c) z[c] = value[p] * rays[n].z[c] - value[n] * rays[p].z[c];
        detail::make_primitive(z);
        common.set(r);
        next.push_back(Ray{std::move(z), std::move(common)});
      }
    }
    rays = std::move(next);
  }

  std::vector<Vector> vertices;
  for (const auto& ray : rays) {
    Vector x(hom);
    for (std::size_t c = 0; c < k; ++c) {
      if (ray.z[c].is_zero()) continue;
      for (std::size_t a = 0; a < hom; ++a) {
        if (!basis[c][a].is_zero()) x[a] += ray.z[c] * basis[c][a];
      }
    }
    const Rational t = x[num_vars];
    if (t.sign() <= 0) throw Error(ErrorCode::kInternal, "polyhedron is unbounded");
    Vector v(num_vars);
    for (std::size_t a = 0; a < num_vars; ++a) v[a] = x[a] / t;
    vertices.push_back(std::move(v));
  }
  if (vertices.empty()) throw Error(ErrorCode::kEmptyPolytope, "no point satisfies the constraints");
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  return vertices;
}

}  // namespace ncpoly
