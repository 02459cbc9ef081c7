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
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ncpoly/bitset.hpp"
#include "ncpoly/double_description.hpp"
#include "ncpoly/errors.hpp"
#include "ncpoly/linear.hpp"
#include "ncpoly/matrix.hpp"
#include "ncpoly/nc_system.hpp"
#include "ncpoly/scenario.hpp"
#include "ncpoly/simplex.hpp"

namespace ncpoly {

/// Generalized-noncontextual polytope over table coordinates. Row variables
/// are VarId{Scenario::flatten(coord)}.
struct NCPolytope {
  Scenario scenario;
  /// Canonical reduced-row-echelon equalities (the affine hull).
  std::vector<LinRow> equalities;
  /// Canonical facet rows, reduced modulo the equalities, sorted.
  std::vector<LinRow> facets;

  bool contains(const DataTable& table) const {
    const auto& v = table.values();
    for (const auto& row : equalities) {
      if (!row.satisfied_by(v)) return false;
    }
    for (const auto& row : facets) {
      if (!row.satisfied_by(v)) return false;
    }
    return true;
  }
};

/// Pivot priority over table coordinates used for the affine-hull basis:
/// outcomes from last to first, then measurement, then preparation. With
/// binary outcomes this eliminates p(2|i,j) through normalization and keeps
/// facets written in the first-outcome probabilities.
inline std::vector<VarId> reduction_priority(const Scenario& s) {
  std::vector<VarId> out;
  for (int m = s.outcomes; m >= 1; --m) {
    for (int i = 1; i <= s.measurements; ++i) {
      for (int j = 1; j <= s.preparations; ++j) {
        out.push_back(VarId{static_cast<std::uint32_t>(s.flatten({i, j, m}))});
      }
    }
  }
  return out;
}

inline EqualityBasis hull_basis(const NCPolytope& poly) {
  const auto priority = reduction_priority(poly.scenario);
  return EqualityBasis(poly.equalities, priority);
}

struct ProjectionOptions {
  /// Drop combined rows whose ancestor set exceeds 1 + eliminations so far.
  bool chernikov = true;
  /// Drop combined rows whose ancestor set strictly contains another's.
  bool ancestor_subset_test = true;
  /// Exact redundancy removal after every elimination step.
  bool redundancy_each_step = true;
  /// How redundancy is decided. kVertexRank needs the vertices of the lifted
  /// polytope (supplied by project_to_nc_polytope); a row is kept when its
  /// tight vertices span a hyperplane. kLinearProgram solves an exact Farkas
  /// LP per row.
  enum class Redundancy { kVertexRank, kLinearProgram };
  Redundancy redundancy = Redundancy::kVertexRank;
  /// Worker threads for the per-row redundancy tests.
  unsigned jobs = 1;
  /// Progress sink (one line per elimination step); may be empty.
  std::function<void(const std::string&)> log;
};

namespace detail {

struct FmRow {
  std::vector<BigInt> coef;
  BigInt constant;
  Bitset ancestors;
};

inline void normalize(FmRow& row) {
  BigInt g = row.constant;
  if (g < 0) g = -g;
  for (const auto& c : row.coef) {
    if (g == 1) break;
    if (c != 0) g = gcd(g, c);
  }
  if (g > 1) {
    for (auto& c : row.coef) {
      if (c != 0) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
    }
    mpz_divexact(row.constant.get_mpz_t(), row.constant.get_mpz_t(), g.get_mpz_t());
  }
}

inline bool all_zero(const std::vector<BigInt>& v) {
  return std::all_of(v.begin(), v.end(), [](const BigInt& x) { return x == 0; });
}

struct CoefHash {
  std::size_t operator()(const std::vector<BigInt>& v) const noexcept {
    std::size_t h = 1469598103934665603ULL;
    for (const auto& x : v) {
      h ^= static_cast<std::size_t>(mpz_get_si(x.get_mpz_t())) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

/// True when `h` is implied by `others` (affine Farkas: h = sum lambda_i r_i +
/// mu with lambda, mu >= 0). `active` lists the columns that may be nonzero.
inline bool implied_by(const FmRow& h, std::span<const FmRow* const> others,
                       std::span<const std::size_t> active) {
  const std::size_t n = active.size();
  Matrix a(n + 1, others.size() + 1);
  Vector b(n + 1);
  for (std::size_t c = 0; c < n; ++c) {
    b[c] = Rational(h.coef[active[c]]);
    for (std::size_t k = 0; k < others.size(); ++k) {
      const BigInt& v = others[k]->coef[active[c]];
      if (v != 0) a(c, k) = Rational(v);
    }
  }
  b[n] = Rational(h.constant);
  for (std::size_t k = 0; k < others.size(); ++k) {
    if (others[k]->constant != 0) a(n, k) = Rational(others[k]->constant);
  }
  a(n, others.size()) = 1;
  return solve_standard_form(a, b).status != LpStatus::kInfeasible;
}

/// Integer point coords / den.
struct ScaledPoint {
  std::vector<BigInt> coords;
  BigInt den;
};

inline ScaledPoint scale_point(std::span<const Rational> x) {
  ScaledPoint p;
  p.den = 1;
  for (const auto& v : x) p.den = lcm(p.den, v.denominator());
  for (const auto& v : x) p.coords.push_back(v.numerator() * (p.den / v.denominator()));
  return p;
}

/// Arithmetic modulo the prime 2^61 - 1.
struct ModP {
  static constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;
  static std::uint64_t reduce(const BigInt& x) {
    return static_cast<std::uint64_t>(mpz_fdiv_ui(x.get_mpz_t(), kPrime));
  }
  static std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % kPrime);
  }
  static std::uint64_t sub(std::uint64_t a, std::uint64_t b) { return a >= b ? a - b : a + kPrime - b; }
  static std::uint64_t inv(std::uint64_t a) {
    std::uint64_t result = 1, e = kPrime - 2;
    while (e > 0) {
      if (e & 1) result = mul(result, a);
      a = mul(a, a);
      e >>= 1;
    }
    return result;
  }
};

/// Incremental row echelon form modulo ModP::kPrime.
class ModRank {
 public:
  explicit ModRank(std::size_t width) : width_(width) {}
  std::size_t rank() const { return basis_.size(); }

  void insert(std::vector<std::uint64_t> v) {
    for (std::size_t b = 0; b < basis_.size(); ++b) {
      const std::size_t c = lead_[b];
      if (v[c] == 0) continue;
      const std::uint64_t f = v[c];
      for (std::size_t k = c; k < width_; ++k) v[k] = ModP::sub(v[k], ModP::mul(f, basis_[b][k]));
    }
    std::size_t c = 0;
    while (c < width_ && v[c] == 0) ++c;
    if (c == width_) return;
    const std::uint64_t inv = ModP::inv(v[c]);
    for (std::size_t k = c; k < width_; ++k) v[k] = ModP::mul(v[k], inv);
    // Keep the basis reduced on the new lead column.
    for (auto& row : basis_) {
      if (row[c] == 0) continue;
      const std::uint64_t f = row[c];
      for (std::size_t k = c; k < width_; ++k) row[k] = ModP::sub(row[k], ModP::mul(f, v[k]));
    }
    basis_.push_back(std::move(v));
    lead_.push_back(c);
  }

 private:
  std::size_t width_;
  std::vector<std::vector<std::uint64_t>> basis_;
  std::vector<std::size_t> lead_;
};

template <typename Fn>
void parallel_for(std::size_t count, unsigned jobs, Fn&& fn) {
  if (jobs <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  const unsigned n = std::min<std::size_t>(jobs, count);
  for (unsigned w = 0; w < n; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& t : workers) t.join();
}

}  // namespace detail

/// Fourier-Motzkin elimination over integer rows `coef . x + constant >= 0`
/// with ancestor bookkeeping for Chernikov's rule.
class FourierMotzkin {
 public:
  FourierMotzkin(std::size_t num_cols, std::vector<std::pair<std::vector<BigInt>, BigInt>> rows,
                 ProjectionOptions options = {})
      : num_cols_(num_cols), options_(std::move(options)), eliminated_(num_cols, false) {
    const std::size_t n = rows.size();
    std::set<std::pair<std::vector<BigInt>, BigInt>> seen;
    for (std::size_t r = 0; r < n; ++r) {
      detail::FmRow row{std::move(rows[r].first), std::move(rows[r].second), Bitset(n)};
      row.ancestors.set(r);
      detail::normalize(row);
      if (!seen.emplace(row.coef, row.constant).second) continue;
      rows_.push_back(std::move(row));
    }
  }

  /// Vertices of the polyhedron described by the initial rows. Projection
  /// drops coordinates, so they cover every later vertex as well.
  void set_vertices(std::span<const Vector> points) {
    vertices_.clear();
    vertex_residues_.clear();
    for (const auto& x : points) {
      auto scaled = detail::scale_point(x);
      std::vector<std::uint64_t> residues;
      for (const auto& c : scaled.coords) residues.push_back(detail::ModP::reduce(c));
      residues.push_back(detail::ModP::reduce(scaled.den));
      vertices_.push_back(std::move(scaled));
      vertex_residues_.push_back(std::move(residues));
    }
  }

  std::size_t num_rows() const { return rows_.size(); }
  std::size_t eliminations() const { return steps_; }
  const std::vector<detail::FmRow>& rows() const { return rows_; }

  /// Greedy choice among `candidates`: minimize pos*neg - pos - neg, ties by
  /// candidate order.
  std::size_t choose(std::span<const std::size_t> candidates) const {
    std::size_t best = candidates.front();
    long long best_score = 0;
    bool first = true;
    for (auto col : candidates) {
      long long pos = 0, neg = 0;
      for (const auto& row : rows_) {
        const int s = sgn(row.coef[col]);
        pos += s > 0;
        neg += s < 0;
      }
      const long long score = pos * neg - pos - neg;
      if (first || score < best_score) {
        best = col;
        best_score = score;
        first = false;
      }
    }
    return best;
  }

  /// One elimination step. Constant rows are kept when `keep_constant_rows`.
  void eliminate(std::size_t col, bool keep_constant_rows = false) {
    std::vector<std::size_t> pos, neg;
    std::vector<detail::FmRow> out;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const int s = sgn(rows_[r].coef[col]);
      if (s > 0) pos.push_back(r);
      else if (s < 0) neg.push_back(r);
    }
    ++steps_;
    eliminated_[col] = true;
    std::unordered_map<std::vector<BigInt>, std::size_t, detail::CoefHash> index;
    std::size_t dropped_chernikov = 0;
    auto insert = [&](detail::FmRow row) {
      if (!keep_constant_rows && detail::all_zero(row.coef)) {
        if (row.constant < 0) throw Error(ErrorCode::kInconsistentSystem, "projection is empty");
        return;
      }
      auto [it, fresh] = index.try_emplace(row.coef, out.size());
      if (fresh) {
        out.push_back(std::move(row));
        return;
      }
      auto& kept = out[it->second];
      if (row.constant < kept.constant ||
          (row.constant == kept.constant && row.ancestors.count() < kept.ancestors.count())) {
        kept = std::move(row);
      }
    };
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (rows_[r].coef[col] == 0) insert(rows_[r]);
    }
    BigInt g, fp, fn;
    for (auto p : pos) {
      for (auto n : neg) {
        Bitset anc = rows_[p].ancestors | rows_[n].ancestors;
        if (options_.chernikov && anc.count() > steps_ + 1) {
          ++dropped_chernikov;
          continue;
        }
        const BigInt& cp = rows_[p].coef[col];
        const BigInt cn = -rows_[n].coef[col];
        g = gcd(cp, cn);
        fp = cn / g;  // multiplier for the positive row
        fn = cp / g;  // multiplier for the negative row
        detail::FmRow row{std::vector<BigInt>(num_cols_), fp * rows_[p].constant + fn * rows_[n].constant,
                          std::move(anc)};
        for (std::size_t c = 0; c < num_cols_; ++c) {
          if (c == col) continue;
          const BigInt& a = rows_[p].coef[c];
          const BigInt& b = rows_[n].coef[c];
          if (a == 0 && b == 0) continue;
          row.coef[c] = fp * a + fn * b;
        }
        detail::normalize(row);
        insert(std::move(row));
      }
    }
    rows_ = std::move(out);
    const std::size_t combined = rows_.size();
    std::size_t dropped_subset = 0;
    if (options_.ancestor_subset_test) dropped_subset = ancestor_subset_filter();
    std::size_t dropped_lp = 0;
    if (options_.redundancy_each_step) dropped_lp = remove_redundant_rows();
    if (options_.log) {
      options_.log("eliminated column " + std::to_string(col) + ": +" + std::to_string(pos.size()) + "/-" +
                   std::to_string(neg.size()) + ", chernikov dropped " + std::to_string(dropped_chernikov) +
                   ", combined " + std::to_string(combined) + ", subset dropped " +
                   std::to_string(dropped_subset) + ", redundant " + std::to_string(dropped_lp) + ", rows " +
                   std::to_string(rows_.size()));
    }
  }

  /// Exact redundancy removal, valid when the current system is
  /// full-dimensional and free of duplicate rows: every row is tested against
  /// all others simultaneously. Returns the number of rows removed.
  std::size_t remove_redundant_rows() {
    const auto active = active_columns();
    const std::size_t m = rows_.size();
    std::vector<char> keep(m, 1);
    const bool by_rank = options_.redundancy == ProjectionOptions::Redundancy::kVertexRank;
    if (by_rank && vertices_.empty()) {
      throw Error(ErrorCode::kInternal, "vertex-rank redundancy test needs the lifted vertices");
    }
    std::vector<const detail::FmRow*> all;
    for (const auto& r : rows_) all.push_back(&r);
    detail::parallel_for(m, options_.jobs, [&](std::size_t h) {
      if (by_rank) {
        if (!is_facet(rows_[h], active)) keep[h] = 0;
        return;
      }
      std::vector<const detail::FmRow*> others;
      others.reserve(m - 1);
      for (std::size_t r = 0; r < m; ++r) {
        if (r != h) others.push_back(all[r]);
      }
      if (detail::implied_by(rows_[h], others, active)) keep[h] = 0;
    });
    std::vector<detail::FmRow> out;
    for (std::size_t r = 0; r < m; ++r) {
      if (keep[r]) out.push_back(std::move(rows_[r]));
    }
    const std::size_t removed = m - out.size();
    rows_ = std::move(out);
    return removed;
  }

  /// Facet test for a valid row of a full-dimensional polytope: the vertices
  /// on its hyperplane must have affine rank equal to the number of active
  /// columns minus one. A modular rank reaching that bound is conclusive;
  /// otherwise the exact rank decides.
  bool is_facet(const detail::FmRow& row, std::span<const std::size_t> active) const {
    const std::size_t width = active.size() + 1;
    std::vector<std::uint64_t> row_res;
    for (auto c : active) row_res.push_back(detail::ModP::reduce(row.coef[c]));
    const std::uint64_t const_res = detail::ModP::reduce(row.constant);
    detail::ModRank mod_rank(width);
    std::vector<std::size_t> tight;
    BigInt acc;
    for (std::size_t v = 0; v < vertices_.size(); ++v) {
      const auto& res = vertex_residues_[v];
      std::uint64_t value = detail::ModP::mul(const_res, res.back());
      for (std::size_t k = 0; k < active.size(); ++k) {
        if (row_res[k] != 0) {
          value = (value + detail::ModP::mul(row_res[k], res[active[k]])) % detail::ModP::kPrime;
        }
      }
      if (value != 0) continue;
      acc = row.constant * vertices_[v].den;
      for (auto c : active) {
        if (row.coef[c] != 0) acc += row.coef[c] * vertices_[v].coords[c];
      }
      if (acc != 0) continue;
      tight.push_back(v);
      if (mod_rank.rank() < width - 1) {
        std::vector<std::uint64_t> point;
        for (auto c : active) point.push_back(res[c]);
        point.push_back(res.back());
        mod_rank.insert(std::move(point));
      }
    }
    if (mod_rank.rank() == width - 1) return true;
    Matrix exact(0, width);
    for (auto v : tight) {
      Vector point;
      for (auto c : active) point.push_back(Rational(vertices_[v].coords[c]));
      point.push_back(Rational(vertices_[v].den));
      exact.append_row(point);
    }
    return tight.size() >= width - 1 && rank(exact) == width - 1;
  }

  std::vector<std::size_t> active_columns() const {
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < num_cols_; ++c) {
      if (!eliminated_[c]) out.push_back(c);
    }
    return out;
  }

 private:
  std::size_t ancestor_subset_filter() {
    const std::size_t m = rows_.size();
    std::vector<std::size_t> order(m);
    for (std::size_t r = 0; r < m; ++r) order[r] = r;
    std::vector<std::size_t> counts(m);
    for (std::size_t r = 0; r < m; ++r) counts[r] = rows_[r].ancestors.count();
    std::vector<char> keep(m, 1);
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t s = 0; s < m; ++s) {
        if (s == r || counts[s] >= counts[r]) continue;
        if (rows_[s].ancestors.subset_of(rows_[r].ancestors)) {
          keep[r] = 0;
          break;
        }
      }
    }
    std::vector<detail::FmRow> out;
    for (std::size_t r = 0; r < m; ++r) {
      if (keep[r]) out.push_back(std::move(rows_[r]));
    }
    const std::size_t removed = m - out.size();
    rows_ = std::move(out);
    return removed;
  }

  std::size_t num_cols_;
  ProjectionOptions options_;
  std::vector<bool> eliminated_;
  std::vector<detail::FmRow> rows_;
  std::vector<detail::ScaledPoint> vertices_;
  std::vector<std::vector<std::uint64_t>> vertex_residues_;
  std::size_t steps_ = 0;
};

namespace detail {

/// Dense integer form of GEQ rows over the variables in `columns`.
inline std::vector<std::pair<std::vector<BigInt>, BigInt>> to_integer_rows(
    std::span<const LinRow> rows, const std::map<VarId, std::size_t>& column_of) {
  std::vector<std::pair<std::vector<BigInt>, BigInt>> out;
  for (const auto& row : rows) {
    const LinRow scaled = canonicalize_row(row);
    std::vector<BigInt> coef(column_of.size());
    for (const auto& [var, c] : scaled.terms()) coef[column_of.at(var)] = c.numerator();
    out.emplace_back(std::move(coef), scaled.constant().numerator());
  }
  return out;
}

inline LinRow from_integer_row(const FmRow& row, std::span<const VarId> columns) {
  AffineExpr expr(Rational(row.constant));
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (row.coef[c] != 0) expr.add_term(columns[c], Rational(row.coef[c]));
  }
  return LinRow::geq(std::move(expr));
}

}  // namespace detail

/// Projects out `var` from GEQ rows. Every combined row is kept (including
/// constant rows); with a single elimination Chernikov's bound never prunes.
inline std::vector<LinRow> fm_eliminate_var(std::span<const LinRow> rows, VarId var) {
  std::map<VarId, std::size_t> column_of;
  for (const auto& row : rows) {
    if (row.is_eq()) throw Error(ErrorCode::kInternal, "fm_eliminate_var expects inequality rows only");
    for (const auto& [v, c] : row.terms()) column_of.emplace(v, 0);
  }
  column_of.emplace(var, 0);
  std::vector<VarId> columns;
  for (auto& [v, idx] : column_of) {
    idx = columns.size();
    columns.push_back(v);
  }
  ProjectionOptions options;
  options.ancestor_subset_test = false;
  options.redundancy_each_step = false;
  FourierMotzkin fm(columns.size(), detail::to_integer_rows(rows, column_of), options);
  fm.eliminate(column_of.at(var), /*keep_constant_rows=*/true);
  std::vector<LinRow> out;
  for (const auto& row : fm.rows()) out.push_back(detail::from_integer_row(row, columns));
  return out;
}

/// Minimal subset of `rows` describing the same region within the affine
/// space of `equalities`. Rows are tested in order, each against the rows
/// still kept; the survivors are returned in their original order.
inline std::vector<LinRow> remove_redundant(std::span<const LinRow> rows, std::span<const LinRow> equalities = {}) {
  std::map<VarId, std::size_t> column_of;
  for (const auto& row : rows) {
    for (const auto& [v, c] : row.terms()) column_of.emplace(v, 0);
  }
  for (const auto& row : equalities) {
    for (const auto& [v, c] : row.terms()) column_of.emplace(v, 0);
  }
  std::vector<VarId> priority;
  for (auto& [v, idx] : column_of) {
    idx = priority.size();
    priority.push_back(v);
  }
  const EqualityBasis basis(equalities, priority);
  std::vector<LinRow> reduced;
  for (const auto& row : rows) reduced.push_back(basis.reduce(row));
  auto dense = detail::to_integer_rows(reduced, column_of);
  std::vector<detail::FmRow> fm_rows;
  for (auto& [coef, constant] : dense) fm_rows.push_back({std::move(coef), std::move(constant), Bitset()});
  std::vector<std::size_t> active(priority.size());
  for (std::size_t c = 0; c < active.size(); ++c) active[c] = c;
  std::vector<char> keep(rows.size(), 1);
  for (std::size_t h = 0; h < rows.size(); ++h) {
    std::vector<const detail::FmRow*> others;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r != h && keep[r]) others.push_back(&fm_rows[r]);
    }
    if (detail::implied_by(fm_rows[h], others, active)) keep[h] = 0;
  }
  std::vector<LinRow> out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (keep[r]) out.push_back(rows[r]);
  }
  return out;
}

/// Affine hull of the noncontextual polytope: the p-only consequences of the
/// equality rows of the system, as a reduced-row-echelon basis.
inline EqualityBasis f2_affine_hull(const F2System& f2) {
  std::vector<VarId> preference = f2.nu_vars();
  for (VarId v : reduction_priority(f2.scenario)) preference.push_back(VarId{static_cast<std::uint32_t>(f2.num_nu() + v.value)});
  LinearSystem eqs = f2.system.empty_copy();
  for (const auto& row : f2.system.rows()) {
    if (row.is_eq()) eqs.add_row(row);
  }
  const RowReduction red = row_reduce_equalities(eqs, preference);
  std::vector<LinRow> p_rows;
  for (const auto& [pivot, expr] : red.substitutions) {
    if (!f2.is_p(pivot)) continue;
    AffineExpr row;
    row.add_term(VarId{pivot.value - static_cast<std::uint32_t>(f2.num_nu())}, Rational(1));
    for (const auto& [var, coeff] : expr.terms()) {
      row.add_term(VarId{var.value - static_cast<std::uint32_t>(f2.num_nu())}, -coeff);
    }
    row.add_constant(-expr.constant());
    p_rows.push_back(LinRow::eq(std::move(row)));
  }
  return EqualityBasis(p_rows, reduction_priority(f2.scenario));
}

/// Eliminates every nu variable: equalities are solved first (nu pivots
/// preferred), then the remaining free nu are removed by Fourier-Motzkin with
/// Chernikov pruning and exact redundancy removal.
inline NCPolytope project_to_nc_polytope(const F2System& f2, ProjectionOptions options = {}) {
  const std::size_t num_nu = f2.num_nu();
  std::vector<VarId> preference = f2.nu_vars();
  for (VarId v : reduction_priority(f2.scenario)) preference.push_back(VarId{static_cast<std::uint32_t>(num_nu + v.value)});
  const RowReduction red = row_reduce_equalities(f2.system, preference);

  NCPolytope poly;
  poly.scenario = f2.scenario;
  const EqualityBasis hull = f2_affine_hull(f2);
  poly.equalities = hull.rows();

  // Columns: free nu first (to be eliminated), then free p.
  std::map<VarId, std::size_t> column_of;
  for (const auto& row : red.reduced.rows()) {
    for (const auto& [v, c] : row.terms()) column_of.emplace(v, 0);
  }
  std::vector<VarId> columns;
  std::vector<std::size_t> nu_columns;
  for (auto& [v, idx] : column_of) {
    idx = columns.size();
    if (!f2.is_p(v)) nu_columns.push_back(idx);
    columns.push_back(v);
  }

  FourierMotzkin fm(columns.size(), detail::to_integer_rows(red.reduced.rows(), column_of), options);

  if (options.redundancy == ProjectionOptions::Redundancy::kVertexRank) {
    std::vector<LinRow> model_eqs, model_geqs;
    for (const auto& row : f2.system.rows()) {
      if (std::any_of(row.terms().begin(), row.terms().end(), [&](const auto& t) { return f2.is_p(t.first); })) {
        continue;
      }
      (row.is_eq() ? model_eqs : model_geqs).push_back(row);
    }
    const auto models = double_description_vertices(num_nu, model_eqs, model_geqs);
    std::vector<Vector> points;
    for (const auto& nu : models) {
      Vector values(f2.system.num_variables());
      std::copy(nu.begin(), nu.end(), values.begin());
      const DataTable table = reconstruct_table(f2, nu);
      std::copy(table.values().begin(), table.values().end(), values.begin() + static_cast<std::ptrdiff_t>(num_nu));
      Vector point(columns.size());
      for (std::size_t c = 0; c < columns.size(); ++c) point[c] = values[columns[c].value];
      points.push_back(std::move(point));
    }
    fm.set_vertices(points);
  }

  std::vector<std::size_t> remaining = nu_columns;
  while (!remaining.empty()) {
    const std::size_t col = fm.choose(remaining);
    fm.eliminate(col);
    remaining.erase(std::find(remaining.begin(), remaining.end(), col));
  }
  if (!options.redundancy_each_step || nu_columns.empty()) fm.remove_redundant_rows();

  std::vector<LinRow> facets;
  for (const auto& row : fm.rows()) {
    LinRow r = detail::from_integer_row(row, columns);
    AffineExpr expr(r.constant());
    for (const auto& [v, c] : r.terms()) expr.add_term(VarId{v.value - static_cast<std::uint32_t>(num_nu)}, c);
    LinRow reduced = hull.canonical(LinRow::geq(std::move(expr)));
    if (reduced.terms().empty()) continue;
    facets.push_back(std::move(reduced));
  }
  std::sort(facets.begin(), facets.end());
  facets.erase(std::unique(facets.begin(), facets.end()), facets.end());
  poly.facets = std::move(facets);
  return poly;
}

}  // namespace ncpoly
