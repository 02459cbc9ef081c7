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

#include <cassert>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "ncpoly/matrix.hpp"
#include "ncpoly/rational.hpp"

namespace ncpoly {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  /// Primal point (feasible whenever status != kInfeasible).
  Vector x;
  Rational objective;
  /// Optimal duals y, with c - A^T y >= 0 componentwise.
  Vector duals;
  /// When infeasible: y with y^T A >= 0 and y . b < 0, read from the
  /// optimal phase-one multipliers.
  Vector farkas;
  std::size_t pivots = 0;
};

namespace detail {

/// Dense two-phase tableau simplex over exact rationals.
class Tableau {
 public:
  Tableau(const Matrix& a, std::span<const Rational> b)
      : m_(a.rows()), n_(a.cols()), width_(a.cols() + a.rows() + 1), sign_(a.rows(), 1) {
    rows_.assign(m_, std::vector<mpq_class>(width_));
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      if (b[i].sign() < 0) sign_[i] = -1;
      for (std::size_t j = 0; j < n_; ++j) {
        if (!a(i, j).is_zero()) rows_[i][j] = sign_[i] > 0 ? a(i, j).raw() : mpq_class(-a(i, j).raw());
      }
      rows_[i][n_ + i] = 1;
      rows_[i][rhs()] = sign_[i] > 0 ? b[i].raw() : mpq_class(-b[i].raw());
      basis_[i] = n_ + i;
    }
  }

  /// Minimizes the sum of artificials. Returns true when the optimum is 0.
  bool phase_one() {
    z_.assign(width_, 0);
    for (std::size_t j = n_; j < n_ + m_; ++j) z_[j] = 1;
    for (std::size_t i = 0; i < m_; ++i) subtract_row(z_, i, 1);
    run(/*allow_artificial=*/true);
    phase_one_value_ = -z_[rhs()];
    if (sgn(phase_one_value_) != 0) return false;
    drive_out_artificials();
    return true;
  }

  /// Requires a successful phase_one(). Returns false when unbounded.
  bool phase_two(std::span<const Rational> c) {
    cost_.assign(n_ + m_, 0);
    for (std::size_t j = 0; j < n_; ++j) cost_[j] = c[j].raw();
    z_.assign(width_, 0);
    for (std::size_t j = 0; j < n_; ++j) z_[j] = cost_[j];
    for (std::size_t i = 0; i < m_; ++i) {
      const mpq_class cb = cost_[basis_[i]];
      if (sgn(cb) != 0) subtract_row(z_, i, cb);
    }
    return run(/*allow_artificial=*/false);
  }

  Vector primal() const {
    Vector x(n_);
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) x[basis_[i]] = Rational(rows_[i][rhs()]);
    }
    return x;
  }

  Rational objective() const { return Rational(mpq_class(-z_[rhs()])); }

  /// Multipliers for the original (unflipped) rows. In phase one the
  /// artificial costs are 1, afterwards 0.
  Vector multipliers(bool phase_one_costs) const {
    Vector y(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      mpq_class u = phase_one_costs ? mpq_class(1 - z_[n_ + i]) : mpq_class(-z_[n_ + i]);
      y[i] = Rational(sign_[i] > 0 ? u : mpq_class(-u));
    }
    return y;
  }

  std::size_t pivots() const { return pivots_; }

 private:
  std::size_t rhs() const { return width_ - 1; }

  // target -= factor * rows_[i]
  void subtract_row(std::vector<mpq_class>& target, std::size_t i, const mpq_class& factor) {
    const auto& src = rows_[i];
    for (std::size_t j = 0; j < width_; ++j) {
      if (sgn(src[j]) != 0) target[j] -= factor * src[j];
    }
  }

  void pivot(std::size_t r, std::size_t col) {
    ++pivots_;
    auto& prow = rows_[r];
    const mpq_class inv = 1 / prow[col];
    nonzero_.clear();
    for (std::size_t j = 0; j < width_; ++j) {
      if (sgn(prow[j]) != 0) {
        prow[j] *= inv;
        nonzero_.push_back(j);
      }
    }
    auto eliminate = [&](std::vector<mpq_class>& target) {
      if (sgn(target[col]) == 0) return;
      const mpq_class f = target[col];
      for (std::size_t j : nonzero_) target[j] -= f * prow[j];
    };
    for (std::size_t i = 0; i < m_; ++i) {
      if (i != r) eliminate(rows_[i]);
    }
    eliminate(z_);
    basis_[r] = col;
  }

  bool run(bool allow_artificial) {
    const std::size_t limit = allow_artificial ? n_ + m_ : n_;
    mpq_class best, ratio;
    for (;;) {
      // Dantzig's rule until a long run of degenerate pivots, then Bland's
      // rule for the rest of the phase, which rules out cycling.
      std::size_t enter = limit;
      for (std::size_t j = 0; j < limit; ++j) {
        if (sgn(z_[j]) < 0 && (enter == limit || (!bland_ && z_[j] < z_[enter]))) {
          enter = j;
          if (bland_) break;
        }
      }
      if (enter == limit) return true;
      std::size_t leave = m_;
      for (std::size_t i = 0; i < m_; ++i) {
        if (sgn(rows_[i][enter]) <= 0) continue;
        ratio = rows_[i][rhs()] / rows_[i][enter];
        if (leave == m_ || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m_) return false;
      if (sgn(best) == 0) {
        if (++degenerate_ > kDegenerateLimit) bland_ = true;
      } else {
        degenerate_ = 0;
      }
      pivot(leave, enter);
    }
  }

  void drive_out_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        if (sgn(rows_[i][j]) != 0) {
          pivot(i, j);
          break;
        }
      }
      // Otherwise the row is linearly dependent; its artificial stays basic at 0.
    }
  }

  std::size_t m_, n_, width_;
  std::vector<int> sign_;
  std::vector<std::vector<mpq_class>> rows_;
  std::vector<mpq_class> z_;
  std::vector<mpq_class> cost_;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> nonzero_;
  mpq_class phase_one_value_;
  std::size_t pivots_ = 0;
  static constexpr std::size_t kDegenerateLimit = 50;
  std::size_t degenerate_ = 0;
  bool bland_ = false;
};

}  // namespace detail

/// minimize c . x  subject to  A x = b, x >= 0.
/// An empty `c` asks for feasibility only (phase one).
inline LpResult solve_standard_form(const Matrix& a, std::span<const Rational> b,
                                    std::span<const Rational> c = {}) {
  assert(b.size() == a.rows());
  assert(c.empty() || c.size() == a.cols());
  detail::Tableau tableau(a, b);
  LpResult result;
  if (!tableau.phase_one()) {
    result.status = LpStatus::kInfeasible;
    Vector u = tableau.multipliers(/*phase_one_costs=*/true);
    for (auto& v : u) v = -v;
    result.farkas = std::move(u);
    result.pivots = tableau.pivots();
    return result;
  }
  if (c.empty()) {
    result.status = LpStatus::kOptimal;
    result.x = tableau.primal();
    result.duals.assign(a.rows(), Rational(0));
    result.pivots = tableau.pivots();
    return result;
  }
  const bool bounded = tableau.phase_two(c);
  result.x = tableau.primal();
  result.pivots = tableau.pivots();
  if (!bounded) {
    result.status = LpStatus::kUnbounded;
    return result;
  }
  result.status = LpStatus::kOptimal;
  result.objective = tableau.objective();
  result.duals = tableau.multipliers(/*phase_one_costs=*/false);
  return result;
}

}  // namespace ncpoly
