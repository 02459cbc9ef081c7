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
#include <numeric>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ncpoly/rational.hpp"

namespace ncpoly {

using Vector = std::vector<Rational>;

inline Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
  assert(a.size() == b.size());
  mpq_class acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero() || b[i].is_zero()) continue;
    acc += a[i].raw() * b[i].raw();
  }
  return Rational(std::move(acc));
}

/// Dense row-major matrix of exact rationals.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Rational> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Rational> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  void append_row(std::span<const Rational> values) {
    assert(rows_ == 0 || values.size() == cols_);
    if (rows_ == 0) cols_ = values.size();
    data_.insert(data_.end(), values.begin(), values.end());
    ++rows_;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(a, c), (*this)(b, c));
  }

  Vector multiply(std::span<const Rational> x) const {
    assert(x.size() == cols_);
    Vector out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = dot(row(r), x);
    return out;
  }

  /// y^T * this.
  Vector left_multiply(std::span<const Rational> y) const {
    assert(y.size() == rows_);
    Vector out(cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
      if (y[r].is_zero()) continue;
      for (std::size_t c = 0; c < cols_; ++c) {
        if (!(*this)(r, c).is_zero()) out[c] += y[r] * (*this)(r, c);
      }
    }
    return out;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Gauss-Jordan elimination in place. Columns are scanned in
/// `column_order` (all columns in index order when empty), so the pivot set
/// is the lexicographically first column basis under that order. Returns the
/// pivot column of each nonzero row; zero rows end up at the bottom.
inline std::vector<std::size_t> rref(Matrix& m, std::span<const std::size_t> column_order = {}) {
  std::vector<std::size_t> order(column_order.begin(), column_order.end());
  if (order.empty()) {
    order.resize(m.cols());
    std::iota(order.begin(), order.end(), std::size_t{0});
  }
  std::vector<std::size_t> pivots;
  std::size_t lead = 0;
  for (std::size_t col : order) {
    if (lead == m.rows()) break;
    std::size_t sel = lead;
    while (sel < m.rows() && m(sel, col).is_zero()) ++sel;
    if (sel == m.rows()) continue;
    m.swap_rows(lead, sel);
    const Rational inv = Rational(1) / m(lead, col);
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (!m(lead, c).is_zero()) m(lead, c) *= inv;
    }
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == lead || m(r, col).is_zero()) continue;
      const Rational factor = m(r, col);
      for (std::size_t c = 0; c < m.cols(); ++c) {
        if (!m(lead, c).is_zero()) m(r, c) -= factor * m(lead, c);
      }
    }
    pivots.push_back(col);
    ++lead;
  }
  return pivots;
}

inline std::size_t rank(Matrix m) { return rref(m).size(); }

/// Basis of {x : m x = 0}, one vector per free column.
inline std::vector<Vector> nullspace(Matrix m) {
  const auto pivots = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<Vector> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vector v(m.cols());
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Some solution of A x = b, or nullopt when b is outside the column space.
inline std::optional<Vector> solve(const Matrix& a, std::span<const Rational> b) {
  assert(b.size() == a.rows());
  Matrix aug(a.rows(), a.cols() + 1);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) aug(r, c) = a(r, c);
    aug(r, a.cols()) = b[r];
  }
  const auto pivots = rref(aug);
  Vector x(a.cols());
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    if (pivots[r] == a.cols()) return std::nullopt;
    x[pivots[r]] = aug(r, a.cols());
  }
  return x;
}

/// A vector y with y^T A = 0 and y . b != 0 when b lies outside the column
/// space of A; nullopt otherwise.
inline std::optional<Vector> range_violation_witness(const Matrix& a, std::span<const Rational> b) {
  // Eliminate on [A | b | I]; a row whose A-part vanishes but b-part does not
  // carries the witness in its I-part.
  const std::size_t n = a.cols();
  const std::size_t m = a.rows();
  Matrix aug(m, n + 1 + m);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < n; ++c) aug(r, c) = a(r, c);
    aug(r, n) = b[r];
    aug(r, n + 1 + r) = 1;
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto pivots = rref(aug, order);
  for (std::size_t r = pivots.size(); r < m; ++r) {
    if (aug(r, n).is_zero()) continue;
    Vector y(m);
    for (std::size_t k = 0; k < m; ++k) y[k] = aug(r, n + 1 + k);
    return y;
  }
  return std::nullopt;
}

}  // namespace ncpoly
