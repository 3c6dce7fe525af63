/*
   Copyright 2026 The qdp Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "field.hpp"

namespace qdp {

/// Dense row-major matrix over a prime field.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Elem> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
  static Matrix from_rows(const std::vector<Vec>& rs, std::size_t cols) {
    Matrix m(rs.size(), cols);
    for (std::size_t i = 0; i < rs.size(); ++i) std::copy(rs[i].begin(), rs[i].end(), m.row(i));
    return m;
  }

  Elem& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  Elem operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  Elem* row(std::size_t i) { return data.data() + i * cols; }
  const Elem* row(std::size_t i) const { return data.data() + i * cols; }
  Vec row_vec(std::size_t i) const { return Vec(row(i), row(i) + cols); }
  Vec col_vec(std::size_t j) const {
    Vec v(rows);
    for (std::size_t i = 0; i < rows; ++i) v[i] = (*this)(i, j);
    return v;
  }
  void set_col(std::size_t j, const Vec& v) {
    for (std::size_t i = 0; i < rows; ++i) (*this)(i, j) = v[i];
  }
  bool is_zero() const {
    return std::all_of(data.begin(), data.end(), [](Elem e) { return e == 0; });
  }
  bool operator==(const Matrix& o) const { return rows == o.rows && cols == o.cols && data == o.data; }
  bool operator!=(const Matrix& o) const { return !(*this == o); }
};

inline bool is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](Elem e) { return e == 0; });
}

/// dst += c * src
inline void axpy(const PrimeField& f, Vec& dst, Elem c, const Vec& src) {
  if (c == 0) return;
  const std::uint64_t p = f.ell();
  for (std::size_t i = 0; i < dst.size(); ++i)
    if (src[i]) dst[i] = static_cast<Elem>((dst[i] + static_cast<std::uint64_t>(c) * src[i]) % p);
}

inline void scale(const PrimeField& f, Vec& v, Elem c) {
  for (auto& x : v) x = f.mul(x, c);
}

inline Vec add(const PrimeField& f, const Vec& a, const Vec& b) {
  Vec r(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = f.add(r[i], b[i]);
  return r;
}

inline Vec sub(const PrimeField& f, const Vec& a, const Vec& b) {
  Vec r(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = f.sub(r[i], b[i]);
  return r;
}

inline Matrix multiply(const PrimeField& f, const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) throw std::invalid_argument("matrix shape mismatch in multiply");
  Matrix c(a.rows, b.cols);
  const std::uint64_t p = f.ell();
  std::vector<std::uint64_t> acc(b.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    std::fill(acc.begin(), acc.end(), 0);
    for (std::size_t k = 0; k < a.cols; ++k) {
      const Elem x = a(i, k);
      if (!x) continue;
      const Elem* br = b.row(k);
      for (std::size_t j = 0; j < b.cols; ++j) acc[j] = (acc[j] + static_cast<std::uint64_t>(x) * br[j]) % p;
    }
    for (std::size_t j = 0; j < b.cols; ++j) c(i, j) = static_cast<Elem>(acc[j]);
  }
  return c;
}

inline Vec apply(const PrimeField& f, const Matrix& a, const Vec& x) {
  if (a.cols != x.size()) throw std::invalid_argument("matrix/vector shape mismatch");
  Vec y(a.rows, 0);
  const std::uint64_t p = f.ell();
  for (std::size_t i = 0; i < a.rows; ++i) {
    std::uint64_t s = 0;
    const Elem* r = a.row(i);
    for (std::size_t j = 0; j < a.cols; ++j)
      if (r[j] && x[j]) s = (s + static_cast<std::uint64_t>(r[j]) * x[j]) % p;
    y[i] = static_cast<Elem>(s);
  }
  return y;
}

inline Matrix transpose(const Matrix& a) {
  Matrix t(a.cols, a.rows);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) t(j, i) = a(i, j);
  return t;
}

inline Matrix add(const PrimeField& f, const Matrix& a, const Matrix& b) {
  Matrix c(a.rows, a.cols);
  for (std::size_t i = 0; i < a.data.size(); ++i) c.data[i] = f.add(a.data[i], b.data[i]);
  return c;
}

inline Matrix scaled(const PrimeField& f, const Matrix& a, Elem s) {
  Matrix c(a);
  for (auto& x : c.data) x = f.mul(x, s);
  return c;
}

/// Reduced row echelon form in place; returns pivot columns.
inline std::vector<std::size_t> rref(const PrimeField& f, Matrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  const std::uint64_t p = f.ell();
  for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
    std::size_t piv = r;
    while (piv < m.rows && m(piv, c) == 0) ++piv;
    if (piv == m.rows) continue;
    if (piv != r)
      for (std::size_t j = 0; j < m.cols; ++j) std::swap(m(piv, j), m(r, j));
    const Elem s = f.inv(m(r, c));
    for (std::size_t j = c; j < m.cols; ++j) m(r, j) = f.mul(m(r, j), s);
    for (std::size_t i = 0; i < m.rows; ++i) {
      if (i == r) continue;
      const Elem x = m(i, c);
      if (!x) continue;
      const Elem nx = static_cast<Elem>(p - x);
      Elem* ri = m.row(i);
      const Elem* rr = m.row(r);
      for (std::size_t j = c; j < m.cols; ++j)
        if (rr[j]) ri[j] = static_cast<Elem>((ri[j] + static_cast<std::uint64_t>(nx) * rr[j]) % p);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline std::size_t rank(const PrimeField& f, Matrix m) { return rref(f, m).size(); }

/// Basis (as rows) of { x : m x = 0 }.
inline Matrix nullspace(const PrimeField& f, Matrix m) {
  const auto pivots = rref(f, m);
  std::vector<bool> is_pivot(m.cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  Matrix basis(m.cols - pivots.size(), m.cols);
  std::size_t k = 0;
  for (std::size_t c = 0; c < m.cols; ++c) {
    if (is_pivot[c]) continue;
    basis(k, c) = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) basis(k, pivots[i]) = f.neg(m(i, c));
    ++k;
  }
  return basis;
}

/// Incrementally built echelon basis of a subspace of F^n. Each stored row is zero at the
/// pivots of all earlier rows. With tracking enabled, every stored row remembers its
/// expression in the independent vectors inserted so far, so coordinates can be recovered.
class EchelonBasis {
 public:
  EchelonBasis(const PrimeField& f, std::size_t n, bool track = false) : f_(f), n_(n), track_(track) {}

  std::size_t dim() const noexcept { return rows_.size(); }
  std::size_t ambient() const noexcept { return n_; }
  const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }

  /// Inserts v; returns true when it was independent of the current span.
  bool insert(Vec v) {
    Vec combo;
    if (track_) {
      combo.assign(rows_.size() + 1, 0);
      combo[rows_.size()] = 1;
    }
    reduce_impl(v, track_ ? &combo : nullptr, nullptr);
    std::size_t p = 0;
    while (p < n_ && v[p] == 0) ++p;
    if (p == n_) return false;
    const Elem s = f_.inv(v[p]);
    scale(f_, v, s);
    if (track_) scale(f_, combo, s);
    rows_.push_back(std::move(v));
    pivots_.push_back(p);
    if (track_) combos_.push_back(std::move(combo));
    return true;
  }

  Vec reduce(Vec v) const {
    reduce_impl(v, nullptr, nullptr);
    return v;
  }

  bool contains(const Vec& v) const { return is_zero(reduce(v)); }

  /// Coefficients of v in the independent inserted vectors (insertion order), if v lies in the span.
  std::optional<Vec> coordinates(Vec v) const {
    if (!track_) throw std::logic_error("EchelonBasis: coordinates requested without tracking");
    Vec coeff(rows_.size(), 0);
    reduce_impl(v, nullptr, &coeff);
    if (!is_zero(v)) return std::nullopt;
    Vec out(rows_.size(), 0);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (!coeff[i]) continue;
      const Vec& c = combos_[i];
      for (std::size_t j = 0; j < c.size(); ++j)
        if (c[j]) out[j] = f_.fma(out[j], coeff[i], c[j]);
    }
    return out;
  }

  const std::vector<Vec>& rows() const noexcept { return rows_; }

 private:
  // v -= sum c_i row_i; optionally records -c_i into combo (expressed via combos) or +c_i into coeff.
  void reduce_impl(Vec& v, Vec* combo, Vec* coeff) const {
    const std::uint64_t p = f_.ell();
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const Elem c = v[pivots_[i]];
      if (!c) continue;
      const Elem nc = static_cast<Elem>(p - c);
      const Vec& r = rows_[i];
      for (std::size_t j = 0; j < n_; ++j)
        if (r[j]) v[j] = static_cast<Elem>((v[j] + static_cast<std::uint64_t>(nc) * r[j]) % p);
      if (combo) {
        const Vec& cb = combos_[i];
        for (std::size_t j = 0; j < cb.size(); ++j)
          if (cb[j]) (*combo)[j] = static_cast<Elem>(((*combo)[j] + static_cast<std::uint64_t>(nc) * cb[j]) % p);
      }
      if (coeff) (*coeff)[i] = c;
    }
  }

  PrimeField f_;
  std::size_t n_;
  bool track_;
  std::vector<Vec> rows_;
  std::vector<std::size_t> pivots_;
  std::vector<Vec> combos_;
};

/// Solves A x = y for a fixed matrix A.
class LinearSolver {
 public:
  LinearSolver(const PrimeField& f, const Matrix& a) : f_(f), cols_(a.cols), basis_(f, a.rows, true) {
    for (std::size_t j = 0; j < a.cols; ++j)
      if (basis_.insert(a.col_vec(j))) used_.push_back(j);
  }

  std::size_t rank() const noexcept { return basis_.dim(); }

  std::optional<Vec> solve(const Vec& y) const {
    auto c = basis_.coordinates(y);
    if (!c) return std::nullopt;
    Vec x(cols_, 0);
    for (std::size_t i = 0; i < used_.size(); ++i) x[used_[i]] = (*c)[i];
    return x;
  }

 private:
  PrimeField f_;
  std::size_t cols_;
  EchelonBasis basis_;
  std::vector<std::size_t> used_;
};

/// Coordinates with respect to a fixed family of independent vectors.
class CoordinateSystem {
 public:
  CoordinateSystem(const PrimeField& f, std::size_t n) : basis_(f, n, true) {}
  CoordinateSystem(const PrimeField& f, std::size_t n, const std::vector<Vec>& vs) : basis_(f, n, true) {
    for (const auto& v : vs)
      if (!basis_.insert(v)) throw std::invalid_argument("CoordinateSystem: dependent basis");
  }
  std::size_t dim() const noexcept { return basis_.dim(); }
  std::optional<Vec> coordinates(const Vec& v) const { return basis_.coordinates(v); }

 private:
  EchelonBasis basis_;
};

/// Rank of a sparse matrix given as rows of (column, value) pairs, by sparse elimination.
inline std::size_t sparse_rank(const PrimeField& f, std::vector<std::vector<std::pair<std::uint32_t, Elem>>> rows) {
  using Row = std::vector<std::pair<std::uint32_t, Elem>>;
  std::map<std::uint32_t, Row> pivot_rows;  // keyed by leading column
  std::size_t r = 0;
  const std::uint64_t p = f.ell();
  for (auto& row : rows) {
    std::sort(row.begin(), row.end());
    Row cur;
    for (auto& e : row) {
      if (!cur.empty() && cur.back().first == e.first)
        cur.back().second = f.add(cur.back().second, e.second);
      else
        cur.push_back(e);
    }
    cur.erase(std::remove_if(cur.begin(), cur.end(), [](auto& e) { return e.second == 0; }), cur.end());
    while (!cur.empty()) {
      auto it = pivot_rows.find(cur.front().first);
      if (it == pivot_rows.end()) {
        const Elem s = f.inv(cur.front().second);
        for (auto& e : cur) e.second = f.mul(e.second, s);
        pivot_rows.emplace(cur.front().first, std::move(cur));
        ++r;
        break;
      }
      const Row& pr = it->second;
      const Elem c = static_cast<Elem>(p - cur.front().second);
      Row next;
      next.reserve(cur.size() + pr.size());
      std::size_t i = 0, j = 0;
      while (i < cur.size() || j < pr.size()) {
        if (j == pr.size() || (i < cur.size() && cur[i].first < pr[j].first)) {
          next.push_back(cur[i++]);
        } else if (i == cur.size() || pr[j].first < cur[i].first) {
          next.emplace_back(pr[j].first, f.mul(c, pr[j].second));
          ++j;
        } else {
          const Elem v = f.fma(cur[i].second, c, pr[j].second);
          if (v) next.emplace_back(cur[i].first, v);
          ++i;
          ++j;
        }
      }
      cur = std::move(next);
    }
  }
  return r;
}

}  // namespace qdp
