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

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <limits>
#include <memory>
#include <mutex>
#include <numeric>
#include <vector>

#include "field.hpp"

namespace qdp {

using BigInt = boost::multiprecision::cpp_int;

inline bool is_prime_power(std::uint64_t n) {
  if (n < 2) return false;
  std::uint64_t p = 2;
  while (n % p) ++p;
  while (n % p == 0) n /= p;
  return n == 1;
}

/// Multiplicative order of q_int modulo ell.
inline std::uint64_t order_of_q(std::uint32_t ell, std::uint64_t q_int) {
  if (q_int % ell == 0)
    throw NotInvertible("q = " + std::to_string(q_int) + " is zero in F_" + std::to_string(ell));
  PrimeField f(ell);
  Elem q = f.from_uint(q_int);
  Elem x = q;
  std::uint64_t w = 1;
  while (x != 1) {
    x = f.mul(x, q);
    ++w;
  }
  return w;
}

/// Lower-triangular cache of Gaussian binomials evaluated in F_ell.
class QBinomialCache {
 public:
  QBinomialCache(const PrimeField& f, Elem q) : field_(f), q_(q) {}

  Elem get(std::uint64_t n, std::uint64_t m) {
    if (m > n) return 0;
    std::lock_guard<std::mutex> lock(mutex_);
    extend(n);
    return rows_[n][m];
  }

 private:
  // Rows are built by [n,m] = q^m [n-1,m] + [n-1,m-1].
  void extend(std::uint64_t n) {
    if (n > (1u << 16)) throw std::length_error("q-binomial row too large");
    while (rows_.size() <= n) {
      const std::size_t k = rows_.size();
      std::vector<Elem> row(k + 1);
      row[0] = 1;
      row[k] = 1;
      Elem qm = 1;
      for (std::size_t m = 1; m < k; ++m) {
        qm = field_.mul(qm, q_);
        row[m] = field_.fma(rows_[k - 1][m - 1], qm, rows_[k - 1][m]);
      }
      rows_.push_back(std::move(row));
    }
  }

  PrimeField field_;
  Elem q_;
  std::mutex mutex_;
  std::vector<std::vector<Elem>> rows_;
};

/// The prime field together with the image of the prime power q and its order w.
/// Copies share one q-binomial cache.
class QContext {
 public:
  QContext(std::uint32_t ell, std::uint64_t q_int)
      : field_(ell), q_int_(q_int), q_(field_.from_uint(q_int)), w_(order_of_q(ell, q_int)),
        cache_(std::make_shared<QBinomialCache>(field_, q_)) {}

  const PrimeField& field() const noexcept { return field_; }
  std::uint32_t ell() const noexcept { return field_.ell(); }
  std::uint64_t q_int() const noexcept { return q_int_; }
  Elem q() const noexcept { return q_; }
  std::uint64_t w() const noexcept { return w_; }

  Elem q_binomial(std::uint64_t n, std::uint64_t m) const { return cache_->get(n, m); }
  Elem q_pow(std::uint64_t e) const noexcept { return field_.pow(q_, e); }

  bool operator==(const QContext& o) const noexcept { return field_ == o.field_ && q_int_ == o.q_int_; }
  bool operator!=(const QContext& o) const noexcept { return !(*this == o); }

 private:
  PrimeField field_;
  std::uint64_t q_int_;
  Elem q_;
  std::uint64_t w_;
  std::shared_ptr<QBinomialCache> cache_;
};

/// Gaussian binomial [n choose m] at q, in F_ell. Zero when m > n.
inline Elem q_binomial(std::uint64_t n, std::uint64_t m, const QContext& ctx) { return ctx.q_binomial(n, m); }

/// [n]_q = 1 + q + ... + q^(n-1) in F_ell.
inline Elem q_integer(std::uint64_t n, const QContext& ctx) { return ctx.q_binomial(n, 1); }

namespace detail {
inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) throw std::overflow_error("b-sequence overflow");
  return a * b;
}
}  // namespace detail

/// b_0 = 1; b_i = w ell^(i-1) if w > 1, else ell^i.
inline std::uint64_t b_value(std::size_t i, const QContext& ctx) {
  if (i == 0) return 1;
  std::uint64_t v = ctx.w() > 1 ? ctx.w() : ctx.ell();
  for (std::size_t k = 1; k < i; ++k) v = detail::checked_mul(v, ctx.ell());
  return v;
}

/// The b-sequence of a context, extended on demand.
class BSequence {
 public:
  explicit BSequence(QContext ctx) : ctx_(std::move(ctx)) {}
  std::uint64_t operator[](std::size_t i) const { return b_value(i, ctx_); }
  const QContext& context() const noexcept { return ctx_; }

 private:
  QContext ctx_;
};

/// Smallest r >= 0 with n <= b_r.
inline std::size_t fl(std::int64_t n, const QContext& ctx) {
  if (n <= 1) return 0;
  std::size_t r = 0;
  while (static_cast<std::uint64_t>(n) > b_value(r, ctx)) ++r;
  return r;
}

/// Integer Gaussian binomial by the Pascal recurrence (arbitrary precision).
inline BigInt q_binomial_integer(std::uint64_t n, std::uint64_t m, std::uint64_t q_int) {
  if (m > n) return 0;
  std::vector<BigInt> row{1};
  for (std::uint64_t k = 1; k <= n; ++k) {
    std::vector<BigInt> next(k + 1);
    next[0] = 1;
    next[k] = 1;
    BigInt qm = 1;
    for (std::uint64_t j = 1; j < k; ++j) {
      qm *= q_int;
      next[j] = qm * row[j] + row[j - 1];
    }
    row = std::move(next);
  }
  return row[m];
}

inline Elem reduce(const BigInt& v, const PrimeField& f) {
  BigInt r = v % f.ell();
  if (r < 0) r += f.ell();
  return static_cast<Elem>(r.convert_to<std::uint64_t>());
}

}  // namespace qdp
