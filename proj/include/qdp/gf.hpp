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

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qarith.hpp"

namespace qdp {

/// The field F_q for a small prime power q, with full addition and multiplication tables.
/// Elements are 0..q-1, read as base-p digit vectors of polynomials modulo a fixed irreducible.
class SmallField {
 public:
  explicit SmallField(std::uint32_t q) : q_(q) {
    if (!is_prime_power(q) || q > 256) throw std::invalid_argument("unsupported field size " + std::to_string(q));
    p_ = 2;
    while (q % p_) ++p_;
    k_ = 0;
    for (std::uint32_t t = q; t > 1; t /= p_) ++k_;
    add_.assign(q * q, 0);
    mul_.assign(q * q, 0);
    for (std::uint32_t a = 0; a < q; ++a)
      for (std::uint32_t b = 0; b < q; ++b) add_[a * q + b] = digit_add(a, b);
    const std::vector<std::uint32_t> modulus = find_irreducible();
    for (std::uint32_t a = 0; a < q; ++a)
      for (std::uint32_t b = 0; b < q; ++b) mul_[a * q + b] = poly_mul(a, b, modulus);
    inv_.assign(q, 0);
    neg_.assign(q, 0);
    for (std::uint32_t a = 0; a < q; ++a)
      for (std::uint32_t b = 0; b < q; ++b) {
        if (mul_[a * q + b] == 1) inv_[a] = b;
        if (add_[a * q + b] == 0) neg_[a] = b;
      }
  }

  std::uint32_t size() const noexcept { return q_; }
  std::uint32_t characteristic() const noexcept { return p_; }
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const noexcept { return add_[a * q_ + b]; }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const noexcept { return add_[a * q_ + neg_[b]]; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const noexcept { return mul_[a * q_ + b]; }
  std::uint32_t neg(std::uint32_t a) const noexcept { return neg_[a]; }
  std::uint32_t inv(std::uint32_t a) const {
    if (a == 0) throw NotInvertible("0 in F_" + std::to_string(q_));
    return inv_[a];
  }

 private:
  std::uint32_t digit_add(std::uint32_t a, std::uint32_t b) const {
    std::uint32_t r = 0, base = 1;
    for (std::uint32_t i = 0; i < k_; ++i) {
      r += ((a % p_ + b % p_) % p_) * base;
      a /= p_;
      b /= p_;
      base *= p_;
    }
    return r;
  }

  std::vector<std::uint32_t> digits(std::uint32_t a) const {
    std::vector<std::uint32_t> d(k_);
    for (std::uint32_t i = 0; i < k_; ++i, a /= p_) d[i] = a % p_;
    return d;
  }

  // Monic degree-k polynomial over F_p with no root-free factorisation: brute force over candidates.
  std::vector<std::uint32_t> find_irreducible() const {
    if (k_ == 1) return {0, 1};
    std::uint32_t total = 1;
    for (std::uint32_t i = 0; i < k_; ++i) total *= p_;
    for (std::uint32_t c = 0; c < total; ++c) {
      std::vector<std::uint32_t> f = digits(c);
      f.push_back(1);
      if (is_irreducible(f)) return f;
    }
    throw std::logic_error("no irreducible polynomial found");
  }

  static std::vector<std::uint32_t> poly_mod(std::vector<std::uint32_t> a, const std::vector<std::uint32_t>& m,
                                             std::uint32_t p) {
    const std::size_t dm = m.size() - 1;
    for (std::size_t i = a.size(); i-- > dm;) {
      const std::uint32_t c = a[i];
      if (!c) continue;
      for (std::size_t j = 0; j <= dm; ++j) a[i - dm + j] = (a[i - dm + j] + p * p - c * m[j] % p) % p;
    }
    a.resize(dm);
    return a;
  }

  bool is_irreducible(const std::vector<std::uint32_t>& f) const {
    // Degree <= 8: test every monic divisor of degree 1..deg/2.
    const std::size_t n = f.size() - 1;
    for (std::size_t d = 1; d <= n / 2; ++d) {
      std::uint32_t total = 1;
      for (std::size_t i = 0; i < d; ++i) total *= p_;
      for (std::uint32_t c = 0; c < total; ++c) {
        std::vector<std::uint32_t> g(d + 1);
        std::uint32_t t = c;
        for (std::size_t i = 0; i < d; ++i, t /= p_) g[i] = t % p_;
        g[d] = 1;
        std::vector<std::uint32_t> r = poly_mod(f, g, p_);
        bool zero = true;
        for (auto x : r) zero = zero && x == 0;
        if (zero) return false;
      }
    }
    return true;
  }

  std::uint32_t poly_mul(std::uint32_t a, std::uint32_t b, const std::vector<std::uint32_t>& m) const {
    const auto da = digits(a), db = digits(b);
    std::vector<std::uint32_t> prod(2 * k_, 0);
    for (std::uint32_t i = 0; i < k_; ++i)
      for (std::uint32_t j = 0; j < k_; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
    const auto r = poly_mod(prod, m, p_);
    std::uint32_t v = 0, base = 1;
    for (std::uint32_t i = 0; i < k_; ++i, base *= p_) v += r[i] * base;
    return v;
  }

  std::uint32_t q_, p_, k_;
  std::vector<std::uint32_t> add_, mul_, inv_, neg_;
};

}  // namespace qdp
