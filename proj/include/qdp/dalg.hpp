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
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "qarith.hpp"

namespace qdp {

/// A finitely supported element sum_n c_n x^[n] of the q-divided power algebra over F_ell.
class DElement {
 public:
  explicit DElement(QContext ctx) : ctx_(std::move(ctx)) {}
  DElement(QContext ctx, std::uint64_t degree, Elem coeff = 1) : ctx_(std::move(ctx)) { add_term(degree, coeff); }

  static DElement from_terms(const QContext& ctx, const std::vector<std::pair<std::uint64_t, std::int64_t>>& terms) {
    DElement e(ctx);
    for (auto [d, c] : terms) e.add_term(d, ctx.field().from_int(c));
    return e;
  }

  const QContext& context() const noexcept { return ctx_; }
  const std::map<std::uint64_t, Elem>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  Elem coeff(std::uint64_t degree) const {
    auto it = terms_.find(degree);
    return it == terms_.end() ? 0 : it->second;
  }

  /// Largest degree present; 0 for the zero element.
  std::uint64_t top_degree() const noexcept { return terms_.empty() ? 0 : terms_.rbegin()->first; }

  bool is_homogeneous() const noexcept { return terms_.size() <= 1; }

  void add_term(std::uint64_t degree, Elem c) {
    c = ctx_.field().from_uint(c);
    if (!c) return;
    auto [it, fresh] = terms_.emplace(degree, c);
    if (!fresh) {
      it->second = ctx_.field().add(it->second, c);
      if (!it->second) terms_.erase(it);
    }
  }

  DElement& operator+=(const DElement& o) {
    check(o);
    for (auto [d, c] : o.terms_) add_term(d, c);
    return *this;
  }
  DElement& operator-=(const DElement& o) {
    check(o);
    for (auto [d, c] : o.terms_) add_term(d, ctx_.field().neg(c));
    return *this;
  }
  DElement scaled(Elem s) const {
    DElement r(ctx_);
    for (auto [d, c] : terms_) r.add_term(d, ctx_.field().mul(c, s));
    return r;
  }

  friend DElement operator+(DElement a, const DElement& b) { return a += b; }
  friend DElement operator-(DElement a, const DElement& b) { return a -= b; }
  bool operator==(const DElement& o) const { return ctx_ == o.ctx_ && terms_ == o.terms_; }
  bool operator!=(const DElement& o) const { return !(*this == o); }

  void check(const DElement& o) const {
    if (ctx_ != o.ctx_) throw ContextMismatch("elements live over different (ell, q)");
  }

 private:
  QContext ctx_;
  std::map<std::uint64_t, Elem> terms_;
};

/// x^[n] x^[m] = [n+m choose n]_q x^[n+m], extended bilinearly.
inline DElement d_mul(const DElement& a, const DElement& b) {
  a.check(b);
  const QContext& ctx = a.context();
  const PrimeField& f = ctx.field();
  DElement r(ctx);
  for (auto [n, cn] : a.terms())
    for (auto [m, cm] : b.terms()) r.add_term(n + m, f.mul(f.mul(cn, cm), ctx.q_binomial(n + m, n)));
  return r;
}

/// d(x^[n]) = x^[n-1], d(x^[0]) = 0, applied `iterations` times.
inline DElement d_derive(const DElement& a, std::uint64_t iterations = 1) {
  DElement r(a.context());
  for (auto [n, c] : a.terms())
    if (n >= iterations) r.add_term(n - iterations, c);
  return r;
}

/// Pairs (d^n(a)_0, n) with nonzero constant term; sum c_n x^[n] reconstructs a.
inline std::vector<std::pair<Elem, std::uint64_t>> taylor_expand(const DElement& a) {
  std::vector<std::pair<Elem, std::uint64_t>> out;
  if (a.is_zero()) return out;
  for (std::uint64_t n = 0; n <= a.top_degree(); ++n) {
    const Elem c0 = d_derive(a, n).coeff(0);
    if (c0) out.emplace_back(c0, n);
  }
  return out;
}

inline DElement taylor_reconstruct(const QContext& ctx, const std::vector<std::pair<Elem, std::uint64_t>>& expansion) {
  DElement r(ctx);
  for (auto [c, n] : expansion) r.add_term(n, c);
  return r;
}

/// Monomial prod_i y_i^{c_i} in the generators y_i = x^[b_i].
struct YMonomial {
  std::map<std::size_t, std::uint64_t> exponents;  // only nonzero exponents stored
  bool operator==(const YMonomial& o) const { return exponents == o.exponents; }
  bool operator<(const YMonomial& o) const { return exponents < o.exponents; }
};

/// Mixed-radix digits of n with place values b_0, b_1, ... (digit i is below b_{i+1}/b_i).
inline YMonomial y_digits(std::uint64_t n, const QContext& ctx) {
  std::size_t top = 0;
  while (b_value(top + 1, ctx) <= n) ++top;
  YMonomial mono;
  for (std::size_t i = top + 1; i-- > 0;) {
    const std::uint64_t b = b_value(i, ctx);
    const std::uint64_t c = n / b;
    n %= b;
    if (c) mono.exponents[i] = c;
  }
  return mono;
}

/// The element prod_i (x^[b_i])^{c_i} of the algebra.
inline DElement y_evaluate(const YMonomial& mono, const QContext& ctx) {
  DElement r(ctx, 0, 1);
  for (auto [i, c] : mono.exponents) {
    const DElement y(ctx, b_value(i, ctx), 1);
    for (std::uint64_t k = 0; k < c; ++k) r = d_mul(r, y);
  }
  return r;
}

struct YTerm {
  Elem coeff;
  YMonomial monomial;
};

/// Rewrites a in the y-presentation: x^[n] = u_n^{-1} prod y_i^{c_i} where
/// prod (x^[b_i])^{c_i} = u_n x^[n]. The unit u_n is computed by explicit multiplication.
inline std::vector<YTerm> to_y_basis(const DElement& a) {
  const QContext& ctx = a.context();
  const PrimeField& f = ctx.field();
  std::vector<YTerm> out;
  for (auto [n, c] : a.terms()) {
    YMonomial mono = y_digits(n, ctx);
    const DElement prod = y_evaluate(mono, ctx);
    const Elem unit = prod.coeff(n);
    if (!unit || prod.terms().size() != 1)
      throw std::logic_error("y-monomial of degree " + std::to_string(n) + " does not map to a unit multiple of x^[n]");
    out.push_back({f.mul(c, f.inv(unit)), std::move(mono)});
  }
  return out;
}

/// The unit u_n with prod (x^[b_i])^{c_i} = u_n x^[n].
inline Elem y_unit(std::uint64_t n, const QContext& ctx) { return y_evaluate(y_digits(n, ctx), ctx).coeff(n); }

/// Support predicate of the subring D_X generated by y_i, i in X: every term's y-digits lie in X.
inline bool in_subring(const DElement& a, const std::set<std::size_t>& X) {
  for (const auto& [n, c] : a.terms()) {
    (void)c;
    for (auto [i, e] : y_digits(n, a.context()).exponents) {
      (void)e;
      if (!X.count(i)) return false;
    }
  }
  return true;
}

/// Membership in D_{>=r}: every degree is a multiple of b_r.
inline bool in_subring_from(const DElement& a, std::size_t r) {
  const std::uint64_t b = b_value(r, a.context());
  for (const auto& [n, c] : a.terms()) {
    (void)c;
    if (n % b) return false;
  }
  return true;
}

}  // namespace qdp
