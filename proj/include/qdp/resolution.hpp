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

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "field.hpp"
#include "group.hpp"
#include "linalg.hpp"

namespace qdp {

/// Free F_ell[G]-complex. Degree t has rank(t) generators; an element of degree t is a vector
/// with coordinate i * |G| + g for the term g e_i. The action is h (g e_i) = (hg) e_i.
class FreeComplex {
 public:
  FreeComplex(GroupPtr G, PrimeField f) : G_(std::move(G)), f_(f) {
    const std::size_t n = G_->order();
    table_.resize(n * n);
    for (Index h = 0; h < n; ++h)
      for (Index g = 0; g < n; ++g) table_[h * n + g] = G_->mul(h, g);
  }
  virtual ~FreeComplex() = default;

  const FiniteGroup& group() const noexcept { return *G_; }
  const GroupPtr& group_ptr() const noexcept { return G_; }
  const PrimeField& field() const noexcept { return f_; }
  std::size_t order() const noexcept { return G_->order(); }
  Index left_mul(Index h, Index g) const { return table_[h * order() + g]; }

  /// Number of degrees currently available (degrees 0 .. available()-1).
  virtual std::size_t available() const { return ranks_.size(); }
  virtual void ensure(std::size_t t) const {
    if (t >= ranks_.size()) throw IndexOutOfRange("complex is only built to degree " + std::to_string(ranks_.size() - 1));
  }
  std::size_t rank(std::size_t t) const {
    ensure(t);
    return ranks_[t];
  }
  std::size_t width(std::size_t t) const { return rank(t) * order(); }
  /// Boundary of the generator e_i of degree t >= 1, as an element of degree t-1.
  const Vec& boundary(std::size_t t, std::size_t i) const {
    ensure(t);
    return bd_[t][i];
  }

  Vec act(Index h, const Vec& v) const {
    Vec out(v.size(), 0);
    const std::size_t n = order();
    for (std::size_t c = 0; c < v.size(); ++c)
      if (v[c]) out[(c / n) * n + left_mul(h, static_cast<Index>(c % n))] = v[c];
    return out;
  }

  /// out += c * h * v
  void add_translate(Vec& out, Elem c, Index h, const Vec& v) const {
    if (!c) return;
    const std::size_t n = order();
    for (std::size_t k = 0; k < v.size(); ++k)
      if (v[k]) {
        const std::size_t j = (k / n) * n + left_mul(h, static_cast<Index>(k % n));
        out[j] = f_.fma(out[j], c, v[k]);
      }
  }

  /// Boundary of an arbitrary element of degree t >= 1.
  Vec apply_boundary(std::size_t t, const Vec& x) const {
    Vec out(width(t - 1), 0);
    const std::size_t n = order();
    for (std::size_t k = 0; k < x.size(); ++k)
      if (x[k]) add_translate(out, x[k], static_cast<Index>(k % n), boundary(t, k / n));
    return out;
  }

  Elem augmentation(const Vec& x) const {
    Elem s = 0;
    const std::size_t n = order();
    for (std::size_t k = 0; k < n && k < x.size(); ++k) s = f_.add(s, x[k]);
    return s;
  }

  /// Some x of degree t >= 1 with boundary y, if one exists.
  std::optional<Vec> lift(std::size_t t, const Vec& y) const {
    ensure(t);
    if (solvers_.size() <= t) solvers_.resize(t + 1);
    if (!solvers_[t]) {
      Matrix A(width(t - 1), width(t));
      const std::size_t n = order();
      for (std::size_t i = 0; i < rank(t); ++i)
        for (Index g = 0; g < n; ++g) {
          Vec col(width(t - 1), 0);
          add_translate(col, 1, g, boundary(t, i));
          A.set_col(i * n + g, col);
        }
      solvers_[t] = std::make_unique<LinearSolver>(f_, A);
    }
    return solvers_[t]->solve(y);
  }

  /// Element g e_i of degree t.
  Vec basis_element(std::size_t t, std::size_t i, Index g) const {
    Vec v(width(t), 0);
    v[i * order() + g] = 1;
    return v;
  }

 protected:
  GroupPtr G_;
  PrimeField f_;
  std::vector<Index> table_;
  mutable std::vector<std::size_t> ranks_;
  mutable std::vector<std::vector<Vec>> bd_;  // bd_[0] is empty
  mutable std::vector<std::unique_ptr<LinearSolver>> solvers_;
};

/// Minimal free resolution of the trivial module F_ell over F_ell[P] for an ell-group P,
/// extended lazily one degree at a time.
class MinimalResolution : public FreeComplex {
 public:
  MinimalResolution(GroupPtr P, PrimeField f) : FreeComplex(std::move(P), f) {
    std::size_t n = order();
    while (n % f.ell() == 0) n /= f.ell();
    if (n != 1) throw HypothesisViolated(group().label() + " is not an " + std::to_string(f.ell()) + "-group");
    ranks_.push_back(1);
    bd_.emplace_back();
  }

  std::size_t available() const override { return ranks_.size(); }

  void ensure(std::size_t t) const override {
    while (ranks_.size() <= t) extend();
  }

 private:
  void extend() const {
    const std::size_t t = ranks_.size() - 1;  // build degree t+1 from the kernel in degree t
    const std::size_t n = order(), w = width(t);
    // kernel of the boundary (or augmentation) out of degree t
    Matrix D(t == 0 ? 1 : width(t - 1), w);
    if (t == 0) {
      for (std::size_t c = 0; c < w; ++c) D(0, c) = 1;
    } else {
      for (std::size_t i = 0; i < ranks_[t]; ++i)
        for (Index g = 0; g < n; ++g) {
          Vec col(width(t - 1), 0);
          add_translate(col, 1, g, bd_[t][i]);
          D.set_col(i * n + g, col);
        }
    }
    const Matrix K = nullspace(f_, D);
    // generators: a complement of I*K in K, where I*K is spanned by (x - 1) k over generators x
    EchelonBasis span(f_, w);
    for (Index x : group().generators())
      for (std::size_t r = 0; r < K.rows; ++r) {
        Vec k = K.row_vec(r);
        Vec xk = act(x, k);
        span.insert(sub(f_, xk, k));
      }
    std::vector<Vec> gens;
    for (std::size_t r = 0; r < K.rows; ++r) {
      Vec k = K.row_vec(r);
      if (span.insert(k)) gens.push_back(std::move(k));
    }
    ranks_.push_back(gens.size());
    bd_.push_back(std::move(gens));
  }
};

/// A free complex given by explicit generators and boundaries.
class ExplicitComplex : public FreeComplex {
 public:
  ExplicitComplex(GroupPtr G, PrimeField f, std::vector<std::size_t> ranks, std::vector<std::vector<Vec>> bd)
      : FreeComplex(std::move(G), f) {
    ranks_ = std::move(ranks);
    bd_ = std::move(bd);
    bd_.resize(ranks_.size());
  }
};

/// Source of a chain map: a free complex over a group Q, with boundaries listed as terms.
struct SourceTerm {
  Index g;
  std::size_t basis;
  Elem coeff;
};

struct FreeSource {
  GroupPtr group;
  std::vector<std::size_t> ranks;
  std::vector<std::vector<std::vector<SourceTerm>>> boundary;  // boundary[t][i], t >= 1

  std::size_t degrees() const { return ranks.size(); }
};

inline std::vector<SourceTerm> to_terms(const FreeComplex& C, const Vec& v) {
  std::vector<SourceTerm> out;
  const std::size_t n = C.order();
  for (std::size_t k = 0; k < v.size(); ++k)
    if (v[k]) out.push_back({static_cast<Index>(k % n), k / n, v[k]});
  return out;
}

/// A free complex viewed as a chain-map source, through degree t.
inline FreeSource as_source(const FreeComplex& C, std::size_t t) {
  FreeSource S;
  S.group = C.group_ptr();
  C.ensure(t);
  for (std::size_t d = 0; d <= t; ++d) {
    S.ranks.push_back(C.rank(d));
    std::vector<std::vector<SourceTerm>> b;
    if (d > 0)
      for (std::size_t i = 0; i < C.rank(d); ++i) b.push_back(to_terms(C, C.boundary(d, i)));
    S.boundary.push_back(std::move(b));
  }
  return S;
}

/// A free P-complex restricted to a subgroup R: generators tau e_i for tau in a right
/// transversal of R in P, numbered coset * rank + i.
inline FreeSource restricted_source(const FreeComplex& C, GroupPtr R, const RightCosets& rc, std::size_t t) {
  FreeSource S;
  S.group = R;
  const auto& P = C.group();
  const std::size_t n = C.order(), k = rc.reps.size();
  C.ensure(t);
  for (std::size_t d = 0; d <= t; ++d) {
    const std::size_t rd = C.rank(d);
    S.ranks.push_back(k * rd);
    std::vector<std::vector<SourceTerm>> b;
    if (d > 0) {
      const std::size_t rp = C.rank(d - 1);
      for (std::size_t c = 0; c < k; ++c)
        for (std::size_t i = 0; i < rd; ++i) {
          std::vector<SourceTerm> terms;
          const Vec& bd = C.boundary(d, i);
          for (std::size_t x = 0; x < bd.size(); ++x) {
            if (!bd[x]) continue;
            const Index g = static_cast<Index>(x % n);
            const Index tg = C.left_mul(rc.reps[c], g);
            const Index r = R->index_of(P.code(rc.factor[tg]));
            terms.push_back({r, rc.coset[tg] * rp + x / n, bd[x]});
          }
          b.push_back(std::move(terms));
        }
    }
    S.boundary.push_back(std::move(b));
  }
  return S;
}

/// Tensor product of two free complexes over the product group, through degree t.
/// Generators of degree d are pairs (a, i, j) with i in degree a and j in degree d - a.
class TensorComplex : public FreeComplex {
 public:
  struct Gen {
    std::size_t a, i, j;
  };

  TensorComplex(GroupPtr product, const FreeComplex& A, const FreeComplex& B, std::size_t t)
      : FreeComplex(std::move(product), A.field()) {
    auto pamb = std::dynamic_pointer_cast<const ProductAmbient>(group().ambient());
    if (!pamb) throw std::invalid_argument("tensor complex needs a product group");
    auto pidx = [&](Index x, Index y) { return group().index_of(pamb->pack(A.group().code(x), B.group().code(y))); };
    gens_.resize(t + 1);
    for (std::size_t d = 0; d <= t; ++d) {
      for (std::size_t a = 0; a <= d; ++a) {
        A.ensure(a);
        B.ensure(d - a);
        for (std::size_t i = 0; i < A.rank(a); ++i)
          for (std::size_t j = 0; j < B.rank(d - a); ++j) gens_[d].push_back({a, i, j});
      }
      ranks_.push_back(gens_[d].size());
    }
    auto find_gen = [&](std::size_t d, std::size_t a, std::size_t i, std::size_t j) {
      for (std::size_t k = 0; k < gens_[d].size(); ++k)
        if (gens_[d][k].a == a && gens_[d][k].i == i && gens_[d][k].j == j) return k;
      throw std::logic_error("tensor generator missing");
    };
    const Index ea = A.group().identity(), eb = B.group().identity();
    const std::size_t n = order();
    bd_.assign(t + 1, {});
    for (std::size_t d = 1; d <= t; ++d)
      for (const Gen& gen : gens_[d]) {
        Vec v(ranks_[d - 1] * n, 0);
        const std::size_t b = d - gen.a;
        if (gen.a > 0) {
          const Vec& bd = A.boundary(gen.a, gen.i);
          for (std::size_t x = 0; x < bd.size(); ++x)
            if (bd[x]) {
              const std::size_t k = find_gen(d - 1, gen.a - 1, x / A.order(), gen.j);
              const Index g = pidx(static_cast<Index>(x % A.order()), eb);
              v[k * n + g] = f_.add(v[k * n + g], bd[x]);
            }
        }
        if (b > 0) {
          const Elem sign = (gen.a % 2) ? f_.neg(1) : 1;
          const Vec& bd = B.boundary(b, gen.j);
          for (std::size_t x = 0; x < bd.size(); ++x)
            if (bd[x]) {
              const std::size_t k = find_gen(d - 1, gen.a, gen.i, x / B.order());
              const Index g = pidx(ea, static_cast<Index>(x % B.order()));
              v[k * n + g] = f_.fma(v[k * n + g], sign, bd[x]);
            }
        }
        bd_[d].push_back(std::move(v));
      }
  }

  const std::vector<Gen>& generators(std::size_t d) const { return gens_.at(d); }

 private:
  std::vector<std::vector<Gen>> gens_;
};

/// Chain map from a source complex over Q to a target complex over P, covering a
/// homomorphism phi: Q -> P and the identity on F_ell. value(t, b) lies in degree t of the target.
class ChainMap {
 public:
  ChainMap(FreeSource src, std::shared_ptr<const FreeComplex> target, std::vector<Index> phi)
      : src_(std::move(src)), keep_(std::move(target)), target_(*keep_), phi_(std::move(phi)) {
    if (phi_.size() != src_.group->order()) throw std::invalid_argument("chain map: homomorphism has the wrong size");
    vals_.emplace_back();
    for (std::size_t b = 0; b < src_.ranks[0]; ++b)
      vals_[0].push_back(target_.basis_element(0, 0, target_.group().identity()));
  }

  std::size_t degrees() const { return src_.degrees(); }

  const Vec& value(std::size_t t, std::size_t b) const {
    while (vals_.size() <= t) extend();
    return vals_[t][b];
  }

 private:
  void extend() const {
    const std::size_t t = vals_.size();
    if (t >= src_.degrees()) throw IndexOutOfRange("chain map source ends below degree " + std::to_string(t));
    target_.ensure(t);
    std::vector<Vec> out;
    for (std::size_t b = 0; b < src_.ranks[t]; ++b) {
      Vec y(target_.width(t - 1), 0);
      for (const auto& term : src_.boundary[t][b]) target_.add_translate(y, term.coeff, phi_[term.g], vals_[t - 1][term.basis]);
      auto x = target_.lift(t, y);
      if (!x) throw std::logic_error("chain map: boundary is not in the image (target is not acyclic)");
      out.push_back(std::move(*x));
    }
    vals_.push_back(std::move(out));
  }

  FreeSource src_;
  std::shared_ptr<const FreeComplex> keep_;
  const FreeComplex& target_;
  std::vector<Index> phi_;
  mutable std::vector<std::vector<Vec>> vals_;
};

}  // namespace qdp
