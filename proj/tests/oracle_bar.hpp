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

// Bar-resolution oracle for small groups. Every group is a subgroup K of one finite group S,
// and H^t(K; F_ell) is computed from K-equivariant homogeneous cochains on S^{t+1}
// (trivial coefficients). Independent of the resolution machinery in the library.

#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "qdp/group.hpp"
#include "qdp/linalg.hpp"

namespace oracle {

using qdp::Code;
using qdp::Elem;
using qdp::Index;
using qdp::Matrix;
using qdp::PrimeField;
using qdp::Vec;

class BarModel {
 public:
  struct Sub {
    std::vector<Index> elems;
    std::vector<char> in;
    std::vector<Index> reps;          // right coset representatives K tau
    std::vector<std::size_t> coset;   // s -> coset number
    std::vector<Index> factor;        // s -> k with s = k * tau
  };

  BarModel(std::shared_ptr<const qdp::FiniteGroup> S, std::uint32_t ell) : S_(std::move(S)), f_(ell) {
    n_ = S_->order();
    mul_.resize(n_ * n_);
    inv_.resize(n_);
    for (Index a = 0; a < n_; ++a) {
      inv_[a] = S_->inv(a);
      for (Index b = 0; b < n_; ++b) mul_[a * n_ + b] = S_->mul(a, b);
    }
  }

  const PrimeField& field() const { return f_; }
  std::size_t order() const { return n_; }
  Index mul(Index a, Index b) const { return mul_[a * n_ + b]; }
  Index inv(Index a) const { return inv_[a]; }
  Index index(Code c) const { return S_->index_of(c); }

  Sub subgroup(const std::vector<Code>& codes) const {
    Sub K;
    K.in.assign(n_, 0);
    for (Code c : codes) {
      K.elems.push_back(index(c));
      K.in[index(c)] = 1;
    }
    K.coset.assign(n_, static_cast<std::size_t>(-1));
    K.factor.assign(n_, 0);
    for (Index s = 0; s < n_; ++s) {
      if (K.coset[s] != static_cast<std::size_t>(-1)) continue;
      const std::size_t c = K.reps.size();
      K.reps.push_back(s);
      for (Index k : K.elems) {
        K.coset[mul(k, s)] = c;
        K.factor[mul(k, s)] = k;
      }
    }
    return K;
  }

  std::size_t power(std::size_t t) const {
    std::size_t p = 1;
    for (std::size_t i = 0; i < t; ++i) p *= n_;
    return p;
  }

  /// Number of K-orbits on S^{t+1}.
  std::size_t dim(const Sub& K, std::size_t t) const { return K.reps.size() * power(t); }

  /// Orbit representative of a tuple: index of (tau, k^{-1} x_1, ..., k^{-1} x_t).
  std::size_t orbit(const Sub& K, const std::vector<Index>& x) const {
    const Index k = K.factor[x[0]];
    const Index ki = inv(k);
    std::size_t idx = 0;
    for (std::size_t i = x.size(); i-- > 1;) idx = idx * n_ + mul(ki, x[i]);
    return K.coset[x[0]] * power(x.size() - 1) + idx;
  }

  std::vector<Index> tuple(const Sub& K, std::size_t t, std::size_t r) const {
    std::vector<Index> x(t + 1);
    std::size_t rest = r % power(t);
    x[0] = K.reps[r / power(t)];
    for (std::size_t i = 1; i <= t; ++i) {
      x[i] = static_cast<Index>(rest % n_);
      rest /= n_;
    }
    return x;
  }

  Elem value(const Sub& K, const Vec& F, const std::vector<Index>& x) const { return F[orbit(K, x)]; }

  Vec coboundary(const Sub& K, std::size_t t, const Vec& F) const {
    Vec out(dim(K, t + 1), 0);
    for (std::size_t r = 0; r < out.size(); ++r) {
      const auto x = tuple(K, t + 1, r);
      Elem s = 0;
      for (std::size_t i = 0; i <= t + 1; ++i) {
        std::vector<Index> y;
        for (std::size_t j = 0; j <= t + 1; ++j)
          if (j != i) y.push_back(x[j]);
        const Elem v = value(K, F, y);
        s = (i % 2) ? f_.sub(s, v) : f_.add(s, v);
      }
      out[r] = s;
    }
    return out;
  }

  struct Cohomology {
    std::vector<Vec> basis;  // cocycles
    std::unique_ptr<qdp::EchelonBasis> span;
    std::size_t boundary_dim = 0;

    Vec coords(const Vec& z) const {
      auto c = span->coordinates(z);
      if (!c) throw std::logic_error("oracle: not a cocycle");
      return Vec(c->begin() + static_cast<std::ptrdiff_t>(boundary_dim), c->end());
    }
  };

  Matrix coboundary_matrix(const Sub& K, std::size_t t) const {
    Matrix D(dim(K, t + 1), dim(K, t));
    for (std::size_t c = 0; c < dim(K, t); ++c) {
      Vec e(dim(K, t), 0);
      e[c] = 1;
      D.set_col(c, coboundary(K, t, e));
    }
    return D;
  }

  std::shared_ptr<Cohomology> cohomology(const Sub& K, std::size_t t) const {
    auto H = std::make_shared<Cohomology>();
    H->span = std::make_unique<qdp::EchelonBasis>(f_, dim(K, t), true);
    if (t > 0) {
      const Matrix B = coboundary_matrix(K, t - 1);
      for (std::size_t c = 0; c < B.cols; ++c)
        if (H->span->insert(B.col_vec(c))) ++H->boundary_dim;
    }
    const Matrix Z = qdp::nullspace(f_, coboundary_matrix(K, t));
    for (std::size_t r = 0; r < Z.rows; ++r) {
      Vec z = Z.row_vec(r);
      if (H->span->insert(z)) H->basis.push_back(std::move(z));
    }
    return H;
  }

  /// Pullback along a homomorphism pi: K -> H (on S-indices), through the retraction s -> k(s).
  Vec pull(const Sub& K, const Sub& H, const std::function<Index(Index)>& pi, std::size_t t, const Vec& F) const {
    Vec out(dim(K, t), 0);
    for (std::size_t r = 0; r < out.size(); ++r) {
      auto x = tuple(K, t, r);
      for (auto& s : x) s = pi(K.factor[s]);
      out[r] = value(H, F, x);
    }
    return out;
  }

  /// Restriction to a subgroup K of H (no retraction needed).
  Vec restrict(const Sub& K, const Sub& H, std::size_t t, const Vec& F) const {
    Vec out(dim(K, t), 0);
    for (std::size_t r = 0; r < out.size(); ++r) out[r] = value(H, F, tuple(K, t, r));
    return out;
  }

  /// Transfer from K to H: sum over left cosets sigma K of F(sigma^{-1} x).
  Vec transfer(const Sub& K, const Sub& H, std::size_t t, const Vec& F) const {
    std::vector<Index> sigmas;
    std::vector<char> seen(n_, 0);
    for (Index h : H.elems) {
      if (seen[h]) continue;
      sigmas.push_back(h);
      for (Index k : K.elems) seen[mul(h, k)] = 1;
    }
    Vec out(dim(H, t), 0);
    for (std::size_t r = 0; r < out.size(); ++r) {
      const auto x = tuple(H, t, r);
      Elem s = 0;
      for (Index sg : sigmas) {
        std::vector<Index> y(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) y[i] = mul(inv(sg), x[i]);
        s = f_.add(s, value(K, F, y));
      }
      out[r] = s;
    }
    return out;
  }

  /// Alexander-Whitney cup product of K-cochains.
  Vec cup(const Sub& K, std::size_t a, const Vec& F, std::size_t b, const Vec& G) const {
    Vec out(dim(K, a + b), 0);
    for (std::size_t r = 0; r < out.size(); ++r) {
      const auto x = tuple(K, a + b, r);
      std::vector<Index> front(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(a + 1));
      std::vector<Index> back(x.begin() + static_cast<std::ptrdiff_t>(a), x.end());
      out[r] = f_.mul(value(K, F, front), value(K, G, back));
    }
    return out;
  }

 private:
  std::shared_ptr<const qdp::FiniteGroup> S_;
  PrimeField f_;
  std::size_t n_;
  std::vector<Index> mul_, inv_;
};

}  // namespace oracle
