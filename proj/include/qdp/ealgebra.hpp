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
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cohomology.hpp"
#include "dmod.hpp"
#include "qarith.hpp"

namespace qdp {

enum class Family { GL, Sym };

inline std::string family_name(Family f) { return f == Family::GL ? "GL" : "Sym"; }

/// Outcome of a verification suite: number of checks, failures with witnesses, and observations.
struct VerificationReport {
  std::string suite;
  std::size_t checked = 0;
  std::vector<std::string> failures;
  std::vector<std::pair<std::string, std::string>> observations;
  std::string skipped;  // reason, when the suite could not run

  bool ok() const noexcept { return failures.empty(); }
  void fail(std::string what) { failures.push_back(std::move(what)); }
  void merge(const VerificationReport& o) {
    checked += o.checked;
    failures.insert(failures.end(), o.failures.begin(), o.failures.end());
    observations.insert(observations.end(), o.observations.begin(), o.observations.end());
  }
};

inline std::string vec_string(const Vec& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "]";
}

/// Solves A X = B column by column; throws if some column is not in the image.
inline Matrix solve_columns(const PrimeField& f, const Matrix& A, const Matrix& B) {
  LinearSolver S(f, A);
  Matrix X(A.cols, B.cols);
  for (std::size_t j = 0; j < B.cols; ++j) {
    auto x = S.solve(B.col_vec(j));
    if (!x) throw std::logic_error("linear system has no solution");
    X.set_col(j, *x);
  }
  return X;
}

/// The bigraded algebra E = (+) H^t(G_n; F_ell) for G_n = GL_n(F_q) or Sym(n), on the window
/// n <= nmax, t <= tmax, with the transfer product and the map d.
class BigradedAlgebraE {
 public:
  BigradedAlgebraE(Family family, std::uint32_t q, std::uint32_t ell, std::size_t nmax, std::size_t tmax)
      : family_(family), q_(family == Family::Sym ? 1 : q), ctx_(ell, family == Family::Sym ? 1 : q),
        nmax_(nmax), tmax_(tmax), E_(std::make_shared<CohomologyEngine>(ell)) {
    if (family == Family::GL && !is_prime_power(q)) throw std::invalid_argument("q must be a prime power");
  }

  Family family() const noexcept { return family_; }
  std::uint32_t q() const noexcept { return q_; }
  const QContext& context() const noexcept { return ctx_; }
  const PrimeField& field() const noexcept { return ctx_.field(); }
  std::size_t nmax() const noexcept { return nmax_; }
  std::size_t tmax() const noexcept { return tmax_; }
  const EnginePtr& engine() const noexcept { return E_; }

  /// Cohomology of G_n with trivial coefficients.
  const GroupCohomology& cohomology(std::size_t n) const {
    check_window(0, n);
    while (levels_.size() <= n) {
      const std::size_t k = levels_.size();
      GroupPtr G = family_ == Family::GL ? GroupPtr(general_linear(k, q_)) : GroupPtr(symmetric(k));
      levels_.push_back(std::make_shared<GroupCohomology>(E_, G, GModule::trivial_module()));
    }
    return *levels_[n];
  }

  std::size_t dim(std::size_t t, std::size_t n) const {
    check_window(t, n);
    return cohomology(n).dim(t);
  }

  Vec unit(std::size_t /*n*/) const { return Vec{1}; }

  /// Transfer product E^i_n x E^j_m -> E^{i+j}_{n+m}.
  Vec product(std::size_t i, std::size_t n, const Vec& x, std::size_t j, std::size_t m, const Vec& y) const {
    check_window(i + j, n + m);
    const auto& f = field();
    if (n == 0 || m == 0) {
      // G_0 is trivial: E_0 is F_ell in degree 0
      const Vec& scalar = n == 0 ? x : y;
      const Vec& other = n == 0 ? y : x;
      const std::size_t t = n == 0 ? i : j;
      if (t != 0 || scalar.size() != 1) return Vec(dim(i + j, n + m), 0);
      Vec out = other;
      scale(f, out, scalar[0]);
      return out;
    }
    const auto& T = table(i, n, j, m);
    Vec out(dim(i + j, n + m), 0);
    for (std::size_t a = 0; a < x.size(); ++a)
      for (std::size_t b = 0; b < y.size(); ++b)
        if (x[a] && y[b]) axpy(f, out, f.mul(x[a], y[b]), T[a][b]);
    return out;
  }

  /// Matrix of d: E^t_n -> E^t_{n-1}.
  const Matrix& d_matrix(std::size_t t, std::size_t n) const {
    check_window(t, n);
    if (n == 0) throw std::invalid_argument("d is defined for n >= 1");
    auto key = std::make_pair(t, n);
    auto it = d_.find(key);
    if (it != d_.end()) return it->second;
    const auto& L = levi_side(n);
    const Matrix R = restriction(cohomology(n), *L.coh, t);
    const Matrix I = inflation(cohomology(n - 1), *L.coh, L.pi, t);
    if (rank(field(), I) != I.cols || I.rows != I.cols)
      throw std::logic_error("inflation onto the parabolic is not an isomorphism");
    return d_[key] = solve_columns(field(), I, R);
  }

  Vec d(std::size_t t, std::size_t n, const Vec& x) const { return apply(field(), d_matrix(t, n), x); }

  /// Restriction to the subgroup {diag(A, 1)} (GL) or Sym(n-1) (Sym), identified with G_{n-1}.
  Matrix d_by_block_restriction(std::size_t t, std::size_t n) const {
    const auto& G = cohomology(n);
    const auto& Gm = cohomology(n - 1);
    const auto amb = G.group().ambient();
    std::vector<Code> codes;
    const auto& small = Gm.group();
    for (Code a : small.codes()) codes.push_back(embed_lower(n, a));
    auto D = std::make_shared<FiniteGroup>(amb, codes, "diag(G_" + std::to_string(n - 1) + ",1)");
    std::vector<Code> syl;
    for (Code a : Gm.sylow()->codes()) syl.push_back(embed_lower(n, a));
    GroupCohomology Dc(E_, D, GModule::trivial_module(), std::make_shared<FiniteGroup>(amb, syl, "Syl"));
    const Matrix R = restriction(G, Dc, t);
    const Matrix I = inflation(Gm, Dc, [&](Code c) { return project_lower(n, c); }, t);
    return solve_columns(field(), I, R);
  }

  /// E^t as a graded D-module through degree nmax (x^[k] acts by the product with 1_k),
  /// together with the connection d.
  std::pair<GradedVectorData, Connection> as_module(std::size_t t) const {
    std::vector<std::size_t> dims;
    for (std::size_t n = 0; n <= nmax_; ++n) dims.push_back(dim(t, n));
    GradedVectorData M(ctx_, dims, [&](std::size_t n, std::size_t k) {
      Matrix A(dim(t, n + k), dim(t, n));
      for (std::size_t a = 0; a < dim(t, n); ++a) {
        Vec e(dim(t, n), 0);
        e[a] = 1;
        A.set_col(a, product(t, n, e, 0, k, unit(k)));
      }
      return A;
    });
    Connection c = make_connection(M, 1, [&](std::size_t n) { return d_matrix(t, n); });
    return {std::move(M), std::move(c)};
  }

  void check_window(std::size_t t, std::size_t n) const {
    if (n > nmax_ || t > tmax_)
      throw WindowExceeded("(t=" + std::to_string(t) + ", n=" + std::to_string(n) + ") outside the window t <= " +
                           std::to_string(tmax_) + ", n <= " + std::to_string(nmax_));
  }

 private:
  struct Side {
    std::shared_ptr<GroupCohomology> coh;
    std::function<Code(Code)> pi;
  };

  Code embed_lower(std::size_t n, Code a) const {
    const auto& big = *cohomology(n).group().ambient();
    const auto& small = *cohomology(n - 1).group().ambient();
    const auto& one = *cohomology(1).group().ambient();
    if (family_ == Family::GL)
      return block_diag(dynamic_cast<const MatrixAmbient&>(big), dynamic_cast<const MatrixAmbient&>(small), a,
                        dynamic_cast<const MatrixAmbient&>(one), one.identity());
    return perm_concat(dynamic_cast<const PermAmbient&>(big), dynamic_cast<const PermAmbient&>(small), a,
                       dynamic_cast<const PermAmbient&>(one), one.identity());
  }

  Code project_lower(std::size_t n, Code c) const {
    const auto& big = *cohomology(n).group().ambient();
    const auto& small = *cohomology(n - 1).group().ambient();
    if (family_ == Family::GL)
      return extract_block(dynamic_cast<const MatrixAmbient&>(big), dynamic_cast<const MatrixAmbient&>(small), c, 0);
    return perm_block(dynamic_cast<const PermAmbient&>(big), dynamic_cast<const PermAmbient&>(small), c, 0);
  }

  /// P_{n-1,1bar} (or Sym(n-1) x 1) inside G_n, with Sylow diag(P_{n-1}, 1) and projection to G_{n-1}.
  const Side& levi_side(std::size_t n) const {
    auto it = lower_.find(n);
    if (it != lower_.end()) return it->second;
    const auto& G = cohomology(n);
    const auto& Gm = cohomology(n - 1);
    std::shared_ptr<FiniteGroup> L;
    if (family_ == Family::GL)
      L = parabolic(G.group(), BlockShape{{n - 1, 1}, {false, true}, {}});
    else
      L = point_stabilizer(G.group());
    std::vector<Code> syl;
    for (Code a : Gm.sylow()->codes()) syl.push_back(embed_lower(n, a));
    Side s;
    s.coh = std::make_shared<GroupCohomology>(E_, L, GModule::trivial_module(),
                                              std::make_shared<FiniteGroup>(G.group().ambient(), syl, "Syl"));
    s.pi = [this, n](Code c) { return project_lower(n, c); };
    return lower_[n] = std::move(s);
  }

  /// P_{n,m} (or the Young subgroup) inside G_{n+m} with Sylow diag(P_n, P_m).
  struct Block {
    std::shared_ptr<GroupCohomology> coh;
    std::shared_ptr<GroupCohomology> product;  // P_n x P_m
    std::function<Code(Code)> pi;
  };

  const Block& block(std::size_t n, std::size_t m) const {
    auto key = std::make_pair(n, m);
    auto it = blocks_.find(key);
    if (it != blocks_.end()) return it->second;
    const auto& G = cohomology(n + m);
    const auto& A = cohomology(n);
    const auto& B = cohomology(m);
    const auto& bamb = *G.group().ambient();
    std::shared_ptr<FiniteGroup> H;
    std::vector<Code> syl;
    for (Code a : A.sylow()->codes())
      for (Code b : B.sylow()->codes()) {
        if (family_ == Family::GL)
          syl.push_back(block_diag(dynamic_cast<const MatrixAmbient&>(bamb), dynamic_cast<const MatrixAmbient&>(*A.group().ambient()), a,
                                   dynamic_cast<const MatrixAmbient&>(*B.group().ambient()), b));
        else
          syl.push_back(perm_concat(dynamic_cast<const PermAmbient&>(bamb), dynamic_cast<const PermAmbient&>(*A.group().ambient()), a,
                                    dynamic_cast<const PermAmbient&>(*B.group().ambient()), b));
      }
    if (family_ == Family::GL)
      H = parabolic(G.group(), BlockShape{{n, m}, {}, {}});
    else
      H = young_subgroup(G.group(), n);
    Block blk;
    blk.coh = std::make_shared<GroupCohomology>(E_, H, GModule::trivial_module(),
                                                std::make_shared<FiniteGroup>(G.group().ambient(), syl, "Syl"));
    const auto& prod = E_->product(A.sylow(), B.sylow(), tmax_);
    blk.product = std::make_shared<GroupCohomology>(E_, prod.group, GModule::trivial_module(), prod.group);
    auto pamb = std::dynamic_pointer_cast<const ProductAmbient>(prod.group->ambient());
    auto big = G.group().ambient(), sa = A.group().ambient(), sb = B.group().ambient();
    const Family fam = family_;
    blk.pi = [=](Code c) {
      if (fam == Family::GL) {
        const auto& bm = dynamic_cast<const MatrixAmbient&>(*big);
        return pamb->pack(extract_block(bm, dynamic_cast<const MatrixAmbient&>(*sa), c, 0),
                          extract_block(bm, dynamic_cast<const MatrixAmbient&>(*sb), c, n));
      }
      const auto& bp = dynamic_cast<const PermAmbient&>(*big);
      return pamb->pack(perm_block(bp, dynamic_cast<const PermAmbient&>(*sa), c, 0),
                        perm_block(bp, dynamic_cast<const PermAmbient&>(*sb), c, n));
    };
    return blocks_[key] = std::move(blk);
  }

  using Table = std::vector<std::vector<Vec>>;

  const Table& table(std::size_t i, std::size_t n, std::size_t j, std::size_t m) const {
    auto key = std::make_tuple(i, n, j, m);
    auto it = tables_.find(key);
    if (it != tables_.end()) return it->second;
    const auto& A = cohomology(n);
    const auto& B = cohomology(m);
    const auto& G = cohomology(n + m);
    const auto& blk = block(n, m);
    const GModule triv = GModule::trivial_module();
    Table T(A.dim(i), std::vector<Vec>(B.dim(j)));
    for (std::size_t a = 0; a < A.dim(i); ++a)
      for (std::size_t b = 0; b < B.dim(j); ++b) {
        Vec ea(A.dim(i), 0), eb(B.dim(j), 0);
        ea[a] = 1;
        eb[b] = 1;
        const Vec z = cross_product(*E_, A.sylow(), i, A.to_sylow(i, ea), B.sylow(), j, B.to_sylow(j, eb));
        const Vec w = pull_rep(*blk.product, blk.coh->sylow(), triv, blk.pi, Matrix::identity(1), i + j, z);
        T[a][b] = G.from_sylow(i + j, cor_rep(*blk.coh, G, i + j, w));
      }
    return tables_[key] = std::move(T);
  }

  Family family_;
  std::uint32_t q_;
  QContext ctx_;
  std::size_t nmax_, tmax_;
  EnginePtr E_;
  mutable std::vector<std::shared_ptr<GroupCohomology>> levels_;
  mutable std::map<std::pair<std::size_t, std::size_t>, Matrix> d_;
  mutable std::map<std::size_t, Side> lower_;
  mutable std::map<std::pair<std::size_t, std::size_t>, Block> blocks_;
  mutable std::map<std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>, Table> tables_;
};

// ---------------------------------------------------------------------------
// Verification suites
// ---------------------------------------------------------------------------

inline std::string cell(std::size_t t, std::size_t n) { return "E^" + std::to_string(t) + "_" + std::to_string(n); }

/// d(xy) = x d(y) + q^m d(x) y for all basis pairs with n, m >= 1, n + m <= nmax, i + j <= tmax.
inline VerificationReport verify_leibniz(const BigradedAlgebraE& E) {
  VerificationReport rep;
  rep.suite = "leibniz";
  const auto& f = E.field();
  for (std::size_t s = 2; s <= E.nmax(); ++s)
    for (std::size_t n = 1; n < s; ++n) {
      const std::size_t m = s - n;
      const Elem qm = E.context().q_pow(m);
      for (std::size_t t = 0; t <= E.tmax(); ++t)
        for (std::size_t i = 0; i <= t; ++i) {
          const std::size_t j = t - i;
          for (std::size_t a = 0; a < E.dim(i, n); ++a)
            for (std::size_t b = 0; b < E.dim(j, m); ++b) {
              Vec x(E.dim(i, n), 0), y(E.dim(j, m), 0);
              x[a] = 1;
              y[b] = 1;
              const Vec lhs = E.d(t, s, E.product(i, n, x, j, m, y));
              Vec rhs = E.product(i, n, x, j, m - 1, E.d(j, m, y));
              axpy(f, rhs, qm, E.product(i, n - 1, E.d(i, n, x), j, m, y));
              ++rep.checked;
              if (lhs != rhs)
                rep.fail("x=" + cell(i, n) + "[" + std::to_string(a) + "], y=" + cell(j, m) + "[" +
                         std::to_string(b) + "]: d(xy)=" + vec_string(lhs) + " but x d(y) + q^m d(x) y=" + vec_string(rhs));
            }
        }
    }
  return rep;
}

/// d: E^t_n -> E^t_{n-1} is onto for 1 <= n <= nmax, t <= tmax.
inline VerificationReport verify_surjectivity(const BigradedAlgebraE& E) {
  VerificationReport rep;
  rep.suite = "surjectivity";
  for (std::size_t t = 0; t <= E.tmax(); ++t)
    for (std::size_t n = 1; n <= E.nmax(); ++n) {
      ++rep.checked;
      const std::size_t r = rank(E.field(), E.d_matrix(t, n));
      if (r != E.dim(t, n - 1))
        rep.fail("d: " + cell(t, n) + " -> " + cell(t, n - 1) + " has rank " + std::to_string(r) + " < " +
                 std::to_string(E.dim(t, n - 1)));
    }
  return rep;
}

/// 1_n 1_m = [n+m choose n]_q 1_{n+m} for n + m <= nmax.
inline VerificationReport verify_units(const BigradedAlgebraE& E) {
  VerificationReport rep;
  rep.suite = "units";
  for (std::size_t s = 0; s <= E.nmax(); ++s)
    for (std::size_t n = 0; n <= s; ++n) {
      ++rep.checked;
      const Vec p = E.product(0, n, E.unit(n), 0, s - n, E.unit(s - n));
      const Elem expect = q_binomial(s, n, E.context());
      if (p != Vec{expect})
        rep.fail("1_" + std::to_string(n) + " 1_" + std::to_string(s - n) + " = " + vec_string(p) + ", expected " +
                 std::to_string(expect));
    }
  return rep;
}

/// Kernel bound for the free D-module statement: 2t when q = 2 or in the Sym family, t otherwise.
inline std::size_t free_generation_bound(const BigradedAlgebraE& E, std::size_t t) {
  return (E.family() == Family::Sym || E.q() == 2) ? 2 * t : t;
}

inline VerificationReport verify_free_D(const BigradedAlgebraE& E) {
  VerificationReport rep;
  rep.suite = "free_D";
  for (std::size_t t = 0; t <= E.tmax(); ++t) {
    ++rep.checked;
    auto [M, c] = E.as_module(t);
    try {
      auto r = connection_kernel_decompose(M, c);
      for (const auto& fl : r.failures) rep.fail("t=" + std::to_string(t) + ": " + fl);
      const auto top = r.max_kernel_degree();
      std::string dims;
      for (auto k : r.kernel_dims) dims += (dims.empty() ? "" : " ") + std::to_string(k);
      rep.observations.emplace_back("kernel_dims t=" + std::to_string(t), dims);
      if (top > static_cast<std::int64_t>(free_generation_bound(E, t)))
        rep.fail("t=" + std::to_string(t) + ": kernel in degree " + std::to_string(top) + " exceeds bound " +
                 std::to_string(free_generation_bound(E, t)));
    } catch (const Error& e) {
      rep.fail("t=" + std::to_string(t) + ": " + e.what());
    }
  }
  return rep;
}

/// Observation: x y = (-1)^{ij} q^{nm} y x for basis pairs (reported, not gated).
inline VerificationReport observe_braided_commutativity(const BigradedAlgebraE& E) {
  VerificationReport rep;
  rep.suite = "braided_commutativity";
  const auto& f = E.field();
  std::size_t agree = 0, total = 0;
  for (std::size_t s = 2; s <= E.nmax(); ++s)
    for (std::size_t n = 1; n < s; ++n) {
      const std::size_t m = s - n;
      for (std::size_t t = 0; t <= E.tmax(); ++t)
        for (std::size_t i = 0; i <= t; ++i) {
          const std::size_t j = t - i;
          Elem c = E.context().q_pow(n * m);
          if ((i * j) % 2) c = f.neg(c);
          for (std::size_t a = 0; a < E.dim(i, n); ++a)
            for (std::size_t b = 0; b < E.dim(j, m); ++b) {
              Vec x(E.dim(i, n), 0), y(E.dim(j, m), 0);
              x[a] = 1;
              y[b] = 1;
              Vec yx = E.product(j, m, y, i, n, x);
              scale(f, yx, c);
              ++total;
              if (E.product(i, n, x, j, m, y) == yx) ++agree;
            }
        }
    }
  rep.observations.emplace_back("pairs", std::to_string(total));
  rep.observations.emplace_back("agreeing", std::to_string(agree));
  return rep;
}

}  // namespace qdp
