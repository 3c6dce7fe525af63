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
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dalg.hpp"
#include "linalg.hpp"

namespace qdp {

// ---------------------------------------------------------------------------
// Presentations
// ---------------------------------------------------------------------------

/// One relation: a homogeneous row of the relation matrix, column index -> entry.
struct Relation {
  std::map<std::size_t, DElement> entries;
};

/// A finitely presented graded module: free on generators of the given degrees, modulo
/// the submodule spanned by the relation rows.
class FPModule {
 public:
  FPModule(QContext ctx, std::vector<std::uint64_t> gen_degrees, std::vector<Relation> relations = {})
      : ctx_(std::move(ctx)), gen_degrees_(std::move(gen_degrees)), relations_(std::move(relations)) {
    for (const auto& rel : relations_) rel_degrees_.push_back(validate(rel));
  }

  static FPModule free(const QContext& ctx, std::vector<std::uint64_t> degrees) { return FPModule(ctx, std::move(degrees)); }

  const QContext& context() const noexcept { return ctx_; }
  const std::vector<std::uint64_t>& gen_degrees() const noexcept { return gen_degrees_; }
  const std::vector<Relation>& relations() const noexcept { return relations_; }
  std::uint64_t relation_degree(std::size_t i) const { return rel_degrees_.at(i); }

  bool operator==(const FPModule& o) const {
    if (ctx_ != o.ctx_ || gen_degrees_ != o.gen_degrees_ || relations_.size() != o.relations_.size()) return false;
    for (std::size_t i = 0; i < relations_.size(); ++i) {
      const auto& a = relations_[i].entries;
      const auto& b = o.relations_[i].entries;
      if (a.size() != b.size()) return false;
      for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib)
        if (ia->first != ib->first || ia->second != ib->second) return false;
    }
    return true;
  }

 private:
  std::uint64_t validate(const Relation& rel) const {
    std::optional<std::uint64_t> deg;
    for (const auto& [col, e] : rel.entries) {
      if (col >= gen_degrees_.size()) throw std::invalid_argument("relation refers to generator " + std::to_string(col));
      if (e.context() != ctx_) throw ContextMismatch("relation entry over a different (ell, q)");
      for (const auto& [d, c] : e.terms()) {
        (void)c;
        const std::uint64_t total = d + gen_degrees_[col];
        if (deg && *deg != total) throw std::invalid_argument("relation row is not homogeneous");
        deg = total;
      }
    }
    return deg.value_or(0);
  }

  QContext ctx_;
  std::vector<std::uint64_t> gen_degrees_;
  std::vector<Relation> relations_;
  std::vector<std::uint64_t> rel_degrees_;
};

// ---------------------------------------------------------------------------
// Explicit graded data
// ---------------------------------------------------------------------------

/// A graded module truncated at degree N: dimensions plus the action of every x^[k]
/// as a matrix M_n -> M_{n+k} (rows = dim M_{n+k}, cols = dim M_n).
class GradedVectorData {
 public:
  using ActionFn = std::function<Matrix(std::size_t n, std::size_t k)>;

  GradedVectorData(QContext ctx, std::vector<std::size_t> dims, const ActionFn& action)
      : ctx_(std::move(ctx)), dims_(std::move(dims)) {
    const std::size_t N = truncation();
    act_.resize(dims_.size());
    for (std::size_t n = 0; n <= N; ++n) {
      act_[n].resize(N - n + 1);
      for (std::size_t k = 0; n + k <= N; ++k) {
        Matrix m = k == 0 ? Matrix::identity(dims_[n]) : action(n, k);
        if (m.rows != dims_[n + k] || m.cols != dims_[n]) throw std::invalid_argument("action matrix has wrong shape");
        act_[n][k] = std::move(m);
      }
    }
  }

  const QContext& context() const noexcept { return ctx_; }
  std::size_t truncation() const noexcept { return dims_.empty() ? 0 : dims_.size() - 1; }
  std::size_t dim(std::size_t n) const { return dims_.at(n); }
  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  /// Multiplication by x^[k] from degree n.
  const Matrix& act(std::size_t n, std::size_t k) const { return act_.at(n).at(k); }

 private:
  QContext ctx_;
  std::vector<std::size_t> dims_;
  std::vector<std::vector<Matrix>> act_;
};

namespace detail {

/// Degree-n slice of a presentation: relation span inside the free slice and quotient coordinates.
struct PresentedSlice {
  std::vector<std::size_t> gens;      // generator index per free coordinate
  std::vector<std::size_t> position;  // generator index -> free coordinate (or npos)
  EchelonBasis relations;
  std::vector<std::size_t> quotient_cols;

  PresentedSlice(const PrimeField& f, std::size_t n) : relations(f, n) {}
};

inline Vec project(const PresentedSlice& s, const Vec& v) {
  const Vec r = s.relations.reduce(v);
  Vec out(s.quotient_cols.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = r[s.quotient_cols[i]];
  return out;
}

}  // namespace detail

/// Explicit degree-wise model of a presentation up to degree N. The degree-n slice of the
/// free cover has basis (generator j, x^[n - d_j]); relation i contributes rel_i * x^[n - deg_i].
inline GradedVectorData to_graded_data(const FPModule& M, std::size_t N) {
  const QContext& ctx = M.context();
  const PrimeField& f = ctx.field();
  const auto& gd = M.gen_degrees();
  constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::vector<detail::PresentedSlice> slices;
  slices.reserve(N + 1);
  std::vector<std::size_t> dims;
  for (std::size_t n = 0; n <= N; ++n) {
    std::vector<std::size_t> gens, pos(gd.size(), npos);
    for (std::size_t j = 0; j < gd.size(); ++j)
      if (gd[j] <= n) {
        pos[j] = gens.size();
        gens.push_back(j);
      }
    detail::PresentedSlice s(f, gens.size());
    s.gens = std::move(gens);
    s.position = std::move(pos);
    for (std::size_t i = 0; i < M.relations().size(); ++i) {
      const std::uint64_t rd = M.relation_degree(i);
      if (rd > n) continue;
      const std::uint64_t shift = n - rd;
      Vec v(s.gens.size(), 0);
      for (const auto& [col, e] : M.relations()[i].entries)
        for (const auto& [a, c] : e.terms()) v[s.position[col]] = f.fma(v[s.position[col]], c, ctx.q_binomial(a + shift, a));
      s.relations.insert(std::move(v));
    }
    std::vector<bool> piv(s.gens.size(), false);
    for (auto p : s.relations.pivots()) piv[p] = true;
    for (std::size_t c = 0; c < s.gens.size(); ++c)
      if (!piv[c]) s.quotient_cols.push_back(c);
    dims.push_back(s.quotient_cols.size());
    slices.push_back(std::move(s));
  }

  auto action = [&](std::size_t n, std::size_t k) {
    const auto& src = slices[n];
    const auto& dst = slices[n + k];
    Matrix m(dst.quotient_cols.size(), src.quotient_cols.size());
    for (std::size_t c = 0; c < src.quotient_cols.size(); ++c) {
      const std::size_t j = src.gens[src.quotient_cols[c]];
      Vec v(dst.gens.size(), 0);
      const std::uint64_t a = n - gd[j];
      v[dst.position[j]] = ctx.q_binomial(a + k, a);
      m.set_col(c, detail::project(dst, v));
    }
    return m;
  };
  return GradedVectorData(ctx, std::move(dims), action);
}

/// Dimensions of M_0, ..., M_N.
inline std::vector<std::size_t> hilbert(const FPModule& M, std::size_t N) { return to_graded_data(M, N).dims(); }

// ---------------------------------------------------------------------------
// Sub- and quotient modules of explicit data
// ---------------------------------------------------------------------------

/// Per-degree spanning vectors (independent) of a graded subspace.
using GradedSubspace = std::vector<std::vector<Vec>>;

/// The submodule generated by the given homogeneous elements (degree, coordinates).
inline GradedSubspace generated_submodule(const GradedVectorData& L, const std::vector<std::pair<std::size_t, Vec>>& gens) {
  const PrimeField& f = L.context().field();
  GradedSubspace out(L.truncation() + 1);
  for (std::size_t n = 0; n <= L.truncation(); ++n) {
    EchelonBasis eb(f, L.dim(n));
    for (const auto& [e, v] : gens)
      if (e <= n) {
        Vec w = apply(f, L.act(e, n - e), v);
        if (eb.insert(w)) out[n].push_back(std::move(w));
      }
  }
  return out;
}

/// The submodule K as explicit data, in the given spanning bases.
inline GradedVectorData restrict_to(const GradedVectorData& L, const GradedSubspace& K) {
  const PrimeField& f = L.context().field();
  std::vector<CoordinateSystem> cs;
  std::vector<std::size_t> dims;
  for (std::size_t n = 0; n <= L.truncation(); ++n) {
    cs.emplace_back(f, L.dim(n), K[n]);
    dims.push_back(K[n].size());
  }
  auto action = [&](std::size_t n, std::size_t k) {
    Matrix m(dims[n + k], dims[n]);
    for (std::size_t c = 0; c < dims[n]; ++c) {
      auto x = cs[n + k].coordinates(apply(f, L.act(n, k), K[n][c]));
      if (!x) throw std::invalid_argument("graded subspace is not a submodule");
      m.set_col(c, *x);
    }
    return m;
  };
  return GradedVectorData(L.context(), dims, action);
}

/// L / K as explicit data; coordinates are the non-pivot columns of K's echelon form.
inline GradedVectorData quotient_by(const GradedVectorData& L, const GradedSubspace& K) {
  const PrimeField& f = L.context().field();
  std::vector<EchelonBasis> eb;
  std::vector<std::vector<std::size_t>> free_cols;
  std::vector<std::size_t> dims;
  for (std::size_t n = 0; n <= L.truncation(); ++n) {
    eb.emplace_back(f, L.dim(n));
    for (const auto& v : K[n]) eb.back().insert(v);
    std::vector<bool> piv(L.dim(n), false);
    for (auto p : eb.back().pivots()) piv[p] = true;
    free_cols.emplace_back();
    for (std::size_t c = 0; c < L.dim(n); ++c)
      if (!piv[c]) free_cols.back().push_back(c);
    dims.push_back(free_cols.back().size());
  }
  auto action = [&](std::size_t n, std::size_t k) {
    Matrix m(dims[n + k], dims[n]);
    for (std::size_t c = 0; c < dims[n]; ++c) {
      Vec e(L.dim(n), 0);
      e[free_cols[n][c]] = 1;
      const Vec img = eb[n + k].reduce(apply(f, L.act(n, k), e));
      Vec out(dims[n + k]);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = img[free_cols[n + k][i]];
      m.set_col(c, out);
    }
    return m;
  };
  return GradedVectorData(L.context(), dims, action);
}

/// Direct sum of two truncated modules (truncated at the smaller bound).
inline GradedVectorData direct_sum(const GradedVectorData& A, const GradedVectorData& B) {
  if (A.context() != B.context()) throw ContextMismatch("direct sum over different (ell, q)");
  const std::size_t N = std::min(A.truncation(), B.truncation());
  std::vector<std::size_t> dims;
  for (std::size_t n = 0; n <= N; ++n) dims.push_back(A.dim(n) + B.dim(n));
  auto action = [&](std::size_t n, std::size_t k) {
    Matrix m(dims[n + k], dims[n]);
    const Matrix& a = A.act(n, k);
    const Matrix& b = B.act(n, k);
    for (std::size_t i = 0; i < a.rows; ++i)
      for (std::size_t j = 0; j < a.cols; ++j) m(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows; ++i)
      for (std::size_t j = 0; j < b.cols; ++j) m(a.rows + i, a.cols + j) = b(i, j);
    return m;
  };
  return GradedVectorData(A.context(), dims, action);
}

// ---------------------------------------------------------------------------
// Generation and freeness over D_{>=r}
// ---------------------------------------------------------------------------

/// Span of (D_{>=r})_+ M inside M_n, i.e. of x^[k] M_{n-k} for 0 < k <= n with b_r | k.
inline EchelonBasis decomposables(const GradedVectorData& M, std::size_t n, std::uint64_t step) {
  const PrimeField& f = M.context().field();
  EchelonBasis eb(f, M.dim(n));
  for (std::size_t k = step; k <= n; k += step) {
    const Matrix& a = M.act(n - k, k);
    for (std::size_t c = 0; c < a.cols && eb.dim() < M.dim(n); ++c) eb.insert(a.col_vec(c));
  }
  return eb;
}

/// Minimal D_{>=r}-generators: per degree, unit vectors completing the decomposables to a basis.
struct GeneratorSet {
  std::uint64_t step = 1;
  std::vector<std::pair<std::size_t, Vec>> generators;  // (degree, element)
  std::int64_t top_degree() const {
    std::int64_t t = -1;
    for (const auto& g : generators) t = std::max<std::int64_t>(t, static_cast<std::int64_t>(g.first));
    return t;
  }
};

inline GeneratorSet minimal_generators(const GradedVectorData& M, std::uint64_t step) {
  GeneratorSet gs;
  gs.step = step;
  for (std::size_t n = 0; n <= M.truncation(); ++n) {
    EchelonBasis eb = decomposables(M, n, step);
    for (std::size_t i = 0; i < M.dim(n) && eb.dim() < M.dim(n); ++i) {
      Vec e(M.dim(n), 0);
      e[i] = 1;
      if (eb.insert(e)) gs.generators.emplace_back(n, std::move(e));
    }
  }
  return gs;
}

/// Degree of generation over D_{>=r}; -1 for the zero module.
inline std::int64_t g_r(const GradedVectorData& M, std::size_t r) {
  const GeneratorSet gs = minimal_generators(M, b_value(r, M.context()));
  const std::int64_t top = gs.top_degree();
  if (top >= 0 && static_cast<std::size_t>(top) == M.truncation() && M.truncation() > 0)
    throw TruncationTooSmall("a D_{>=" + std::to_string(r) + "}-generator appears at the truncation degree " +
                             std::to_string(M.truncation()));
  return top;
}

inline std::int64_t g_r(const FPModule& M, std::size_t r, std::size_t N) { return g_r(to_graded_data(M, N), r); }

/// Result of the degree-wise freeness test over D_{>=r}.
struct FreenessWitness {
  std::size_t r = 0;
  bool free = false;
  std::optional<std::size_t> failing_degree;
  GeneratorSet generators;
};

/// Checks that the products g x^[k] (g a minimal generator, b_r | k) form a basis of every M_n, n <= N.
inline FreenessWitness freeness_over(const GradedVectorData& M, std::size_t r) {
  const PrimeField& f = M.context().field();
  FreenessWitness w;
  w.r = r;
  w.generators = minimal_generators(M, b_value(r, M.context()));
  const std::uint64_t step = w.generators.step;
  for (std::size_t n = 0; n <= M.truncation(); ++n) {
    EchelonBasis eb(f, M.dim(n));
    std::size_t count = 0;
    for (const auto& [e, v] : w.generators.generators) {
      if (e > n || (n - e) % step) continue;
      ++count;
      eb.insert(apply(f, M.act(e, n - e), v));
    }
    if (count != M.dim(n) || eb.dim() != M.dim(n)) {
      w.failing_degree = n;
      return w;
    }
  }
  w.free = true;
  return w;
}

/// Coefficients of v in M_n with respect to the D_{>=r}-basis of a free witness,
/// keyed by (generator index, k) for the basis element g * x^[k].
inline std::map<std::pair<std::size_t, std::size_t>, Elem> free_coordinates(const GradedVectorData& M,
                                                                            const FreenessWitness& w, std::size_t n,
                                                                            const Vec& v) {
  const PrimeField& f = M.context().field();
  std::vector<Vec> cols;
  std::vector<std::pair<std::size_t, std::size_t>> keys;
  const auto& gens = w.generators.generators;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const std::size_t e = gens[i].first;
    if (e > n || (n - e) % w.generators.step) continue;
    cols.push_back(apply(f, M.act(e, n - e), gens[i].second));
    keys.emplace_back(i, n - e);
  }
  const CoordinateSystem cs(f, M.dim(n), cols);
  auto x = cs.coordinates(v);
  if (!x) throw NotFree("vector outside the span of the free basis in degree " + std::to_string(n));
  std::map<std::pair<std::size_t, std::size_t>, Elem> out;
  for (std::size_t i = 0; i < keys.size(); ++i)
    if ((*x)[i]) out[keys[i]] = (*x)[i];
  return out;
}

/// Truncation-certified invariants: epsilon, lambda = g_eps + 1 - b_eps, valid up to certified_to.
struct InvariantCertificate {
  std::size_t epsilon = 0;
  std::int64_t lambda = 0;
  std::int64_t generation_degree = -1;
  std::size_t certified_to = 0;
};

/// Smallest r for which M is free over D_{>=r} on the window, with at least one full
/// b_r step above the top generator still inside the window.
inline InvariantCertificate epsilon_lambda(const GradedVectorData& M) {
  const QContext& ctx = M.context();
  const std::size_t N = M.truncation();
  for (std::size_t r = 0;; ++r) {
    const std::uint64_t b = b_value(r, ctx);
    if (b > N) break;
    const FreenessWitness w = freeness_over(M, r);
    const std::int64_t top = w.generators.top_degree();
    if (top + static_cast<std::int64_t>(b) > static_cast<std::int64_t>(N)) continue;
    if (!w.free) continue;
    InvariantCertificate c;
    c.epsilon = r;
    c.generation_degree = top;
    c.lambda = top + 1 - static_cast<std::int64_t>(b);
    c.certified_to = N;
    return c;
  }
  throw TruncationTooSmall("no D_{>=r} freeness certificate within degree " + std::to_string(N));
}

inline InvariantCertificate epsilon_lambda(const FPModule& M, std::size_t N) { return epsilon_lambda(to_graded_data(M, N)); }

// ---------------------------------------------------------------------------
// Periodicity
// ---------------------------------------------------------------------------

struct PeriodicityCertificate {
  std::size_t epsilon_bound = 0;
  std::int64_t lambda_bound = 0;
  std::uint64_t period = 1;
  std::int64_t onset = 0;
  std::size_t truncation = 0;
  std::vector<std::size_t> hilbert;
  std::vector<std::pair<std::size_t, std::size_t>> violations;  // degree pairs with unequal dimension
  bool verified() const noexcept { return violations.empty(); }
};

inline PeriodicityCertificate predict_period(const GradedVectorData& M) {
  const InvariantCertificate inv = epsilon_lambda(M);
  PeriodicityCertificate p;
  p.epsilon_bound = inv.epsilon;
  p.lambda_bound = inv.lambda;
  p.period = b_value(inv.epsilon, M.context());
  p.onset = inv.lambda;
  p.truncation = inv.certified_to;
  p.hilbert = M.dims();
  const std::size_t start = static_cast<std::size_t>(std::max<std::int64_t>(0, p.onset));
  for (std::size_t n = start; n <= p.truncation; ++n)
    for (std::size_t m = n + p.period; m <= p.truncation; m += p.period)
      if (p.hilbert[n] != p.hilbert[m]) p.violations.emplace_back(n, m);
  return p;
}

inline PeriodicityCertificate predict_period(const FPModule& M, std::size_t N) { return predict_period(to_graded_data(M, N)); }

// ---------------------------------------------------------------------------
// Connections
// ---------------------------------------------------------------------------

/// Degree-lowering map of step s: maps[n] : M_n -> M_{n-s} for n >= s (empty matrices below).
struct Connection {
  std::uint64_t step = 1;
  std::vector<Matrix> maps;
};

/// Builds a connection from a callback giving the matrix in each degree n >= step.
inline Connection make_connection(const GradedVectorData& M, std::uint64_t step,
                                  const std::function<Matrix(std::size_t)>& fn) {
  Connection c;
  c.step = step;
  for (std::size_t n = 0; n <= M.truncation(); ++n) {
    if (n < step) {
      c.maps.emplace_back(0, M.dim(n));
      continue;
    }
    Matrix m = fn(n);
    if (m.rows != M.dim(n - step) || m.cols != M.dim(n)) throw std::invalid_argument("connection matrix has wrong shape");
    c.maps.push_back(std::move(m));
  }
  return c;
}

/// The free module on generators of the given degrees with the componentwise derivation
/// g x^[a] -> g x^[a-1].
inline std::pair<GradedVectorData, Connection> free_with_derivation(const QContext& ctx,
                                                                     const std::vector<std::uint64_t>& degrees,
                                                                     std::size_t N) {
  GradedVectorData M = to_graded_data(FPModule::free(ctx, degrees), N);
  // The free slice in degree n lists generators with d_j <= n in index order.
  auto index = [&](std::size_t n) {
    std::vector<std::size_t> pos(degrees.size(), static_cast<std::size_t>(-1));
    std::size_t k = 0;
    for (std::size_t j = 0; j < degrees.size(); ++j)
      if (degrees[j] <= n) pos[j] = k++;
    return pos;
  };
  Connection c = make_connection(M, 1, [&](std::size_t n) {
    Matrix m(M.dim(n - 1), M.dim(n));
    const auto src = index(n), dst = index(n - 1);
    for (std::size_t j = 0; j < degrees.size(); ++j)
      if (degrees[j] < n) m(dst[j], src[j]) = 1;
    return m;
  });
  return {std::move(M), std::move(c)};
}

/// nabla^k as a connection of step k * step.
inline Connection power_connection(const GradedVectorData& M, const Connection& c, std::size_t k) {
  const PrimeField& f = M.context().field();
  const std::uint64_t s = c.step * k;
  return make_connection(M, s, [&](std::size_t n) {
    Matrix acc = Matrix::identity(M.dim(n));
    for (std::size_t i = 0; i < k; ++i) acc = multiply(f, c.maps[n - i * c.step], acc);
    return acc;
  });
}

/// First failure of nabla(m x^[k]) = m x^[k-s] + q^{s k} nabla(m) x^[k] (s the step), as text.
inline std::optional<std::string> connection_law_failure(const GradedVectorData& M, const Connection& c) {
  const QContext& ctx = M.context();
  const PrimeField& f = ctx.field();
  const std::uint64_t s = c.step;
  const std::size_t N = M.truncation();
  for (std::size_t n = 0; n <= N; ++n)
    for (std::size_t k = 1; n + k <= N; ++k) {
      if (n + k < s) continue;
      const Matrix lhs = multiply(f, c.maps[n + k], M.act(n, k));
      Matrix rhs(M.dim(n + k - s), M.dim(n));
      if (k >= s) rhs = M.act(n, k - s);
      if (n >= s) rhs = add(f, rhs, scaled(f, multiply(f, M.act(n - s, k), c.maps[n]), ctx.q_pow(s * k)));
      if (!(lhs == rhs))
        return "law fails for m in degree " + std::to_string(n) + " and a = x^[" + std::to_string(k) + "]";
    }
  return std::nullopt;
}

struct ConnectionReport {
  std::vector<std::size_t> kernel_dims;
  std::vector<std::vector<Vec>> kernel_basis;
  bool phi_linear = true;      // (a) Phi(m a) = Phi(m) a
  bool phi_iso = true;         // (a) Phi bijective degree-wise
  bool phi_intertwines = true; // (b) Phi nabla = (1 (x) d) Phi
  bool kernel_is_mbar = true;  // (c) ker nabla -> M-bar is an isomorphism
  bool kernel_tensor_iso = true;  // (d) ker nabla (x) D -> M is an isomorphism
  bool surjective = true;      // (e)
  std::vector<std::string> failures;
  bool ok() const noexcept { return failures.empty(); }
  /// Largest degree carrying kernel; -1 when the kernel vanishes on the window.
  std::int64_t max_kernel_degree() const {
    std::int64_t t = -1;
    for (std::size_t n = 0; n < kernel_dims.size(); ++n)
      if (kernel_dims[n]) t = static_cast<std::int64_t>(n);
    return t;
  }
};

/// Checks parts (a)-(e) for a connection of step s (the subring used is D_{>=r} with b_r = s,
/// i.e. multiplication by x^[k] with s | k). Throws NotAConnection if the law fails and
/// NotFree if the kernel does not freely generate.
inline ConnectionReport connection_kernel_decompose(const GradedVectorData& M, const Connection& c) {
  if (auto fail = connection_law_failure(M, c)) throw NotAConnection(*fail);
  const QContext& ctx = M.context();
  const PrimeField& f = ctx.field();
  const std::uint64_t s = c.step;
  const std::size_t N = M.truncation();
  ConnectionReport rep;

  // kernels and surjectivity
  for (std::size_t n = 0; n <= N; ++n) {
    if (n < s) {
      rep.kernel_dims.push_back(M.dim(n));
      std::vector<Vec> basis;
      for (std::size_t i = 0; i < M.dim(n); ++i) {
        Vec e(M.dim(n), 0);
        e[i] = 1;
        basis.push_back(std::move(e));
      }
      rep.kernel_basis.push_back(std::move(basis));
      continue;
    }
    const Matrix ns = nullspace(f, c.maps[n]);
    rep.kernel_dims.push_back(ns.rows);
    std::vector<Vec> basis;
    for (std::size_t i = 0; i < ns.rows; ++i) basis.push_back(ns.row_vec(i));
    rep.kernel_basis.push_back(std::move(basis));
    if (rank(f, c.maps[n]) != M.dim(n - s)) {
      rep.surjective = false;
      rep.failures.push_back("(e) nabla not surjective from degree " + std::to_string(n));
    }
  }

  // (d) ker (x) D_{>=r} -> M
  for (std::size_t n = 0; n <= N; ++n) {
    EchelonBasis eb(f, M.dim(n));
    std::size_t count = 0;
    for (std::size_t e = n % s; e <= n; e += s)
      for (const auto& v : rep.kernel_basis[e]) {
        ++count;
        eb.insert(apply(f, M.act(e, n - e), v));
      }
    if (count != M.dim(n) || eb.dim() != M.dim(n)) {
      rep.kernel_tensor_iso = false;
      rep.failures.push_back("(d) kernel does not freely generate degree " + std::to_string(n));
    }
  }

  // M-bar coordinates: quotient of M_n by the decomposables, read on non-pivot columns.
  std::vector<EchelonBasis> dec;
  std::vector<std::vector<std::size_t>> bar_cols;
  for (std::size_t n = 0; n <= N; ++n) {
    dec.push_back(decomposables(M, n, s));
    std::vector<bool> piv(M.dim(n), false);
    for (auto p : dec.back().pivots()) piv[p] = true;
    bar_cols.emplace_back();
    for (std::size_t i = 0; i < M.dim(n); ++i)
      if (!piv[i]) bar_cols.back().push_back(i);
  }
  auto bar = [&](std::size_t n, const Vec& v) {
    const Vec r = dec[n].reduce(v);
    Vec out(bar_cols[n].size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = r[bar_cols[n][i]];
    return out;
  };
  // Phi(m) for m in M_n, as blocks j = 0..n/s holding (nabla^j m)_0 in M-bar_{n - j s}.
  auto phi = [&](std::size_t n, Vec v) {
    std::vector<Vec> blocks;
    for (std::size_t j = 0;; ++j) {
      blocks.push_back(bar(n - j * s, v));
      if (n < (j + 1) * s) break;
      v = apply(f, c.maps[n - j * s], v);
    }
    return blocks;
  };
  auto flatten = [](const std::vector<Vec>& blocks) {
    Vec out;
    for (const auto& b : blocks) out.insert(out.end(), b.begin(), b.end());
    return out;
  };

  for (std::size_t n = 0; n <= N; ++n) {
    // (a) bijectivity
    std::size_t target = 0;
    for (std::size_t j = 0; j * s <= n; ++j) target += bar_cols[n - j * s].size();
    EchelonBasis eb(f, target);
    for (std::size_t i = 0; i < M.dim(n); ++i) {
      Vec e(M.dim(n), 0);
      e[i] = 1;
      eb.insert(flatten(phi(n, e)));
    }
    if (target != M.dim(n) || eb.dim() != M.dim(n)) {
      rep.phi_iso = false;
      rep.failures.push_back("(a) Phi not bijective in degree " + std::to_string(n));
    }
    // (c) kernel maps isomorphically onto M-bar_n
    EchelonBasis kb(f, bar_cols[n].size());
    for (const auto& v : rep.kernel_basis[n]) kb.insert(bar(n, v));
    if (kb.dim() != rep.kernel_dims[n] || kb.dim() != bar_cols[n].size()) {
      rep.kernel_is_mbar = false;
      rep.failures.push_back("(c) kernel is not identified with M-bar in degree " + std::to_string(n));
    }
    for (std::size_t i = 0; i < M.dim(n); ++i) {
      Vec e(M.dim(n), 0);
      e[i] = 1;
      const auto pm = phi(n, e);
      // (b) Phi(nabla m) is Phi(m) with the blocks shifted down by one
      if (n >= s) {
        const auto pn = phi(n - s, apply(f, c.maps[n], e));
        for (std::size_t j = 0; j < pn.size(); ++j)
          if (pn[j] != pm[j + 1]) {
            rep.phi_intertwines = false;
            rep.failures.push_back("(b) Phi does not intertwine nabla in degree " + std::to_string(n));
            break;
          }
      }
      // (a) linearity: Phi(m x^[k]) = sum_j (nabla^j m)_0 (x) x^[j s] x^[k], for s | k
      for (std::size_t k = s; n + k <= N; k += s) {
        const auto lhs = phi(n + k, apply(f, M.act(n, k), e));
        std::vector<Vec> rhs(lhs.size());
        for (std::size_t j = 0; j < rhs.size(); ++j) rhs[j].assign(bar_cols[n + k - j * s].size(), 0);
        for (std::size_t j = 0; j < pm.size(); ++j) {
          const std::size_t jj = j + k / s;
          const Elem coeff = ctx.q_binomial(j * s + k, k);
          axpy(f, rhs[jj], coeff, pm[j]);
        }
        if (lhs != rhs) {
          rep.phi_linear = false;
          rep.failures.push_back("(a) Phi not linear for m in degree " + std::to_string(n) + ", k = " + std::to_string(k));
        }
      }
    }
  }
  if (!rep.kernel_tensor_iso) throw NotFree(rep.failures.front());
  return rep;
}

/// Sampled check of nabla^n(m a) = sum_i q^{(n-i)(deg a - i)} [n, i]_q nabla^{n-i}(m) d^i(a)
/// for a step-one connection, with random m and a = x^[k].
struct SampledReport {
  std::size_t checked = 0;
  std::size_t failures = 0;
  std::vector<std::string> witnesses;
  bool ok() const noexcept { return failures == 0; }
};

inline SampledReport iterated_connection_check(const GradedVectorData& M, const Connection& c, std::size_t n,
                                               std::size_t samples, std::uint64_t seed) {
  if (c.step != 1) throw std::invalid_argument("iterated_connection_check expects a step-one connection");
  const QContext& ctx = M.context();
  const PrimeField& f = ctx.field();
  const std::size_t N = M.truncation();
  std::mt19937_64 rng(seed);
  auto nabla_pow = [&](std::size_t deg, Vec v, std::size_t times) -> std::optional<Vec> {
    if (times > deg) return std::nullopt;
    for (std::size_t i = 0; i < times; ++i) v = apply(f, c.maps[deg - i], v);
    return v;
  };
  SampledReport rep;
  for (std::size_t t = 0; t < samples; ++t) {
    const std::size_t deg_m = rng() % (N + 1);
    const std::size_t k = rng() % (N - deg_m + 1);
    if (deg_m + k < n) continue;
    Vec m(M.dim(deg_m));
    for (auto& x : m) x = static_cast<Elem>(rng() % f.ell());
    const std::size_t target = deg_m + k - n;
    Vec lhs = *nabla_pow(deg_m + k, apply(f, M.act(deg_m, k), m), n);
    Vec rhs(M.dim(target), 0);
    for (std::size_t i = 0; i <= n && i <= k; ++i) {
      auto nm = nabla_pow(deg_m, m, n - i);
      if (!nm) continue;
      const std::size_t from = deg_m - (n - i);
      const std::int64_t e = static_cast<std::int64_t>(n - i) * (static_cast<std::int64_t>(k) - static_cast<std::int64_t>(i));
      const Elem qe = f.pow(ctx.q(), static_cast<std::uint64_t>(e));  // e >= 0 since i <= k
      axpy(f, rhs, f.mul(qe, ctx.q_binomial(n, i)), apply(f, M.act(from, k - i), *nm));
    }
    ++rep.checked;
    if (lhs != rhs) {
      ++rep.failures;
      if (rep.witnesses.size() < 5)
        rep.witnesses.push_back("deg m = " + std::to_string(deg_m) + ", a = x^[" + std::to_string(k) + "], n = " +
                                std::to_string(n));
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Bound calculators
// ---------------------------------------------------------------------------

inline std::size_t bound_homology_epsilon(std::size_t eps1, std::size_t eps2, std::size_t eps3, std::int64_t lam1,
                                          std::int64_t lam2, const QContext& ctx) {
  return std::max({eps1, eps2, eps3, fl(lam1, ctx), fl(lam2, ctx)}) + 1;
}

/// Page bound eps^t_{1+k} <= max(eps_1^{t-k..t+k}, fl^{t-k..t+k-1}) + k. Indices missing from the
/// supplied maps are absent terms; IndexOutOfWindow only when no term at all is available.
/// With k unset, uses the convergence window k = 2r + 1.
inline std::size_t bound_spectral_epsilon(std::int64_t r, std::int64_t t, const std::map<std::int64_t, std::size_t>& eps1,
                                          const std::map<std::int64_t, std::size_t>& fl_by_t,
                                          std::optional<std::int64_t> k = std::nullopt) {
  const std::int64_t kk = k.value_or(2 * r + 1);
  if (kk < 0) throw std::invalid_argument("negative page offset");
  std::optional<std::size_t> best;
  auto take = [&](const std::map<std::int64_t, std::size_t>& m, std::int64_t i) {
    auto it = m.find(i);
    if (it != m.end()) best = std::max(best.value_or(0), it->second);
  };
  for (std::int64_t i = t - kk; i <= t + kk; ++i) take(eps1, i);
  for (std::int64_t i = t - kk; i <= t + kk - 1; ++i) take(fl_by_t, i);
  if (!best) throw IndexOutOfWindow("no spectral data in the window around t = " + std::to_string(t));
  return *best + static_cast<std::size_t>(kk);
}

struct VIModBound {
  std::int64_t lambda_bound = 0;
  std::size_t epsilon_bound = 0;
  std::int64_t onset = 0;
  std::uint64_t period = 1;
};

inline VIModBound bound_vimod(std::int64_t t, std::int64_t t0, std::int64_t t1, std::int64_t delta, const QContext& ctx) {
  VIModBound b;
  if (ctx.q_int() == 2) {
    b.lambda_bound = 2 * t + delta;
    b.epsilon_bound = fl(2 * t + 7 * delta, ctx) + static_cast<std::size_t>(2 * delta + 1);
  } else {
    b.lambda_bound = t + delta;
    b.epsilon_bound = fl(t + 4 * delta, ctx) + static_cast<std::size_t>(2 * delta + 1);
  }
  b.onset = std::max(b.lambda_bound, t0 + t1);
  b.period = b_value(b.epsilon_bound, ctx);
  return b;
}

struct UnipotentBound {
  std::size_t s = 0;
  std::uint64_t period = 1;
  std::int64_t onset = 0;
};

inline UnipotentBound bound_unipotent(std::int64_t t, std::int64_t d, const QContext& ctx) {
  const std::int64_t target = ctx.q_int() == 2 ? 2 * t + 7 * d : t + 4 * d;
  const std::uint64_t w = ctx.w(), ell = ctx.ell();
  UnipotentBound u;
  std::uint64_t v = w;
  while (static_cast<std::int64_t>(v) < target) {
    v = detail::checked_mul(v, ell);
    ++u.s;
  }
  u.period = w;
  for (std::size_t i = 0; i < u.s + static_cast<std::size_t>(2 * d + 1); ++i) u.period = detail::checked_mul(u.period, ell);
  u.onset = std::max(d + 2 * t, 4 * d + 3);
  return u;
}

}  // namespace qdp
