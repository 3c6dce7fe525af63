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

// Flag permutation modules, the maps psi_{r,i}, unipotent Specht modules, and
// dimension-polynomial fitting.

#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cohomology.hpp"
#include "dmod.hpp"
#include "errors.hpp"
#include "gf.hpp"
#include "group.hpp"
#include "linalg.hpp"
#include "qarith.hpp"

namespace qdp {

using Rational = boost::multiprecision::cpp_rational;

/// A finite sequence of non-negative integers; trailing zeros are dropped.
struct Composition {
  std::vector<std::size_t> parts;

  Composition() = default;
  Composition(std::vector<std::size_t> p) : parts(std::move(p)) { normalize(); }  // NOLINT(implicit)
  Composition(std::initializer_list<std::size_t> p) : parts(p) { normalize(); }

  void normalize() {
    while (!parts.empty() && parts.back() == 0) parts.pop_back();
  }
  std::size_t size() const noexcept {
    std::size_t s = 0;
    for (auto p : parts) s += p;
    return s;
  }
  std::size_t length() const noexcept { return parts.size(); }
  /// 1-based part, zero past the end.
  std::size_t part(std::size_t r) const noexcept { return r >= 1 && r <= parts.size() ? parts[r - 1] : 0; }
  bool is_partition() const noexcept { return std::is_sorted(parts.rbegin(), parts.rend()); }
  Composition sorted() const {
    auto p = parts;
    std::sort(p.rbegin(), p.rend());
    return Composition(p);
  }
  /// mu[n] = (n - |mu|, mu).
  Composition shifted(std::size_t n) const {
    if (n < size()) throw std::invalid_argument("mu[n] needs n >= |mu|");
    std::vector<std::size_t> p{n - size()};
    p.insert(p.end(), parts.begin(), parts.end());
    return Composition(p);
  }
  /// mu^{r,i} = (mu_1, ..., mu_{r-1}, mu_r + mu_{r+1} - i, i, mu_{r+2}, ...).
  Composition replaced(std::size_t r, std::size_t i) const {
    std::vector<std::size_t> p(std::max(parts.size(), r + 1), 0);
    std::copy(parts.begin(), parts.end(), p.begin());
    const std::size_t merged = p[r - 1] + p[r];
    p[r - 1] = merged - i;
    p[r] = i;
    return Composition(p);
  }
  std::string to_string() const {
    std::string s;
    for (std::size_t k = 0; k < parts.size(); ++k) s += (k ? "," : "") + std::to_string(parts[k]);
    return s.empty() ? "()" : s;
  }
  static Composition parse(const std::string& text) {
    std::vector<std::size_t> p;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok.empty() || tok == "()") continue;
      if (tok.find_first_not_of("0123456789") != std::string::npos) throw ParseError("bad composition '" + text + "'");
      p.push_back(std::stoul(tok));
    }
    return Composition(p);
  }
  bool operator==(const Composition& o) const { return parts == o.parts; }
  bool operator<(const Composition& o) const { return parts < o.parts; }
};

/// Partitions of n in reverse lexicographic order.
inline std::vector<Composition> partitions_of(std::size_t n) {
  std::vector<Composition> out;
  std::vector<std::size_t> cur;
  auto rec = [&](auto&& self, std::size_t left, std::size_t max) -> void {
    if (left == 0) {
      out.emplace_back(cur);
      return;
    }
    for (std::size_t p = std::min(left, max); p >= 1; --p) {
      cur.push_back(p);
      self(self, left - p, p);
      cur.pop_back();
    }
  };
  rec(rec, n, n);
  return out;
}

/// K(mu) = {(r, i) | 2 <= r <= l(mu), 0 <= i <= mu_r - 1}, 1-based r.
inline std::vector<std::pair<std::size_t, std::size_t>> kernel_index_set(const Composition& mu) {
  std::vector<std::pair<std::size_t, std::size_t>> K;
  for (std::size_t r = 2; r <= mu.length(); ++r)
    for (std::size_t i = 0; i < mu.part(r); ++i) K.emplace_back(r, i);
  return K;
}

/// Number of flags of type mu in F_q^{|mu|}: a product of Gaussian binomials.
inline BigInt flag_count(const Composition& mu, std::uint64_t q) {
  BigInt c = 1;
  std::size_t rest = mu.size();
  for (auto p : mu.parts) {
    c *= q_binomial_integer(rest, p, q);
    rest -= p;
  }
  return c;
}

/// All subspaces of F_q^d in reduced row-echelon form; vectors are codes with coordinate j as digit j.
class SubspaceLattice {
 public:
  SubspaceLattice(std::size_t d, std::uint32_t q) : d_(d), F_(q) {
    for (std::size_t k = 0; k <= d; ++k) enumerate(k);
  }

  std::size_t ambient_dim() const noexcept { return d_; }
  const SmallField& field() const noexcept { return F_; }
  std::size_t count() const noexcept { return spaces_.size(); }
  std::size_t dim(std::size_t id) const { return spaces_[id].size(); }
  const std::vector<Code>& basis(std::size_t id) const { return spaces_[id]; }
  std::size_t zero() const { return of_dim_[0][0]; }
  std::size_t full() const { return of_dim_[d_][0]; }
  const std::vector<std::size_t>& of_dim(std::size_t k) const { return of_dim_[k]; }

  std::vector<std::uint32_t> digits(Code v) const {
    std::vector<std::uint32_t> x(d_);
    for (std::size_t j = 0; j < d_; ++j) {
      x[j] = static_cast<std::uint32_t>(v % F_.size());
      v /= F_.size();
    }
    return x;
  }
  Code code(const std::vector<std::uint32_t>& x) const {
    Code c = 0;
    for (std::size_t j = d_; j-- > 0;) c = c * F_.size() + x[j];
    return c;
  }

  /// Canonical id of the span of the given vectors.
  std::size_t span(const std::vector<Code>& vs) const {
    std::vector<std::vector<std::uint32_t>> rows;
    for (Code v : vs) rows.push_back(digits(v));
    std::vector<std::vector<std::uint32_t>> ech;
    std::size_t lead = 0;
    for (std::size_t col = 0; col < d_ && lead < rows.size(); ++col) {
      std::size_t piv = lead;
      while (piv < rows.size() && rows[piv][col] == 0) ++piv;
      if (piv == rows.size()) continue;
      std::swap(rows[piv], rows[lead]);
      const std::uint32_t inv = F_.inv(rows[lead][col]);
      for (auto& x : rows[lead]) x = F_.mul(x, inv);
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (r == lead || rows[r][col] == 0) continue;
        const std::uint32_t c = rows[r][col];
        for (std::size_t j = 0; j < d_; ++j) rows[r][j] = F_.sub(rows[r][j], F_.mul(c, rows[lead][j]));
      }
      ++lead;
    }
    std::vector<Code> key;
    for (std::size_t r = 0; r < lead; ++r) key.push_back(code(rows[r]));
    return index_.at(key);
  }

  bool contains(std::size_t big, std::size_t small) const {
    if (dim(small) > dim(big)) return false;
    std::vector<Code> both = spaces_[big];
    both.insert(both.end(), spaces_[small].begin(), spaces_[small].end());
    return span(both) == big;
  }

  /// Subspaces W with lower <= W <= upper and dim W = k.
  const std::vector<std::size_t>& between(std::size_t lower, std::size_t upper, std::size_t k) const {
    auto key = std::make_tuple(lower, upper, k);
    {
      std::lock_guard<std::mutex> lock(between_mu_);
      auto it = between_.find(key);
      if (it != between_.end()) return it->second;
    }
    std::vector<std::size_t> out;
    if (k <= d_)
      for (std::size_t w : of_dim_[k])
        if (contains(upper, w) && contains(w, lower)) out.push_back(w);
    std::lock_guard<std::mutex> lock(between_mu_);
    return between_.emplace(key, std::move(out)).first->second;
  }

  /// Image of a subspace under the matrix g (acting on column vectors).
  std::size_t act(const MatrixAmbient& amb, Code g, std::size_t id) const {
    const auto m = amb.decode(g);
    std::vector<Code> img;
    for (Code v : spaces_[id]) {
      const auto x = digits(v);
      std::vector<std::uint32_t> y(d_, 0);
      for (std::size_t i = 0; i < d_; ++i)
        for (std::size_t j = 0; j < d_; ++j) y[i] = F_.add(y[i], F_.mul(m[i * d_ + j], x[j]));
      img.push_back(code(y));
    }
    return span(img);
  }

 private:
  void enumerate(std::size_t k) {
    if (of_dim_.size() <= k) of_dim_.resize(k + 1);
    std::vector<std::size_t> piv(k);
    std::function<void(std::size_t, std::size_t)> choose = [&](std::size_t r, std::size_t from) {
      if (r == k) {
        fill(piv);
        return;
      }
      for (std::size_t c = from; c < d_; ++c) {
        piv[r] = c;
        choose(r + 1, c + 1);
      }
    };
    choose(0, 0);
  }

  void fill(const std::vector<std::size_t>& piv) {
    const std::size_t k = piv.size();
    std::vector<std::pair<std::size_t, std::size_t>> free;
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t c = piv[r] + 1; c < d_; ++c)
        if (std::find(piv.begin(), piv.end(), c) == piv.end()) free.emplace_back(r, c);
    std::vector<std::uint32_t> vals(free.size(), 0);
    while (true) {
      std::vector<std::vector<std::uint32_t>> rows(k, std::vector<std::uint32_t>(d_, 0));
      for (std::size_t r = 0; r < k; ++r) rows[r][piv[r]] = 1;
      for (std::size_t f = 0; f < free.size(); ++f) rows[free[f].first][free[f].second] = vals[f];
      std::vector<Code> key;
      for (const auto& row : rows) key.push_back(code(row));
      index_.emplace(key, spaces_.size());
      of_dim_[k].push_back(spaces_.size());
      spaces_.push_back(std::move(key));
      std::size_t f = 0;
      while (f < vals.size() && ++vals[f] == F_.size()) vals[f++] = 0;
      if (f == vals.size()) break;
    }
  }

  std::size_t d_;
  SmallField F_;
  std::vector<std::vector<Code>> spaces_;
  std::vector<std::vector<std::size_t>> of_dim_;
  std::map<std::vector<Code>, std::size_t> index_;
  mutable std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::vector<std::size_t>> between_;
  mutable std::mutex between_mu_;
};

/// Shared lattice per (d, q).
inline std::shared_ptr<const SubspaceLattice> subspace_lattice(std::size_t d, std::uint32_t q) {
  static std::mutex mu;
  static std::map<std::pair<std::size_t, std::uint32_t>, std::shared_ptr<const SubspaceLattice>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& L = cache[{d, q}];
  if (!L) L = std::make_shared<SubspaceLattice>(d, q);
  return L;
}

/// A flag V_0 = F_q^d >= V_1 >= ... >= V_l = 0, stored as lattice ids of V_0, ..., V_l.
using Flag = std::vector<std::size_t>;

/// The permutation module of GL_d(F_q) on flags of type mu, over F_ell.
class FlagModule {
 public:
  FlagModule(Composition mu, std::uint32_t q, std::uint32_t ell) : mu_(std::move(mu)), q_(q), f_(ell) {
    if (flag_count(mu_, q) > BigInt(group_budget()))
      throw BudgetExceeded("P_(" + mu_.to_string() + ") at q=" + std::to_string(q) + " has too many flags");
    L_ = subspace_lattice(mu_.size(), q);
    Flag fl{L_->full()};
    enumerate(fl, 1, mu_.size());
  }

  const Composition& mu() const noexcept { return mu_; }
  std::uint32_t q() const noexcept { return q_; }
  const PrimeField& field() const noexcept { return f_; }
  const SubspaceLattice& lattice() const noexcept { return *L_; }
  std::size_t dim() const noexcept { return flags_.size(); }
  const Flag& flag(std::size_t k) const { return flags_[k]; }
  std::optional<std::size_t> index(const Flag& fl) const {
    auto it = index_.find(fl);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Permutation of flags induced by g in GL_d(F_q).
  std::vector<std::size_t> permutation(const MatrixAmbient& amb, Code g) const {
    std::vector<std::size_t> out(flags_.size());
    for (std::size_t k = 0; k < flags_.size(); ++k) {
      Flag img;
      for (std::size_t v : flags_[k]) img.push_back(L_->act(amb, g, v));
      out[k] = index_.at(img);
    }
    return out;
  }

 private:
  void enumerate(Flag& fl, std::size_t r, std::size_t dim) {
    if (r > mu_.length()) {
      index_.emplace(fl, flags_.size());
      flags_.push_back(fl);
      return;
    }
    const std::size_t next = dim - mu_.part(r);
    for (std::size_t w : L_->between(L_->zero(), fl.back(), next)) {
      fl.push_back(w);
      enumerate(fl, r + 1, next);
      fl.pop_back();
    }
  }

  Composition mu_;
  std::uint32_t q_;
  PrimeField f_;
  std::shared_ptr<const SubspaceLattice> L_;
  std::vector<Flag> flags_;
  std::map<Flag, std::size_t> index_;
};

using SparseRows = std::vector<std::vector<std::pair<std::uint32_t, Elem>>>;

/// psi_{r,i}: P_mu -> P_{mu^{r,i}}, replacing V_r by every W with V_{r+1} <= W <= V_r and dim W/V_{r+1} = i.
/// Rows are indexed by target flags.
inline SparseRows psi_sparse(const FlagModule& P, std::size_t r, std::size_t i, const FlagModule& target) {
  const Composition& mu = P.mu();
  if (r < 1 || r > mu.length() || i > mu.part(r + 1))
    throw IndexOutOfRange("psi_{" + std::to_string(r) + "," + std::to_string(i) + "} on (" + mu.to_string() + ")");
  if (!(target.mu() == mu.replaced(r, i)) || target.q() != P.q())
    throw RelationMismatch("psi target must be P_(" + mu.replaced(r, i).to_string() + ")");
  const auto& L = P.lattice();
  SparseRows rows(target.dim());
  const std::size_t len = target.mu().length();
  for (std::size_t k = 0; k < P.dim(); ++k) {
    Flag fl = P.flag(k);
    while (fl.size() < r + 2) fl.push_back(L.zero());
    const std::size_t lower = fl[r + 1];
    for (std::size_t w : L.between(lower, fl[r], L.dim(lower) + i)) {
      Flag img = fl;
      img[r] = w;
      img.resize(len + 1);
      rows[target.index(img).value()].emplace_back(static_cast<std::uint32_t>(k), 1);
    }
  }
  return rows;
}

/// psi_{r,i} as a (dim target) x (dim source) matrix over F_ell.
inline Matrix psi_map(const FlagModule& P, std::size_t r, std::size_t i, const FlagModule& target) {
  const auto& f = P.field();
  const SparseRows rows = psi_sparse(P, r, i, target);
  Matrix M(target.dim(), P.dim());
  for (std::size_t j = 0; j < rows.size(); ++j)
    for (auto [k, v] : rows[j]) M(j, k) = f.add(M(j, k), v);
  return M;
}

inline Matrix psi_map(const Composition& mu, std::size_t r, std::size_t i, std::uint32_t q, std::uint32_t ell) {
  if (r < 1 || r > mu.length() || i > mu.part(r + 1))
    throw IndexOutOfRange("psi_{" + std::to_string(r) + "," + std::to_string(i) + "} on (" + mu.to_string() + ")");
  return psi_map(FlagModule(mu, q, ell), r, i, FlagModule(mu.replaced(r, i), q, ell));
}

/// The unipotent Specht module inside P_mu: the intersection of ker psi_{r-1,i} over (r, i) in K.
class SpechtModule {
 public:
  /// K defaults to K(mu); pass the index set of another composition (e.g. K(mu[d])) for VI-module levels.
  SpechtModule(const Composition& mu, std::uint32_t q, std::uint32_t ell,
               std::optional<std::vector<std::pair<std::size_t, std::size_t>>> K = std::nullopt)
      : P_(std::make_shared<FlagModule>(mu, q, ell)) {
    const auto& f = P_->field();
    const auto idx = K ? *K : kernel_index_set(mu);
    Matrix stacked(0, P_->dim());
    for (auto [r, i] : idx) {
      const Matrix psi = psi_map(*P_, r - 1, i, FlagModule(mu.replaced(r - 1, i), q, ell));
      Matrix next(stacked.rows + psi.rows, P_->dim());
      std::copy(stacked.data.begin(), stacked.data.end(), next.data.begin());
      std::copy(psi.data.begin(), psi.data.end(), next.data.begin() + static_cast<std::ptrdiff_t>(stacked.data.size()));
      stacked = std::move(next);
    }
    basis_ = idx.empty() ? Matrix::identity(P_->dim()) : nullspace(f, stacked);
    coords_ = std::make_shared<CoordinateSystem>(f, P_->dim(), rows());
    for (auto [r, i] : idx) tag_ += std::to_string(r) + ":" + std::to_string(i) + ";";
  }

  const FlagModule& flags() const noexcept { return *P_; }
  std::size_t dim() const noexcept { return basis_.rows; }
  const Matrix& basis() const noexcept { return basis_; }
  std::vector<Vec> rows() const {
    std::vector<Vec> out;
    for (std::size_t k = 0; k < basis_.rows; ++k) out.push_back(basis_.row_vec(k));
    return out;
  }

  /// Matrix of g on the module in the kernel basis.
  Matrix act(const MatrixAmbient& amb, Code g) const {
    const auto perm = P_->permutation(amb, g);
    Matrix m(dim(), dim());
    for (std::size_t j = 0; j < dim(); ++j) {
      Vec img(P_->dim(), 0);
      for (std::size_t k = 0; k < P_->dim(); ++k) img[perm[k]] = basis_(j, k);
      m.set_col(j, coords_->coordinates(img).value());
    }
    return m;
  }

  /// The module as coefficients for GL_d(F_q) built on the shared ambient.
  GModule as_gmodule() const {
    GModule V;
    V.dim = dim();
    const Composition& mu = P_->mu();
    V.id = "specht(" + mu.to_string() + ")@q" + std::to_string(P_->q()) + "/K" + tag_;
    auto amb = matrix_ambient(mu.size(), P_->q());
    auto self = std::make_shared<SpechtModule>(*this);
    V.rho = [self, amb](Code c) { return self->act(*amb, c); };
    return V;
  }

 private:
  std::shared_ptr<FlagModule> P_;
  Matrix basis_;
  std::shared_ptr<CoordinateSystem> coords_;
  std::string tag_;
};

/// Dimension of the kernel intersection without building a basis (sparse rank).
inline std::size_t specht_kernel_dim(const Composition& mu, std::uint32_t q, std::uint32_t ell,
                                     std::optional<std::vector<std::pair<std::size_t, std::size_t>>> K = std::nullopt) {
  const FlagModule P(mu, q, ell);
  SparseRows rows;
  for (auto [r, i] : K ? *K : kernel_index_set(mu)) {
    SparseRows psi = psi_sparse(P, r - 1, i, FlagModule(mu.replaced(r - 1, i), q, ell));
    for (auto& row : psi) rows.push_back(std::move(row));
  }
  return P.dim() - sparse_rank(P.field(), std::move(rows));
}

/// dim M_mu for a partition mu, by exact elimination.
inline std::size_t specht_dim(const Composition& mu, std::uint32_t q, std::uint32_t ell) {
  if (!mu.is_partition()) throw NotAPartition("(" + mu.to_string() + ") is not weakly decreasing");
  return specht_kernel_dim(mu, q, ell);
}

struct SeriesEntry {
  std::size_t n = 0;
  std::optional<std::size_t> dim;  // empty when skipped
  std::size_t module_dim = 0;
  std::string note;
};

struct SpechtSeries {
  Composition mu;
  std::size_t t = 0;
  std::vector<SeriesEntry> entries;
  UnipotentBound bound;
};

/// n -> dim H^t(GL_n(F_q), M_{mu[n]}), where M_{mu[n]} is cut out by K(mu[|mu|]) so that
/// every n >= |mu| gives the VI-module level. Levels beyond the group budget are reported as skipped.
inline SpechtSeries specht_cohomology_series(const Composition& mu, std::size_t t, std::size_t nmin, std::size_t nmax,
                                             const QContext& ctx, EnginePtr E = nullptr) {
  if (!E) E = std::make_shared<CohomologyEngine>(ctx.ell());
  SpechtSeries out;
  out.mu = mu;
  out.t = t;
  out.bound = bound_unipotent(static_cast<std::int64_t>(t), static_cast<std::int64_t>(mu.size()), ctx);
  const auto K = kernel_index_set(mu.shifted(mu.size()));
  const auto q = static_cast<std::uint32_t>(ctx.q_int());
  for (std::size_t n = std::max(nmin, mu.size()); n <= nmax; ++n) {
    SeriesEntry e;
    e.n = n;
    try {
      const SpechtModule M(mu.shifted(n), q, ctx.ell(), K);
      e.module_dim = M.dim();
      GroupCohomology H(E, general_linear(n, q), M.as_gmodule());
      e.dim = H.dim(t);
    } catch (const BudgetExceeded& err) {
      e.note = err.what();
    }
    out.entries.push_back(std::move(e));
  }
  return out;
}

/// A polynomial in X = q^n with rational coefficients, valid from n = onset on.
struct DimensionPolynomial {
  std::vector<Rational> coeffs;  // ascending powers of X
  std::size_t degree = 0;
  std::size_t onset = 0;
  std::uint64_t q = 0;

  Rational eval(const Rational& X) const {
    Rational v = 0;
    for (std::size_t k = coeffs.size(); k-- > 0;) v = v * X + coeffs[k];
    return v;
  }
  Rational at(std::size_t n) const {
    BigInt X = 1;
    for (std::size_t k = 0; k < n; ++k) X *= q;
    return eval(Rational(X));
  }
  std::string to_string() const {
    std::string s;
    for (std::size_t k = coeffs.size(); k-- > 0;) {
      if (coeffs[k] == 0) continue;
      std::string c = coeffs[k].str();
      if (!s.empty()) s += c[0] == '-' ? " - " : " + ";
      else if (c[0] == '-') s += "-";
      if (c[0] == '-') c.erase(0, 1);
      if (k == 0 || c != "1") s += c + (k ? "*" : "");
      if (k) s += k == 1 ? "X" : "X^" + std::to_string(k);
    }
    return s.empty() ? "0" : s;
  }
};

/// Least-degree exact interpolant in X = q^n of the tail of the series.
inline DimensionPolynomial fit_dimension_polynomial(std::vector<std::pair<std::size_t, BigInt>> series, std::uint64_t q) {
  std::sort(series.begin(), series.end());
  series.erase(std::unique(series.begin(), series.end(),
                           [](const auto& a, const auto& b) { return a.first == b.first; }),
               series.end());
  const std::size_t P = series.size();
  if (P < 2) throw NoStablePolynomial("need at least two points");
  auto X = [&](std::size_t n) {
    BigInt x = 1;
    for (std::size_t k = 0; k < n; ++k) x *= q;
    return Rational(x);
  };
  for (std::size_t deg = 0; deg + 2 <= P; ++deg) {
    // Newton interpolation through the last deg + 1 points
    const std::size_t first = P - deg - 1;
    std::vector<Rational> xs, dd;
    for (std::size_t k = first; k < P; ++k) {
      xs.push_back(X(series[k].first));
      dd.push_back(Rational(series[k].second));
    }
    for (std::size_t lvl = 1; lvl <= deg; ++lvl)
      for (std::size_t k = deg; k >= lvl; --k) dd[k] = (dd[k] - dd[k - 1]) / (xs[k] - xs[k - lvl]);
    std::vector<Rational> coeffs{dd[deg]};
    for (std::size_t k = deg; k-- > 0;) {
      // coeffs <- coeffs * (X - xs[k]) + dd[k]
      std::vector<Rational> next(coeffs.size() + 1, 0);
      for (std::size_t j = 0; j < coeffs.size(); ++j) {
        next[j + 1] += coeffs[j];
        next[j] -= coeffs[j] * xs[k];
      }
      next[0] += dd[k];
      coeffs = std::move(next);
    }
    while (coeffs.size() > 1 && coeffs.back() == 0) coeffs.pop_back();
    DimensionPolynomial p;
    p.coeffs = coeffs;
    p.degree = coeffs.size() - 1;
    p.q = q;
    if (p.at(series[first - 1].first) != Rational(series[first - 1].second)) continue;
    std::size_t start = first - 1;
    while (start > 0 && p.at(series[start - 1].first) == Rational(series[start - 1].second)) --start;
    p.onset = series[start].first;
    return p;
  }
  throw NoStablePolynomial("no interpolant of degree <= " + std::to_string(P - 2) + " matches the tail");
}

}  // namespace qdp
