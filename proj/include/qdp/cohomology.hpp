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

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "field.hpp"
#include "group.hpp"
#include "linalg.hpp"
#include "resolution.hpp"

namespace qdp {

/// Coefficient module: a representation on the codes of an ambient. A null rho is trivial.
struct GModule {
  std::size_t dim = 1;
  std::function<Matrix(Code)> rho;
  std::string id = "triv";

  bool trivial() const { return !rho; }
  Matrix act(Code c) const { return rho ? rho(c) : Matrix::identity(dim); }

  static GModule trivial_module(std::size_t dim = 1) {
    GModule V;
    V.dim = dim;
    V.id = "triv" + std::to_string(dim);
    return V;
  }
};

/// The character g -> omega^(log det g) of GL_N(F_q) with values in F_ell, where omega has the
/// largest order dividing both q - 1 and ell - 1, raised to the given power.
inline GModule det_character(std::shared_ptr<const MatrixAmbient> amb, const PrimeField& f, std::uint64_t power = 1) {
  const SmallField& F = amb->field();
  const std::uint32_t q = F.size();
  std::uint32_t gen = 0;
  for (std::uint32_t a = 1; a < q && !gen; ++a) {
    std::uint32_t x = a, k = 1;
    while (x != 1) {
      x = F.mul(x, a);
      ++k;
    }
    if (k == q - 1) gen = a;
  }
  std::vector<std::uint32_t> log(q, 0);
  for (std::uint32_t x = 1, k = 0; k + 1 < q; x = F.mul(x, gen), ++k) log[x] = k;
  const std::uint64_t o = std::gcd<std::uint64_t>(q - 1, f.ell() - 1);
  Elem omega = 1;
  for (Elem w = 1; w < f.ell(); ++w) {
    Elem x = w;
    std::uint64_t k = 1;
    while (x != 1) {
      x = f.mul(x, w);
      ++k;
    }
    if (k == o) {
      omega = w;
      break;
    }
  }
  GModule V;
  V.dim = 1;
  V.id = "det^" + std::to_string(power) + "@" + std::to_string(reinterpret_cast<std::uintptr_t>(amb.get()));
  V.rho = [amb, f, omega, log, power](Code c) {
    Matrix m(1, 1);
    m(0, 0) = f.pow(omega, static_cast<std::uint64_t>(log[amb->det(c)]) * power);
    return m;
  };
  return V;
}

/// Cohomology H^t(P; V) of an ell-group through its minimal resolution. Cochains in degree t
/// are V^{rank(t)}: coordinate i * dim V + a holds component a of u(e_i).
class PCohomology {
 public:
  PCohomology(std::shared_ptr<const MinimalResolution> R, GModule V)
      : R_(std::move(R)), V_(std::move(V)), f_(R_->field()) {
    const auto& P = R_->group();
    for (Index g = 0; g < P.order(); ++g) {
      rho_.push_back(V_.act(P.code(g)));
      if (rho_.back() != Matrix::identity(V_.dim)) trivial_ = false;
    }
  }

  const MinimalResolution& resolution() const { return *R_; }
  const std::shared_ptr<const MinimalResolution>& resolution_ptr() const { return R_; }
  const FiniteGroup& group() const { return R_->group(); }
  const GModule& module() const { return V_; }
  const PrimeField& field() const { return f_; }
  bool trivial_action() const { return trivial_; }
  const Matrix& rho(Index g) const { return rho_[g]; }
  std::size_t cochain_dim(std::size_t t) const { return R_->rank(t) * V_.dim; }

  std::size_t dim(std::size_t t) const { return level(t).reps.size(); }

  /// Cochain representing the class with the given coordinates.
  Vec cochain(std::size_t t, const Vec& coords) const {
    const auto& L = level(t);
    Vec u(cochain_dim(t), 0);
    for (std::size_t k = 0; k < coords.size(); ++k) axpy(f_, u, coords[k], L.reps[k]);
    return u;
  }

  /// Coordinates of the class of a cocycle.
  Vec coords(std::size_t t, const Vec& u) const {
    const auto& L = level(t);
    if (!trivial_ && !is_zero(coboundary(t, u))) throw std::logic_error("cochain is not a cocycle");
    if (trivial_) return u;
    auto c = L.basis->coordinates(u);
    if (!c) throw std::logic_error("cocycle outside the computed cocycle space");
    return Vec(c->begin() + static_cast<std::ptrdiff_t>(L.boundary_dim), c->end());
  }

  /// u(x) in V for x in degree t of the resolution.
  Vec evaluate(std::size_t t, const Vec& u, const Vec& x) const {
    Vec out(V_.dim, 0);
    const std::size_t n = group().order(), d = V_.dim;
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (!x[k]) continue;
      const std::size_t i = k / n;
      const Index g = static_cast<Index>(k % n);
      for (std::size_t a = 0; a < d; ++a) {
        Elem s = 0;
        for (std::size_t b = 0; b < d; ++b) s = f_.fma(s, rho_[g](a, b), u[i * d + b]);
        out[a] = f_.fma(out[a], x[k], s);
      }
    }
    (void)t;
    return out;
  }

  Vec coboundary(std::size_t t, const Vec& u) const {
    R_->ensure(t + 1);
    Vec out(cochain_dim(t + 1), 0);
    for (std::size_t j = 0; j < R_->rank(t + 1); ++j) {
      const Vec v = evaluate(t, u, R_->boundary(t + 1, j));
      for (std::size_t a = 0; a < V_.dim; ++a) out[j * V_.dim + a] = v[a];
    }
    return out;
  }

 private:
  struct Level {
    std::vector<Vec> reps;
    std::size_t boundary_dim = 0;
    std::unique_ptr<EchelonBasis> basis;
  };

  const Level& level(std::size_t t) const {
    while (levels_.size() <= t) build(levels_.size());
    return levels_[t];
  }

  Matrix coboundary_matrix(std::size_t t) const {
    Matrix D(cochain_dim(t + 1), cochain_dim(t));
    for (std::size_t c = 0; c < cochain_dim(t); ++c) {
      Vec e(cochain_dim(t), 0);
      e[c] = 1;
      D.set_col(c, coboundary(t, e));
    }
    return D;
  }

  void build(std::size_t t) const {
    Level L;
    const std::size_t n = cochain_dim(t);
    if (trivial_) {
      for (std::size_t c = 0; c < n; ++c) {
        Vec e(n, 0);
        e[c] = 1;
        L.reps.push_back(std::move(e));
      }
      levels_.push_back(std::move(L));
      return;
    }
    L.basis = std::make_unique<EchelonBasis>(f_, n, true);
    if (t > 0) {
      const Matrix B = coboundary_matrix(t - 1);
      for (std::size_t c = 0; c < B.cols; ++c)
        if (L.basis->insert(B.col_vec(c))) ++L.boundary_dim;
    }
    const Matrix Z = nullspace(f_, coboundary_matrix(t));
    for (std::size_t r = 0; r < Z.rows; ++r) {
      Vec z = Z.row_vec(r);
      if (L.basis->insert(z)) L.reps.push_back(std::move(z));
    }
    levels_.push_back(std::move(L));
  }

  std::shared_ptr<const MinimalResolution> R_;
  GModule V_;
  PrimeField f_;
  std::vector<Matrix> rho_;
  bool trivial_ = true;
  mutable std::vector<Level> levels_;
};

/// Shared caches for resolutions, chain maps and double cosets at one prime.
class CohomologyEngine {
 public:
  explicit CohomologyEngine(std::uint32_t ell) : f_(ell) {}

  const PrimeField& field() const noexcept { return f_; }
  std::uint32_t ell() const noexcept { return f_.ell(); }

  /// Canonical shared copy of an ell-group.
  GroupPtr intern(GroupPtr P) {
    auto key = P->key();
    auto it = groups_.find(key);
    if (it != groups_.end()) return it->second;
    groups_.emplace(key, P);
    return P;
  }

  std::shared_ptr<const MinimalResolution> resolution(const GroupPtr& P) {
    auto key = P->key();
    auto it = res_.find(key);
    if (it != res_.end()) return it->second;
    auto R = std::make_shared<MinimalResolution>(intern(P), f_);
    res_.emplace(key, R);
    return R;
  }

  std::shared_ptr<const PCohomology> pcoh(const GroupPtr& P, const GModule& V) {
    auto key = P->key() + "|" + V.id;
    auto it = pcoh_.find(key);
    if (it != pcoh_.end()) return it->second;
    auto C = std::make_shared<PCohomology>(resolution(P), V);
    pcoh_.emplace(key, C);
    return C;
  }

  /// Chain map between minimal resolutions covering phi: Q -> P (given on indices).
  std::shared_ptr<const ChainMap> chain_map(const GroupPtr& Q, const GroupPtr& P, const std::vector<Index>& phi,
                                            std::size_t t) {
    std::string key = Q->key() + ">" + P->key() + ">";
    for (Index i : phi) key += std::to_string(i) + ",";
    auto it = maps_.find(key);
    if (it != maps_.end() && it->second.second >= t) return it->second.first;
    const std::size_t deg = std::max<std::size_t>(t, 2);
    auto src = resolution(Q);
    auto m = std::make_shared<ChainMap>(as_source(*src, deg), resolution(P), phi);
    maps_[key] = {m, deg};
    return m;
  }

  /// Chain map from the resolution of P, restricted to R, onto the resolution of R.
  struct Restricted {
    RightCosets cosets;
    std::shared_ptr<const ChainMap> map;
    std::size_t degree;
  };
  const Restricted& restricted(const GroupPtr& P, const GroupPtr& R, std::size_t t) {
    auto key = P->key() + "/" + R->key();
    auto it = restricted_.find(key);
    if (it != restricted_.end() && it->second.degree >= t) return it->second;
    const std::size_t deg = std::max<std::size_t>(t, 2);
    Restricted r;
    r.cosets = right_cosets(*P, *R);
    std::vector<Index> id(R->order());
    std::iota(id.begin(), id.end(), Index{0});
    r.map = std::make_shared<ChainMap>(restricted_source(*resolution(P), intern(R), r.cosets, deg), resolution(R), id);
    r.degree = deg;
    restricted_[key] = std::move(r);
    return restricted_[key];
  }

  /// External product P1 x P2 of two ell-groups with its tensor complex.
  struct Product {
    GroupPtr group;
    std::shared_ptr<const TensorComplex> tensor;
    std::shared_ptr<const ChainMap> map;  // resolution of the product onto the tensor complex
    std::size_t degree = 0;
  };
  const Product& product(const GroupPtr& A, const GroupPtr& B, std::size_t t) {
    auto key = A->key() + "*" + B->key();
    auto& p = products_[key];
    if (!p.group) p.group = intern(direct_product(*A, *B, code_bound(*A->ambient())));
    if (!p.tensor || p.degree < t) {
      p.tensor = std::make_shared<TensorComplex>(p.group, *resolution(A), *resolution(B), t);
      std::vector<Index> id(p.group->order());
      std::iota(id.begin(), id.end(), Index{0});
      p.map = std::make_shared<ChainMap>(as_source(*resolution(p.group), t), p.tensor, id);
      p.degree = t;
    }
    return p;
  }

  const std::vector<DoubleCoset>& double_cosets_cached(const FiniteGroup& G, const FiniteGroup& P,
                                                        const FiniteGroup& H) {
    auto key = G.fingerprint() + "|" + P.fingerprint() + "|" + H.fingerprint();
    auto it = dcs_.find(key);
    if (it != dcs_.end()) return it->second;
    return dcs_[key] = double_cosets(G, P, H);
  }

 private:
  PrimeField f_;
  std::map<std::string, GroupPtr> groups_;
  std::map<std::string, std::shared_ptr<const MinimalResolution>> res_;
  std::map<std::string, std::shared_ptr<const PCohomology>> pcoh_;
  std::map<std::string, std::pair<std::shared_ptr<const ChainMap>, std::size_t>> maps_;
  std::map<std::string, Restricted> restricted_;
  std::map<std::string, Product> products_;
  std::map<std::string, std::vector<DoubleCoset>> dcs_;

 public:
  /// Memo table for conjugator searches.
  std::map<std::string, std::optional<Code>> conjugators;
};

using EnginePtr = std::shared_ptr<CohomologyEngine>;

/// H^*(G; V) as the stable classes in the cohomology of a Sylow subgroup.
class GroupCohomology {
 public:
  GroupCohomology(EnginePtr E, GroupPtr G, GModule V, GroupPtr sylow = nullptr)
      : E_(std::move(E)), G_(std::move(G)), V_(std::move(V)) {
    if (!sylow) sylow = sylow_subgroup(*G_, E_->ell());
    if (!sylow->is_subgroup_of(*G_)) throw HypothesisViolated("the chosen Sylow subgroup is not inside " + G_->label());
    std::size_t n = G_->order() / sylow->order();
    if (G_->order() % sylow->order() != 0 || n % E_->ell() == 0)
      throw HypothesisViolated("the chosen subgroup is not a Sylow subgroup of " + G_->label());
    P_ = E_->intern(sylow);
    pc_ = E_->pcoh(P_, V_);
  }

  const EnginePtr& engine() const { return E_; }
  const FiniteGroup& group() const { return *G_; }
  const GroupPtr& group_ptr() const { return G_; }
  const GroupPtr& sylow() const { return P_; }
  const PCohomology& sylow_cohomology() const { return *pc_; }
  const GModule& module() const { return V_; }
  const PrimeField& field() const { return E_->field(); }
  bool is_ell_group() const { return P_->order() == G_->order(); }

  std::size_t dim(std::size_t t) const { return stable(t).basis.size(); }

  /// Basis of the stable subspace, in coordinates of H^t(P).
  const std::vector<Vec>& stable_basis(std::size_t t) const { return stable(t).basis; }

  /// The idempotent [G:P]^{-1} res cor on H^t(P).
  const Matrix& idempotent(std::size_t t) const { return stable(t).e; }

  Vec to_sylow(std::size_t t, const Vec& c) const {
    const auto& S = stable(t);
    Vec v(pc_->dim(t), 0);
    for (std::size_t k = 0; k < c.size(); ++k) axpy(field(), v, c[k], S.basis[k]);
    return v;
  }

  Vec from_sylow(std::size_t t, const Vec& v) const {
    auto c = stable(t).coords->coordinates(v);
    if (!c) throw std::logic_error("class is not stable in " + G_->label());
    return *c;
  }

  bool is_stable(std::size_t t, const Vec& v) const { return stable(t).coords->coordinates(v).has_value(); }

  /// Cochain on the Sylow subgroup representing the class c.
  Vec cochain(std::size_t t, const Vec& c) const { return pc_->cochain(t, to_sylow(t, c)); }

 private:
  struct Stable {
    std::vector<Vec> basis;
    Matrix e;
    std::unique_ptr<CoordinateSystem> coords;
  };
  const Stable& stable(std::size_t t) const;

  EnginePtr E_;
  GroupPtr G_, P_;
  GModule V_;
  std::shared_ptr<const PCohomology> pc_;
  mutable std::vector<Stable> stable_;
};

using CohomologyPtr = std::shared_ptr<const GroupCohomology>;

namespace detail {

inline Matrix vec_to_col(const Vec& v) {
  Matrix m(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
  return m;
}

/// h in H with h S h^{-1} inside P for the given codes S, identity first.
inline std::optional<Code> conjugator_into(const FiniteGroup& H, const FiniteGroup& P, const std::vector<Code>& S) {
  const auto& amb = *H.ambient();
  auto works = [&](Code h) {
    const Code hi = amb.inv(h);
    for (Code s : S)
      if (!P.contains(amb.mul(amb.mul(h, s), hi))) return false;
    return true;
  };
  if (works(amb.identity())) return amb.identity();
  for (Code h : H.codes())
    if (works(h)) return h;
  return std::nullopt;
}

}  // namespace detail

/// Pulls a class of H^t(P_H) (given by coordinates) back along theta: K -> H, landing on the
/// ell-group PK, with coefficient map alpha: V_H -> V_K. Returns coordinates in H^t(PK).
inline Vec pull_rep(const GroupCohomology& H, const GroupPtr& PK, const GModule& VK, const std::function<Code(Code)>& theta,
                    const Matrix& alpha, std::size_t t, const Vec& rep) {
  auto& E = *H.engine();
  const auto& f = E.field();
  const auto& PH = *H.sylow();
  std::vector<Code> images;
  for (Code x : PK->generator_codes()) images.push_back(theta(x));
  std::string ckey = H.group().fingerprint() + "|" + PH.fingerprint() + "|";
  for (Code c : images) ckey += std::to_string(c) + ",";
  auto cit = E.conjugators.find(ckey);
  if (cit == E.conjugators.end()) cit = E.conjugators.emplace(ckey, detail::conjugator_into(H.group(), PH, images)).first;
  const auto& h = cit->second;
  if (!h) throw std::logic_error("no conjugate of the image lies in the Sylow subgroup");
  const auto& amb = *H.group().ambient();
  const Code hi = amb.inv(*h);
  std::vector<Index> phi(PK->order());
  for (Index y = 0; y < PK->order(); ++y) phi[y] = PH.index_of(amb.mul(amb.mul(*h, theta(PK->code(y))), hi));
  const Matrix a = multiply(f, alpha, H.module().act(hi));
  auto map = E.chain_map(PK, H.sylow(), phi, t);
  auto pk = E.pcoh(PK, VK);
  const auto& ph = H.sylow_cohomology();
  const Vec u = ph.cochain(t, rep);
  Vec w(pk->cochain_dim(t), 0);
  for (std::size_t k = 0; k < pk->resolution().rank(t); ++k) {
    const Vec val = apply(f, a, ph.evaluate(t, u, map->value(t, k)));
    for (std::size_t c = 0; c < VK.dim; ++c) w[k * VK.dim + c] = val[c];
  }
  return pk->coords(t, w);
}

/// Corestriction between ell-groups R <= P at the level of Sylow coordinates.
inline Vec cor_p(CohomologyEngine& E, const GroupPtr& R, const GroupPtr& P, const GModule& V, std::size_t t,
                 const Vec& rep) {
  const auto& f = E.field();
  auto pr = E.pcoh(R, V), pp = E.pcoh(P, V);
  if (R->order() == P->order()) return rep;
  const auto& rs = E.restricted(P, R, t);
  const Vec u = pr->cochain(t, rep);
  const std::size_t rt = pp->resolution().rank(t), d = V.dim;
  Vec w(pp->cochain_dim(t), 0);
  for (std::size_t c = 0; c < rs.cosets.reps.size(); ++c) {
    const Matrix& back = pp->rho(P->inv(rs.cosets.reps[c]));
    for (std::size_t i = 0; i < rt; ++i) {
      const Vec val = apply(f, back, pr->evaluate(t, u, rs.map->value(t, c * rt + i)));
      for (std::size_t a = 0; a < d; ++a) w[i * d + a] = f.add(w[i * d + a], val[a]);
    }
  }
  return pp->coords(t, w);
}

/// Corestriction from a subgroup H of G by the double coset formula, on Sylow coordinates.
inline Vec cor_rep(const GroupCohomology& H, const GroupCohomology& G, std::size_t t, const Vec& rep) {
  auto& E = *G.engine();
  const auto& f = E.field();
  if (!H.group().is_subgroup_of(G.group())) throw RelationMismatch(H.group().label() + " is not a subgroup of " + G.group().label());
  if (H.module().id != G.module().id) throw RelationMismatch("corestriction needs one coefficient module");
  const auto& amb = *G.group().ambient();
  const auto& PG = G.sylow();
  Vec total(G.sylow_cohomology().dim(t), 0);
  for (const auto& dc : E.double_cosets_cached(G.group(), *PG, H.group())) {
    const Code g = G.group().code(dc.representative), gi = amb.inv(g);
    std::vector<Code> rg;
    for (Code x : PG->codes())
      if (H.group().contains(amb.mul(amb.mul(gi, x), g))) rg.push_back(x);
    auto R = E.intern(std::make_shared<FiniteGroup>(G.group().ambient(), std::move(rg), "R"));
    const Vec w = pull_rep(H, R, G.module(), [&](Code x) { return amb.mul(amb.mul(gi, x), g); }, G.module().act(g), t, rep);
    const Vec c = cor_p(E, R, PG, G.module(), t, w);
    for (std::size_t k = 0; k < total.size(); ++k) total[k] = f.add(total[k], c[k]);
  }
  return total;
}

inline const GroupCohomology::Stable& GroupCohomology::stable(std::size_t t) const {
  while (stable_.size() <= t) {
    const std::size_t s = stable_.size();
    const auto& f = field();
    const std::size_t n = pc_->dim(s);
    Stable S;
    S.e = Matrix(n, n);
    if (is_ell_group()) {
      S.e = Matrix::identity(n);
    } else {
      GroupCohomology Pself(E_, P_, V_, P_);
      const Elem inv_index = f.inv(f.from_uint(G_->order() / P_->order()));
      for (std::size_t j = 0; j < n; ++j) {
        Vec e(n, 0);
        e[j] = 1;
        Vec c = cor_rep(Pself, *this, s, e);
        scale(f, c, inv_index);
        S.e.set_col(j, c);
      }
    }
    Matrix rows = transpose(S.e);
    const auto piv = rref(f, rows);
    for (std::size_t r = 0; r < piv.size(); ++r) S.basis.push_back(rows.row_vec(r));
    S.coords = std::make_unique<CoordinateSystem>(f, n, S.basis);
    stable_.push_back(std::move(S));
  }
  return stable_[t];
}

// ---------------------------------------------------------------------------
// Maps between cohomology groups, as matrices acting on coordinate columns.
// ---------------------------------------------------------------------------

/// Pullback along theta: K -> H with coefficient map alpha: V_H -> V_K satisfying
/// alpha rho_H(theta(k)) = rho_K(k) alpha. Covers restriction, inflation and conjugation.
inline Matrix pullback(const GroupCohomology& H, const GroupCohomology& K, const std::function<Code(Code)>& theta,
                       const Matrix& alpha, std::size_t t) {
  const std::size_t dh = H.dim(t), dk = K.dim(t);
  Matrix M(dk, dh);
  for (std::size_t j = 0; j < dh; ++j) {
    Vec e(dh, 0);
    e[j] = 1;
    const Vec w = pull_rep(H, K.sylow(), K.module(), theta, alpha, t, H.to_sylow(t, e));
    M.set_col(j, K.from_sylow(t, w));
  }
  return M;
}

inline Matrix restriction(const GroupCohomology& G, const GroupCohomology& H, std::size_t t) {
  if (!H.group().is_subgroup_of(G.group())) throw RelationMismatch(H.group().label() + " is not a subgroup of " + G.group().label());
  return pullback(G, H, [](Code c) { return c; }, Matrix::identity(G.module().dim), t);
}

inline Matrix corestriction(const GroupCohomology& H, const GroupCohomology& G, std::size_t t) {
  if (!H.group().is_subgroup_of(G.group())) throw RelationMismatch(H.group().label() + " is not a subgroup of " + G.group().label());
  if (H.module().id != G.module().id) throw RelationMismatch("corestriction needs one coefficient module");
  const std::size_t dh = H.dim(t), dg = G.dim(t);
  Matrix M(dg, dh);
  for (std::size_t j = 0; j < dh; ++j) {
    Vec e(dh, 0);
    e[j] = 1;
    M.set_col(j, G.from_sylow(t, cor_rep(H, G, t, H.to_sylow(t, e))));
  }
  return M;
}

/// Inflation along a surjection pi: G -> Gbar.
inline Matrix inflation(const GroupCohomology& Gbar, const GroupCohomology& G, const std::function<Code(Code)>& pi,
                        std::size_t t) {
  return pullback(Gbar, G, pi, Matrix::identity(Gbar.module().dim), t);
}

/// Conjugation c_g^*: H^t(H) -> H^t(gHg^{-1})... realised as pullback along x -> g^{-1} x g.
inline Matrix conjugation(const GroupCohomology& H, const GroupCohomology& gHg, Code g, std::size_t t) {
  const auto& amb = *H.group().ambient();
  const Code gi = amb.inv(g);
  return pullback(H, gHg, [&](Code x) { return amb.mul(amb.mul(gi, x), g); }, H.module().act(g), t);
}

/// Cross product H^a(P1) x H^b(P2) -> H^{a+b}(P1 x P2) for ell-groups with trivial coefficients.
inline Vec cross_product(CohomologyEngine& E, const GroupPtr& P1, std::size_t a, const Vec& u, const GroupPtr& P2,
                         std::size_t b, const Vec& v) {
  const auto& f = E.field();
  const std::size_t t = a + b;
  const GModule triv = GModule::trivial_module();
  const auto& prod = E.product(P1, P2, std::max<std::size_t>(t, 2));
  auto p1 = E.pcoh(P1, triv), p2 = E.pcoh(P2, triv);
  const Vec cu = p1->cochain(a, u), cv = p2->cochain(b, v);
  const ChainMap& map = *prod.map;
  auto pp = E.pcoh(prod.group, triv);
  const auto& gens = prod.tensor->generators(t);
  const std::size_t n = prod.group->order();
  Vec w(pp->cochain_dim(t), 0);
  for (std::size_t k = 0; k < w.size(); ++k) {
    const Vec& x = map.value(t, k);
    Elem s = 0;
    for (std::size_t c = 0; c < x.size(); ++c) {
      if (!x[c]) continue;
      const auto& gen = gens[c / n];
      if (gen.a != a) continue;
      s = f.fma(s, x[c], f.mul(cu[gen.i], cv[gen.j]));
    }
    w[k] = s;
  }
  return pp->coords(t, w);
}

}  // namespace qdp
