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
#include <cstdlib>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "gf.hpp"

namespace qdp {

using Code = std::uint64_t;
using Index = std::uint32_t;

/// Element arithmetic for a family of groups sharing one encoding.
class Ambient {
 public:
  virtual ~Ambient() = default;
  virtual Code mul(Code a, Code b) const = 0;
  virtual Code inv(Code a) const = 0;
  virtual Code identity() const = 0;
  virtual std::string describe(Code a) const { return std::to_string(a); }
};

/// GL_N(F_q): entry (i, j) is digit i*N + j of the code in base q.
class MatrixAmbient : public Ambient {
 public:
  MatrixAmbient(std::size_t N, std::uint32_t q) : N_(N), F_(q) {}

  std::size_t degree() const noexcept { return N_; }
  const SmallField& field() const noexcept { return F_; }
  std::uint32_t q() const noexcept { return F_.size(); }

  std::vector<std::uint32_t> decode(Code c) const {
    std::vector<std::uint32_t> m(N_ * N_);
    for (auto& x : m) {
      x = static_cast<std::uint32_t>(c % F_.size());
      c /= F_.size();
    }
    return m;
  }
  Code encode(const std::vector<std::uint32_t>& m) const {
    Code c = 0;
    for (std::size_t i = m.size(); i-- > 0;) c = c * F_.size() + m[i];
    return c;
  }

  Code mul(Code a, Code b) const override {
    const auto A = decode(a), B = decode(b);
    std::vector<std::uint32_t> C(N_ * N_, 0);
    for (std::size_t i = 0; i < N_; ++i)
      for (std::size_t k = 0; k < N_; ++k) {
        const std::uint32_t x = A[i * N_ + k];
        if (!x) continue;
        for (std::size_t j = 0; j < N_; ++j) C[i * N_ + j] = F_.add(C[i * N_ + j], F_.mul(x, B[k * N_ + j]));
      }
    return encode(C);
  }

  Code inv(Code a) const override {
    auto A = decode(a);
    std::vector<std::uint32_t> I(N_ * N_, 0);
    for (std::size_t i = 0; i < N_; ++i) I[i * N_ + i] = 1;
    for (std::size_t c = 0; c < N_; ++c) {
      std::size_t p = c;
      while (p < N_ && A[p * N_ + c] == 0) ++p;
      if (p == N_) throw std::invalid_argument("singular matrix");
      for (std::size_t j = 0; j < N_; ++j) {
        std::swap(A[c * N_ + j], A[p * N_ + j]);
        std::swap(I[c * N_ + j], I[p * N_ + j]);
      }
      const std::uint32_t s = F_.inv(A[c * N_ + c]);
      for (std::size_t j = 0; j < N_; ++j) {
        A[c * N_ + j] = F_.mul(A[c * N_ + j], s);
        I[c * N_ + j] = F_.mul(I[c * N_ + j], s);
      }
      for (std::size_t r = 0; r < N_; ++r) {
        if (r == c || A[r * N_ + c] == 0) continue;
        const std::uint32_t m = F_.neg(A[r * N_ + c]);
        for (std::size_t j = 0; j < N_; ++j) {
          A[r * N_ + j] = F_.add(A[r * N_ + j], F_.mul(m, A[c * N_ + j]));
          I[r * N_ + j] = F_.add(I[r * N_ + j], F_.mul(m, I[c * N_ + j]));
        }
      }
    }
    return encode(I);
  }

  Code identity() const override {
    std::vector<std::uint32_t> I(N_ * N_, 0);
    for (std::size_t i = 0; i < N_; ++i) I[i * N_ + i] = 1;
    return encode(I);
  }

  std::uint32_t det(Code a) const {
    auto A = decode(a);
    std::uint32_t d = 1;
    for (std::size_t c = 0; c < N_; ++c) {
      std::size_t p = c;
      while (p < N_ && A[p * N_ + c] == 0) ++p;
      if (p == N_) return 0;
      if (p != c) {
        for (std::size_t j = 0; j < N_; ++j) std::swap(A[c * N_ + j], A[p * N_ + j]);
        d = F_.neg(d);
      }
      d = F_.mul(d, A[c * N_ + c]);
      const std::uint32_t s = F_.inv(A[c * N_ + c]);
      for (std::size_t r = c + 1; r < N_; ++r) {
        if (A[r * N_ + c] == 0) continue;
        const std::uint32_t m = F_.neg(F_.mul(A[r * N_ + c], s));
        for (std::size_t j = 0; j < N_; ++j) A[r * N_ + j] = F_.add(A[r * N_ + j], F_.mul(m, A[c * N_ + j]));
      }
    }
    return d;
  }

  std::string describe(Code a) const override {
    const auto m = decode(a);
    std::string s = "[";
    for (std::size_t i = 0; i < N_; ++i) {
      s += i ? ";" : "";
      for (std::size_t j = 0; j < N_; ++j) s += (j ? " " : "") + std::to_string(m[i * N_ + j]);
    }
    return s + "]";
  }

 private:
  std::size_t N_;
  SmallField F_;
};

/// Sym(N) acting on {0..N-1}; the code lists images in base N, product (gh)(x) = g(h(x)).
class PermAmbient : public Ambient {
 public:
  explicit PermAmbient(std::size_t N) : N_(N) {}
  std::size_t degree() const noexcept { return N_; }

  std::vector<std::uint32_t> decode(Code c) const {
    std::vector<std::uint32_t> p(N_);
    for (auto& x : p) {
      x = static_cast<std::uint32_t>(c % base());
      c /= base();
    }
    return p;
  }
  Code encode(const std::vector<std::uint32_t>& p) const {
    Code c = 0;
    for (std::size_t i = p.size(); i-- > 0;) c = c * base() + p[i];
    return c;
  }
  Code mul(Code a, Code b) const override {
    const auto g = decode(a), h = decode(b);
    std::vector<std::uint32_t> r(N_);
    for (std::size_t x = 0; x < N_; ++x) r[x] = g[h[x]];
    return encode(r);
  }
  Code inv(Code a) const override {
    const auto g = decode(a);
    std::vector<std::uint32_t> r(N_);
    for (std::size_t x = 0; x < N_; ++x) r[g[x]] = static_cast<std::uint32_t>(x);
    return encode(r);
  }
  Code identity() const override {
    std::vector<std::uint32_t> r(N_);
    std::iota(r.begin(), r.end(), 0u);
    return encode(r);
  }
  std::string describe(Code a) const override {
    std::string s = "(";
    for (auto x : decode(a)) s += std::to_string(x) + " ";
    if (s.size() > 1) s.pop_back();
    return s + ")";
  }

 private:
  Code base() const noexcept { return std::max<Code>(N_, 1); }
  std::size_t N_;
};

/// Group given by a multiplication table on codes 0..n-1.
class TableAmbient : public Ambient {
 public:
  explicit TableAmbient(std::vector<std::vector<Code>> table) : t_(std::move(table)) {
    const std::size_t n = t_.size();
    for (const auto& row : t_)
      if (row.size() != n) throw std::invalid_argument("multiplication table is not square");
    std::optional<Code> e;
    for (Code a = 0; a < n && !e; ++a) {
      bool ok = true;
      for (Code b = 0; b < n && ok; ++b) ok = t_[a][b] == b && t_[b][a] == b;
      if (ok) e = a;
    }
    if (!e) throw std::invalid_argument("multiplication table has no identity");
    e_ = *e;
    inv_.assign(n, n);
    for (Code a = 0; a < n; ++a)
      for (Code b = 0; b < n; ++b)
        if (t_[a][b] == e_) inv_[a] = b;
    for (Code a = 0; a < n; ++a) {
      if (inv_[a] == n) throw std::invalid_argument("multiplication table has a non-invertible element");
      for (Code b = 0; b < n; ++b)
        for (Code c = 0; c < n; ++c)
          if (t_[t_[a][b]][c] != t_[a][t_[b][c]]) throw std::invalid_argument("multiplication table is not associative");
    }
  }
  std::size_t size() const noexcept { return t_.size(); }
  Code mul(Code a, Code b) const override { return t_.at(a).at(b); }
  Code inv(Code a) const override { return inv_.at(a); }
  Code identity() const override { return e_; }

 private:
  std::vector<std::vector<Code>> t_;
  std::vector<Code> inv_;
  Code e_ = 0;
};

/// Direct product of two ambients; code = a + base * b.
class ProductAmbient : public Ambient {
 public:
  ProductAmbient(std::shared_ptr<const Ambient> A, std::shared_ptr<const Ambient> B, Code base)
      : A_(std::move(A)), B_(std::move(B)), base_(base) {}
  Code pack(Code a, Code b) const noexcept { return a + base_ * b; }
  Code first(Code c) const noexcept { return c % base_; }
  Code second(Code c) const noexcept { return c / base_; }
  const std::shared_ptr<const Ambient>& left() const noexcept { return A_; }
  const std::shared_ptr<const Ambient>& right() const noexcept { return B_; }
  Code mul(Code x, Code y) const override {
    return pack(A_->mul(first(x), first(y)), B_->mul(second(x), second(y)));
  }
  Code inv(Code x) const override { return pack(A_->inv(first(x)), B_->inv(second(x))); }
  Code identity() const override { return pack(A_->identity(), B_->identity()); }
  std::string describe(Code x) const override { return A_->describe(first(x)) + "x" + B_->describe(second(x)); }

 private:
  std::shared_ptr<const Ambient> A_, B_;
  Code base_;
};

/// Element budget for enumerated groups; QDP_GROUP_BUDGET overrides the default.
inline std::size_t group_budget() {
  if (const char* s = std::getenv("QDP_GROUP_BUDGET")) {
    const long long v = std::atoll(s);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return 250000;
}

/// A finite group: sorted element codes in a shared ambient, a code index and generators.
class FiniteGroup {
 public:
  FiniteGroup(std::shared_ptr<const Ambient> amb, std::vector<Code> codes, std::string label = {})
      : amb_(std::move(amb)), codes_(std::move(codes)), label_(std::move(label)) {
    std::sort(codes_.begin(), codes_.end());
    codes_.erase(std::unique(codes_.begin(), codes_.end()), codes_.end());
    if (codes_.size() > group_budget())
      throw BudgetExceeded("group " + label_ + " has " + std::to_string(codes_.size()) + " elements");
    index_.reserve(codes_.size() * 2);
    for (Index i = 0; i < codes_.size(); ++i) index_.emplace(codes_[i], i);
    auto e = find(amb_->identity());
    if (!e) throw std::invalid_argument("element set of " + label_ + " lacks the identity");
    identity_ = *e;
  }

  /// Closure of the given codes under multiplication.
  static std::shared_ptr<FiniteGroup> generated(std::shared_ptr<const Ambient> amb, const std::vector<Code>& gens,
                                                std::string label = {}) {
    std::vector<Code> elems{amb->identity()};
    std::unordered_map<Code, bool> seen{{amb->identity(), true}};
    for (std::size_t i = 0; i < elems.size(); ++i)
      for (Code g : gens) {
        const Code x = amb->mul(elems[i], g);
        if (seen.emplace(x, true).second) {
          elems.push_back(x);
          if (elems.size() > group_budget()) throw BudgetExceeded("subgroup generated in " + label + " is too large");
        }
      }
    auto G = std::make_shared<FiniteGroup>(amb, std::move(elems), std::move(label));
    std::vector<Index> gi;
    for (Code g : gens) gi.push_back(*G->find(g));
    G->set_generators(std::move(gi));
    return G;
  }

  const std::shared_ptr<const Ambient>& ambient() const noexcept { return amb_; }
  const std::string& label() const noexcept { return label_; }
  std::size_t order() const noexcept { return codes_.size(); }
  const std::vector<Code>& codes() const noexcept { return codes_; }
  Code code(Index i) const { return codes_[i]; }
  Index identity() const noexcept { return identity_; }

  std::optional<Index> find(Code c) const {
    auto it = index_.find(c);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  bool contains(Code c) const { return index_.count(c) != 0; }
  Index index_of(Code c) const {
    auto it = index_.find(c);
    if (it == index_.end()) throw std::invalid_argument("element not in " + label_);
    return it->second;
  }

  Index mul(Index a, Index b) const { return index_of(amb_->mul(codes_[a], codes_[b])); }
  Index inv(Index a) const { return index_of(amb_->inv(codes_[a])); }

  /// Generators, computed greedily in index order unless supplied.
  const std::vector<Index>& generators() const {
    if (!gens_computed_) compute_generators();
    return gens_;
  }
  void set_generators(std::vector<Index> g) {
    gens_ = std::move(g);
    gens_computed_ = true;
  }
  std::vector<Code> generator_codes() const {
    std::vector<Code> out;
    for (Index i : generators()) out.push_back(codes_[i]);
    return out;
  }

  bool is_subgroup_of(const FiniteGroup& G) const {
    if (amb_ != G.amb_) return false;
    return std::all_of(codes_.begin(), codes_.end(), [&](Code c) { return G.contains(c); });
  }

  /// Key identifying the subgroup within its ambient.
  const std::string& key() const {
    if (key_.empty()) {
      key_ = std::to_string(reinterpret_cast<std::uintptr_t>(amb_.get())) + ":";
      for (Code c : codes_) key_ += std::to_string(c) + ",";
    }
    return key_;
  }
  /// Short hash of key().
  std::string fingerprint() const {
    return std::to_string(std::hash<std::string>{}(key())) + "#" + std::to_string(order());
  }

 private:
  void compute_generators() const {
    std::vector<char> in(codes_.size(), 0);
    std::vector<Index> span{identity_};
    in[identity_] = 1;
    gens_.clear();
    for (Index x = 0; x < codes_.size() && span.size() < codes_.size(); ++x) {
      if (in[x]) continue;
      gens_.push_back(x);
      // regenerate the closure from the identity
      std::fill(in.begin(), in.end(), 0);
      span.assign(1, identity_);
      in[identity_] = 1;
      for (std::size_t i = 0; i < span.size(); ++i)
        for (Index g : gens_) {
          const Index y = mul(span[i], g);
          if (!in[y]) {
            in[y] = 1;
            span.push_back(y);
          }
        }
    }
    gens_computed_ = true;
  }

  std::shared_ptr<const Ambient> amb_;
  std::vector<Code> codes_;
  std::string label_;
  std::unordered_map<Code, Index> index_;
  Index identity_ = 0;
  mutable std::vector<Index> gens_;
  mutable bool gens_computed_ = false;
  mutable std::string key_;
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

// ---------------------------------------------------------------------------
// Families
// ---------------------------------------------------------------------------

inline std::uint64_t gl_order(std::size_t N, std::uint64_t q) {
  std::uint64_t qn = 1;
  for (std::size_t i = 0; i < N; ++i) qn *= q;
  std::uint64_t order = 1, qi = 1;
  for (std::size_t i = 0; i < N; ++i) {
    order *= qn - qi;
    qi *= q;
  }
  return order;
}

/// Shared ambients, so that groups built separately over the same (N, q) are comparable.
inline std::shared_ptr<const MatrixAmbient> matrix_ambient(std::size_t N, std::uint32_t q) {
  static std::mutex mu;
  static std::map<std::pair<std::size_t, std::uint32_t>, std::shared_ptr<const MatrixAmbient>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& a = cache[{N, q}];
  if (!a) a = std::make_shared<MatrixAmbient>(N, q);
  return a;
}

inline std::shared_ptr<const PermAmbient> perm_ambient(std::size_t N) {
  static std::mutex mu;
  static std::map<std::size_t, std::shared_ptr<const PermAmbient>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& a = cache[N];
  if (!a) a = std::make_shared<PermAmbient>(N);
  return a;
}

/// All invertible N x N matrices over F_q, enumerated row by row.
inline std::shared_ptr<FiniteGroup> general_linear(std::size_t N, std::uint32_t q) {
  if (gl_order(N, q) > group_budget())
    throw BudgetExceeded("GL_" + std::to_string(N) + "(F_" + std::to_string(q) + ") has " +
                         std::to_string(gl_order(N, q)) + " elements");
  auto amb = matrix_ambient(N, q);
  const SmallField& F = amb->field();
  std::uint64_t qn = 1;
  for (std::size_t i = 0; i < N; ++i) qn *= q;
  auto vec = [&](std::uint64_t c) {
    std::vector<std::uint32_t> v(N);
    for (auto& x : v) {
      x = static_cast<std::uint32_t>(c % q);
      c /= q;
    }
    return v;
  };
  std::vector<Code> out;
  std::vector<std::vector<std::uint32_t>> rows;
  // span membership by reduced echelon rows
  std::function<void(std::vector<std::vector<std::uint32_t>>)> rec = [&](std::vector<std::vector<std::uint32_t>> ech) {
    if (rows.size() == N) {
      std::vector<std::uint32_t> m;
      for (const auto& r : rows) m.insert(m.end(), r.begin(), r.end());
      out.push_back(amb->encode(m));
      return;
    }
    for (std::uint64_t c = 1; c < qn; ++c) {
      std::vector<std::uint32_t> v = vec(c), w = v;
      for (const auto& e : ech) {
        std::size_t p = 0;
        while (e[p] == 0) ++p;
        if (w[p]) {
          const std::uint32_t m = F.neg(w[p]);
          for (std::size_t j = 0; j < N; ++j) w[j] = F.add(w[j], F.mul(m, e[j]));
        }
      }
      std::size_t p = 0;
      while (p < N && w[p] == 0) ++p;
      if (p == N) continue;
      const std::uint32_t s = F.inv(w[p]);
      for (auto& x : w) x = F.mul(x, s);
      auto next = ech;
      for (auto& e : next)
        if (e[p]) {
          const std::uint32_t m = F.neg(e[p]);
          for (std::size_t j = 0; j < N; ++j) e[j] = F.add(e[j], F.mul(m, w[j]));
        }
      next.push_back(w);
      rows.push_back(v);
      rec(next);
      rows.pop_back();
    }
  };
  rec({});
  return std::make_shared<FiniteGroup>(amb, std::move(out),
                                       "GL_" + std::to_string(N) + "(F_" + std::to_string(q) + ")");
}

inline std::uint64_t factorial(std::size_t n) {
  std::uint64_t f = 1;
  for (std::size_t i = 2; i <= n; ++i) f *= i;
  return f;
}

inline std::shared_ptr<FiniteGroup> symmetric(std::size_t N) {
  if (factorial(N) > group_budget()) throw BudgetExceeded("Sym(" + std::to_string(N) + ") is too large");
  auto amb = perm_ambient(N);
  std::vector<std::uint32_t> p(N);
  std::iota(p.begin(), p.end(), 0u);
  std::vector<Code> out;
  do out.push_back(amb->encode(p));
  while (std::next_permutation(p.begin(), p.end()));
  return std::make_shared<FiniteGroup>(amb, std::move(out), "Sym(" + std::to_string(N) + ")");
}

/// Subgroup of G cut out by a predicate on codes.
inline std::shared_ptr<FiniteGroup> subgroup_where(const FiniteGroup& G, const std::function<bool(Code)>& pred,
                                                   std::string label) {
  std::vector<Code> out;
  for (Code c : G.codes())
    if (pred(c)) out.push_back(c);
  return std::make_shared<FiniteGroup>(G.ambient(), std::move(out), std::move(label));
}

/// Block shape of a parabolic: block sizes, blocks forced to the identity, and (1-based)
/// off-diagonal blocks forced to zero.
struct BlockShape {
  std::vector<std::size_t> sizes;
  std::vector<bool> barred;
  std::vector<std::pair<std::size_t, std::size_t>> zero_blocks;

  std::size_t total() const { return std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}); }
  std::string describe() const {
    std::string s = "P_{";
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      s += (i ? "," : "") + std::to_string(sizes[i]);
      if (i < barred.size() && barred[i]) s += "bar";
    }
    s += "}";
    for (auto [a, b] : zero_blocks) s += "^(" + std::to_string(a) + "," + std::to_string(b) + ")";
    return s;
  }
};

/// Membership test for block upper-triangular matrices of the given shape.
inline bool in_parabolic(const MatrixAmbient& amb, Code c, const BlockShape& shape) {
  const std::size_t N = amb.degree();
  const auto m = amb.decode(c);
  std::vector<std::size_t> block_of(N), start;
  std::size_t pos = 0;
  for (std::size_t b = 0; b < shape.sizes.size(); ++b) {
    start.push_back(pos);
    for (std::size_t k = 0; k < shape.sizes[b]; ++k) block_of[pos++] = b;
  }
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      const std::size_t bi = block_of[i], bj = block_of[j];
      const std::uint32_t x = m[i * N + j];
      if (bi > bj && x) return false;
      if (bi == bj && bi < shape.barred.size() && shape.barred[bi] && x != (i == j ? 1u : 0u)) return false;
      for (auto [za, zb] : shape.zero_blocks)
        if (bi + 1 == za && bj + 1 == zb && x) return false;
    }
  return true;
}

inline std::shared_ptr<FiniteGroup> parabolic(const FiniteGroup& G, const BlockShape& shape) {
  auto amb = std::dynamic_pointer_cast<const MatrixAmbient>(G.ambient());
  if (!amb) throw std::invalid_argument("parabolic subgroups need a matrix group");
  if (shape.total() != amb->degree()) throw std::invalid_argument("block sizes do not add up to the matrix size");
  return subgroup_where(G, [&](Code c) { return in_parabolic(*amb, c, shape); }, shape.describe());
}

/// Diagonal block b (0-based) of a matrix in a block shape, as a code of the smaller matrix ambient.
inline Code extract_block(const MatrixAmbient& amb, const MatrixAmbient& small, Code c, std::size_t offset) {
  const std::size_t N = amb.degree(), n = small.degree();
  const auto m = amb.decode(c);
  std::vector<std::uint32_t> out(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i * n + j] = m[(offset + i) * N + offset + j];
  return small.encode(out);
}

/// Block-diagonal matrix diag(a, b).
inline Code block_diag(const MatrixAmbient& big, const MatrixAmbient& A, Code a, const MatrixAmbient& B, Code b) {
  const std::size_t N = big.degree(), n = A.degree(), m = B.degree();
  std::vector<std::uint32_t> out(N * N, 0);
  const auto x = A.decode(a), y = B.decode(b);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i * N + j] = x[i * n + j];
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) out[(n + i) * N + n + j] = y[i * m + j];
  return big.encode(out);
}

/// Permutations of {0..n+m-1} that preserve {0..n-1}.
inline std::shared_ptr<FiniteGroup> young_subgroup(const FiniteGroup& S, std::size_t n) {
  auto amb = std::dynamic_pointer_cast<const PermAmbient>(S.ambient());
  if (!amb) throw std::invalid_argument("Young subgroups need a symmetric group");
  return subgroup_where(S, [&](Code c) {
    const auto p = amb->decode(c);
    for (std::size_t i = 0; i < n; ++i)
      if (p[i] >= n) return false;
    return true;
  }, "Sym(" + std::to_string(n) + ")xSym(" + std::to_string(amb->degree() - n) + ")");
}

/// Permutations fixing the last point, i.e. Sym(N-1) inside Sym(N).
inline std::shared_ptr<FiniteGroup> point_stabilizer(const FiniteGroup& S) {
  auto amb = std::dynamic_pointer_cast<const PermAmbient>(S.ambient());
  if (!amb) throw std::invalid_argument("point stabilizers need a symmetric group");
  const std::size_t N = amb->degree();
  return subgroup_where(S, [&](Code c) { return N == 0 || amb->decode(c)[N - 1] == N - 1; },
                        "Sym(" + std::to_string(N ? N - 1 : 0) + ")");
}

/// Restriction of a permutation to the block [offset, offset + n), shifted to start at 0.
inline Code perm_block(const PermAmbient& amb, const PermAmbient& small, Code c, std::size_t offset) {
  const auto p = amb.decode(c);
  std::vector<std::uint32_t> out(small.degree());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = p[offset + i] - static_cast<std::uint32_t>(offset);
  return small.encode(out);
}

inline Code perm_concat(const PermAmbient& big, const PermAmbient& A, Code a, const PermAmbient& B, Code b) {
  auto x = A.decode(a);
  const auto y = B.decode(b);
  for (auto v : y) x.push_back(v + static_cast<std::uint32_t>(A.degree()));
  return big.encode(x);
}

/// External direct product of two groups.
inline std::shared_ptr<FiniteGroup> direct_product(const FiniteGroup& A, const FiniteGroup& B, Code base) {
  auto amb = std::make_shared<ProductAmbient>(A.ambient(), B.ambient(), base);
  std::vector<Code> out;
  out.reserve(A.order() * B.order());
  for (Code a : A.codes())
    for (Code b : B.codes()) out.push_back(amb->pack(a, b));
  auto G = std::make_shared<FiniteGroup>(amb, std::move(out), A.label() + "x" + B.label());
  std::vector<Index> gens;
  for (Code a : A.generator_codes()) gens.push_back(G->index_of(amb->pack(a, B.ambient()->identity())));
  for (Code b : B.generator_codes()) gens.push_back(G->index_of(amb->pack(A.ambient()->identity(), b)));
  G->set_generators(std::move(gens));
  return G;
}

/// Bound on codes of a matrix or permutation ambient (used as a product base).
inline Code code_bound(const Ambient& amb) {
  if (auto m = dynamic_cast<const MatrixAmbient*>(&amb)) {
    Code b = 1;
    for (std::size_t i = 0; i < m->degree() * m->degree(); ++i) b *= m->q();
    return b;
  }
  if (auto p = dynamic_cast<const PermAmbient*>(&amb)) {
    Code b = 1;
    for (std::size_t i = 0; i < p->degree(); ++i) b *= std::max<Code>(p->degree(), 1);
    return b;
  }
  if (auto t = dynamic_cast<const TableAmbient*>(&amb)) return t->size();
  throw std::invalid_argument("no code bound for this ambient");
}

/// Quotient G / N as a table group, with the projection on codes.
struct Quotient {
  std::shared_ptr<FiniteGroup> group;
  std::unordered_map<Code, Code> projection;  // code in G -> code in G/N
  std::vector<Code> lift;                     // coset code -> smallest representative
};

inline Quotient quotient_group(const FiniteGroup& G, const FiniteGroup& N) {
  if (!N.is_subgroup_of(G)) throw RelationMismatch(N.label() + " is not a subgroup of " + G.label());
  const auto& amb = *G.ambient();
  for (Code g : G.generator_codes())
    for (Code n : N.generator_codes())
      if (!N.contains(amb.mul(amb.mul(g, n), amb.inv(g)))) throw RelationMismatch(N.label() + " is not normal");
  Quotient Q;
  std::vector<Index> coset(G.order(), static_cast<Index>(-1));
  for (Index g = 0; g < G.order(); ++g) {
    if (coset[g] != static_cast<Index>(-1)) continue;
    const Index c = static_cast<Index>(Q.lift.size());
    Q.lift.push_back(G.code(g));
    for (Code n : N.codes()) coset[G.index_of(amb.mul(G.code(g), n))] = c;
  }
  const std::size_t k = Q.lift.size();
  std::vector<std::vector<Code>> table(k, std::vector<Code>(k));
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) table[a][b] = coset[G.index_of(amb.mul(Q.lift[a], Q.lift[b]))];
  for (Index g = 0; g < G.order(); ++g) Q.projection.emplace(G.code(g), coset[g]);
  auto tamb = std::make_shared<TableAmbient>(std::move(table));
  std::vector<Code> codes(k);
  std::iota(codes.begin(), codes.end(), Code{0});
  Q.group = std::make_shared<FiniteGroup>(tamb, std::move(codes), G.label() + "/" + N.label());
  return Q;
}

// ---------------------------------------------------------------------------
// Structure
// ---------------------------------------------------------------------------

inline std::size_t element_order(const FiniteGroup& G, Index g) {
  std::size_t k = 1;
  for (Index x = g; x != G.identity(); x = G.mul(x, g)) ++k;
  return k;
}

/// An ell-Sylow subgroup grown one normalising ell-element at a time, scanning in index order.
inline std::shared_ptr<FiniteGroup> sylow_subgroup(const FiniteGroup& G, std::uint32_t ell) {
  std::size_t target = 1;
  for (std::size_t n = G.order(); n % ell == 0; n /= ell) target *= ell;
  const auto& amb = G.ambient();
  std::vector<Code> gens;
  auto P = FiniteGroup::generated(amb, gens, "Syl_" + std::to_string(ell) + "(" + G.label() + ")");
  while (P->order() < target) {
    bool grown = false;
    for (Index x = 0; x < G.order() && !grown; ++x) {
      const Code c = G.code(x);
      if (P->contains(c)) continue;
      Code p = c;
      for (std::uint32_t i = 1; i < ell; ++i) p = amb->mul(p, c);
      if (!P->contains(p)) continue;
      const Code ci = amb->inv(c);
      bool normalises = true;
      for (Code g : P->generator_codes())
        if (!P->contains(amb->mul(amb->mul(c, g), ci))) {
          normalises = false;
          break;
        }
      if (!normalises) continue;
      gens.push_back(c);
      P = FiniteGroup::generated(amb, gens, P->label());
      grown = true;
    }
    if (!grown) throw NotReduced("no Sylow subgroup found for " + G.label());
  }
  return P;
}

/// Double cosets H \ G / K with the first element in index order as representative.
struct DoubleCoset {
  Index representative;
  std::size_t size;
};

inline std::vector<DoubleCoset> double_cosets(const FiniteGroup& G, const FiniteGroup& H, const FiniteGroup& K) {
  if (!H.is_subgroup_of(G) || !K.is_subgroup_of(G)) throw RelationMismatch("double cosets need subgroups of G");
  const auto& amb = *G.ambient();
  std::vector<char> seen(G.order(), 0);
  std::vector<DoubleCoset> out;
  const auto hg = H.generator_codes(), kg = K.generator_codes();
  for (Index g = 0; g < G.order(); ++g) {
    if (seen[g]) continue;
    std::vector<Index> orbit{g};
    seen[g] = 1;
    for (std::size_t i = 0; i < orbit.size(); ++i) {
      const Code x = G.code(orbit[i]);
      auto visit = [&](Code y) {
        const Index j = G.index_of(y);
        if (!seen[j]) {
          seen[j] = 1;
          orbit.push_back(j);
        }
      };
      for (Code h : hg) visit(amb.mul(h, x));
      for (Code k : kg) visit(amb.mul(x, k));
    }
    out.push_back({g, orbit.size()});
  }
  return out;
}

/// Right coset decomposition of P over a subgroup R: every p = r * t with t a chosen representative.
struct RightCosets {
  std::vector<Index> reps;          // indices in P
  std::vector<std::size_t> coset;   // P index -> coset number
  std::vector<Index> factor;        // P index -> r (index in P)
};

inline RightCosets right_cosets(const FiniteGroup& P, const FiniteGroup& R) {
  RightCosets rc;
  const std::size_t none = static_cast<std::size_t>(-1);
  rc.coset.assign(P.order(), none);
  rc.factor.assign(P.order(), 0);
  for (Index p = 0; p < P.order(); ++p) {
    if (rc.coset[p] != none) continue;
    const std::size_t c = rc.reps.size();
    rc.reps.push_back(p);
    for (Code r : R.codes()) {
      const Index x = P.index_of(P.ambient()->mul(r, P.code(p)));
      rc.coset[x] = c;
      rc.factor[x] = P.index_of(r);
    }
  }
  return rc;
}

}  // namespace qdp
