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
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dalg.hpp"
#include "dmod.hpp"
#include "ealgebra.hpp"
#include "errors.hpp"
#include "lemmas.hpp"
#include "qarith.hpp"
#include "specht.hpp"

namespace qdp {

namespace detail {

inline std::string ctx_name(const QContext& ctx) {
  return "ell=" + std::to_string(ctx.ell()) + " q=" + std::to_string(ctx.q_int());
}

inline DElement random_element(const QContext& ctx, std::mt19937_64& rng, std::uint64_t max_deg) {
  DElement e(ctx);
  const int terms = 1 + static_cast<int>(rng() % 4);
  for (int i = 0; i < terms; ++i) e.add_term(rng() % (max_deg + 1), static_cast<Elem>(rng() % ctx.ell()));
  return e;
}

/// A few generators in low degrees and a few homogeneous relations.
inline FPModule random_module(const QContext& ctx, std::mt19937_64& rng) {
  const std::size_t ngen = 1 + rng() % 3;
  std::vector<std::uint64_t> degs;
  for (std::size_t i = 0; i < ngen; ++i) degs.push_back(rng() % 4);
  std::vector<Relation> rels;
  const std::size_t nrel = rng() % 3;
  for (std::size_t i = 0; i < nrel; ++i) {
    const std::uint64_t rd = *std::max_element(degs.begin(), degs.end()) + rng() % 6;
    Relation r;
    for (std::size_t j = 0; j < ngen; ++j) {
      if (degs[j] > rd || rng() % 3 == 0) continue;
      const auto c = static_cast<Elem>(rng() % ctx.ell());
      if (c) r.entries.emplace(j, DElement(ctx, rd - degs[j], c));
    }
    if (!r.entries.empty()) rels.push_back(std::move(r));
  }
  return FPModule(ctx, degs, rels);
}

inline void expect(VerificationReport& rep, bool ok, const std::string& what) {
  ++rep.checked;
  if (!ok) rep.fail(what);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// qarith, dalg
// ---------------------------------------------------------------------------

/// Pascal recurrences, agreement with integer values, vanishing at b-steps, fl subadditivity.
inline VerificationReport qarith_properties(const QContext& ctx) {
  VerificationReport rep;
  rep.suite = "qarith";
  const auto& f = ctx.field();
  for (std::uint64_t n = 1; n <= 60; ++n)
    for (std::uint64_t m = 1; m < n; ++m) {
      const Elem v = q_binomial(n, m, ctx);
      const Elem a = f.add(f.mul(ctx.q_pow(m), q_binomial(n - 1, m, ctx)), q_binomial(n - 1, m - 1, ctx));
      const Elem b = f.add(q_binomial(n - 1, m, ctx), f.mul(ctx.q_pow(n - m), q_binomial(n - 1, m - 1, ctx)));
      detail::expect(rep, v == a && v == b, "q-Pascal fails at (" + std::to_string(n) + "," + std::to_string(m) + ")");
    }
  for (std::uint64_t n = 0; n <= 20; ++n)
    for (std::uint64_t m = 0; m <= n; ++m)
      detail::expect(rep, q_binomial(n, m, ctx) == reduce(q_binomial_integer(n, m, ctx.q_int()), f),
                     "field value differs from the reduced integer at (" + std::to_string(n) + "," + std::to_string(m) + ")");
  for (std::size_t r = 0; r <= 3; ++r) {
    const auto n = b_value(r, ctx);
    for (std::uint64_t i = 1; i < n; ++i)
      detail::expect(rep, q_binomial(n, i, ctx) == 0, "[b_" + std::to_string(r) + " choose " + std::to_string(i) + "] != 0");
  }
  for (std::int64_t a = -3; a <= 60; ++a)
    for (std::int64_t b = -3; b <= 60; ++b)
      detail::expect(rep, fl(a + b, ctx) <= std::max(fl(a, ctx), fl(b, ctx)) + 1,
                     "fl not subadditive at " + std::to_string(a) + "+" + std::to_string(b));
  return rep;
}

/// q-Leibniz, iterated derivations at b-steps, ring axioms, Taylor bijection, y-presentation.
inline VerificationReport dalg_properties(const QContext& ctx, std::uint64_t seed) {
  VerificationReport rep;
  rep.suite = "dalg";
  std::mt19937_64 rng(seed);
  auto x = [&](std::uint64_t n) { return DElement(ctx, n, 1); };
  for (std::size_t r = 0; r <= 2; ++r) {
    const auto s = b_value(r, ctx);
    for (std::uint64_t n = 0; n <= 40; ++n)
      for (std::uint64_t m = 0; m <= 40; ++m) {
        const auto lhs = d_derive(d_mul(x(n), x(m)), s);
        const auto rhs = d_mul(x(n), d_derive(x(m), s)) + d_mul(d_derive(x(n), s), x(m)).scaled(ctx.q_pow(s * m));
        detail::expect(rep, lhs == rhs,
                       "d^" + std::to_string(s) + " Leibniz fails at n=" + std::to_string(n) + " m=" + std::to_string(m));
      }
  }
  for (int t = 0; t < 200; ++t) {
    const auto a = detail::random_element(ctx, rng, 13), b = detail::random_element(ctx, rng, 13),
               c = detail::random_element(ctx, rng, 13);
    detail::expect(rep, d_mul(a, b) == d_mul(b, a), "not commutative on sample " + std::to_string(t));
    detail::expect(rep, d_mul(d_mul(a, b), c) == d_mul(a, d_mul(b, c)), "not associative on sample " + std::to_string(t));
    detail::expect(rep, d_mul(a, b + c) == d_mul(a, b) + d_mul(a, c), "not distributive on sample " + std::to_string(t));
    detail::expect(rep, d_mul(a, DElement(ctx, 0, 1)) == a, "unit fails on sample " + std::to_string(t));
  }
  for (int t = 0; t < 100; ++t) {
    const auto a = detail::random_element(ctx, rng, 60);
    detail::expect(rep, taylor_reconstruct(ctx, taylor_expand(a)) == a, "Taylor round trip fails on sample " + std::to_string(t));
  }
  for (std::size_t i = 0; i <= 2; ++i) {
    const auto bi = b_value(i, ctx);
    const auto e = b_value(i + 1, ctx) / bi;
    DElement p(ctx, 0, 1);
    for (std::uint64_t k = 0; k + 1 < e; ++k) p = d_mul(p, x(bi));
    detail::expect(rep, !p.is_zero(), "y_" + std::to_string(i) + "^" + std::to_string(e - 1) + " vanishes");
    detail::expect(rep, d_mul(p, x(bi)).is_zero(), "y_" + std::to_string(i) + "^" + std::to_string(e) + " is nonzero");
  }
  for (std::uint64_t n = 0; n <= 60; ++n) {
    const auto terms = to_y_basis(x(n));
    detail::expect(rep, terms.size() == 1 && y_evaluate(terms[0].monomial, ctx).scaled(terms[0].coeff) == x(n),
                   "y-basis round trip fails at x^[" + std::to_string(n) + "]");
  }
  return rep;
}

// ---------------------------------------------------------------------------
// dmod
// ---------------------------------------------------------------------------

/// Sampled iterated connection formula on free modules with the derivation.
inline VerificationReport dmod_iterated(const QContext& ctx, std::uint64_t seed, std::size_t samples = 500) {
  VerificationReport rep;
  rep.suite = "dmod_iterated";
  std::mt19937_64 rng(seed);
  auto [M, c] = free_with_derivation(ctx, {0, 1, 3}, 30);
  std::size_t n = 1;
  while (rep.checked < samples) {
    const auto r = iterated_connection_check(M, c, n, 120, rng());
    rep.checked += r.checked;
    for (const auto& w : r.witnesses) rep.fail(w);
    n = n % 6 + 1;
  }
  return rep;
}

/// Parts (a)-(e) of the kernel decomposition of a connection, on random free modules and at a b-step power.
inline VerificationReport dmod_connection(const QContext& ctx, std::uint64_t seed, std::size_t N = 60) {
  VerificationReport rep;
  rep.suite = "dmod_connection";
  std::mt19937_64 rng(seed);
  auto check = [&](const GradedVectorData& M, const Connection& c, const std::string& what) {
    try {
      const auto r = connection_kernel_decompose(M, c);
      detail::expect(rep, r.phi_linear, what + ": (a) Phi is not D-linear");
      detail::expect(rep, r.phi_iso, what + ": (a) Phi is not bijective");
      detail::expect(rep, r.phi_intertwines, what + ": (b) Phi does not intertwine");
      detail::expect(rep, r.kernel_is_mbar, what + ": (c) kernel does not map onto M-bar");
      detail::expect(rep, r.kernel_tensor_iso, what + ": (d) kernel (x) D -> M is not an isomorphism");
      detail::expect(rep, r.surjective, what + ": (e) connection is not surjective");
      for (const auto& fl : r.failures) rep.fail(what + ": " + fl);
    } catch (const Error& e) {
      detail::expect(rep, false, what + ": " + e.what());
    }
  };
  for (int t = 0; t < 4; ++t) {
    std::vector<std::uint64_t> degs;
    for (int i = 0; i < 1 + static_cast<int>(rng() % 3); ++i) degs.push_back(rng() % 5);
    auto [M, c] = free_with_derivation(ctx, degs, N);
    std::string what = "free on degrees";
    for (auto d : degs) what += " " + std::to_string(d);
    check(M, c, what);
  }
  auto [M, c] = free_with_derivation(ctx, {0}, N);
  const auto b1 = b_value(1, ctx);
  check(M, power_connection(M, c, b1), "d^" + std::to_string(b1) + " on D");
  return rep;
}

/// Period certificates, short exact sequences, subquotient monotonicity and the degree bound
/// for maps between free D_{>=r}-modules, on random presentations and their extensions.
inline VerificationReport dmod_invariants(const QContext& ctx, std::uint64_t seed, std::size_t N = 60,
                                          std::size_t attempts = 12) {
  VerificationReport rep;
  rep.suite = "dmod_invariants";
  std::mt19937_64 rng(seed);
  const auto& f = ctx.field();
  std::size_t modules = 0, extensions = 0;
  for (std::size_t a = 0; a < attempts; ++a) {
    const FPModule P = detail::random_module(ctx, rng);
    const GradedVectorData L = to_graded_data(P, N);
    try {
      const auto p = predict_period(L);
      ++modules;
      detail::expect(rep, p.verified(), "period certificate violated on module " + std::to_string(a));
    } catch (const TruncationTooSmall&) {
    }
    std::vector<std::pair<std::size_t, Vec>> gens;
    for (int g = 0; g < 1 + static_cast<int>(rng() % 2); ++g) {
      const std::size_t e = rng() % 6;
      Vec v(L.dim(e));
      for (auto& c : v) c = static_cast<Elem>(rng() % ctx.ell());
      if (!is_zero(v)) gens.emplace_back(e, v);
    }
    if (gens.empty()) continue;
    const auto Ksub = generated_submodule(L, gens);
    const GradedVectorData K = restrict_to(L, Ksub);
    const GradedVectorData M = quotient_by(L, Ksub);
    if (std::all_of(M.dims().begin(), M.dims().end(), [](std::size_t d) { return d == 0; })) continue;
    InvariantCertificate iL, iK, iM;
    try {
      iL = epsilon_lambda(L);
      iK = epsilon_lambda(K);
      iM = epsilon_lambda(M);
    } catch (const TruncationTooSmall&) {
      continue;
    }
    ++extensions;
    const std::string w = "extension " + std::to_string(a);
    detail::expect(rep, iL.epsilon <= std::max(iK.epsilon, iM.epsilon), w + ": eps(L) > max(eps(K), eps(M))");
    detail::expect(rep, iL.lambda == std::max(iK.lambda, iM.lambda), w + ": lambda(L) != max(lambda(K), lambda(M))");
    detail::expect(rep, iK.lambda <= iL.lambda && iM.lambda <= iL.lambda, w + ": lambda not monotone on subquotients");

    // Matrix of L -> M in certificate bases.
    const std::size_t r = std::max(iL.epsilon, iM.epsilon);
    const std::size_t s = std::max({iL.epsilon, iM.epsilon, fl(iL.lambda, ctx)}) + 1;
    const auto wL = freeness_over(L, r);
    const auto wM = freeness_over(M, r);
    detail::expect(rep, wL.free && wM.free, w + ": not free over D_{>=" + std::to_string(r) + "}");
    if (!wL.free || !wM.free) continue;
    const std::int64_t br = static_cast<std::int64_t>(b_value(r, ctx));
    for (const auto& [e, v] : wL.generators.generators) {
      EchelonBasis eb(f, L.dim(e));
      for (const auto& k : Ksub[e]) eb.insert(k);
      std::vector<bool> piv(L.dim(e), false);
      for (auto p : eb.pivots()) piv[p] = true;
      const Vec red = eb.reduce(v);
      Vec img;
      for (std::size_t i = 0; i < red.size(); ++i)
        if (!piv[i]) img.push_back(red[i]);
      for (const auto& [key, c] : free_coordinates(M, wM, e, img)) {
        (void)c;
        const auto deg = static_cast<std::int64_t>(key.second);
        bool in_range = deg <= static_cast<std::int64_t>(e) && deg < br + iL.lambda;
        for (auto [yi, ex] : y_digits(key.second, ctx).exponents) {
          (void)ex;
          in_range = in_range && yi >= r && yi < s;
        }
        detail::expect(rep, in_range, w + ": matrix entry of degree " + std::to_string(deg) + " out of range");
      }
    }
  }
  rep.observations.emplace_back("modules", std::to_string(modules));
  rep.observations.emplace_back("extensions", std::to_string(extensions));
  return rep;
}

/// Internal consistency of the bound calculators: period = b_eps, minimality of s, monotonicity.
inline VerificationReport bound_properties(const QContext& ctx) {
  VerificationReport rep;
  rep.suite = "bounds";
  const bool two = ctx.q_int() == 2;
  for (std::int64_t t = 0; t <= 6; ++t)
    for (std::int64_t d = 0; d <= 3; ++d) {
      const std::string at = "t=" + std::to_string(t) + " delta=" + std::to_string(d);
      const auto v = bound_vimod(t, 1, 2, d, ctx);
      detail::expect(rep, v.period == b_value(v.epsilon_bound, ctx), at + ": vimod period is not b_eps");
      detail::expect(rep, v.onset == std::max<std::int64_t>(v.lambda_bound, 3), at + ": vimod onset");
      detail::expect(rep, v.lambda_bound == (two ? 2 * t + d : t + d), at + ": vimod lambda");
      const auto v1 = bound_vimod(t + 1, 1, 2, d, ctx);
      detail::expect(rep, v1.epsilon_bound >= v.epsilon_bound && v1.lambda_bound > v.lambda_bound,
                     at + ": vimod bounds not monotone in t");
      const auto u = bound_unipotent(t, d, ctx);
      const std::int64_t target = two ? 2 * t + 7 * d : t + 4 * d;
      std::uint64_t wl = ctx.w();
      for (std::size_t i = 0; i < u.s; ++i) wl *= ctx.ell();
      detail::expect(rep, static_cast<std::int64_t>(wl) >= target, at + ": unipotent s too small");
      detail::expect(rep, u.s == 0 || static_cast<std::int64_t>(wl / ctx.ell()) < target, at + ": unipotent s not least");
      std::uint64_t per = wl;
      for (std::int64_t i = 0; i < 2 * d + 1; ++i) per *= ctx.ell();
      detail::expect(rep, u.period == per, at + ": unipotent period");
      detail::expect(rep, u.onset == std::max(d + 2 * t, 4 * d + 3), at + ": unipotent onset");
    }
  return rep;
}

// ---------------------------------------------------------------------------
// The algebra E and the lemmas
// ---------------------------------------------------------------------------

/// Homological stability: dim H^t(G_n) is constant for n >= 2t (q = 2), n >= t (q != 2), n >= 2t + 1 (Sym).
inline VerificationReport verify_stability(const BigradedAlgebraE& E) {
  VerificationReport rep;
  rep.suite = "stability";
  for (std::size_t t = 0; t <= E.tmax(); ++t) {
    std::size_t from = E.family() == Family::Sym ? 2 * t + 1 : (E.q() == 2 ? 2 * t : t);
    from = std::max<std::size_t>(from, 1);
    for (std::size_t n = from + 1; n <= E.nmax(); ++n)
      detail::expect(rep, E.dim(t, n) == E.dim(t, from),
                     "dim " + cell(t, n) + " = " + std::to_string(E.dim(t, n)) + " but dim " + cell(t, from) + " = " +
                         std::to_string(E.dim(t, from)));
  }
  return rep;
}

/// Dimension table of E on its window as an observation.
inline VerificationReport observe_dimensions(const BigradedAlgebraE& E) {
  VerificationReport rep;
  rep.suite = "dimensions";
  for (std::size_t t = 0; t <= E.tmax(); ++t) {
    std::string row;
    for (std::size_t n = 0; n <= E.nmax(); ++n) row += (n ? " " : "") + std::to_string(E.dim(t, n));
    rep.observations.emplace_back("t=" + std::to_string(t), row);
  }
  return rep;
}

/// All E-algebra suites for one cell; a budget overrun marks every suite of the cell as skipped.
inline std::vector<VerificationReport> ealgebra_suites(Family family, std::uint32_t q, std::uint32_t ell, std::size_t nmax,
                                                       std::size_t tmax) {
  std::vector<VerificationReport> out;
  try {
    const BigradedAlgebraE E(family, q, ell, nmax, tmax);
    out.push_back(observe_dimensions(E));
    out.push_back(verify_units(E));
    out.push_back(verify_leibniz(E));
    out.push_back(verify_surjectivity(E));
    out.push_back(verify_free_D(E));
    out.push_back(verify_stability(E));
    out.push_back(observe_braided_commutativity(E));
  } catch (const BudgetExceeded& e) {
    out.clear();
    VerificationReport rep;
    rep.suite = "ealgebra";
    rep.skipped = e.what();
    out.push_back(std::move(rep));
  }
  return out;
}

/// Mid-portion lemma for (n, m) in {(1,1), (1,2), (2,1)} with n + m <= nmax, t <= tmax.
inline VerificationReport mid_portion_suite(std::uint32_t q, std::uint32_t ell, std::size_t nmax, std::size_t tmax) {
  VerificationReport rep;
  rep.suite = "mid_portion";
  auto E = std::make_shared<CohomologyEngine>(ell);
  for (auto [n, m] : std::vector<std::pair<std::size_t, std::size_t>>{{1, 1}, {1, 2}, {2, 1}}) {
    if (n + m > nmax) continue;
    for (std::size_t t = 0; t <= tmax; ++t) {
      const std::string at = "n=" + std::to_string(n) + " m=" + std::to_string(m) + " t=" + std::to_string(t);
      try {
        const auto r = verify_mid_portion(n, m, t, q, ell, E);
        detail::expect(rep, r.double_cosets == 2, at + ": " + std::to_string(r.double_cosets) + " double cosets");
        rep.checked += r.report.checked;
        for (const auto& fl : r.report.failures) rep.fail(at + ": " + fl);
      } catch (const BudgetExceeded& e) {
        rep.observations.emplace_back("skipped " + at, e.what());
      }
    }
  }
  return rep;
}

/// Inflation-transfer lemma on the instance used in the main theorem; the ratio must be q^m = |N2/N1|.
inline VerificationReport inflation_transfer_suite(std::uint32_t q, std::uint32_t ell, std::size_t nmax, std::size_t tmax) {
  VerificationReport rep;
  rep.suite = "inflation_transfer";
  auto E = std::make_shared<CohomologyEngine>(ell);
  const PrimeField& f = E->field();
  for (auto [n, m] : std::vector<std::pair<std::size_t, std::size_t>>{{1, 1}, {1, 2}, {2, 1}}) {
    if (n + m > nmax) continue;
    for (std::size_t t = 0; t <= tmax; ++t) {
      const std::string at = "n=" + std::to_string(n) + " m=" + std::to_string(m) + " t=" + std::to_string(t);
      try {
        const auto r = inflation_transfer_instance(n, m, t, q, E);
        rep.checked += r.report.checked;
        for (const auto& fl : r.report.failures) rep.fail(at + ": " + fl);
        Elem qm = 1;
        for (std::size_t k = 0; k < m; ++k) qm = f.mul(qm, f.from_uint(q));
        detail::expect(rep, r.expected == qm, at + ": |N2/N1| = " + std::to_string(r.expected) + " is not q^m");
        if (r.ratio) {
          detail::expect(rep, *r.ratio == qm, at + ": ratio " + std::to_string(*r.ratio) + " is not q^m");
          rep.observations.emplace_back("ratio " + at, std::to_string(*r.ratio));
        }
      } catch (const BudgetExceeded& e) {
        rep.observations.emplace_back("skipped " + at, e.what());
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Specht modules
// ---------------------------------------------------------------------------

/// Flag counts, sparse against dense kernels, and polynomial growth of degree |mu| along mu[n].
inline VerificationReport specht_properties(std::uint32_t q, std::uint32_t ell) {
  VerificationReport rep;
  rep.suite = "specht";
  for (std::size_t d = 0; d <= 3; ++d)
    for (const auto& mu : partitions_of(d)) {
      const std::string at = "(" + mu.to_string() + ")";
      try {
        const SpechtModule M(mu, q, ell);
        detail::expect(rep, BigInt(M.flags().dim()) == flag_count(mu, q), at + ": flag count mismatch");
        detail::expect(rep, M.dim() == specht_kernel_dim(mu, q, ell), at + ": sparse and dense kernels differ");
        detail::expect(rep, M.dim() <= M.flags().dim(), at + ": kernel larger than the flag module");
      } catch (const BudgetExceeded& e) {
        rep.observations.emplace_back("skipped " + at, e.what());
      }
    }
  for (std::size_t d = 0; d <= 2; ++d)
    for (const auto& mu : partitions_of(d)) {
      const std::string at = "(" + mu.to_string() + ")";
      const auto K = kernel_index_set(mu.shifted(mu.size()));
      const std::size_t top = (q > 2 && mu.length() == 2) ? 5 : std::min<std::size_t>(6, d + 4);
      std::vector<std::pair<std::size_t, BigInt>> pts;
      try {
        for (std::size_t n = d; n <= top; ++n) pts.emplace_back(n, specht_kernel_dim(mu.shifted(n), q, ell, K));
        const auto p = fit_dimension_polynomial(pts, q);
        rep.observations.emplace_back("polynomial " + at, p.to_string() + " from n=" + std::to_string(p.onset));
        detail::expect(rep, p.degree == d, at + ": fitted degree " + std::to_string(p.degree));
      } catch (const BudgetExceeded& e) {
        rep.observations.emplace_back("skipped " + at, e.what());
      } catch (const NoStablePolynomial& e) {
        detail::expect(rep, false, at + ": " + e.what());
      }
    }
  return rep;
}

}  // namespace qdp
