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

#include <gtest/gtest.h>

#include <random>

#include "qdp/dalg.hpp"

namespace {

using qdp::DElement;
using qdp::QContext;

const std::vector<std::pair<std::uint32_t, std::uint64_t>> kGrid = {{3, 2}, {2, 3}, {5, 4}, {5, 2}, {3, 4}, {2, 1}, {3, 1}};

DElement basis(const QContext& ctx, std::uint64_t n) { return DElement(ctx, n, 1); }

DElement random_element(const QContext& ctx, std::mt19937_64& rng, std::uint64_t max_deg) {
  DElement e(ctx);
  const int terms = 1 + static_cast<int>(rng() % 4);
  for (int i = 0; i < terms; ++i) e.add_term(rng() % (max_deg + 1), static_cast<qdp::Elem>(rng() % ctx.ell()));
  return e;
}

// Homogeneous pieces of e.
std::vector<DElement> pieces(const DElement& e) {
  std::vector<DElement> out;
  for (auto [d, c] : e.terms()) out.emplace_back(e.context(), d, c);
  return out;
}

}  // namespace

TEST(DAlg, MultiplicationExamples) {
  const QContext c32(3, 2), c23(2, 3);
  const auto x1 = basis(c32, 1);
  EXPECT_TRUE(qdp::d_mul(x1, x1).is_zero());
  EXPECT_EQ(qdp::d_mul(x1, basis(c32, 2)), basis(c32, 3));
  EXPECT_TRUE(qdp::d_mul(basis(c23, 2), basis(c23, 2)).is_zero());
  EXPECT_EQ(qdp::q_binomial_integer(4, 2, 3), 130);
  const QContext c57(5, 7);
  EXPECT_EQ(qdp::d_mul(basis(c57, 1), basis(c57, 1)), DElement(c57, 2, 3));
}

TEST(DAlg, ContextMismatch) {
  const QContext a(3, 2), b(5, 2);
  EXPECT_THROW(qdp::d_mul(basis(a, 1), basis(b, 1)), qdp::ContextMismatch);
  DElement e = basis(a, 1);
  EXPECT_THROW(e += basis(b, 1), qdp::ContextMismatch);
}

TEST(DAlg, DerivativeExamples) {
  const QContext ctx(3, 2);
  EXPECT_EQ(qdp::d_derive(basis(ctx, 5)), basis(ctx, 4));
  EXPECT_TRUE(qdp::d_derive(basis(ctx, 0)).is_zero());
  EXPECT_EQ(qdp::d_derive(basis(ctx, 1) + basis(ctx, 7), 2), basis(ctx, 5));
}

TEST(DAlg, TaylorExamples) {
  const QContext ctx(3, 2);
  using P = std::vector<std::pair<qdp::Elem, std::uint64_t>>;
  EXPECT_EQ(qdp::taylor_expand(basis(ctx, 6)), (P{{1, 6}}));
  EXPECT_TRUE(qdp::taylor_expand(DElement(ctx)).empty());
  const auto e = DElement::from_terms(ctx, {{1, 2}, {3, 1}});
  EXPECT_EQ(qdp::taylor_expand(e), (P{{2, 1}, {1, 3}}));
}

TEST(DAlg, YBasisExamples) {
  const QContext ctx(3, 2);
  for (std::size_t i = 0; i <= 3; ++i) {
    const auto y = qdp::to_y_basis(basis(ctx, qdp::b_value(i, ctx)));
    ASSERT_EQ(y.size(), 1u);
    EXPECT_EQ(y[0].coeff, 1u);
    EXPECT_EQ(y[0].monomial.exponents, (std::map<std::size_t, std::uint64_t>{{i, 1}}));
  }
  const auto y0 = qdp::to_y_basis(basis(ctx, 0));
  ASSERT_EQ(y0.size(), 1u);
  EXPECT_TRUE(y0[0].monomial.exponents.empty());
  const auto y3 = qdp::to_y_basis(basis(ctx, 3));
  ASSERT_EQ(y3.size(), 1u);
  EXPECT_EQ(y3[0].coeff, 1u);
  EXPECT_EQ(y3[0].monomial.exponents, (std::map<std::size_t, std::uint64_t>{{0, 1}, {1, 1}}));
}

TEST(DAlg, YBasisRoundTrip) {
  for (auto [ell, q] : kGrid) {
    const QContext ctx(ell, q);
    const auto& f = ctx.field();
    for (std::uint64_t n = 0; n <= 60; ++n) {
      const auto terms = qdp::to_y_basis(basis(ctx, n));
      ASSERT_EQ(terms.size(), 1u);
      const DElement back = qdp::y_evaluate(terms[0].monomial, ctx).scaled(terms[0].coeff);
      EXPECT_EQ(back, basis(ctx, n));
      for (auto [i, c] : terms[0].monomial.exponents) EXPECT_LT(c, qdp::b_value(i + 1, ctx) / qdp::b_value(i, ctx));
      EXPECT_NE(f.mul(terms[0].coeff, qdp::y_unit(n, ctx)), 0u);
    }
  }
}

TEST(DAlg, YRelations) {
  for (auto [ell, q] : kGrid) {
    const QContext ctx(ell, q);
    for (std::size_t i = 0; i <= 2; ++i) {
      const auto bi = qdp::b_value(i, ctx);
      const auto e = qdp::b_value(i + 1, ctx) / bi;
      DElement p(ctx, 0, 1), y = basis(ctx, bi);
      for (std::uint64_t k = 0; k + 1 < e; ++k) p = qdp::d_mul(p, y);
      EXPECT_FALSE(p.is_zero()) << "y_" << i << "^" << e - 1;
      EXPECT_TRUE(qdp::d_mul(p, y).is_zero()) << "y_" << i << "^" << e;
    }
  }
}

TEST(DAlg, QLeibniz) {
  for (auto [ell, q] : kGrid) {
    const QContext ctx(ell, q);
    for (std::uint64_t n = 0; n <= 40; ++n)
      for (std::uint64_t m = 0; m <= 40; ++m) {
        const auto xn = basis(ctx, n), xm = basis(ctx, m);
        const auto lhs = qdp::d_derive(qdp::d_mul(xn, xm));
        const auto rhs = qdp::d_mul(xn, qdp::d_derive(xm)) + qdp::d_mul(qdp::d_derive(xn), xm).scaled(ctx.q_pow(m));
        ASSERT_EQ(lhs, rhs) << "n=" << n << " m=" << m;
      }
  }
}

TEST(DAlg, IteratedDerivationAtBSteps) {
  for (auto [ell, q] : kGrid) {
    const QContext ctx(ell, q);
    for (std::size_t r = 0; r <= 2; ++r) {
      const auto s = qdp::b_value(r, ctx);
      for (std::uint64_t n = 0; n <= 40; ++n)
        for (std::uint64_t m = 0; m <= 40; ++m) {
          const auto xn = basis(ctx, n), xm = basis(ctx, m);
          const auto lhs = qdp::d_derive(qdp::d_mul(xn, xm), s);
          const auto rhs =
              qdp::d_mul(xn, qdp::d_derive(xm, s)) + qdp::d_mul(qdp::d_derive(xn, s), xm).scaled(ctx.q_pow(s * m));
          ASSERT_EQ(lhs, rhs) << "step=" << s << " n=" << n << " m=" << m;
        }
    }
  }
}

TEST(DAlg, RingAxiomsOnRandomTriples) {
  std::mt19937_64 rng(7);
  for (auto [ell, q] : kGrid) {
    const QContext ctx(ell, q);
    for (int t = 0; t < 200; ++t) {
      const auto a = random_element(ctx, rng, 13), b = random_element(ctx, rng, 13), c = random_element(ctx, rng, 13);
      EXPECT_EQ(qdp::d_mul(a, b), qdp::d_mul(b, a));
      EXPECT_EQ(qdp::d_mul(qdp::d_mul(a, b), c), qdp::d_mul(a, qdp::d_mul(b, c)));
      EXPECT_EQ(qdp::d_mul(a, b + c), qdp::d_mul(a, b) + qdp::d_mul(a, c));
      EXPECT_EQ(qdp::d_mul(a, DElement(ctx, 0, 1)), a);
    }
  }
}

TEST(DAlg, LeibnizOnRandomHomogeneousPieces) {
  std::mt19937_64 rng(11);
  for (auto [ell, q] : kGrid) {
    const QContext ctx(ell, q);
    for (int t = 0; t < 100; ++t) {
      const auto a = random_element(ctx, rng, 40);
      for (const auto& b : pieces(random_element(ctx, rng, 40))) {
        const auto m = b.top_degree();
        EXPECT_EQ(qdp::d_derive(qdp::d_mul(a, b)),
                  qdp::d_mul(a, qdp::d_derive(b)) + qdp::d_mul(qdp::d_derive(a), b).scaled(ctx.q_pow(m)));
      }
    }
  }
}

TEST(DAlg, TaylorIsABijection) {
  std::mt19937_64 rng(3);
  for (auto [ell, q] : kGrid) {
    const QContext ctx(ell, q);
    for (int t = 0; t < 100; ++t) {
      const auto a = random_element(ctx, rng, 60);
      EXPECT_EQ(qdp::taylor_reconstruct(ctx, qdp::taylor_expand(a)), a);
    }
  }
}

TEST(DAlg, SubringMembership) {
  const QContext ctx(3, 2);
  EXPECT_TRUE(qdp::in_subring_from(basis(ctx, 6) + basis(ctx, 12), 2));
  EXPECT_FALSE(qdp::in_subring_from(basis(ctx, 6) + basis(ctx, 8), 2));
  EXPECT_TRUE(qdp::in_subring(basis(ctx, 8), {1, 2}));   // 8 = 1*2 + 1*6
  EXPECT_FALSE(qdp::in_subring(basis(ctx, 9), {1, 2}));  // 9 = 1 + 2 + 6
  // D_{>=r} is closed under multiplication.
  for (std::uint64_t a = 0; a <= 36; a += 2)
    for (std::uint64_t b = 0; b <= 36; b += 2) EXPECT_TRUE(qdp::in_subring_from(qdp::d_mul(basis(ctx, a), basis(ctx, b)), 1));
}
