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

#include <algorithm>
#include <bitset>
#include <functional>
#include <set>
#include <vector>

#include "qdp/gf.hpp"
#include "qdp/qarith.hpp"

namespace {

using qdp::BigInt;
using qdp::QContext;

// Counts m-dimensional subspaces of F_q^n by closing spans of vectors, for q^n <= 64.
BigInt count_subspaces_by_closure(unsigned n, unsigned m, unsigned q) {
  const qdp::SmallField F(q);
  unsigned size = 1;
  for (unsigned i = 0; i < n; ++i) size *= q;
  auto digit_add = [&](unsigned a, unsigned b) {
    unsigned r = 0, base = 1;
    for (unsigned i = 0; i < n; ++i, a /= q, b /= q, base *= q) r += F.add(a % q, b % q) * base;
    return r;
  };
  auto scal = [&](unsigned c, unsigned a) {
    unsigned r = 0, base = 1;
    for (unsigned i = 0; i < n; ++i, a /= q, base *= q) r += F.mul(c, a % q) * base;
    return r;
  };
  using Set = std::bitset<64>;
  auto extend = [&](const Set& s, unsigned v) {
    Set out = s;
    for (unsigned c = 1; c < q; ++c)
      for (unsigned u = 0; u < size; ++u)
        if (s[u]) out.set(digit_add(u, scal(c, v)));
    return out;
  };
  std::set<std::string> layer{Set().set(0).to_string()};
  for (unsigned d = 0; d < m; ++d) {
    std::set<std::string> next;
    for (const auto& str : layer) {
      const Set s(str);
      for (unsigned v = 1; v < size; ++v)
        if (!s[v]) next.insert(extend(s, v).to_string());
    }
    layer = std::move(next);
  }
  return layer.size();
}

// Counts reduced row echelon m x n matrices over F_q by explicit enumeration of pivot sets
// and free entries.
BigInt count_subspaces_by_rref(unsigned n, unsigned m, unsigned q) {
  BigInt total = 0;
  std::vector<unsigned> pivots(m);
  std::function<void(unsigned, unsigned)> rec = [&](unsigned i, unsigned start) {
    if (i == m) {
      unsigned free_entries = 0;
      for (unsigned r = 0; r < m; ++r)
        for (unsigned c = pivots[r] + 1; c < n; ++c)
          if (std::find(pivots.begin(), pivots.end(), c) == pivots.end()) ++free_entries;
      BigInt count = 1;
      for (unsigned k = 0; k < free_entries; ++k) count *= q;
      total += count;
      return;
    }
    for (unsigned c = start; c < n; ++c) {
      pivots[i] = c;
      rec(i + 1, c + 1);
    }
  };
  rec(0, 0);
  return total;
}

const std::vector<std::pair<std::uint32_t, std::uint64_t>> kGrid = {{2, 3}, {2, 5}, {3, 2}, {3, 4}, {5, 2},
                                                                    {5, 3}, {5, 4}, {7, 2}, {3, 1}, {2, 1}};

}  // namespace

TEST(QArith, SpecExamples) {
  const QContext c32(3, 2);
  EXPECT_EQ(qdp::q_binomial(2, 1, c32), 0u);
  EXPECT_EQ(qdp::q_binomial_integer(4, 2, 2), 35);
  EXPECT_EQ(count_subspaces_by_closure(4, 2, 2), 35);
  EXPECT_EQ(qdp::order_of_q(3, 2), 2u);
  EXPECT_EQ(qdp::order_of_q(2, 3), 1u);
  EXPECT_EQ(qdp::order_of_q(5, 4), 2u);
  EXPECT_THROW(qdp::order_of_q(2, 4), qdp::NotInvertible);
  EXPECT_THROW(QContext(3, 9), qdp::NotInvertible);
}

TEST(QArith, QIntegerIsOnePlusQ) {
  for (auto [ell, q] : kGrid) {
    const QContext ctx(ell, q);
    EXPECT_EQ(qdp::q_binomial(2, 1, ctx), ctx.field().from_uint(1 + q));
    EXPECT_EQ(qdp::q_binomial(3, 5, ctx), 0u);
  }
}

TEST(QArith, BSequence) {
  const QContext c32(3, 2), c23(2, 3);
  EXPECT_EQ(std::vector<std::uint64_t>({qdp::b_value(0, c32), qdp::b_value(1, c32), qdp::b_value(2, c32), qdp::b_value(3, c32)}),
            std::vector<std::uint64_t>({1, 2, 6, 18}));
  EXPECT_EQ(std::vector<std::uint64_t>({qdp::b_value(0, c23), qdp::b_value(1, c23), qdp::b_value(2, c23), qdp::b_value(3, c23)}),
            std::vector<std::uint64_t>({1, 2, 4, 8}));
  const qdp::BSequence b(c32);
  EXPECT_EQ(b[4], 54u);
}

TEST(QArith, FlExamples) {
  const QContext c32(3, 2);
  EXPECT_EQ(qdp::fl(5, c32), 2u);
  EXPECT_EQ(qdp::fl(1, c32), 0u);
  EXPECT_EQ(qdp::fl(19, c32), 4u);
  EXPECT_EQ(qdp::fl(-7, c32), 0u);
  EXPECT_EQ(qdp::fl(2, c32), 1u);
}

TEST(QArith, PascalBothForms) {
  for (auto [ell, q] : kGrid) {
    const QContext ctx(ell, q);
    const auto& f = ctx.field();
    for (std::uint64_t n = 1; n <= 60; ++n)
      for (std::uint64_t m = 1; m < n; ++m) {
        const auto v = qdp::q_binomial(n, m, ctx);
        EXPECT_EQ(v, f.add(f.mul(ctx.q_pow(m), qdp::q_binomial(n - 1, m, ctx)), qdp::q_binomial(n - 1, m - 1, ctx)));
        EXPECT_EQ(v, f.add(qdp::q_binomial(n - 1, m, ctx), f.mul(ctx.q_pow(n - m), qdp::q_binomial(n - 1, m - 1, ctx))));
        EXPECT_EQ(v, qdp::q_binomial(n, n - m, ctx));
      }
  }
}

TEST(QArith, IntegerOracleBySubspaceCounting) {
  for (unsigned q : {2u, 3u, 4u}) {
    const unsigned nmax = q == 2 ? 6 : 3;
    for (unsigned n = 0; n <= nmax; ++n)
      for (unsigned m = 0; m <= n; ++m) EXPECT_EQ(count_subspaces_by_closure(n, m, q), qdp::q_binomial_integer(n, m, q));
  }
  for (unsigned q : {2u, 3u, 4u})
    for (unsigned n = 0; n <= 8; ++n)
      for (unsigned m = 0; m <= n; ++m) EXPECT_EQ(count_subspaces_by_rref(n, m, q), qdp::q_binomial_integer(n, m, q));
}

TEST(QArith, FieldValuesMatchReducedIntegers) {
  for (auto [ell, q] : kGrid) {
    const QContext ctx(ell, q);
    for (std::uint64_t n = 0; n <= 20; ++n)
      for (std::uint64_t m = 0; m <= n; ++m)
        EXPECT_EQ(qdp::q_binomial(n, m, ctx), qdp::reduce(qdp::q_binomial_integer(n, m, q), ctx.field()))
            << "ell=" << ell << " q=" << q << " n=" << n << " m=" << m;
  }
}

TEST(QArith, VanishingAtBSteps) {
  for (auto [ell, q] : kGrid) {
    const QContext ctx(ell, q);
    for (std::size_t r = 0; r <= 3; ++r) {
      const auto n = qdp::b_value(r, ctx);
      for (std::uint64_t i = 1; i < n; ++i) EXPECT_EQ(qdp::q_binomial(n, i, ctx), 0u) << "b_" << r << " = " << n;
    }
  }
}

TEST(QArith, FlSubadditive) {
  for (auto [ell, q] : kGrid) {
    const QContext ctx(ell, q);
    for (std::int64_t a = -3; a <= 80; ++a)
      for (std::int64_t b = -3; b <= 80; ++b)
        EXPECT_LE(qdp::fl(a + b, ctx), std::max(qdp::fl(a, ctx), qdp::fl(b, ctx)) + 1);
  }
}

TEST(QArith, FieldBasics) {
  const qdp::PrimeField f(7);
  for (qdp::Elem a = 1; a < 7; ++a) EXPECT_EQ(f.mul(a, f.inv(a)), 1u);
  EXPECT_THROW(f.inv(0), qdp::NotInvertible);
  EXPECT_THROW(qdp::PrimeField(6), std::invalid_argument);
  const qdp::SmallField F4(4);
  for (unsigned a = 1; a < 4; ++a) EXPECT_EQ(F4.mul(a, F4.inv(a)), 1u);
  const qdp::SmallField F9(9);
  unsigned nonzero_products = 0;
  for (unsigned a = 1; a < 9; ++a)
    for (unsigned b = 1; b < 9; ++b) nonzero_products += F9.mul(a, b) != 0;
  EXPECT_EQ(nonzero_products, 64u);
}

TEST(QArith, ContextCopiesShareValues) {
  const QContext a(5, 4);
  const QContext b = a;
  EXPECT_EQ(a, b);
  EXPECT_EQ(qdp::q_binomial(10, 4, a), qdp::q_binomial(10, 4, b));
  EXPECT_NE(a, QContext(5, 3));
}
