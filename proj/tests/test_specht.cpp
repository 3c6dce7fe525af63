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

#include <cstdlib>
#include <set>

#include "oracle_flags.hpp"
#include "qdp/specht.hpp"

namespace {

using namespace qdp;

using oracle::FlagOracle;

std::vector<Composition> partitions_up_to(std::size_t d) {
  std::vector<Composition> out;
  for (const auto& p : oracle::partitions_up_to(d)) out.emplace_back(p);
  return out;
}

std::uint64_t ipow(std::uint64_t b, std::size_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

TEST(Composition, NormalizesAndShifts) {
  EXPECT_EQ(Composition({2, 0, 0}).parts, (std::vector<std::size_t>{2}));
  EXPECT_EQ(Composition({0, 1}).length(), 2u);
  EXPECT_EQ(Composition({1}).shifted(4), Composition({3, 1}));
  EXPECT_EQ(Composition({1, 1}).replaced(1, 0), Composition({2}));
  EXPECT_EQ(Composition({2, 1}).replaced(2, 0), Composition({2, 1}));
  EXPECT_EQ(Composition::parse("2,1"), Composition({2, 1}));
  EXPECT_THROW(Composition::parse("2,x"), ParseError);
  EXPECT_TRUE(Composition({2, 2, 1}).is_partition());
  EXPECT_FALSE(Composition({1, 2}).is_partition());
}

TEST(Composition, KernelIndexSetStableUnderShift) {
  for (const auto& mu : partitions_up_to(3))
    for (std::size_t e = mu.size(); e <= mu.size() + 3; ++e)
      EXPECT_EQ(kernel_index_set(mu.shifted(e)), kernel_index_set(mu.shifted(mu.size()))) << mu.to_string();
}

TEST(FlagModule, CountsMatchEnumeration) {
  EXPECT_EQ(flag_count({1, 1}, 2), 3);
  EXPECT_EQ(flag_count({3}, 5), 1);
  EXPECT_EQ(flag_count({1, 1, 1}, 2), 21);
  for (std::uint32_t q : {2u, 3u})
    for (std::size_t d = 0; d <= 3; ++d) {
      FlagOracle O(d, q);
      for (const auto& mu : partitions_up_to(3)) {
        if (mu.size() != d) continue;
        std::vector<std::size_t> p = mu.parts;
        do {
          const Composition c(p);
          const FlagModule P(c, q, 5);
          EXPECT_EQ(BigInt(P.dim()), flag_count(c, q)) << c.to_string();
          EXPECT_EQ(P.dim(), O.flags(p).size()) << c.to_string();
        } while (std::prev_permutation(p.begin(), p.end()));
      }
    }
}

TEST(FlagModule, ZeroPartsGiveSameModule) {
  const FlagModule a({1, 0, 2}, 2, 3), b({1, 2}, 2, 3);
  EXPECT_EQ(a.dim(), b.dim());
}

TEST(Psi, SmallestExample) {
  const Matrix m = psi_map({1, 1}, 1, 0, 2, 3);
  ASSERT_EQ(m.rows, 1u);
  ASSERT_EQ(m.cols, 3u);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(m(0, k), 1u);
}

TEST(Psi, ColumnSumsAreGaussianBinomials) {
  for (std::uint32_t q : {2u, 3u})
    for (const auto& mu : partitions_up_to(3))
      for (std::size_t r = 1; r <= mu.length(); ++r)
        for (std::size_t i = 0; i <= mu.part(r + 1); ++i) {
          const PrimeField f(7);
          const Matrix m = psi_map(mu, r, i, q, 7);
          const Elem expect = reduce(q_binomial_integer(mu.part(r + 1), i, q), f);
          for (std::size_t k = 0; k < m.cols; ++k) {
            Elem s = 0;
            for (std::size_t j = 0; j < m.rows; ++j) s = f.add(s, m(j, k));
            EXPECT_EQ(s, expect) << mu.to_string() << " r=" << r << " i=" << i;
          }
        }
}

TEST(Psi, FullReplacementIsIdentity) {
  for (const auto& mu : partitions_up_to(3))
    for (std::size_t r = 1; r <= mu.length(); ++r) {
      const Matrix m = psi_map(mu, r, mu.part(r + 1), 3, 2);
      EXPECT_EQ(m, Matrix::identity(m.cols)) << mu.to_string() << " r=" << r;
    }
}

TEST(Psi, Equivariance) {
  for (std::uint32_t q : {2u, 3u})
    for (const auto& mu : std::vector<Composition>{{1, 1}, {2, 1}, {1, 1, 1}, {1, 2}}) {
      const FlagModule P(mu, q, 5);
      auto amb = matrix_ambient(mu.size(), q);
      auto G = general_linear(mu.size(), q);
      for (std::size_t r = 1; r <= mu.length(); ++r)
        for (std::size_t i = 0; i <= mu.part(r + 1); ++i) {
          const FlagModule T(mu.replaced(r, i), q, 5);
          const Matrix psi = psi_map(P, r, i, T);
          for (Code g : G->generator_codes()) {
            const auto ps = P.permutation(*amb, g), pt = T.permutation(*amb, g);
            for (std::size_t k = 0; k < P.dim(); ++k)
              for (std::size_t j = 0; j < T.dim(); ++j) EXPECT_EQ(psi(pt[j], ps[k]), psi(j, k));
          }
        }
    }
}

TEST(Psi, RejectsBadIndices) {
  EXPECT_THROW(psi_map({2, 1}, 0, 0, 2, 3), IndexOutOfRange);
  EXPECT_THROW(psi_map({2, 1}, 3, 0, 2, 3), IndexOutOfRange);
  EXPECT_THROW(psi_map({2, 1}, 1, 2, 2, 3), IndexOutOfRange);
}

TEST(Specht, KnownDimensions) {
  EXPECT_EQ(specht_dim({3}, 2, 3), 1u);
  EXPECT_EQ(specht_dim({1, 1}, 2, 3), 2u);
  EXPECT_EQ(specht_dim({1, 1}, 2, 5), 2u);
  EXPECT_EQ(specht_dim({1, 1}, 3, 2), 3u);
  // Steinberg modules
  for (std::uint32_t q : {2u, 3u})
    for (std::size_t d = 1; d <= (q == 2 ? 4u : 3u); ++d) {
      Composition st(std::vector<std::size_t>(d, 1));
      EXPECT_EQ(specht_dim(st, q, q == 2 ? 3 : 2), ipow(q, d * (d - 1) / 2)) << q << " " << d;
    }
}

TEST(Specht, DimensionsAgreeWithBruteForce) {
  for (auto [q, ells] : std::vector<std::pair<std::uint32_t, std::vector<std::uint32_t>>>{{2, {3, 5}}, {3, {2, 5}}})
    for (std::uint32_t ell : ells)
      for (const auto& mu : partitions_up_to(3)) {
        FlagOracle O(mu.size(), q);
        EXPECT_EQ(specht_dim(mu, q, ell), O.specht_dim(mu.parts, PrimeField(ell)))
            << mu.to_string() << " q=" << q << " ell=" << ell;
      }
}

TEST(Specht, SparseAndDenseKernelsAgree) {
  for (const auto& mu : partitions_up_to(3))
    for (std::uint32_t q : {2u, 3u}) EXPECT_EQ(SpechtModule(mu, q, 5).dim(), specht_kernel_dim(mu, q, 5));
}

TEST(Specht, SubmoduleOfFlagModule) {
  for (const auto& mu : partitions_up_to(3)) {
    const SpechtModule M(mu, 2, 3);
    EXPECT_LE(M.dim(), M.flags().dim());
    if (mu.length() <= 1) {
      EXPECT_EQ(M.dim(), M.flags().dim());
    }
  }
}

TEST(Specht, RejectsCompositions) { EXPECT_THROW(specht_dim({1, 2}, 2, 3), NotAPartition); }

TEST(Specht, FlagCountInvariantUnderReordering) {
  for (std::uint32_t q : {2u, 3u})
    for (const auto& mu : partitions_up_to(3)) {
      std::vector<std::size_t> p(mu.parts.rbegin(), mu.parts.rend());
      EXPECT_EQ(FlagModule(Composition(p), q, 5).dim(), FlagModule(mu, q, 5).dim());
      EXPECT_EQ(specht_dim(Composition(p).sorted(), q, 5), specht_dim(mu, q, 5));
    }
}

TEST(Specht, ActionIsARepresentation) {
  const SpechtModule M({2, 1}, 2, 3);
  auto G = general_linear(3, 2);
  auto amb = matrix_ambient(3, 2);
  const PrimeField f(3);
  const auto gens = G->generator_codes();
  for (Code g : gens)
    for (Code h : gens) EXPECT_EQ(M.act(*amb, amb->mul(g, h)), multiply(f, M.act(*amb, g), M.act(*amb, h)));
  EXPECT_EQ(M.act(*amb, amb->identity()), Matrix::identity(M.dim()));
}

TEST(SpechtSeries, TrivialPartitionGivesTrivialModule) {
  const QContext ctx(3, 2);
  const auto s = specht_cohomology_series({}, 0, 0, 3, ctx);
  ASSERT_EQ(s.entries.size(), 4u);
  for (const auto& e : s.entries) EXPECT_EQ(e.dim, std::optional<std::size_t>(1));
  EXPECT_EQ(s.bound.onset, 3);
}

TEST(SpechtSeries, CoprimeOrderVanishes) {
  const QContext ctx(5, 2);
  for (std::size_t t = 1; t <= 2; ++t)
    for (const auto& e : specht_cohomology_series({1}, t, 0, 3, ctx).entries) EXPECT_EQ(e.dim, std::optional<std::size_t>(0));
}

TEST(SpechtSeries, InvariantsAgreeWithFixedPoints) {
  for (auto [ell, q] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{3, 2}, {2, 3}, {5, 2}}) {
    const QContext ctx(ell, q);
    const auto s = specht_cohomology_series({1}, 0, 1, 3, ctx);
    const auto K = kernel_index_set(Composition({1}).shifted(1));
    for (const auto& e : s.entries) {
      const SpechtModule M(Composition({1}).shifted(e.n), q, ell, K);
      auto G = general_linear(e.n, q);
      auto amb = matrix_ambient(e.n, q);
      const PrimeField f(ell);
      Matrix stacked(0, M.dim());
      for (Code g : G->generator_codes()) {
        Matrix d = M.act(*amb, g);
        for (std::size_t i = 0; i < d.rows; ++i) d(i, i) = f.sub(d(i, i), 1);
        Matrix next(stacked.rows + d.rows, M.dim());
        std::copy(stacked.data.begin(), stacked.data.end(), next.data.begin());
        std::copy(d.data.begin(), d.data.end(), next.data.begin() + static_cast<std::ptrdiff_t>(stacked.data.size()));
        stacked = next;
      }
      const std::size_t fixed = M.dim() - (stacked.rows ? rank(f, stacked) : 0);
      EXPECT_EQ(e.dim, std::optional<std::size_t>(fixed)) << "n=" << e.n << " ell=" << ell << " q=" << q;
    }
  }
}

TEST(SpechtSeries, SkipsLevelsBeyondBudget) {
  setenv("QDP_GROUP_BUDGET", "100", 1);
  const auto s = specht_cohomology_series({1}, 0, 1, 3, QContext(3, 2));
  unsetenv("QDP_GROUP_BUDGET");
  ASSERT_EQ(s.entries.size(), 3u);
  EXPECT_TRUE(s.entries[1].dim.has_value());
  EXPECT_FALSE(s.entries[2].dim.has_value());
  EXPECT_FALSE(s.entries[2].note.empty());
}

TEST(Fit, FlagCountsOfHyperplaneFlags) {
  for (std::uint32_t q : {2u, 3u, 4u}) {
    std::vector<std::pair<std::size_t, BigInt>> pts;
    for (std::size_t n = 1; n <= 6; ++n) pts.emplace_back(n, flag_count(Composition({1}).shifted(n), q));
    const auto p = fit_dimension_polynomial(pts, q);
    EXPECT_EQ(p.degree, 1u);
    EXPECT_EQ(p.coeffs, (std::vector<Rational>{Rational(-1, q - 1), Rational(1, q - 1)}));
    EXPECT_EQ(p.onset, 1u);
  }
}

TEST(Fit, ConstantSeries) {
  const auto p = fit_dimension_polynomial({{3, 5}, {4, 5}, {5, 5}}, 2);
  EXPECT_EQ(p.degree, 0u);
  EXPECT_EQ(p.coeffs, std::vector<Rational>{5});
  EXPECT_EQ(p.onset, 3u);
  EXPECT_EQ(p.to_string(), "5");
}

TEST(Fit, OnsetAfterIrregularStart) {
  // 7, then 2^n - 1
  const auto p = fit_dimension_polynomial({{0, 7}, {1, 1}, {2, 3}, {3, 7}, {4, 15}}, 2);
  EXPECT_EQ(p.degree, 1u);
  EXPECT_EQ(p.onset, 1u);
  EXPECT_EQ(p.to_string(), "X - 1");
}

TEST(Fit, NoStablePolynomial) {
  EXPECT_THROW(fit_dimension_polynomial({{1, 1}}, 2), NoStablePolynomial);
  EXPECT_THROW(fit_dimension_polynomial({{1, 0}, {2, 5}, {3, 1}}, 2), NoStablePolynomial);
}

TEST(Fit, SpechtSeriesDegreeEqualsSize) {
  for (std::uint32_t q : {2u, 3u})
    for (const auto& mu : std::vector<Composition>{{}, {1}, {2}, {1, 1}}) {
      const auto K = kernel_index_set(mu.shifted(mu.size()));
      std::vector<std::pair<std::size_t, BigInt>> pts;
      // M_{(n-2,1,1)} is polynomial from n = 2, M_{(n-2,2)} from n = 3
      const std::size_t top = (q == 3 && mu.length() == 2) ? 5 : std::min<std::size_t>(6, mu.size() + 4);
      for (std::size_t n = mu.size(); n <= top; ++n)
        pts.emplace_back(n, specht_kernel_dim(mu.shifted(n), q, q == 2 ? 3 : 2, K));
      EXPECT_EQ(fit_dimension_polynomial(pts, q).degree, mu.size()) << mu.to_string() << " q=" << q;
    }
  // M_{(n-1,1)} has dimension [n]_q - 1
  std::vector<std::pair<std::size_t, BigInt>> pts;
  for (std::size_t n = 2; n <= 6; ++n) pts.emplace_back(n, specht_dim({n - 1, 1}, 2, 3));
  EXPECT_EQ(fit_dimension_polynomial(pts, 2).to_string(), "X - 2");
}

}  // namespace
