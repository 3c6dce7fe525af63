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

#include <memory>
#include <optional>
#include <string>

#include "cohomology.hpp"
#include "ealgebra.hpp"

namespace qdp {

/// Subgroup of G_{n+m} = GL_{n+m}(F_q) with the given block shape.
inline std::shared_ptr<GroupCohomology> parabolic_cohomology(const EnginePtr& E, const FiniteGroup& G,
                                                             const BlockShape& shape, const GModule& V) {
  return std::make_shared<GroupCohomology>(E, parabolic(G, shape), V);
}

/// Permutation matrix sending e_i to e_{sigma(i)} (0-based), as a code.
inline Code permutation_matrix(const MatrixAmbient& amb, const std::vector<std::size_t>& sigma) {
  const std::size_t N = amb.degree();
  std::vector<std::uint32_t> m(N * N, 0);
  for (std::size_t i = 0; i < N; ++i) m[sigma[i] * N + i] = 1;
  return amb.encode(m);
}

struct MidPortionReport {
  std::size_t n = 0, m = 0, t = 0;
  std::size_t double_cosets = 0;
  Matrix middle, top, bottom;
  VerificationReport report;
};

/// The three paths of the mid-portion diagram on H^t(P_{n,m}) with values in H^t(P_{n+m-1,1bar}):
/// middle = res cor, top = cor res through P_{n,m-1,1bar}, bottom = cor zeta^* res through the
/// (2,3)-zeroed parabolics. Checks middle = top + bottom.
inline MidPortionReport verify_mid_portion(std::size_t n, std::size_t m, std::size_t t, std::uint32_t q,
                                           std::uint32_t ell, EnginePtr E = nullptr) {
  if (n < 1 || m < 1) throw std::invalid_argument("mid-portion needs n, m >= 1");
  if (!E) E = std::make_shared<CohomologyEngine>(ell);
  const PrimeField& f = E->field();
  MidPortionReport out;
  out.n = n;
  out.m = m;
  out.t = t;
  out.report.suite = "mid_portion";
  const GModule triv = GModule::trivial_module();
  auto Gp = general_linear(n + m, q);
  const auto& amb = dynamic_cast<const MatrixAmbient&>(*Gp->ambient());
  auto G = std::make_shared<GroupCohomology>(E, Gp, triv);
  auto Pnm = parabolic_cohomology(E, *Gp, {{n, m}, {}, {}}, triv);
  auto Pb = parabolic_cohomology(E, *Gp, {{n + m - 1, 1}, {false, true}, {}}, triv);
  auto A = parabolic_cohomology(E, *Gp, {{n, m - 1, 1}, {false, false, true}, {}}, triv);
  auto B = parabolic_cohomology(E, *Gp, {{n - 1, 1, m}, {false, true, false}, {{2, 3}}}, triv);
  auto C = parabolic_cohomology(E, *Gp, {{n - 1, m, 1}, {false, false, true}, {{2, 3}}}, triv);

  out.double_cosets = double_cosets(*Gp, Pb->group(), Pnm->group()).size();
  ++out.report.checked;
  if (out.double_cosets != 2)
    out.report.fail("|P_{n+m-1,1bar} \\ G / P_{n,m}| = " + std::to_string(out.double_cosets));

  // zeta moves e_{n} (0-based n-1) to the last position and shifts the m block up
  std::vector<std::size_t> sigma(n + m);
  for (std::size_t i = 0; i + 1 < n; ++i) sigma[i] = i;
  sigma[n - 1] = n + m - 1;
  for (std::size_t i = n; i < n + m; ++i) sigma[i] = i - 1;
  const Code Z = permutation_matrix(amb, sigma), Zi = amb.inv(Z);
  // theta(x) = Z^{-1} x Z must carry C into B
  Code g = Z;
  auto carries = [&](Code h) {
    const Code hi = amb.inv(h);
    for (Code x : C->group().generator_codes())
      if (!B->group().contains(amb.mul(amb.mul(hi, x), h))) return false;
    return true;
  };
  if (!carries(Z)) {
    if (!carries(Zi)) throw std::logic_error("block swap does not conjugate the parabolics");
    g = Zi;
  }
  const Code gi = amb.inv(g);

  out.middle = multiply(f, restriction(*G, *Pb, t), corestriction(*Pnm, *G, t));
  out.top = multiply(f, corestriction(*A, *Pb, t), restriction(*Pnm, *A, t));
  const Matrix zeta = pullback(*B, *C, [&](Code x) { return amb.mul(amb.mul(gi, x), g); }, Matrix::identity(1), t);
  out.bottom = multiply(f, corestriction(*C, *Pb, t), multiply(f, zeta, restriction(*Pnm, *B, t)));
  ++out.report.checked;
  if (out.middle != add(f, out.top, out.bottom))
    out.report.fail("n=" + std::to_string(n) + ", m=" + std::to_string(m) + ", t=" + std::to_string(t) +
                    ": middle path differs from top + bottom");
  return out;
}

struct InflationTransferReport {
  std::optional<Elem> ratio;  // scalar c with top = c * bottom, when determined
  Elem expected = 0;          // |N_2 / N_1| in F_ell
  Matrix top, bottom;
  VerificationReport report;
};

/// Compares cor^{G2}_{G1} with infl o cor^{G2/N2}_{G1/N1} o infl^{-1} on H^t(G1; V).
inline InflationTransferReport verify_inflation_transfer(const EnginePtr& E, const GroupPtr& G1, const GroupPtr& G2,
                                                         const GroupPtr& N2, const GroupPtr& G, const GModule& V,
                                                         std::size_t t) {
  const PrimeField& f = E->field();
  const auto& amb = *G2->ambient();
  if (!G1->is_subgroup_of(*G2)) throw HypothesisViolated("G1 is not a subgroup of G2");
  if (!N2->is_subgroup_of(*G2)) throw HypothesisViolated("N2 is not a subgroup of G2");
  for (Code x : G2->generator_codes())
    for (Code y : N2->generator_codes())
      if (!N2->contains(amb.mul(amb.mul(x, y), amb.inv(x)))) throw HypothesisViolated("N2 is not normal in G2");
  if (!G->is_subgroup_of(*G2) || !N2->is_subgroup_of(*G) || !G1->is_subgroup_of(*G))
    throw HypothesisViolated("(a) G must lie in G2 and contain N2 and G1");
  std::vector<Code> n1;
  for (Code c : G1->codes())
    if (N2->contains(c)) n1.push_back(c);
  const std::size_t N1 = n1.size();
  if (G1->order() / N1 != G->order() / N2->order())
    throw HypothesisViolated("(a) G1/N1 -> G/N2 is not an isomorphism");
  if (N2->order() % f.ell() == 0) throw HypothesisViolated("(b) |N2| is divisible by ell");
  for (Code y : N2->generator_codes())
    if (V.act(y) != Matrix::identity(V.dim)) throw HypothesisViolated("(c) N2 acts nontrivially on V");

  InflationTransferReport out;
  out.report.suite = "inflation_transfer";
  out.expected = f.from_uint(N2->order() / N1);

  const Quotient Q = quotient_group(*G2, *N2);
  std::vector<Code> img;
  for (Code c : G1->codes()) img.push_back(Q.projection.at(c));
  auto Q1 = std::make_shared<FiniteGroup>(Q.group->ambient(), img, G1->label() + "/N1");
  GModule Vbar;
  Vbar.dim = V.dim;
  Vbar.id = V.id + "/" + N2->fingerprint();
  if (!V.trivial()) {
    auto lift = Q.lift;
    auto rho = V.rho;
    Vbar.rho = [lift, rho](Code c) { return rho(lift.at(c)); };
  } else {
    Vbar.id = V.id;
  }
  auto pi = [&](Code c) { return Q.projection.at(c); };

  GroupCohomology C1(E, G1, V), C2(E, G2, V), D1(E, Q1, Vbar), D2(E, Q.group, Vbar);
  out.top = corestriction(C1, C2, t);
  const Matrix i1 = inflation(D1, C1, pi, t), i2 = inflation(D2, C2, pi, t);
  if (i1.rows != i1.cols || rank(f, i1) != i1.cols) throw std::logic_error("inflation on G1 is not an isomorphism");
  const Matrix inv1 = solve_columns(f, i1, Matrix::identity(i1.rows));
  out.bottom = multiply(f, i2, multiply(f, corestriction(D1, D2, t), inv1));

  // the scalar relating the two maps
  bool consistent = true;
  for (std::size_t k = 0; k < out.top.data.size() && consistent; ++k) {
    const Elem a = out.top.data[k], b = out.bottom.data[k];
    if (b == 0) {
      consistent = a == 0;
      continue;
    }
    const Elem c = f.mul(a, f.inv(b));
    if (out.ratio && *out.ratio != c) consistent = false;
    out.ratio = c;
  }
  if (!consistent) out.ratio.reset();
  ++out.report.checked;
  if (out.top != scaled(f, out.bottom, out.expected))
    out.report.fail("top path is not |N2/N1| = " + std::to_string(out.expected) + " times the bottom path");
  return out;
}

/// The instance G1 = P^{(2,3)}_{n-1,m,1bar}, G2 = P_{n+m-1,1bar}, G = P_{n-1,m,1bar}, N2 the unipotent radical.
inline InflationTransferReport inflation_transfer_instance(std::size_t n, std::size_t m, std::size_t t, std::uint32_t q,
                                                           const EnginePtr& E, const GModule* V = nullptr) {
  auto Gp = general_linear(n + m, q);
  GroupPtr G1 = parabolic(*Gp, {{n - 1, m, 1}, {false, false, true}, {{2, 3}}});
  GroupPtr G2 = parabolic(*Gp, {{n + m - 1, 1}, {false, true}, {}});
  GroupPtr G = parabolic(*Gp, {{n - 1, m, 1}, {false, false, true}, {}});
  GroupPtr N2 = parabolic(*Gp, {{n + m - 1, 1}, {true, true}, {}});
  return verify_inflation_transfer(E, G1, G2, N2, G, V ? *V : GModule::trivial_module(), t);
}

}  // namespace qdp
