#include <gtest/gtest.h>

#include "loopcurrent/chartoda.hpp"
#include "loopcurrent/groundstate.hpp"
#include "loopcurrent/linalg.hpp"

using namespace lc;

namespace {
using C = CycloNum;
using P = ModelPoint<C>;
const C q = C::omega();
C inv(const C& x) { return C(1) / x; }
}  // namespace

TEST(GroundState, KernelIsALine) {
  P p = sample_point(2, 3);
  C w = probe_values(p, 1)[0];
  auto A = transfer_matrix(w, p) - Matrix<C>::identity(4);
  auto ns = nullspace(A);
  ASSERT_EQ(ns.size(), 1u);
  auto g = ground_state(p);
  EXPECT_EQ(transfer_matrix(w, p).apply(g.psi), g.psi);
}

TEST(GroundState, EigenvalueOneAtEveryW) {
  for (int L = 1; L <= 4; ++L) {
    P p = sample_point(L, 10 + L);
    auto g = ground_state(p);
    for (std::uint64_t s = 1; s <= 3; ++s) {
      C w = sample_spectral(p, s);
      EXPECT_EQ(transfer_matrix(w, p).apply(g.psi), g.psi) << "L=" << L;
    }
  }
}

TEST(GroundState, NormalizedToZFormula) {
  for (int L = 1; L <= 4; ++L) {
    P p = sample_point(L, 20 + L);
    EXPECT_EQ(ground_state(p).sum(), z_formula(p));
  }
}

TEST(GroundState, KernelLineMatchesNullspace) {
  for (int L = 2; L <= 4; ++L) {
    P p = sample_point(L, 30 + L);
    C w = probe_values(p, 1)[0];
    auto A = transfer_matrix(w, p) - Matrix<C>::identity(1 << L);
    auto line = kernel_line(A);
    ASSERT_TRUE(line.has_value());
    auto ns = nullspace(A);
    ASSERT_EQ(ns.size(), 1u);
    // proportional: cross ratios vanish
    const auto& a = *line;
    const auto& b = ns[0];
    std::size_t piv = 0;
    while (b[piv].is_zero()) ++piv;
    C f = a[piv] / b[piv];
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], f * b[i]);
  }
}

TEST(KernelLine, RejectsPlane) {
  Matrix<C> m(3, 3);
  m(0, 0) = C(1);
  EXPECT_FALSE(kernel_line(m).has_value());
  EXPECT_EQ(nullspace(m).size(), 2u);
}

TEST(GroundState, ExchangeRelation) {
  for (int L = 2; L <= 4; ++L) {
    P p = sample_point(L, 40 + L);
    auto g = ground_state(p);
    for (int i = 1; i < L; ++i) {
      P sw = p;
      std::swap(sw.z[i - 1], sw.z[i]);
      EXPECT_EQ(exchange_matrix(L, i, r_weights(p.z[i], p.z[i - 1])).apply(g.psi), ground_state(sw).psi)
          << "L=" << L << " i=" << i;
    }
  }
}

TEST(GroundState, BoundaryRelations) {
  for (int L = 1; L <= 3; ++L) {
    P p = sample_point(L, 50 + L);
    auto g = ground_state(p);
    P l = p;
    l.z[0] = inv(p.z[0]);
    EXPECT_EQ(boundary_matrix(L, k_weights(Side::left, q * p.z[0], p.zeta1)).apply(g.psi), ground_state(l).psi);
    P r = p;
    r.z[L - 1] = inv(p.z[L - 1]);
    EXPECT_EQ(boundary_matrix(L, k_weights(Side::right, p.z[L - 1], p.zeta2)).apply(g.psi), ground_state(r).psi);
  }
}

TEST(DualState, LeftEigenvector) {
  for (int L = 1; L <= 3; ++L) {
    P p = sample_point(L, 60 + L);
    auto d = dual_state(p);
    C w = sample_spectral(p, 4);
    // <psi*| T = <psi*|: the pairing glues patterns, so the row acts on psi* from above
    EXPECT_EQ(transfer_matrix_up(w, p).apply(d.psi), d.psi) << "L=" << L;
  }
}

TEST(DualState, ReflectedParameters) {
  P p = sample_point(3, 70);
  auto d = dual_state(p);
  auto g = ground_state(swapped_reversed(p));
  for (const auto& a : all_patterns(3)) EXPECT_EQ(d[a], g[reflect(a)]);
}

TEST(DualState, DualLeftBoundaryRelation) {
  P p = sample_point(3, 71);
  auto d = dual_state(p);
  P l = p;
  l.z[0] = inv(p.z[0]);
  EXPECT_EQ(boundary_matrix(3, k_weights(Side::left, q / p.z[0], p.zeta1)).apply(d.psi), dual_state(l).psi);
}

TEST(DualState, SameComponentSum) {
  for (int L = 1; L <= 4; ++L) {
    P p = sample_point(L, 80 + L);
    EXPECT_EQ(dual_state(p).sum(), ground_state(p).sum());
  }
}

TEST(PsiRecursion, BulkFourToTwo) {
  P p = sample_point(4, 90);
  for (int i = 1; i < 4; ++i) {
    P s = p;
    s.z[i] = q * s.z[i - 1];
    auto rep = psi_recursion_report(RecursionKind::bulk, i, s);
    EXPECT_TRUE(rep.vanishing) << "i=" << i;
    EXPECT_TRUE(rep.proportional) << "i=" << i;
    EXPECT_TRUE(rep.ratios) << "i=" << i;
  }
}

TEST(PsiRecursion, Boundaries) {
  P p = sample_point(3, 91);
  P l = p;
  l.z[0] = q * p.zeta1;
  EXPECT_TRUE(psi_recursion_check(RecursionKind::left, 0, l));
  P r = p;
  r.z[2] = p.zeta2 / q;
  EXPECT_TRUE(psi_recursion_check(RecursionKind::right, 3, r));
}

TEST(PsiRecursion, OffLocusRejected) {
  P p = sample_point(4, 92);
  EXPECT_THROW(psi_recursion_check(RecursionKind::bulk, 2, p), std::invalid_argument);
}

TEST(GroundState, FloatBackendAgrees) {
  P p = sample_point(3, 93);
  auto g = ground_state(p);
  auto f = ground_state(embed_point(p));
  for (std::size_t i = 0; i < g.psi.size(); ++i)
    EXPECT_TRUE(approx_equal(ComplexApprox(g.psi[i]), f.psi[i], 1e-9) || g.psi[i].is_zero()) << i;
}

TEST(Sampling, PointsAreGeneric) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    P p = sample_point(4, s);
    std::vector<C> all{p.zeta1, p.zeta2};
    all.insert(all.end(), p.z.begin(), p.z.end());
    for (std::size_t i = 0; i < all.size(); ++i) {
      std::vector<C> others;
      for (std::size_t j = 0; j < all.size(); ++j)
        if (j != i) others.push_back(all[j]);
      EXPECT_TRUE(generic_against(all[i], others));
    }
    EXPECT_EQ(sample_point(4, s).z, p.z);
  }
}

TEST(StateJson, PatternKeys) {
  P p = sample_point(2, 5);
  auto j = state_to_json(ground_state(p));
  EXPECT_EQ(j.size(), 4u);
  EXPECT_TRUE(j.contains("()"));
  EXPECT_TRUE(j.contains(")("));
}
