#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "loopcurrent/chartoda.hpp"
#include "loopcurrent/groundstate.hpp"

using namespace lc;

namespace {
using C = CycloNum;
using F = ComplexApprox;
using P = ModelPoint<C>;
const C q = C::omega();
C r(long n, long d = 1) { return C(Rational(n, d)); }
C inv(const C& x) { return C(1) / x; }

std::vector<C> generic(int n, std::uint64_t seed) { return sample_point(n, seed).z; }

P with_z(P p, int i, const C& v) {
  p.z[i] = v;
  return p;
}
P drop(P p, std::vector<int> idx) {
  std::sort(idx.rbegin(), idx.rend());
  for (int i : idx) p.z.erase(p.z.begin() + i);
  return p;
}
}  // namespace

TEST(Partition, Staircase) {
  EXPECT_EQ(PartitionShape::staircase(1).parts, (std::vector<int>{0}));
  EXPECT_EQ(PartitionShape::staircase(2).parts, (std::vector<int>{0, 0}));
  EXPECT_EQ(PartitionShape::staircase(5).parts, (std::vector<int>{2, 1, 1, 0, 0}));
}

TEST(Sympchar, EmptyShapeIsOne) {
  auto x = generic(3, 1);
  EXPECT_EQ(sympchar(PartitionShape{{0, 0, 0}}, x), r(1));
}

TEST(Sympchar, OneVariable) {
  C x(Rational(3, 2), Rational(1, 4));
  EXPECT_EQ(sympchar(PartitionShape{{1}}, std::vector<C>{x}), x + inv(x));
}

TEST(Sympchar, TwoVariableFundamental) {
  auto x = generic(2, 2);
  EXPECT_EQ(sympchar(PartitionShape{{1, 0}}, x), x[0] + inv(x[0]) + x[1] + inv(x[1]));
}

TEST(Sympchar, CompleteFormAgrees) {
  for (int n = 1; n <= 5; ++n) {
    auto x = generic(n, 10 + n);
    for (int L = n; L <= n + 2; ++L) {
      PartitionShape lam = PartitionShape::staircase(L);
      lam.parts.resize(n);
      EXPECT_EQ(sympchar_complete(lam, x), sympchar(lam, x)) << "n=" << n << " L=" << L;
    }
  }
}

TEST(Sympchar, ConfluentDenominator) {
  std::vector<C> x{r(2), r(2)};
  EXPECT_THROW(sympchar(PartitionShape{{1, 0}}, std::vector<F>{F(2.0), F(2.0)}), ConfluenceError);
  // the exact path falls back to complete symmetric functions
  EXPECT_EQ(sympchar(PartitionShape{{1, 0}}, x), r(5));
}

TEST(WeylDim, Values) {
  EXPECT_EQ(weyl_dim(PartitionShape{{0, 0}}, 2), Rational(1));
  EXPECT_EQ(weyl_dim(PartitionShape{{1}}, 1), Rational(2));
  EXPECT_EQ(weyl_dim(PartitionShape{{1, 0, 0}}, 3), Rational(6));
  EXPECT_EQ(weyl_dim(PartitionShape{{1, 1, 0}}, 3), Rational(14));
  // the character at x = 1 through the confluence-safe form
  for (int L = 1; L <= 7; ++L)
    EXPECT_EQ(sympchar_complete(PartitionShape::staircase(L), std::vector<C>(L, r(1))),
              C(weyl_dim(PartitionShape::staircase(L), L)));
}

TEST(Tau, SmallCases) {
  auto z = generic(3, 3);
  EXPECT_EQ(tau(std::vector<C>{z[0]}), r(1));
  EXPECT_EQ(tau(std::vector<C>{z[0], z[1]}), r(1));
  C want(0);
  for (const auto& x : z) want += x * x + inv(x * x);
  EXPECT_EQ(tau(z), want);
}

TEST(Tau, WeylGroupInvariance) {
  for (int L = 3; L <= 6; ++L) {
    auto z = generic(L, 20 + L);
    C t = tau(z);
    auto y = z;
    std::rotate(y.begin(), y.begin() + 1, y.end());
    EXPECT_EQ(tau(y), t);
    for (int i = 0; i < L; ++i) {
      auto v = z;
      v[i] = inv(v[i]);
      EXPECT_EQ(tau(v), t);
    }
  }
}

TEST(Tau, SpecializationRecursion) {
  for (int L = 2; L <= 6; ++L) {
    auto z = generic(L, 30 + L);
    int i = 0, j = L - 1;
    auto s = z;
    s[i] = q * z[j];
    std::vector<C> rest;
    C f = (L % 2) ? r(-1) : r(1);
    for (int l = 0; l < L; ++l)
      if (l != i && l != j) {
        rest.push_back(z[l]);
        f *= kfunc(z[j], z[l]);
      }
    EXPECT_EQ(tau(s), f * (rest.empty() ? r(1) : tau(rest))) << "L=" << L;
  }
}

TEST(Tau, StableFloatAgrees) {
  for (int L = 1; L <= 7; ++L) {
    auto z = generic(L, 40 + L);
    std::vector<F> zf;
    for (const auto& x : z) zf.push_back(F(x));
    EXPECT_TRUE(approx_equal(tau_stable(zf), F(tau(z)), 1e-12)) << "L=" << L;
  }
}

TEST(LogDeriv, ConstantTau) {
  auto z = generic(2, 4);
  EXPECT_EQ(log_deriv_tau(0, z), r(0));
  EXPECT_EQ(log_deriv_tau(1, z), r(0));
}

TEST(LogDeriv, InversionNegates) {
  auto z = generic(4, 5);
  for (int s = 0; s < 4; ++s) {
    auto y = z;
    y[s] = inv(y[s]);
    EXPECT_EQ(log_deriv_tau(s, y), -log_deriv_tau(s, z));
  }
}

TEST(LogDeriv, FiniteDifferences) {
  for (int L = 1; L <= 4; ++L) {
    auto z = generic(L, 50 + L);
    std::vector<F> zf;
    for (const auto& x : z) zf.push_back(F(x));
    for (int s = 0; s < L; ++s) {
      // central difference in log z_s
      const double h = 1e-5;
      auto up = zf, dn = zf;
      up[s] = zf[s] * F(std::exp(h));
      dn[s] = zf[s] * F(std::exp(-h));
      std::complex<double> fd = std::log(tau(up).value() / tau(dn).value()) / (2 * h);
      F exact(log_deriv_tau(s, z));
      EXPECT_LE(std::abs(fd - exact.value()), 1e-8 * std::max(1.0, std::abs(exact.value()))) << "L=" << L << " s=" << s;
    }
  }
}

TEST(LogDeriv, ConfluentNeedsApproach) {
  std::vector<C> z{r(2), r(3), r(2)};
  EXPECT_THROW(log_deriv_tau(0, z), ConfluenceError);
  EXPECT_NO_THROW(log_deriv_tau(0, z, {0}, nullptr));
}

TEST(UFn, FourFactors) {
  P p = sample_point(1, 6);
  auto b = u_fn(p);
  EXPECT_EQ(b.tau_L, r(1));
  EXPECT_EQ(b.tau_zeta1, r(1));
  EXPECT_EQ(b.tau_zeta2, r(1));
  C want(0);
  for (const auto& x : {p.zeta1, p.z[0], p.zeta2}) want += x * x + inv(x * x);
  EXPECT_EQ(b.tau_both, want);
  EXPECT_EQ(z_formula(p), want);
}

TEST(ZFormula, InversionInvariant) {
  P p = sample_point(4, 7);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(z_formula(with_z(p, i, inv(p.z[i]))), z_formula(p));
}

TEST(ZFormula, BulkSpecializationFactor) {
  P p = sample_point(4, 8);
  const int i = 1;
  P s = with_z(p, i + 1, q * p.z[i]);
  C f = kfunc(p.z[i], p.zeta1) * kfunc(p.z[i], p.zeta1) * kfunc(p.z[i], p.zeta2) * kfunc(p.z[i], p.zeta2);
  for (int j = 0; j < 4; ++j)
    if (j != i && j != i + 1) f *= ipow(kfunc(p.z[i], p.z[j]), 4);
  EXPECT_EQ(z_formula(s), f * z_formula(drop(s, {i, i + 1})));
}

TEST(ClosedX, VanishesAtFixedPoints) {
  P p = sample_point(3, 9);
  for (int k = 0; k < 3; ++k) {
    EXPECT_EQ(closed_X(k + 1, with_z(p, k, r(1)), {k}), r(0));
    EXPECT_EQ(closed_X(k + 1, with_z(p, k, r(-1)), {k}), r(0));
  }
}

TEST(ClosedX, Antisymmetry) {
  P p = sample_point(4, 10);
  for (int k = 0; k < 4; ++k) EXPECT_EQ(closed_X(k + 1, with_z(p, k, inv(p.z[k]))), -closed_X(k + 1, p));
}

TEST(ClosedX, ExchangeOfColumns) {
  P p = sample_point(4, 11);
  for (int k = 0; k < 4; ++k)
    for (int j = 0; j < 4; ++j) {
      P s = p;
      std::swap(s.z[k], s.z[j]);
      EXPECT_EQ(closed_X(k + 1, s), closed_X(j + 1, p));
    }
}

TEST(ClosedX, AllSlotsAtOnce) {
  P p = sample_point(5, 12);
  auto all = closed_X_all(p);
  for (int k = 1; k <= 5; ++k) EXPECT_EQ(all[k - 1], closed_X(k, p));
  P s = with_z(p, 2, q * p.z[0]);
  auto lim = closed_X_all(s, {2});
  for (int k : {2, 4, 5}) EXPECT_EQ(lim[k - 1], closed_X(k, s, {2}));
}

TEST(ClosedY, SpecializesToX) {
  P p = sample_point(3, 13);
  P sw = p;
  std::swap(sw.zeta1, sw.zeta2);
  for (int i = 0; i < 3; ++i) {
    C X = closed_X(i + 1, p), Xs = closed_X(i + 1, sw);
    EXPECT_EQ(closed_Y(p.z[i], p, {i}), X);
    EXPECT_EQ(closed_Y(inv(p.z[i]), p, {i}), -X);
    EXPECT_EQ(closed_Y(q * p.z[i], p, {i}), -Xs);
    EXPECT_EQ(closed_Y(q / p.z[i], p, {i}), Xs);
  }
}

TEST(ClosedY, SpectralSymmetryAndDummySlot) {
  P p = sample_point(3, 14);
  C w = sample_spectral(p, 14);
  P sw = p;
  std::swap(sw.zeta1, sw.zeta2);
  EXPECT_EQ(closed_Y(w, p), closed_Y(q / w, sw));
  EXPECT_EQ(closed_Y(w, p), closed_Y(w, p, {}, DummySlot::q_over_v));
}

TEST(ClosedForms, StableFloatAgrees) {
  for (int L = 1; L <= 5; ++L) {
    P p = sample_point(L, 60 + L);
    C w = sample_spectral(p, 60);
    auto pf = embed_point(p);
    for (int k = 1; k <= L; ++k) EXPECT_TRUE(approx_equal(closed_X_stable(k, pf), F(closed_X(k, p)), 1e-10));
    EXPECT_TRUE(approx_equal(closed_Y_stable(F(w), pf), F(closed_Y(w, p)), 1e-10));
  }
}

TEST(Homogeneous, MatchesExactNearbyPoint) {
  // exact evaluation at a point 1e-7 away from coincidence has no cancellation
  const int L = 4;
  C z0(Rational(3, 2), Rational(1, 3)), zeta1(Rational(4, 5)), zeta2(Rational(-2, 3), Rational(1, 2));
  P near{zeta1, zeta2, {}};
  for (int i = 0; i < L; ++i) near.z.push_back(z0 * C(Rational(1) + Rational(i + 1, 10000000)));
  ModelPoint<F> hom{F(zeta1), F(zeta2), std::vector<F>(L, F(z0))};
  for (int k = 1; k <= L; ++k) {
    auto h = closed_X_homogeneous(k, hom, 1e-4);
    F ex(closed_X(k, near));
    EXPECT_LE(std::abs(h.value.value() - ex.value()), 1e-5) << "k=" << k;
    EXPECT_LT(h.error_estimate, 1e-6);
  }
  C w(Rational(5, 7), Rational(-1, 2));
  auto hy = closed_Y_homogeneous(F(w), hom, 1e-4);
  EXPECT_LE(std::abs(hy.value.value() - F(closed_Y(w, near)).value()), 1e-5);
}

TEST(Homogeneous, RichardsonStableAtLEight) {
  const int L = 8;
  ModelPoint<F> hom{F(0.8), F(-0.6, 0.5), std::vector<F>(L, F(1.5, 0.3))};
  for (int k : {1, 4, 8}) {
    auto a = closed_X_homogeneous(k, hom, 1e-4);
    auto b = closed_X_homogeneous(k, hom, 5e-5);
    EXPECT_LT(a.error_estimate, 1e-6);
    EXPECT_LE(std::abs(a.value.value() - b.value.value()), 1e-6) << "k=" << k;
    EXPECT_TRUE(std::isfinite(a.value.re()) && std::isfinite(a.value.im()));
  }
}
