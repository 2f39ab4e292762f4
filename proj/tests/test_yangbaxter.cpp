#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "loopcurrent/groundstate.hpp"
#include "loopcurrent/yangbaxter.hpp"

using namespace lc;

namespace {
using C = CycloNum;
using F = ComplexApprox;
using P = ModelPoint<C>;
const C q = C::omega();
C r(long n, long d = 1) { return C(Rational(n, d)); }

P drop(P p, int from, int count) {
  p.z.erase(p.z.begin() + from, p.z.begin() + from + count);
  return p;
}
}  // namespace

TEST(RWeights, EqualRapidities) {
  C z(Rational(3, 2), Rational(-1, 3));
  auto rw = r_weights(z, z);
  EXPECT_EQ(rw.w1, r(1));
  EXPECT_EQ(rw.w2, r(0));
}

TEST(RWeights, Pole) { EXPECT_THROW(r_weights(q * r(2), r(2)), PoleError); }

TEST(RWeights, UnitarityAsOperators) {
  for (std::uint64_t s = 1; s <= 5; ++s) {
    auto v = sample_generic(s, 2);
    for (int L = 2; L <= 3; ++L)
      for (int i = 1; i < L; ++i)
        EXPECT_TRUE(same_matrix(exchange_matrix(L, i, r_weights(v[0], v[1])) * exchange_matrix(L, i, r_weights(v[1], v[0])),
                                Matrix<C>::identity(1 << L)));
  }
}

TEST(RWeights, IsotropicPointInFloat) {
  // u = z/w with u^2 = -1/q: [qu] = [u], so both orientations weigh the same
  F qf = F::omega();
  F u(std::sqrt(-(F(1.0) / qf).value()));
  F w(0.7, 0.2);
  auto rw = r_weights(u * w, w);
  EXPECT_TRUE(approx_equal(rw.w1, rw.w2, 1e-12));
  F sum = rw.w1 + rw.w2;
  EXPECT_TRUE(approx_equal(rw.w1 / sum, F(0.5), 1e-12));
}

TEST(KWeights, TrivialPoints) {
  C zeta(Rational(2, 3), Rational(1, 5));
  auto kr = k_weights(Side::right, r(1), zeta);
  EXPECT_EQ(kr.stay, r(1));
  EXPECT_EQ(kr.reflect, r(0));
  auto kl = k_weights(Side::left, q, zeta);
  EXPECT_EQ(kl.stay, r(1));
  EXPECT_EQ(kl.reflect, r(0));
}

TEST(KWeights, Unitarity) {
  for (std::uint64_t s = 1; s <= 10; ++s) {
    P p = sample_point(1, s);
    C w = sample_spectral(p, s);
    for (int L = 1; L <= 2; ++L) {
      auto id = Matrix<C>::identity(1 << L);
      EXPECT_TRUE(same_matrix(boundary_matrix(L, k_weights(Side::right, w, p.zeta2)) *
                                  boundary_matrix(L, k_weights(Side::right, r(1) / w, p.zeta2)),
                              id));
      EXPECT_TRUE(same_matrix(boundary_matrix(L, k_weights(Side::left, q / w, p.zeta1)) *
                                  boundary_matrix(L, k_weights(Side::left, q * w, p.zeta1)),
                              id));
    }
  }
}

TEST(TransferMatrix, SweepEqualsEnumeration) {
  for (int L = 1; L <= 4; ++L)
    for (std::uint64_t s = 1; s <= (L <= 3 ? 5u : 2u); ++s) {
      P p = sample_point(L, 100 + s);
      C w = sample_spectral(p, s);
      EXPECT_TRUE(same_matrix(transfer_matrix(w, p), transfer_matrix_enum(w, p))) << "L=" << L << " seed " << s;
    }
}

TEST(TransferMatrix, Commuting) {
  for (int L = 1; L <= 4; ++L) {
    P p = sample_point(L, 7 + L);
    C a = sample_spectral(p, 1), b = sample_spectral(p, 2);
    auto A = transfer_matrix(a, p), B = transfer_matrix(b, p);
    EXPECT_TRUE(same_matrix(A * B, B * A)) << "L=" << L;
  }
}

TEST(TransferMatrix, ColumnStochastic) {
  for (int L = 1; L <= 3; ++L) {
    P p = sample_point(L, 3);
    auto T = transfer_matrix(sample_spectral(p, 9), p);
    for (int c = 0; c < T.cols(); ++c) {
      C s(0);
      for (int i = 0; i < T.rows(); ++i) s += T(i, c);
      EXPECT_EQ(s, r(1));
    }
  }
}

TEST(TransferMatrix, TransposeRelation) {
  for (int L = 1; L <= 3; ++L) {
    P p = sample_point(L, 21);
    C w = sample_spectral(p, 4);
    auto R = reflect_matrix<C>(L);
    EXPECT_TRUE(same_matrix(transfer_matrix_up(w, p), R * transfer_matrix(q / w, swapped_reversed(p)) * R));
  }
}

TEST(TransferMatrix, BulkSpecialization) {
  for (int L = 3; L <= 4; ++L)
    for (int i = 1; i < L; ++i) {
      P p = sample_point(L, 40 + i);
      C w = sample_spectral(p, 5);
      p.z[i] = q * p.z[i - 1];
      auto Phi = phi_matrix<C>(L, i);
      EXPECT_TRUE(same_matrix(transfer_matrix(w, p) * Phi, Phi * transfer_matrix(w, drop(p, i - 1, 2))));
    }
}

TEST(TransferMatrix, BoundarySpecialization) {
  P p = sample_point(3, 17);
  C w = sample_spectral(p, 6);
  P s = p;
  s.z[0] = q * p.zeta1;
  P red = drop(s, 0, 1);
  red.zeta1 = q * p.zeta1;
  auto Phi = phi_boundary_matrix<C>(3, Side::left);
  EXPECT_TRUE(same_matrix(transfer_matrix(w, s) * Phi, Phi * transfer_matrix(w, red)));
}

TEST(TransferMatrix, FloatBackendAgrees) {
  P p = sample_point(3, 8);
  C w = sample_spectral(p, 8);
  auto a = transfer_matrix(w, p);
  auto b = transfer_matrix(F(w), embed_point(p));
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      EXPECT_LE(std::abs(F(a(i, j)).value() - b(i, j).value()), 1e-11 * std::max(1.0, std::abs(F(a(i, j)).value())));
}

TEST(RowConfig, Count) {
  EXPECT_EQ(RowConfig::count(1), 16u);
  EXPECT_EQ(RowConfig::count(3), 256u);
}

TEST(KappaX, Examples) {
  auto a = LinkPattern::parse("()"), b = LinkPattern::parse(")(");
  EXPECT_EQ(kappa_X(1, a, a), 0);
  int k1 = kappa_X(1, b, a), k2 = kappa_X(2, b, a);
  EXPECT_EQ(std::abs(k1), 1);
  EXPECT_EQ(k1, -k2);
  EXPECT_THROW(kappa_X(3, a, a), std::out_of_range);
}

// configurations without a left-right path carry no current; the rest add up to marked_transfer
TEST(MarkedTransfer, OnlyLeftRightPathsCount) {
  P p = sample_point(1, 2);
  C w = sample_spectral(p, 2);
  auto a = LinkPattern::parse("(");
  RowWeights<C> rw = row_weights(w, p, q);
  RowLayout lay(1);
  for (int k = 1; k <= 2; ++k) {
    C total(0);
    int silent = 0;
    for (std::uint64_t code = 0; code < RowConfig::count(1); ++code) {
      RowConfig c = RowConfig::decode(1, code);
      StrandGraph g(lay.nodes());
      lay.wire(g, c);
      lay.attach_below(g, a.partners());
      lay.attach_above(g, a.partners());
      Connectivity con = g.trace(lay.labels(), 1);
      bool carrier = false;
      for (const auto& st : con.strands) carrier = carrier || st.left_to_right();
      int n = signed_crossings(con, MarkedEdge::horizontal(k));
      if (!carrier) {
        EXPECT_EQ(n, 0);
        ++silent;
      }
      total += config_weight(rw, c) * C(n);
    }
    EXPECT_GT(silent, 0);
    EXPECT_EQ(marked_transfer(MarkedEdge::horizontal(k), w, p, a, a), total);
  }
}

TEST(MarkedTransfer, MatchesForms) {
  P p = sample_point(2, 31);
  C w = sample_spectral(p, 31);
  auto mf = marked_forms(w, p);
  auto pats = all_patterns(2);
  for (int k = 1; k <= 3; ++k)
    for (const auto& a : pats)
      for (const auto& b : pats)
        EXPECT_EQ(marked_transfer(MarkedEdge::horizontal(k), w, p, a, b), mf.y_bottom[k - 1](a.index(), b.index()));
}

TEST(MarkedForms, AdditivityAroundFace) {
  for (int L = 1; L <= 3; ++L) {
    P p = sample_point(L, 50 + L);
    C w = sample_spectral(p, 50);
    auto mf = marked_forms(w, p);
    for (int k = 1; k <= L; ++k) {
      auto lhs = mf.x_bottom[k - 1] - mf.y_bottom[k] - mf.x_middle[k - 1] + mf.y_bottom[k - 1];
      EXPECT_TRUE(same_matrix(lhs, Matrix<C>(lhs.rows(), lhs.cols()))) << "L=" << L << " k=" << k;
    }
  }
}

TEST(MarkedForms, YToXRecursion) {
  const int L = 3;
  for (int i = 1; i < L; ++i) {
    P s = sample_point(L, 60 + i);
    C w = sample_spectral(s, 60);
    s.z[i] = w;
    s.z[i - 1] = w / q;
    auto big = marked_forms(w, s);
    auto small = marked_forms(w, drop(s, i - 1, 2));
    auto lhs = big.x_bottom[i] * phi_matrix<C>(L, i);
    auto rhs = cap_matrix<C>(L, i).transpose() * small.y_bottom[i - 1];
    EXPECT_TRUE(same_matrix(lhs, rhs)) << "i=" << i;
  }
}

TEST(LoopWeight, CriticalPointIsOne) {
  EXPECT_EQ(loop_weight(q), r(1));
  F qf(std::polar(1.0, 1.0));
  EXPECT_TRUE(approx_equal(loop_weight(qf), F(-2.0 * std::cos(1.0))));
}
