#include <gtest/gtest.h>

#include "loopcurrent/numfield.hpp"

using namespace lc;

namespace {
const CycloNum w = CycloNum::omega();
CycloNum r(long n, long d = 1) { return CycloNum(Rational(n, d)); }
}  // namespace

TEST(CycloNum, OmegaReduction) {
  EXPECT_EQ(w * w, r(-1) - w);
  EXPECT_EQ(w * w * w, r(1));
  EXPECT_EQ(r(1) + w + w * w, r(0));
}

TEST(CycloNum, CanonicalForm) {
  CycloNum x(Rational(4, 6), Rational(-10, 4));
  EXPECT_EQ(x.a(), Rational(2, 3));
  EXPECT_EQ(x.b(), Rational(-5, 2));
  EXPECT_EQ(x.a().get_den(), 3);
  EXPECT_EQ(x, CycloNum(Rational(2, 3), Rational(-5, 2)));
}

TEST(CycloNum, InverseAndZero) {
  EXPECT_THROW(r(0).inverse(), DomainError);
  CycloNum x(Rational(3, 7), Rational(-2, 5));
  EXPECT_EQ(x * x.inverse(), r(1));
  EXPECT_EQ(x.norm(), x.a() * x.a() - x.a() * x.b() + x.b() * x.b());
}

TEST(CycloNum, RandomInverseRoundTrip) {
  CycloSampler rng(77);
  for (int i = 0; i < 1000; ++i) {
    CycloNum x = rng.next(), y = rng.next();
    ASSERT_FALSE(x.is_zero());
    ASSERT_EQ((x * y) * x.inverse(), y);
  }
}

TEST(CycloNum, EmbeddingIsHomomorphism) {
  CycloSampler rng(5);
  for (int i = 0; i < 200; ++i) {
    CycloNum x = rng.next(), y = rng.next();
    ComplexApprox ex(x), ey(y);
    EXPECT_TRUE(approx_equal(ComplexApprox(x + y), ex + ey, 1e-12));
    EXPECT_TRUE(approx_equal(ComplexApprox(x - y), ex - ey, 1e-12) || (x - y).is_zero());
    EXPECT_TRUE(approx_equal(ComplexApprox(x * y), ex * ey, 1e-12));
    EXPECT_TRUE(approx_equal(ComplexApprox(x / y), ex / ey, 1e-12));
  }
}

TEST(ComplexApprox, ToleranceComparison) {
  EXPECT_TRUE(approx_equal(ComplexApprox(1.0, 1.0), ComplexApprox(1.0 + 1e-12, 1.0)));
  EXPECT_FALSE(approx_equal(ComplexApprox(1.0, 1.0), ComplexApprox(1.0 + 1e-6, 1.0)));
  EXPECT_TRUE(approx_equal(ComplexApprox(1.0), ComplexApprox(1.0 + 1e-6), 1e-5));
  EXPECT_TRUE(approx_equal(ComplexApprox::omega() * ComplexApprox::omega() * ComplexApprox::omega(), ComplexApprox(1.0)));
}

TEST(Bracket, Examples) {
  EXPECT_EQ(bracket(r(1)), r(0));
  EXPECT_EQ(bracket(w), r(2) * w + r(1));
  EXPECT_EQ(bracket(r(2)), r(3, 2));
  EXPECT_THROW(bracket(r(0)), DomainError);
  CycloNum x(Rational(5, 3), Rational(1, 4));
  EXPECT_EQ(bracket(x.inverse()), -bracket(x));
}

TEST(Kfunc, Examples) {
  EXPECT_EQ(kfunc(r(1), r(1)), r(-3));
  CycloNum b(Rational(2, 5), Rational(-1, 3));
  EXPECT_EQ(kfunc(w * b, b), r(0));
  // frozen: [w/2]^2 from the definition k(a,b) = [q/ab][qb/a]
  EXPECT_EQ(kfunc(r(2), r(1)), CycloNum(Rational(-9, 4), Rational(15, 4)));
  EXPECT_EQ(kfunc(r(2), r(1)), bracket(w / r(2)) * bracket(w / r(2)));
  EXPECT_THROW(kfunc(r(0), r(1)), DomainError);
}

// inverting both bracket arguments: k(a,b) = k(1/(qa), 1/b)
TEST(Kfunc, InversionSymmetry) {
  CycloSampler rng(11);
  int checked = 0;
  for (int i = 0; i < 50; ++i) {
    CycloNum a = rng.next(), b = rng.next();
    if ((w * b / a - r(1)).is_zero() || (w / (a * b) - r(1)).is_zero()) continue;
    EXPECT_EQ(kfunc(a, b), kfunc((w * a).inverse(), b.inverse()));
    ++checked;
  }
  EXPECT_GT(checked, 40);
}

// the swapped-and-inverted form k(1/b, 1/a) is not an identity of this k
TEST(Kfunc, SwappedInversionIsNotAnIdentity) {
  CycloNum a(Rational(3, 2), Rational(1, 3)), b(Rational(-2, 5), Rational(1, 1));
  EXPECT_NE(kfunc(a, b), kfunc(b.inverse(), a.inverse()));
}

TEST(CConst, Values) {
  EXPECT_EQ(c_const<CycloNum>(2), w + r(1, 2));
  EXPECT_EQ(c_const<CycloNum>(3), -w - r(1, 2));
  for (int L = 1; L <= 8; ++L) EXPECT_EQ(c_const<CycloNum>(L) * c_const<CycloNum>(L), r(-3, 4));
  EXPECT_TRUE(approx_equal(c_const<ComplexApprox>(5), ComplexApprox(c_const<CycloNum>(5))));
}

TEST(SampleGeneric, Deterministic) {
  auto a = sample_generic(1, 3);
  auto b = sample_generic(1, 3);
  ASSERT_EQ(a.size(), 3u);
  EXPECT_EQ(a, b);
  for (const auto& x : a) EXPECT_FALSE(x.is_zero());
  EXPECT_NE(sample_generic(2, 3), a);
}

TEST(SampleGeneric, Rejection) {
  CycloNum first = sample_generic(1, 1)[0];
  std::vector<Predicate> preds{{"value != first", [&](const CycloNum& x) { return !(x == first); }}};
  auto out = sample_generic(1, 20, preds);
  for (const auto& x : out) EXPECT_NE(x, first);
}

TEST(SampleGeneric, BudgetExceeded) {
  std::vector<Predicate> never{{"impossible", [](const CycloNum&) { return false; }}};
  try {
    sample_generic(3, 1, never, 50);
    FAIL() << "expected a sampling error";
  } catch (const SamplingError& e) {
    EXPECT_NE(std::string(e.what()).find("impossible"), std::string::npos);
  }
  EXPECT_THROW(sample_generic(3, 0), SamplingError);
}

TEST(Parse, CycloAndComplex) {
  EXPECT_EQ(parse_cyclo("3/4"), r(3, 4));
  EXPECT_EQ(parse_cyclo("w"), w);
  EXPECT_EQ(parse_cyclo("2-w"), r(2) - w);
  EXPECT_EQ(parse_cyclo("1/2+3/4w"), CycloNum(Rational(1, 2), Rational(3, 4)));
  EXPECT_THROW(parse_cyclo("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_cyclo("abc"), std::invalid_argument);
  EXPECT_TRUE(approx_equal(parse_complex("0.3+1.2i"), ComplexApprox(0.3, 1.2)));
  EXPECT_TRUE(approx_equal(parse_complex("-2i"), ComplexApprox(0.0, -2.0)));
}

TEST(Json, RoundTrip) {
  CycloNum x(Rational(-7, 3), Rational(5, 8));
  nlohmann::json j = x;
  EXPECT_EQ(j["a"], "-7/3");
  EXPECT_EQ(j["b"], "5/8");
  EXPECT_EQ(j.get<CycloNum>(), x);
  nlohmann::json k = ComplexApprox(0.5, -1.5);
  EXPECT_DOUBLE_EQ(k["re"].get<double>(), 0.5);
  EXPECT_DOUBLE_EQ(k["im"].get<double>(), -1.5);
  EXPECT_EQ(parse_cyclo(x.str()), x);
}
