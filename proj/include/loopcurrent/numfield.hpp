#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace lc {

using Rational = mpq_class;

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};
// a weight denominator vanished
struct PoleError : DomainError {
  using DomainError::DomainError;
};
// coincident determinant arguments; caller should use the homogeneous path
struct ConfluenceError : DomainError {
  using DomainError::DomainError;
};
struct SamplingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// a + b*w with w a primitive cube root of unity, w^2 = -1 - w
class CycloNum {
 public:
  CycloNum() = default;
  CycloNum(long a) : a_(a) {}
  CycloNum(Rational a, Rational b = 0) : a_(std::move(a)), b_(std::move(b)) {
    a_.canonicalize();
    b_.canonicalize();
  }
  static CycloNum omega() { return CycloNum(0, 1); }

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  bool is_zero() const { return sgn(a_) == 0 && sgn(b_) == 0; }
  Rational norm() const { return a_ * a_ - a_ * b_ + b_ * b_; }
  CycloNum conj() const { return CycloNum(a_ - b_, -b_); }
  CycloNum inverse() const;
  std::complex<double> embed() const;
  std::string str() const;

  CycloNum& operator+=(const CycloNum& o);
  CycloNum& operator-=(const CycloNum& o);
  CycloNum& operator*=(const CycloNum& o);
  CycloNum& operator/=(const CycloNum& o) { return *this *= o.inverse(); }

  friend CycloNum operator+(CycloNum x, const CycloNum& y) { return x += y; }
  friend CycloNum operator-(CycloNum x, const CycloNum& y) { return x -= y; }
  friend CycloNum operator*(CycloNum x, const CycloNum& y) { return x *= y; }
  friend CycloNum operator/(CycloNum x, const CycloNum& y) { return x /= y; }
  friend CycloNum operator-(const CycloNum& x) { return CycloNum(-x.a_, -x.b_); }
  friend bool operator==(const CycloNum& x, const CycloNum& y) {
    return x.a_ == y.a_ && x.b_ == y.b_;
  }

 private:
  Rational a_{0};
  Rational b_{0};
};

// double precision complex; equality goes through approx_equal
class ComplexApprox {
 public:
  ComplexApprox() = default;
  ComplexApprox(double re) : v_(re, 0.0) {}
  ComplexApprox(double re, double im) : v_(re, im) {}
  ComplexApprox(std::complex<double> v) : v_(v) {}
  explicit ComplexApprox(const CycloNum& x) : v_(x.embed()) {}
  static ComplexApprox omega() { return ComplexApprox(-0.5, 0.86602540378443864676); }

  double re() const { return v_.real(); }
  double im() const { return v_.imag(); }
  std::complex<double> value() const { return v_; }
  bool is_zero() const { return v_ == std::complex<double>(0.0, 0.0); }
  ComplexApprox inverse() const;
  std::string str() const;

  ComplexApprox& operator+=(const ComplexApprox& o) { v_ += o.v_; return *this; }
  ComplexApprox& operator-=(const ComplexApprox& o) { v_ -= o.v_; return *this; }
  ComplexApprox& operator*=(const ComplexApprox& o) { v_ *= o.v_; return *this; }
  ComplexApprox& operator/=(const ComplexApprox& o) { return *this *= o.inverse(); }

  friend ComplexApprox operator+(ComplexApprox x, const ComplexApprox& y) { return x += y; }
  friend ComplexApprox operator-(ComplexApprox x, const ComplexApprox& y) { return x -= y; }
  friend ComplexApprox operator*(ComplexApprox x, const ComplexApprox& y) { return x *= y; }
  friend ComplexApprox operator/(ComplexApprox x, const ComplexApprox& y) { return x /= y; }
  friend ComplexApprox operator-(const ComplexApprox& x) { return ComplexApprox(-x.v_); }

 private:
  std::complex<double> v_{0.0, 0.0};
};

bool approx_equal(const ComplexApprox& x, const ComplexApprox& y, double rel_tol = 1e-10);
double rel_diff(const ComplexApprox& x, const ComplexApprox& y);

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<CycloNum> {
  static constexpr bool exact = true;
  static constexpr const char* name = "exact";
  static CycloNum omega() { return CycloNum::omega(); }
  static CycloNum from_rational(const Rational& r) { return CycloNum(r); }
  static double magnitude(const CycloNum& x) { return std::abs(x.embed()); }
};

template <>
struct ScalarTraits<ComplexApprox> {
  static constexpr bool exact = false;
  static constexpr const char* name = "complex";
  static ComplexApprox omega() { return ComplexApprox::omega(); }
  static ComplexApprox from_rational(const Rational& r) { return ComplexApprox(r.get_d()); }
  static double magnitude(const ComplexApprox& x) { return std::abs(x.value()); }
};

template <class S>
concept Scalar = requires(S x, S y) {
  { x + y } -> std::convertible_to<S>;
  { x * y } -> std::convertible_to<S>;
  { x / y } -> std::convertible_to<S>;
  { x.is_zero() } -> std::convertible_to<bool>;
  { ScalarTraits<S>::omega() } -> std::convertible_to<S>;
};

// exact equality for CycloNum, relative tolerance for ComplexApprox
inline bool same(const CycloNum& x, const CycloNum& y, double = 0.0) { return x == y; }
inline bool same(const ComplexApprox& x, const ComplexApprox& y, double tol = 1e-10) {
  return approx_equal(x, y, tol);
}

template <Scalar S>
S omega_power(int k) {
  k = ((k % 3) + 3) % 3;
  if (k == 0) return S(1);
  S w = ScalarTraits<S>::omega();
  return k == 1 ? w : w * w;
}

template <Scalar S>
S ipow(const S& x, long n) {
  if (n < 0) return ipow(S(1) / x, -n);
  S r(1), b = x;
  while (n) {
    if (n & 1) r *= b;
    n >>= 1;
    if (n) b *= b;
  }
  return r;
}

inline std::ostream& operator<<(std::ostream& os, const CycloNum& x) { return os << x.str(); }
inline std::ostream& operator<<(std::ostream& os, const ComplexApprox& x) { return os << x.str(); }

inline ComplexApprox embed(const CycloNum& x) { return ComplexApprox(x); }

// [x] = x - 1/x
template <Scalar S>
S bracket(const S& x) {
  if (x.is_zero()) throw DomainError("bracket: argument is zero");
  return x - S(1) / x;
}

// k(a,b) = [q/(ab)][qb/a]
template <Scalar S>
S kfunc(const S& a, const S& b, const S& q) {
  if (a.is_zero() || b.is_zero()) throw DomainError("kfunc: argument is zero");
  return bracket(q / (a * b)) * bracket(q * b / a);
}
template <Scalar S>
S kfunc(const S& a, const S& b) {
  return kfunc(a, b, ScalarTraits<S>::omega());
}

// (-1)^L (w + 1/2), i.e. (-1)^L i sqrt(3)/2
template <Scalar S>
S c_const(int L) {
  S c = ScalarTraits<S>::omega() + ScalarTraits<S>::from_rational(Rational(1, 2));
  return (L % 2) ? -c : c;
}

struct Predicate {
  std::string name;
  std::function<bool(const CycloNum&)> ok;
};

// small-height random elements of Q(w); deterministic in seed
class CycloSampler {
 public:
  explicit CycloSampler(std::uint64_t seed) : state_(seed * 0x9E3779B97F4A7C15ULL + 0x2545F4914F6CDD1DULL) {}
  CycloNum next();
  std::uint64_t next_u64();

 private:
  std::uint64_t state_;
};

std::vector<CycloNum> sample_generic(std::uint64_t seed, int count,
                                     const std::vector<Predicate>& forbidden = {},
                                     int budget = 10000);

// parses "3/4", "-2", "1/2+3/4w", "w", "2-w"; the unit may also be written as the UTF-8 omega
CycloNum parse_cyclo(const std::string& text);
// parses "1.5", "0.3+1.2i", "-2i"
ComplexApprox parse_complex(const std::string& text);

void to_json(nlohmann::json& j, const CycloNum& x);
void from_json(const nlohmann::json& j, CycloNum& x);
void to_json(nlohmann::json& j, const ComplexApprox& x);
void from_json(const nlohmann::json& j, ComplexApprox& x);

}  // namespace lc
