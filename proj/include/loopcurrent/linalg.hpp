#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "loopcurrent/numfield.hpp"

namespace lc {

template <Scalar S>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : r_(rows), c_(cols), d_(static_cast<std::size_t>(rows) * cols, S(0)) {}
  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = S(1);
    return m;
  }

  int rows() const { return r_; }
  int cols() const { return c_; }
  S& operator()(int i, int j) { return d_[static_cast<std::size_t>(i) * c_ + j]; }
  const S& operator()(int i, int j) const { return d_[static_cast<std::size_t>(i) * c_ + j]; }

  Matrix transpose() const {
    Matrix t(c_, r_);
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.c_ != b.r_) throw std::invalid_argument("Matrix: shape mismatch in product");
    Matrix out(a.r_, b.c_);
    for (int i = 0; i < a.r_; ++i)
      for (int k = 0; k < a.c_; ++k) {
        const S& x = a(i, k);
        if (x.is_zero()) continue;
        for (int j = 0; j < b.c_; ++j)
          if (!b(k, j).is_zero()) out(i, j) += x * b(k, j);
      }
    return out;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) {
    for (std::size_t i = 0; i < a.d_.size(); ++i) a.d_[i] += b.d_[i];
    return a;
  }
  friend Matrix operator-(Matrix a, const Matrix& b) {
    for (std::size_t i = 0; i < a.d_.size(); ++i) a.d_[i] -= b.d_[i];
    return a;
  }
  friend Matrix operator*(const S& s, Matrix a) {
    for (auto& x : a.d_) x *= s;
    return a;
  }
  std::vector<S> apply(const std::vector<S>& v) const {
    if (static_cast<int>(v.size()) != c_) throw std::invalid_argument("Matrix: shape mismatch in apply");
    std::vector<S> out(r_, S(0));
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < c_; ++j)
        if (!(*this)(i, j).is_zero() && !v[j].is_zero()) out[i] += (*this)(i, j) * v[j];
    return out;
  }
  const std::vector<S>& data() const { return d_; }

 private:
  int r_ = 0, c_ = 0;
  std::vector<S> d_;
};

template <Scalar S>
bool same_matrix(const Matrix<S>& a, const Matrix<S>& b, double tol = 1e-10) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  if constexpr (ScalarTraits<S>::exact) {
    return a.data() == b.data();
  } else {
    // tolerance relative to the largest entry of either matrix
    double scale = 0, diff = 0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
      scale = std::max({scale, std::abs(a.data()[i].value()), std::abs(b.data()[i].value())});
      diff = std::max(diff, std::abs(a.data()[i].value() - b.data()[i].value()));
    }
    return diff <= tol * std::max(scale, 1e-300);
  }
}

template <Scalar S>
S determinant(Matrix<S> m);

template <Scalar S>
std::vector<std::vector<S>> nullspace(Matrix<S> m, double tol = 1e-9);

// kernel of m when it is a line, scaled to 1 at its last nonzero entry. Solved modulo many primes
// and lifted; the answer is checked exactly. nullopt when the kernel is not a line or the prime
// budget runs out (nullspace() then gives the answer)
std::optional<std::vector<CycloNum>> kernel_line(const Matrix<CycloNum>& m, int max_primes = 4000);

namespace detail {

// lcm of all denominators in a row, so the scaled row lives in Z[w]
inline mpz_class row_denominator(const Matrix<CycloNum>& m, int r) {
  mpz_class l = 1;
  for (int j = 0; j < m.cols(); ++j) {
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(r, j).a().get_den_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(r, j).b().get_den_mpz_t());
  }
  return l;
}

// element of Z[w]; only what fraction-free elimination needs
struct Zw {
  mpz_class a, b;
  bool is_zero() const { return sgn(a) == 0 && sgn(b) == 0; }
};

// out = x*y - u*v
inline void cross(Zw& out, const Zw& x, const Zw& y, const Zw& u, const Zw& v, mpz_class& t) {
  // (a+bw)(c+dw) = (ac - bd) + (ad + bc - bd) w
  mpz_class ra = x.a * y.a;
  mpz_class rb = x.a * y.b;
  t = x.b * y.b;
  ra -= t;
  rb += x.b * y.a;
  rb -= t;
  ra -= u.a * v.a;
  rb -= u.a * v.b;
  t = u.b * v.b;
  ra += t;
  rb -= u.b * v.a;
  rb += t;
  out.a.swap(ra);
  out.b.swap(rb);
}

inline Zw mul(const Zw& x, const Zw& y) {
  mpz_class bd = x.b * y.b;
  return {x.a * y.a - bd, x.a * y.b + x.b * y.a - bd};
}

// x / p for p | x in Z[w]: x * conj(p) / norm(p)
inline void divexact(Zw& x, const Zw& p, const mpz_class& norm) {
  mpz_class ca = p.a - p.b;  // conj(p) = (a - b) - b w
  mpz_class cb = -p.b;
  mpz_class ra = x.a * ca - x.b * cb;
  mpz_class rb = x.a * cb + x.b * ca - x.b * cb;
  mpz_divexact(x.a.get_mpz_t(), ra.get_mpz_t(), norm.get_mpz_t());
  mpz_divexact(x.b.get_mpz_t(), rb.get_mpz_t(), norm.get_mpz_t());
}

inline mpz_class zw_norm(const Zw& p) { return p.a * p.a - p.a * p.b + p.b * p.b; }

// rows scaled into Z[w]; returns the product of the row scales
inline mpz_class to_integer_rows(const Matrix<CycloNum>& m, std::vector<Zw>& out) {
  const int R = m.rows(), C = m.cols();
  out.assign(static_cast<std::size_t>(R) * C, Zw{});
  mpz_class scale = 1;
  for (int i = 0; i < R; ++i) {
    mpz_class l = row_denominator(m, i);
    scale *= l;
    for (int j = 0; j < C; ++j) {
      Zw& z = out[static_cast<std::size_t>(i) * C + j];
      const CycloNum& x = m(i, j);
      z.a = l / x.a().get_den() * x.a().get_num();
      z.b = l / x.b().get_den() * x.b().get_num();
    }
  }
  return scale;
}

// fraction-free elimination on an n x n row-major block; consumes z
inline Zw bareiss_det(std::vector<Zw>& z, int n) {
  auto at = [&](int i, int j) -> Zw& { return z[static_cast<std::size_t>(i) * n + j]; };
  Zw prev{1, 0};
  mpz_class prev_norm = 1, t;
  bool flip = false;
  for (int k = 0; k < n - 1; ++k) {
    if (at(k, k).is_zero()) {
      int p = k + 1;
      while (p < n && at(p, k).is_zero()) ++p;
      if (p == n) return Zw{};
      for (int j = 0; j < n; ++j) std::swap(at(k, j), at(p, j));
      flip = !flip;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        cross(at(i, j), at(k, k), at(i, j), at(i, k), at(k, j), t);
        if (k > 0) divexact(at(i, j), prev, prev_norm);
      }
      at(i, k) = Zw{};
    }
    prev = at(k, k);
    prev_norm = zw_norm(prev);
  }
  Zw r = std::move(at(n - 1, n - 1));
  if (flip) {
    r.a = -r.a;
    r.b = -r.b;
  }
  return r;
}

inline CycloNum from_zw(const Zw& z) { return CycloNum(Rational(z.a), Rational(z.b)); }

}  // namespace detail

// Bareiss over Z[w] on integer-scaled rows for the exact field; partial pivoting LU for floats
template <Scalar S>
S determinant(Matrix<S> m) {
  int n = m.rows();
  if (n != m.cols()) throw std::invalid_argument("determinant: matrix not square");
  if (n == 0) return S(1);
  if constexpr (ScalarTraits<S>::exact) {
    std::vector<detail::Zw> z;
    mpz_class scale = detail::to_integer_rows(m, z);
    return detail::from_zw(detail::bareiss_det(z, n)) * CycloNum(Rational(1) / Rational(scale));
  } else {
    S det(1);
    for (int k = 0; k < n; ++k) {
      int p = k;
      double best = std::abs(m(k, k).value());
      for (int i = k + 1; i < n; ++i)
        if (std::abs(m(i, k).value()) > best) best = std::abs(m(i, k).value()), p = i;
      if (best == 0.0) return S(0);
      if (p != k) {
        for (int j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
        det = -det;
      }
      det *= m(k, k);
      S inv = m(k, k).inverse();
      for (int i = k + 1; i < n; ++i) {
        S f = m(i, k) * inv;
        if (f.is_zero()) continue;
        for (int j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
      }
    }
    return det;
  }
}

// basis of the right kernel; exact: fraction-free forward pass, then back substitution
template <Scalar S>
std::vector<std::vector<S>> nullspace(Matrix<S> m, double tol) {
  int R = m.rows(), C = m.cols();
  std::vector<int> pivcol;
  int row = 0;
  if constexpr (ScalarTraits<S>::exact) {
    (void)tol;
    std::vector<detail::Zw> z;
    detail::to_integer_rows(m, z);
    auto at = [&](int i, int j) -> detail::Zw& { return z[static_cast<std::size_t>(i) * C + j]; };
    detail::Zw prev{1, 0};
    mpz_class prev_norm = 1, t;
    bool first = true;
    for (int col = 0; col < C && row < R; ++col) {
      int p = row;
      while (p < R && at(p, col).is_zero()) ++p;
      if (p == R) continue;
      if (p != row)
        for (int j = 0; j < C; ++j) std::swap(at(row, j), at(p, j));
      for (int i = row + 1; i < R; ++i) {
        if (at(i, col).is_zero()) {
          // row untouched by this pivot apart from the common scaling
          for (int j = col + 1; j < C; ++j) {
            detail::Zw& x = at(i, j);
            if (x.is_zero()) continue;
            detail::Zw y;
            detail::cross(y, at(row, col), x, at(i, col), at(row, j), t);
            if (!first) detail::divexact(y, prev, prev_norm);
            x = std::move(y);
          }
          continue;
        }
        for (int j = col + 1; j < C; ++j) {
          detail::cross(at(i, j), at(row, col), at(i, j), at(i, col), at(row, j), t);
          if (!first) detail::divexact(at(i, j), prev, prev_norm);
        }
        at(i, col) = detail::Zw{};
      }
      prev = at(row, col);
      prev_norm = detail::zw_norm(prev);
      first = false;
      pivcol.push_back(col);
      ++row;
    }
    for (int i = 0; i < R; ++i)
      for (int j = 0; j < C; ++j) m(i, j) = detail::from_zw(at(i, j));
  } else {
    double maxabs = 0;
    for (const auto& x : m.data()) maxabs = std::max(maxabs, std::abs(x.value()));
    double thresh = tol * std::max(maxabs, 1e-300);
    for (int col = 0; col < C && row < R; ++col) {
      int p = row;
      double best = 0;
      for (int i = row; i < R; ++i)
        if (std::abs(m(i, col).value()) > best) best = std::abs(m(i, col).value()), p = i;
      if (best <= thresh) {
        for (int i = row; i < R; ++i) m(i, col) = S(0);
        continue;
      }
      if (p != row)
        for (int j = 0; j < C; ++j) std::swap(m(row, j), m(p, j));
      S inv = m(row, col).inverse();
      for (int i = row + 1; i < R; ++i) {
        S f = m(i, col) * inv;
        for (int j = col; j < C; ++j) m(i, j) -= f * m(row, j);
        m(i, col) = S(0);
      }
      pivcol.push_back(col);
      ++row;
    }
  }
  std::vector<char> is_piv(C, 0);
  for (int c : pivcol) is_piv[c] = 1;
  std::vector<std::vector<S>> basis;
  for (int f = 0; f < C; ++f) {
    if (is_piv[f]) continue;
    std::vector<S> x(C, S(0));
    x[f] = S(1);
    for (int r = static_cast<int>(pivcol.size()) - 1; r >= 0; --r) {
      int pc = pivcol[r];
      S acc(0);
      for (int j = pc + 1; j < C; ++j)
        if (!x[j].is_zero() && !m(r, j).is_zero()) acc += m(r, j) * x[j];
      x[pc] = -acc / m(r, pc);
    }
    basis.push_back(std::move(x));
  }
  return basis;
}

}  // namespace lc
