#include "loopcurrent/chartoda.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <memory>

#include "loopcurrent/linalg.hpp"

namespace lc {

PartitionShape PartitionShape::staircase(int L) {
  PartitionShape s;
  for (int j = 1; j <= L; ++j) s.parts.push_back((L - j) / 2);
  return s;
}

namespace {

// exponents of the numerator (shape lambda) or the Weyl denominator (empty shape)
std::vector<long> row_exponents(const PartitionShape& lambda) {
  int n = lambda.n();
  std::vector<long> e(n);
  for (int j = 0; j < n; ++j) e[j] = lambda.parts[j] + n - j;
  return e;
}

std::vector<long> denominator_exponents(int n) {
  std::vector<long> e(n);
  for (int j = 0; j < n; ++j) e[j] = n - j;
  return e;
}

Rational falling(long a, int m) {
  Rational r = 1;
  for (int i = 0; i < m; ++i) r *= (a - i);
  return r;
}

// row mode: -2 plain, -1 theta = z d/dz, m >= 0 the m-th ordinary z-derivative
constexpr int kPlain = -2;
constexpr int kTheta = -1;

// powers of one variable, computed once per exponent
template <Scalar S>
struct PowerTable {
  S z, inv;
  std::map<long, S> memo;
  explicit PowerTable(const S& x) : z(x), inv(S(1) / x) {}
  const S& operator()(long e) {
    auto it = memo.find(e);
    if (it != memo.end()) return it->second;
    return memo.emplace(e, e < 0 ? ipow(inv, -e) : ipow(z, e)).first->second;
  }
};

template <Scalar S>
S entry(PowerTable<S>& pw, long e, int mode) {
  long p = 2 * e;
  if (mode == kPlain || mode == 0) return pw(p) - pw(-p);
  if (mode == kTheta) return ScalarTraits<S>::from_rational(Rational(p)) * (pw(p) + pw(-p));
  return ScalarTraits<S>::from_rational(falling(p, mode)) * pw(p - mode) -
         ScalarTraits<S>::from_rational(falling(-p, mode)) * pw(-p - mode);
}

// one variable z = u/d with u in Z[w]; 1/z = d conj(u) / N(u). Row entries are
// scaled by (d N)^P so they stay integral
struct IntegerPowers {
  detail::Zw u, ubar;
  mpz_class d, N;
  std::vector<detail::Zw> up{}, ubp{};
  std::vector<mpz_class> dp{}, Np{};

  explicit IntegerPowers(const CycloNum& z) {
    d = 1;
    mpz_lcm(d.get_mpz_t(), z.a().get_den_mpz_t(), z.b().get_den_mpz_t());
    u.a = d / z.a().get_den() * z.a().get_num();
    u.b = d / z.b().get_den() * z.b().get_num();
    ubar = {u.a - u.b, -u.b};
    N = detail::zw_norm(u);
    up.push_back({1, 0});
    ubp.push_back({1, 0});
    dp.push_back(1);
    Np.push_back(1);
  }
  void grow(long e) {
    while (static_cast<long>(up.size()) <= e) {
      up.push_back(detail::mul(up.back(), u));
      ubp.push_back(detail::mul(ubp.back(), ubar));
      Np.push_back(Np.back() * N);
    }
    while (static_cast<long>(dp.size()) <= 2 * e) dp.push_back(dp.back() * d);
  }
  // z^e (d N)^P, needs |e| <= P
  detail::Zw scaled(long e, long P) {
    grow(P);
    detail::Zw r;
    if (e >= 0) {
      mpz_class f = dp[P - e] * Np[P];
      r = {up[e].a * f, up[e].b * f};
    } else {
      mpz_class f = dp[P - e] * Np[P + e];
      r = {ubp[-e].a * f, ubp[-e].b * f};
    }
    return r;
  }
};

template <Scalar S>
struct Alternant {
  const std::vector<S>& z;
  std::vector<long> exps;
  mutable std::vector<PowerTable<S>> pw{};
  // shared between alternants over the same variables
  std::shared_ptr<std::vector<IntegerPowers>> ip = std::make_shared<std::vector<IntegerPowers>>();

  S det(const std::vector<int>& mode) const {
    int n = static_cast<int>(z.size());
    if constexpr (ScalarTraits<S>::exact) {
      if (ip->empty())
        for (const auto& x : z) ip->emplace_back(x);
      std::vector<detail::Zw> m(static_cast<std::size_t>(n) * n);
      mpz_class scale = 1;
      for (int i = 0; i < n; ++i) {
        // (coefficient, exponent) pairs for each column
        long P = 0;
        std::vector<std::array<std::pair<mpz_class, long>, 2>> terms(n);
        for (int j = 0; j < n; ++j) {
          long p = 2 * exps[j];
          int md = mode[i];
          if (md == kPlain || md == 0)
            terms[j] = {{{1, p}, {-1, -p}}};
          else if (md == kTheta)
            terms[j] = {{{p, p}, {p, -p}}};
          else
            terms[j] = {{{mpz_class(falling(p, md).get_num()), p - md},
                         {mpz_class(-falling(-p, md).get_num()), -p - md}}};
          for (const auto& t : terms[j]) P = std::max(P, std::abs(t.second));
        }
        IntegerPowers& w = (*ip)[i];
        for (int j = 0; j < n; ++j) {
          detail::Zw acc;
          for (const auto& [c, e] : terms[j]) {
            if (sgn(c) == 0) continue;
            detail::Zw t = w.scaled(e, P);
            acc.a += c * t.a;
            acc.b += c * t.b;
          }
          m[static_cast<std::size_t>(i) * n + j] = std::move(acc);
        }
        w.grow(P);
        scale *= w.dp[P] * w.Np[P];
      }
      return detail::from_zw(detail::bareiss_det(m, n)) * CycloNum(Rational(1) / Rational(scale));
    } else {
      if (pw.empty())
        for (const auto& x : z) pw.emplace_back(x);
      Matrix<S> m(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = entry(pw[i], exps[j], mode[i]);
      return determinant(m);
    }
  }
};

// all compositions of `total` into `parts` non-negative pieces, lexicographic
void compositions(int parts, int total, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (parts == 0) {
    if (total == 0) out.push_back(cur);
    return;
  }
  if (parts == 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int o = 0; o <= total; ++o) {
    cur.push_back(o);
    compositions(parts - 1, total - o, cur, out);
    cur.pop_back();
  }
}

// Taylor coefficients of one total order, with the float size |det| prod |z_s|^o_s / o_s!
template <Scalar S>
struct Level {
  std::vector<std::vector<int>> orders;
  std::vector<S> dets;
  std::vector<double> size;
  double max = 0;
};

template <Scalar S>
Level<S> taylor_level(const Alternant<S>& alt, const std::vector<int>& slots, int total) {
  Level<S> lv;
  std::vector<int> cur;
  compositions(static_cast<int>(slots.size()), total, cur, lv.orders);
  std::vector<int> mode(alt.z.size(), kPlain);
  for (const auto& ord : lv.orders) {
    double scale = 1;
    for (std::size_t s = 0; s < slots.size(); ++s) {
      mode[slots[s]] = ord[s];
      scale *= std::pow(ScalarTraits<S>::magnitude(alt.z[slots[s]]), ord[s]) / std::tgamma(ord[s] + 1.0);
    }
    S d = alt.det(mode);
    lv.dets.push_back(d);
    lv.size.push_back(ScalarTraits<S>::magnitude(d) * scale);
    lv.max = std::max(lv.max, lv.size.back());
  }
  return lv;
}

// first non-vanishing Taylor coefficient over the slots: exact zero test in Q(w); in floating point a
// level counts as vanishing when it is negligible next to the following level
template <Scalar S>
std::pair<std::vector<int>, S> leading_coefficient(const Alternant<S>& alt, const std::vector<int>& slots) {
  const int max_total = 8;
  const double rel = 1e-7;
  Level<S> cur = taylor_level(alt, slots, 0);
  for (int total = 0; total <= max_total; ++total) {
    if constexpr (ScalarTraits<S>::exact) {
      for (std::size_t c = 0; c < cur.dets.size(); ++c)
        if (!cur.dets[c].is_zero()) return {cur.orders[c], cur.dets[c]};
      if (slots.empty()) break;
      cur = taylor_level(alt, slots, total + 1);
    } else {
      if (slots.empty()) {
        if (cur.max > 0) return {cur.orders[0], cur.dets[0]};
        break;
      }
      Level<S> next = taylor_level(alt, slots, total + 1);
      if (cur.max > rel * next.max && cur.max > 0)
        for (std::size_t c = 0; c < cur.dets.size(); ++c)
          if (cur.size[c] > rel * cur.max) return {cur.orders[c], cur.dets[c]};
      cur = std::move(next);
    }
  }
  throw ConfluenceError(slots.empty() ? "log_deriv_tau: determinant vanishes at a coincident point (pass an approach)"
                                      : "log_deriv_tau: no non-vanishing Taylor coefficient up to order 8");
}

// leading Taylor coefficient over the approach slots; shared by every slot derivative of one alternant
template <Scalar S>
struct Lead {
  std::vector<int> slots, order;
  S base;
};

template <Scalar S>
Lead<S> lead_of(const Alternant<S>& alt, const std::vector<int>& approach) {
  Lead<S> l;
  l.slots = approach;
  std::sort(l.slots.begin(), l.slots.end());
  l.slots.erase(std::unique(l.slots.begin(), l.slots.end()), l.slots.end());
  auto [order, base] = leading_coefficient(alt, l.slots);
  l.order = std::move(order);
  l.base = std::move(base);
  return l;
}

// regular part of z_k d/dz_k log det(alternant), see log_deriv_tau
template <Scalar S>
S regular_log_deriv(const Alternant<S>& alt, const Lead<S>& l, int k, int& pole) {
  std::vector<int> mode(alt.z.size(), kPlain);
  for (std::size_t s = 0; s < l.slots.size(); ++s) mode[l.slots[s]] = l.order[s];
  auto it = std::find(l.slots.begin(), l.slots.end(), k);
  if (it == l.slots.end()) {
    pole = 0;
    mode[k] = kTheta;
    return alt.det(mode) / l.base;
  }
  int ok = l.order[it - l.slots.begin()];
  pole = ok;
  mode[k] = ok + 1;
  return alt.z[k] * alt.det(mode) / (ScalarTraits<S>::from_rational(Rational(ok + 1)) * l.base);
}

// log_deriv_tau at several slots of one argument list; poles[i] as in log_deriv_tau
template <Scalar S>
std::vector<S> log_deriv_tau_slots(const std::vector<int>& slots, const std::vector<S>& z,
                                   const std::vector<int>& approach, std::vector<int>& poles) {
  int n = static_cast<int>(z.size());
  for (int slot : slots)
    if (slot < 0 || slot >= n) throw std::out_of_range("log_deriv_tau: slot out of range");
  for (const auto& zi : z)
    if (zi.is_zero()) throw DomainError("log_deriv_tau: zero argument");
  Alternant<S> num{z, row_exponents(PartitionShape::staircase(n))};
  Alternant<S> den{z, denominator_exponents(n)};
  den.ip = num.ip;
  Lead<S> ln = lead_of(num, approach), ld = lead_of(den, approach);
  std::vector<S> out;
  poles.assign(slots.size(), 0);
  for (std::size_t i = 0; i < slots.size(); ++i) {
    int pn = 0, pd = 0;
    out.push_back(regular_log_deriv(num, ln, slots[i], pn) - regular_log_deriv(den, ld, slots[i], pd));
    poles[i] = pn - pd;
  }
  return out;
}

}  // namespace

// same character through complete symmetric functions of x^{+-1}: first column h_{l_i-i+1},
// the others h_{l_i-i+j} + h_{l_i-i-j+2}
template <Scalar S>
S sympchar_complete(const PartitionShape& lambda, const std::vector<S>& x) {
  const int n = lambda.n();
  int M = 0;
  for (int v : lambda.parts) M = std::max(M, v + n);
  std::vector<S> h(M + 1, S(0));
  h[0] = S(1);
  for (const S& xi : x)
    for (const S& a : {xi, S(1) / xi})
      for (int m = 1; m <= M; ++m) h[m] += a * h[m - 1];
  auto H = [&](int m) { return m < 0 ? S(0) : h[m]; };
  Matrix<S> m(n, n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      int l = lambda.parts[i - 1];
      m(i - 1, j - 1) = j == 1 ? H(l - i + 1) : H(l - i + j) + H(l - i - j + 2);
    }
  return determinant(m);
}

template <Scalar S>
S sympchar(const PartitionShape& lambda, const std::vector<S>& x) {
  int n = lambda.n();
  if (static_cast<int>(x.size()) != n) throw std::invalid_argument("sympchar: shape and argument count differ");
  if (n == 0) return S(1);
  Matrix<S> num(n, n), den(n, n);
  auto e = row_exponents(lambda);
  for (int i = 0; i < n; ++i) {
    if (x[i].is_zero()) throw DomainError("sympchar: zero argument");
    for (int j = 0; j < n; ++j) {
      num(i, j) = ipow(x[i], e[j]) - ipow(x[i], -e[j]);
      den(i, j) = ipow(x[i], n - j) - ipow(x[i], -(n - j));
    }
  }
  S d = determinant(den);
  if constexpr (ScalarTraits<S>::exact) {
    // coincident or self-inverse arguments: the character is still a polynomial
    if (d.is_zero()) return sympchar_complete(lambda, x);
  } else {
    if (std::abs(d.value()) < 1e-300)
      throw ConfluenceError("sympchar: Weyl denominator vanishes (coincident arguments; use the homogeneous path)");
  }
  return determinant(num) / d;
}

Rational weyl_dim(const PartitionShape& lambda, int n) {
  if (lambda.n() != n) throw std::invalid_argument("weyl_dim: shape length differs from rank");
  std::vector<long> l(n), m(n);
  for (int i = 0; i < n; ++i) {
    l[i] = lambda.parts[i] + n - i;
    m[i] = n - i;
  }
  Rational r = 1;
  for (int i = 0; i < n; ++i) {
    r *= Rational(l[i], m[i]);
    for (int j = i + 1; j < n; ++j) r *= Rational(l[i] * l[i] - l[j] * l[j], m[i] * m[i] - m[j] * m[j]);
  }
  r.canonicalize();
  return r;
}

template <Scalar S>
S tau(const std::vector<S>& z) {
  std::vector<S> x;
  for (const auto& zi : z) x.push_back(zi * zi);
  return sympchar(PartitionShape::staircase(static_cast<int>(z.size())), x);
}

template <Scalar S>
S log_deriv_tau(int slot, const std::vector<S>& z, const std::vector<int>& approach, int* pole) {
  std::vector<int> poles;
  S v = log_deriv_tau_slots(std::vector<int>{slot}, z, approach, poles).front();
  if (pole)
    *pole = poles[0];
  else if (poles[0] != 0)
    throw PoleError("log_deriv_tau: logarithmic derivative has a pole at this point");
  return v;
}

template <Scalar S>
TauLeading<S> tau_leading(const std::vector<S>& z, int slot) {
  int n = static_cast<int>(z.size());
  if (slot < 0 || slot >= n) throw std::out_of_range("tau_leading: slot out of range");
  Alternant<S> num{z, row_exponents(PartitionShape::staircase(n))};
  Alternant<S> den{z, denominator_exponents(n)};
  den.ip = num.ip;
  auto lead = [&](const Alternant<S>& alt, int& order) {
    auto [ord, d] = leading_coefficient(alt, std::vector<int>{slot});
    order = ord[0];
    return d / ScalarTraits<S>::from_rational(falling(order, order));
  };
  int on = 0, od = 0;
  S cn = lead(num, on);
  S cd = lead(den, od);
  return {cn / cd, on - od};
}

template <Scalar S>
TauBundle<S> u_fn(const ModelPoint<S>& p) {
  std::vector<S> a = p.z, b = p.z, c = p.z;
  a.insert(a.begin(), p.zeta1);
  b.insert(b.begin(), p.zeta2);
  c.insert(c.begin(), p.zeta2);
  c.insert(c.begin(), p.zeta1);
  return {tau(p.z), tau(a), tau(b), tau(c)};
}

namespace {

// the four factors of u with their signs, evaluated at several z slots at once
template <Scalar S>
std::vector<S> four_factor_log_derivs(const ModelPoint<S>& p, const std::vector<S>& zs, const std::vector<int>& zslots,
                                      const std::vector<int>& approach) {
  struct Factor {
    std::vector<S> args;
    int sign;
    int offset;
  };
  std::vector<Factor> fs;
  {
    std::vector<S> a = zs;
    fs.push_back({a, -1, 0});
    a.insert(a.begin(), p.zeta1);
    fs.push_back({a, +1, 1});
    std::vector<S> b = zs;
    b.insert(b.begin(), p.zeta2);
    fs.push_back({b, +1, 1});
    std::vector<S> c = zs;
    c.insert(c.begin(), p.zeta2);
    c.insert(c.begin(), p.zeta1);
    fs.push_back({c, -1, 2});
  }
  std::vector<S> total(zslots.size(), S(0));
  std::vector<int> pole(zslots.size(), 0);
  for (const auto& f : fs) {
    std::vector<int> ap, sl;
    for (int a : approach) ap.push_back(a + f.offset);
    for (int z : zslots) sl.push_back(z + f.offset);
    std::vector<int> pl;
    std::vector<S> v = log_deriv_tau_slots(sl, f.args, ap, pl);
    for (std::size_t i = 0; i < zslots.size(); ++i) {
      if (f.sign > 0) {
        total[i] += v[i];
        pole[i] += pl[i];
      } else {
        total[i] -= v[i];
        pole[i] -= pl[i];
      }
    }
  }
  for (int pl : pole)
    if (pl != 0) throw PoleError("closed form: logarithmic derivative has a pole at this point");
  return total;
}

template <Scalar S>
S four_factor_log_deriv(const ModelPoint<S>& p, const std::vector<S>& zs, int zslot,
                        const std::vector<int>& approach) {
  return four_factor_log_derivs(p, zs, std::vector<int>{zslot}, approach).front();
}

}  // namespace

template <Scalar S>
S u_log_deriv(int k, const ModelPoint<S>& p, const std::vector<int>& approach) {
  if (k < 1 || k > p.size()) throw std::out_of_range("u_log_deriv: k out of range");
  return four_factor_log_deriv(p, p.z, k - 1, approach);
}

template <Scalar S>
S closed_X(int k, const ModelPoint<S>& p, const std::vector<int>& approach) {
  return c_const<S>(p.size()) * u_log_deriv(k, p, approach);
}

template <Scalar S>
std::vector<S> closed_X_all(const ModelPoint<S>& p, const std::vector<int>& approach) {
  std::vector<int> slots(p.size());
  for (int i = 0; i < p.size(); ++i) slots[i] = i;
  std::vector<S> v = four_factor_log_derivs(p, p.z, slots, approach);
  S c = c_const<S>(p.size());
  for (auto& x : v) x *= c;
  return v;
}

template <Scalar S>
S closed_Y(const S& w, const ModelPoint<S>& p, const std::vector<int>& approach, DummySlot dummy) {
  const S q = ScalarTraits<S>::omega();
  std::vector<S> zs = p.z;
  zs.push_back(dummy == DummySlot::v_over_q ? w / q : q / w);
  zs.push_back(w);
  std::vector<int> ap = approach;
  ap.push_back(static_cast<int>(zs.size()) - 1);
  return c_const<S>(p.size()) * four_factor_log_deriv(p, zs, static_cast<int>(zs.size()) - 1, ap);
}

template <Scalar S>
S z_formula(const ModelPoint<S>& p) {
  TauBundle<S> t = u_fn(p);
  return t.tau_L * t.tau_zeta1 * t.tau_zeta2 * t.tau_both;
}

namespace {

using cd = std::complex<double>;

// quad-precision complex, only the field operations; the determinant below cancels heavily
struct Cq {
  __float128 re = 0, im = 0;
  Cq() = default;
  Cq(double r) : re(r) {}
  Cq(cd v) : re(v.real()), im(v.imag()) {}
  Cq(__float128 r, __float128 i) : re(r), im(i) {}
  friend Cq operator+(Cq a, Cq b) { return {a.re + b.re, a.im + b.im}; }
  friend Cq operator-(Cq a, Cq b) { return {a.re - b.re, a.im - b.im}; }
  friend Cq operator*(Cq a, Cq b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
  friend Cq operator/(Cq a, Cq b) {
    __float128 d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
  }
  __float128 mag() const { return (re < 0 ? -re : re) + (im < 0 ? -im : im); }
  cd to_cd() const { return {static_cast<double>(re), static_cast<double>(im)}; }
};

// complete homogeneous h_0..h_M over the alphabet x_1^{+-1}, ..., x_n^{+-1}
std::vector<Cq> complete_h(const std::vector<Cq>& x, int M) {
  std::vector<Cq> h(M + 1, Cq(0.0));
  h[0] = Cq(1.0);
  for (const Cq& xi : x)
    for (const Cq& a : {xi, Cq(1.0) / xi})
      for (int m = 1; m <= M; ++m) h[m] = h[m] + a * h[m - 1];
  return h;
}

Cq det_lu(std::vector<Cq> m, int n) {
  auto at = [&](int i, int j) -> Cq& { return m[static_cast<std::size_t>(i) * n + j]; };
  Cq det(1.0);
  for (int k = 0; k < n; ++k) {
    int p = k;
    for (int i = k + 1; i < n; ++i)
      if (at(i, k).mag() > at(p, k).mag()) p = i;
    if (at(p, k).mag() == 0) return Cq(0.0);
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(at(k, j), at(p, j));
      det = Cq(0.0) - det;
    }
    det = det * at(k, k);
    for (int i = k + 1; i < n; ++i) {
      Cq f = at(i, k) / at(k, k);
      for (int j = k + 1; j < n; ++j) at(i, j) = at(i, j) - f * at(k, j);
    }
  }
  return det;
}

// symplectic character from complete symmetric functions (first column h_{l_i-i+1}, the rest
// h_{l_i-i+j} + h_{l_i-i-j+2}); a polynomial, so coincident arguments cost nothing
cd sympchar_jt(const PartitionShape& lambda, const std::vector<cd>& x) {
  const int n = lambda.n();
  if (n == 0) return 1;
  int M = 0;
  for (int v : lambda.parts) M = std::max(M, v + n);
  std::vector<Cq> xq(x.begin(), x.end());
  std::vector<Cq> h = complete_h(xq, M);
  auto H = [&](int m) { return m < 0 ? Cq(0.0) : h[m]; };
  std::vector<Cq> m(static_cast<std::size_t>(n) * n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      int l = lambda.parts[i - 1];
      m[static_cast<std::size_t>(i - 1) * n + (j - 1)] = j == 1 ? H(l - i + 1) : H(l - i + j) + H(l - i - j + 2);
    }
  return det_lu(std::move(m), n).to_cd();
}

cd tau_jt(const std::vector<cd>& z) {
  std::vector<cd> x;
  for (const cd& v : z) x.push_back(v * v);
  return sympchar_jt(PartitionShape::staircase(static_cast<int>(z.size())), x);
}

// regular part of z_slot d/dz_slot log tau and its pole order, from Taylor coefficients in
// s = log(z_slot / z0) read off samples on a small circle
struct StableLogDeriv {
  cd value;
  int pole = 0;
};

StableLogDeriv stable_log_deriv(std::vector<cd> z, int slot) {
  const int N = 32, K = 6;
  const int n = static_cast<int>(z.size());
  const double r = 0.5 / (2.0 * (n + n / 2 + 1));
  const cd z0 = z[slot];
  std::vector<cd> f(N);
  for (int t = 0; t < N; ++t) {
    cd s = std::polar(r, 2 * M_PI * t / N);
    z[slot] = z0 * std::exp(s);
    f[t] = tau_jt(z);
  }
  std::vector<cd> c(K);
  std::vector<double> size(K);
  double top = 0;
  for (int j = 0; j < K; ++j) {
    cd acc = 0;
    for (int t = 0; t < N; ++t) acc += f[t] * std::polar(1.0, -2 * M_PI * j * t / N);
    c[j] = acc / (N * std::pow(r, j));
    size[j] = std::abs(acc) / N;
    top = std::max(top, size[j]);
  }
  for (int m = 0; m + 1 < K; ++m)
    if (size[m] > 1e-9 * top) return {c[m + 1] / c[m], m};
  throw ConfluenceError("stable_log_deriv: tau vanishes to high order along this slot");
}

cd four_factor_stable(const ModelPoint<ComplexApprox>& p, const std::vector<cd>& zs, int zslot) {
  const cd z1 = p.zeta1.value(), z2 = p.zeta2.value();
  std::vector<cd> a = zs, b = zs, c = zs;
  a.insert(a.begin(), z1);
  b.insert(b.begin(), z2);
  c.insert(c.begin(), z2);
  c.insert(c.begin(), z1);
  StableLogDeriv f0 = stable_log_deriv(zs, zslot), f1 = stable_log_deriv(a, zslot + 1),
                 f2 = stable_log_deriv(b, zslot + 1), f3 = stable_log_deriv(c, zslot + 2);
  if (f1.pole + f2.pole - f0.pole - f3.pole != 0)
    throw PoleError("closed form: logarithmic derivative has a pole at this point");
  return f1.value + f2.value - f0.value - f3.value;
}

std::vector<cd> plain(const std::vector<ComplexApprox>& v) {
  std::vector<cd> out;
  for (const auto& x : v) out.push_back(x.value());
  return out;
}

HomogeneousValue richardson(const std::function<ComplexApprox(double)>& f, double eps) {
  ComplexApprox a = f(eps), b = f(eps / 2), c = f(eps / 4);
  ComplexApprox r1 = ComplexApprox(2.0) * b - a;
  ComplexApprox r2 = ComplexApprox(2.0) * c - b;
  ComplexApprox r = (ComplexApprox(4.0) * r2 - r1) / ComplexApprox(3.0);
  return {r, std::abs((r - r2).value())};
}

ModelPoint<ComplexApprox> perturbed(const ModelPoint<ComplexApprox>& p, double e) {
  ModelPoint<ComplexApprox> out = p;
  int L = p.size();
  // distinct, irrational-looking offsets keep all coincidences lifted
  for (int i = 0; i < L; ++i) {
    double c = 1.0 + 0.7548776662466927 * (i + 1) + 0.1 * i * i;
    out.z[i] = p.z[i] * ComplexApprox(std::exp(e * c), 0.3 * e * c);
  }
  out.zeta1 = p.zeta1 * ComplexApprox(std::exp(0.37 * e), -0.21 * e);
  out.zeta2 = p.zeta2 * ComplexApprox(std::exp(-0.53 * e), 0.17 * e);
  return out;
}

}  // namespace

ComplexApprox tau_stable(const std::vector<ComplexApprox>& z) { return tau_jt(plain(z)); }

ComplexApprox closed_X_stable(int k, const ModelPoint<ComplexApprox>& p) {
  if (k < 1 || k > p.size()) throw std::out_of_range("closed_X_stable: k out of range");
  return c_const<ComplexApprox>(p.size()) * four_factor_stable(p, plain(p.z), k - 1);
}

ComplexApprox closed_Y_stable(const ComplexApprox& w, const ModelPoint<ComplexApprox>& p) {
  std::vector<cd> zs = plain(p.z);
  const cd q = ScalarTraits<ComplexApprox>::omega().value();
  zs.push_back(w.value() / q);
  zs.push_back(w.value());
  return c_const<ComplexApprox>(p.size()) * four_factor_stable(p, zs, static_cast<int>(zs.size()) - 1);
}

HomogeneousValue closed_X_homogeneous(int k, const ModelPoint<ComplexApprox>& p, double eps) {
  return richardson([&](double e) { return closed_X_stable(k, perturbed(p, e)); }, eps);
}

HomogeneousValue closed_Y_homogeneous(const ComplexApprox& w, const ModelPoint<ComplexApprox>& p, double eps) {
  return richardson([&](double e) { return closed_Y_stable(w, perturbed(p, e)); }, eps);
}

#define LC_INSTANTIATE(S)                                                                         \
  template S sympchar(const PartitionShape&, const std::vector<S>&);                            \
  template S sympchar_complete(const PartitionShape&, const std::vector<S>&);                   \
  template S tau(const std::vector<S>&);                                                        \
  template TauLeading<S> tau_leading(const std::vector<S>&, int);                               \
  template S log_deriv_tau(int, const std::vector<S>&, const std::vector<int>&, int*);          \
  template TauBundle<S> u_fn(const ModelPoint<S>&);                                             \
  template S u_log_deriv(int, const ModelPoint<S>&, const std::vector<int>&);                   \
  template S closed_X(int, const ModelPoint<S>&, const std::vector<int>&);                      \
  template std::vector<S> closed_X_all(const ModelPoint<S>&, const std::vector<int>&);         \
  template S closed_Y(const S&, const ModelPoint<S>&, const std::vector<int>&, DummySlot);      \
  template S z_formula(const ModelPoint<S>&);

LC_INSTANTIATE(CycloNum)
LC_INSTANTIATE(ComplexApprox)

}  // namespace lc
