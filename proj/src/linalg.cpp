#include "loopcurrent/linalg.hpp"

#include <cstdint>

namespace lc {

template class Matrix<CycloNum>;
template class Matrix<ComplexApprox>;
template CycloNum determinant(Matrix<CycloNum>);
template ComplexApprox determinant(Matrix<ComplexApprox>);
template std::vector<std::vector<CycloNum>> nullspace(Matrix<CycloNum>, double);
template std::vector<std::vector<ComplexApprox>> nullspace(Matrix<ComplexApprox>, double);

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<u128>(a) * b % p); }

u64 powmod(u64 a, u64 e, u64 p) {
  u64 r = 1;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

u64 invmod(u64 a, u64 p) { return powmod(a, p - 2, p); }

// primes p = 1 mod 3 below 2^62, so a primitive cube root of unity exists mod p
class PrimeStream {
 public:
  u64 next() {
    for (;;) {
      cur_ -= 2;
      if (cur_ % 3 != 1) continue;
      mpz_class c(static_cast<unsigned long>(cur_));
      if (mpz_probab_prime_p(c.get_mpz_t(), 25)) return cur_;
    }
  }

 private:
  u64 cur_ = (u64(1) << 62) + 1;
};

u64 cube_root_of_unity(u64 p) {
  for (u64 g = 2;; ++g) {
    u64 r = powmod(g, (p - 1) / 3, p);
    if (r != 1) return r;
  }
}

u64 reduce(const mpz_class& x, u64 p) {
  // fdiv remainder is non-negative
  return mpz_fdiv_ui(x.get_mpz_t(), static_cast<unsigned long>(p));
}

// kernel mod p when it is a line: (free column, vector with 1 there); free = -1 otherwise
struct ModKernel {
  int free = -1;
  std::vector<u64> x;
};

ModKernel mod_kernel(std::vector<u64> a, int R, int C, u64 p) {
  auto at = [&](int i, int j) -> u64& { return a[static_cast<std::size_t>(i) * C + j]; };
  std::vector<int> pivcol;
  int row = 0;
  for (int col = 0; col < C && row < R; ++col) {
    int piv = row;
    while (piv < R && at(piv, col) == 0) ++piv;
    if (piv == R) continue;
    if (piv != row)
      for (int j = 0; j < C; ++j) std::swap(at(row, j), at(piv, j));
    u64 inv = invmod(at(row, col), p);
    for (int j = col; j < C; ++j) at(row, j) = mulmod(at(row, j), inv, p);
    for (int i = 0; i < R; ++i) {
      if (i == row || at(i, col) == 0) continue;
      u64 f = at(i, col);
      for (int j = col; j < C; ++j)
        if (at(row, j)) at(i, j) = (at(i, j) + p - mulmod(f, at(row, j), p)) % p;
    }
    pivcol.push_back(col);
    ++row;
  }
  ModKernel k;
  if (static_cast<int>(pivcol.size()) != C - 1) return k;
  std::vector<char> is_piv(C, 0);
  for (int c : pivcol) is_piv[c] = 1;
  for (int c = 0; c < C; ++c)
    if (!is_piv[c]) k.free = c;
  k.x.assign(C, 0);
  k.x[k.free] = 1;
  for (int r = 0; r < C - 1; ++r) k.x[pivcol[r]] = (p - at(r, k.free)) % p;
  return k;
}

// n/d with |n|, d <= sqrt(M/2) and n = d u mod M
bool rational_reconstruct(const mpz_class& u, const mpz_class& M, Rational& out) {
  mpz_class bound = sqrt(M / 2);
  mpz_class r0 = M, r1 = u, t0 = 0, t1 = 1, q, tmp;
  while (r1 > bound) {
    q = r0 / r1;
    tmp = r0 - q * r1;
    r0 = r1;
    r1 = tmp;
    tmp = t0 - q * t1;
    t0 = t1;
    t1 = tmp;
  }
  if (abs(t1) > bound || t1 == 0) return false;
  mpz_class g = gcd(r1, t1);
  if (g != 1) return false;
  if (t1 < 0) {
    t1 = -t1;
    r1 = -r1;
  }
  out = Rational(r1, t1);
  return true;
}

}  // namespace

std::optional<std::vector<CycloNum>> kernel_line(const Matrix<CycloNum>& m, int max_primes) {
  const int R = m.rows(), C = m.cols();
  if (C == 0) return std::nullopt;
  std::vector<detail::Zw> z;
  detail::to_integer_rows(m, z);

  PrimeStream primes;
  int free = -1;
  std::vector<mpz_class> ra, rb;  // residues of the coordinates (a + b w) modulo M
  mpz_class M = 1;
  int used = 0, rank_drops = 0, next_try = 4;
  std::optional<std::vector<CycloNum>> last;
  std::vector<u64> img(z.size());
  for (int n = 0; n < max_primes; ++n) {
    u64 p = primes.next();
    u64 r = cube_root_of_unity(p);
    u64 r2 = mulmod(r, r, p);
    ModKernel k1, k2;
    for (int e = 0; e < 2; ++e) {
      u64 w = e == 0 ? r : r2;
      for (std::size_t i = 0; i < z.size(); ++i) img[i] = (reduce(z[i].a, p) + mulmod(reduce(z[i].b, p), w, p)) % p;
      (e == 0 ? k1 : k2) = mod_kernel(img, R, C, p);
    }
    if (k1.free < 0 || k2.free != k1.free) {
      // rank below C-1 at several primes: the kernel is probably not a line
      if (++rank_drops > 8 && used == 0) return std::nullopt;
      continue;
    }
    if (k1.free < free) continue;  // this prime kills the last nonzero coordinate
    if (k1.free > free) {
      free = k1.free;
      ra.assign(C, 0);
      rb.assign(C, 0);
      M = 1;
      used = 0;
      next_try = 4;
      last.reset();
    }
    // a + b r = y1, a + b r^2 = y2
    u64 inv_d = invmod((r + p - r2) % p, p);
    u64 Mp = reduce(M, p);
    u64 Minv = used ? invmod(Mp, p) : 1;
    for (int j = 0; j < C; ++j) {
      u64 b = mulmod((k1.x[j] + p - k2.x[j]) % p, inv_d, p);
      u64 a = (k1.x[j] + p - mulmod(b, r, p)) % p;
      for (auto [res, v] : {std::pair<mpz_class*, u64>{&ra[j], a}, std::pair<mpz_class*, u64>{&rb[j], b}}) {
        u64 cur = reduce(*res, p);
        u64 t = mulmod((v + p - cur) % p, Minv, p);
        *res += M * mpz_class(static_cast<unsigned long>(t));
      }
    }
    M *= mpz_class(static_cast<unsigned long>(p));
    ++used;
    if (used < next_try) continue;
    next_try = used + std::max(2, used / 4);

    std::vector<CycloNum> cand(C);
    bool ok = true;
    for (int j = 0; j < C && ok; ++j) {
      Rational a, b;
      ok = rational_reconstruct(ra[j], M, a) && rational_reconstruct(rb[j], M, b);
      if (ok) cand[j] = CycloNum(a, b);
    }
    if (!ok) continue;
    if (last && *last == cand) {
      for (int i = 0; i < R; ++i) {
        CycloNum acc(0);
        for (int j = 0; j < C; ++j)
          if (!m(i, j).is_zero() && !cand[j].is_zero()) acc += m(i, j) * cand[j];
        if (!acc.is_zero()) {
          ok = false;
          break;
        }
      }
      if (ok) return cand;
    }
    last = std::move(cand);
  }
  return std::nullopt;
}

}  // namespace lc
