#include "loopcurrent/suites.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <optional>
#include <random>
#include <sstream>

#include "loopcurrent/chartoda.hpp"
#include "loopcurrent/groundstate.hpp"
#include "loopcurrent/observables.hpp"
#include "loopcurrent/yangbaxter.hpp"

namespace lc {

bool Report::all_pass() const {
  return std::all_of(entries.begin(), entries.end(), [](const CheckEntry& e) { return e.pass; });
}

std::size_t Report::failures() const {
  return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [](const CheckEntry& e) { return !e.pass; }));
}

void Report::append(const Report& other) { entries.insert(entries.end(), other.entries.begin(), other.entries.end()); }

nlohmann::json Report::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : entries) {
    nlohmann::json j{{"suite", e.suite}, {"name", e.name}, {"tag", e.tag}, {"point", e.point}, {"pass", e.pass}};
    if (!e.detail.empty()) j["detail"] = e.detail;
    arr.push_back(std::move(j));
  }
  return {{"checks", arr}, {"total", entries.size()}, {"failed", failures()}, {"pass", all_pass()}};
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += (c == '"') ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

}  // namespace

std::string Report::to_csv() const {
  std::ostringstream os;
  os << "suite,name,tag,pass,point,detail\n";
  for (const auto& e : entries)
    os << csv_field(e.suite) << ',' << csv_field(e.name) << ',' << csv_field(e.tag) << ',' << (e.pass ? "pass" : "FAIL")
       << ',' << csv_field(e.point.dump()) << ',' << csv_field(e.detail) << '\n';
  return os.str();
}

namespace {

using C = CycloNum;
using F = ComplexApprox;
using P = ModelPoint<C>;

const C q = C::omega();

C inv(const C& x) { return C(1) / x; }

P drop(P p, std::vector<int> idx) {
  std::sort(idx.rbegin(), idx.rend());
  for (int i : idx) p.z.erase(p.z.begin() + i);
  return p;
}

P with_z(P p, int i, const C& v) {
  p.z[i] = v;
  return p;
}

P swap_zeta(P p) {
  std::swap(p.zeta1, p.zeta2);
  return p;
}

nlohmann::json pt(const P& p) { return point_to_json(p); }
nlohmann::json pt(const P& p, const C& w) {
  auto j = point_to_json(p);
  j["w"] = w;
  return j;
}

class Runner {
 public:
  Runner(std::string suite, Report& rep) : suite_(std::move(suite)), rep_(rep) {}
  void check(const std::string& name, const std::string& tag, nlohmann::json point, const std::function<bool()>& f) {
    CheckEntry e{suite_, name, tag, std::move(point), false, {}};
    note.clear();
    try {
      e.pass = f();
      e.detail = note;
    } catch (const std::exception& ex) {
      e.pass = false;
      e.detail = ex.what();
    }
    rep_.entries.push_back(std::move(e));
  }
  std::string note;  // a check may leave extra detail here

 private:
  std::string suite_;
  Report& rep_;
};

std::uint64_t seed_of(const SuiteOptions& o, int salt, int n) {
  return o.seed * 1000003ULL + static_cast<std::uint64_t>(salt) * 7919ULL + static_cast<std::uint64_t>(n) * 104729ULL +
         static_cast<std::uint64_t>(o.L) * 31ULL;
}

template <class Fn>
void for_points(const SuiteOptions& o, int salt, int L, Fn fn) {
  for (int n = 0; n < o.points; ++n) {
    std::uint64_t s = seed_of(o, salt, n);
    P p = sample_point(L, s);
    fn(p, sample_spectral(p, s), n);
  }
}

// evaluated on first use inside a check, so a failure is charged to that check and every later one
template <class T>
class Lazy {
 public:
  explicit Lazy(std::function<T()> f) : f_(std::move(f)) {}
  const T& get() {
    if (!done_) {
      done_ = true;
      try {
        v_ = f_();
      } catch (...) {
        err_ = std::current_exception();
      }
    }
    if (err_) std::rethrow_exception(err_);
    return *v_;
  }

 private:
  std::function<T()> f_;
  std::optional<T> v_;
  std::exception_ptr err_;
  bool done_ = false;
};

std::string idx(const char* base, int i) { return std::string(base) + std::to_string(i); }

// ------------------------------------------------------------------ transfer

void suite_transfer(const SuiteOptions& o, Report& rep) {
  Runner r("transfer", rep);
  const int L = o.L;
  const int dim = 1 << L;
  for_points(o, 1, L, [&](const P& p, const C& w, int n) {
    C w2 = sample_spectral(p, seed_of(o, 2, n));
    auto T = transfer_matrix(w, p);
    r.check("sweep equals enumeration", "transfer.sweep_vs_enum", pt(p, w),
            [&] { return same_matrix(T, transfer_matrix_enum(w, p)); });
    r.check("commuting family", "transfer.commute", pt(p, w),
            [&] { auto T2 = transfer_matrix(w2, p); return same_matrix(T * T2, T2 * T); });
    r.check("all-ones left eigenvector", "transfer.stochastic", pt(p, w), [&] {
      for (int c = 0; c < dim; ++c) {
        C s(0);
        for (int rr = 0; rr < dim; ++rr) s += T(rr, c);
        if (!(s == C(1))) return false;
      }
      return true;
    });
    r.check("transpose relation (upward action)", "transfer.transpose", pt(p, w), [&] {
      auto R = reflect_matrix<C>(L);
      return same_matrix(transfer_matrix_up(w, p), R * transfer_matrix(q / w, swapped_reversed(p)) * R);
    });
    r.check("eigenvalue-1 residual", "transfer.eigen", pt(p, w), [&] {
      auto g = ground_state(p);
      return T.apply(g.psi) == g.psi;
    });
    r.check("dual eigenvector of the upward action", "transfer.dual_eigen", pt(p, w), [&] {
      auto d = dual_state(p);
      return transfer_matrix_up(w, p).apply(d.psi) == d.psi;
    });
    for (int i = 1; i < L; ++i) {
      P sw = p;
      std::swap(sw.z[i - 1], sw.z[i]);
      r.check(idx("bulk interlacing i=", i), "transfer.interlace_bulk", pt(p, w), [&] {
        auto R = exchange_matrix(L, i, r_weights(p.z[i], p.z[i - 1]));
        return same_matrix(R * T, transfer_matrix(w, sw) * R);
      });
    }
    r.check("left boundary interlacing", "transfer.interlace_left", pt(p, w), [&] {
      auto K = boundary_matrix(L, k_weights(Side::left, q * p.z[0], p.zeta1));
      return same_matrix(K * T, transfer_matrix(w, with_z(p, 0, inv(p.z[0]))) * K);
    });
    r.check("right boundary interlacing", "transfer.interlace_right", pt(p, w), [&] {
      auto K = boundary_matrix(L, k_weights(Side::right, p.z[L - 1], p.zeta2));
      return same_matrix(K * T, transfer_matrix(w, with_z(p, L - 1, inv(p.z[L - 1]))) * K);
    });
    // unitarity of the local operators
    C a = p.z[0], b = sample_spectral(p, seed_of(o, 3, n));
    r.check("R(z,w) R(w,z) = 1", "transfer.unitarity_R", pt(p, b), [&] {
      if (L < 2) return true;
      return same_matrix(exchange_matrix(L, 1, r_weights(a, b)) * exchange_matrix(L, 1, r_weights(b, a)),
                         Matrix<C>::identity(dim));
    });
    r.check("K_r(w) K_r(1/w) = 1", "transfer.unitarity_Kr", pt(p, b), [&] {
      return same_matrix(boundary_matrix(L, k_weights(Side::right, b, p.zeta2)) *
                             boundary_matrix(L, k_weights(Side::right, inv(b), p.zeta2)),
                         Matrix<C>::identity(dim));
    });
    r.check("K_l(q/w) K_l(qw) = 1", "transfer.unitarity_Kl", pt(p, b), [&] {
      return same_matrix(boundary_matrix(L, k_weights(Side::left, q / b, p.zeta1)) *
                             boundary_matrix(L, k_weights(Side::left, q * b, p.zeta1)),
                         Matrix<C>::identity(dim));
    });
    // recursions of T at the special points
    for (int i = 1; L >= 3 && i < L; ++i) {
      P s = with_z(p, i, q * p.z[i - 1]);
      r.check(idx("T recursion z_{i+1}=q z_i, i=", i), "transfer.recur_bulk", pt(s, w), [&] {
        auto Phi = phi_matrix<C>(L, i);
        return same_matrix(transfer_matrix(w, s) * Phi, Phi * transfer_matrix(w, drop(s, {i - 1, i})));
      });
    }
    if (L >= 2) {
      P s = with_z(p, 0, q * p.zeta1);
      r.check("T recursion z_1 = q zeta1", "transfer.recur_left", pt(s, w), [&] {
        P red = drop(s, {0});
        red.zeta1 = q * p.zeta1;
        auto Phi = phi_boundary_matrix<C>(L, Side::left);
        return same_matrix(transfer_matrix(w, s) * Phi, Phi * transfer_matrix(w, red));
      });
      P t = with_z(p, L - 1, p.zeta2 / q);
      r.check("T recursion z_L = zeta2 / q", "transfer.recur_right", pt(t, w), [&] {
        P red = drop(t, {L - 1});
        red.zeta2 = p.zeta2 / q;
        auto Phi = phi_boundary_matrix<C>(L, Side::right);
        return same_matrix(transfer_matrix(w, t) * Phi, Phi * transfer_matrix(w, red));
      });
    }
  });
}

// ------------------------------------------------------------------ qKZ

void suite_qkz(const SuiteOptions& o, Report& rep) {
  Runner r("qkz", rep);
  const int L = o.L;
  for_points(o, 11, L, [&](const P& p, const C&, int) {
    auto psi = ground_state(p);
    auto dual = dual_state(p);
    for (int i = 1; i < L; ++i) {
      P sw = p;
      std::swap(sw.z[i - 1], sw.z[i]);
      r.check(idx("exchange i=", i), "qkz.exchange", pt(p), [&] {
        return exchange_matrix(L, i, r_weights(p.z[i], p.z[i - 1])).apply(psi.psi) == ground_state(sw).psi;
      });
      r.check(idx("dual exchange i=", i), "qkz_dual.exchange", pt(p), [&] {
        return exchange_matrix(L, i, r_weights(p.z[i - 1], p.z[i])).apply(dual.psi) == dual_state(sw).psi;
      });
    }
    P l = with_z(p, 0, inv(p.z[0]));
    r.check("left boundary", "qkz.left", pt(p), [&] {
      return boundary_matrix(L, k_weights(Side::left, q * p.z[0], p.zeta1)).apply(psi.psi) == ground_state(l).psi;
    });
    r.check("dual left boundary", "qkz_dual.left", pt(p), [&] {
      return boundary_matrix(L, k_weights(Side::left, q / p.z[0], p.zeta1)).apply(dual.psi) == dual_state(l).psi;
    });
    P rr = with_z(p, L - 1, inv(p.z[L - 1]));
    r.check("right boundary", "qkz.right", pt(p), [&] {
      return boundary_matrix(L, k_weights(Side::right, p.z[L - 1], p.zeta2)).apply(psi.psi) == ground_state(rr).psi;
    });
    r.check("dual right boundary", "qkz_dual.right", pt(p), [&] {
      return boundary_matrix(L, k_weights(Side::right, inv(p.z[L - 1]), p.zeta2)).apply(dual.psi) ==
             dual_state(rr).psi;
    });
  });
}

// ------------------------------------------------------------------ recursions

// the four shifted values q^{+-1} x^{+-1}
std::vector<C> shifted(const C& x) { return {q * x, q / x, x / q, inv(q * x)}; }

// limit of the tau ratio exp(u) along the slot direction (slot counted in p.z)
C ratio_limit(const P& p, int zslot) {
  std::vector<C> a = p.z, b = p.z, c = p.z;
  a.insert(a.begin(), p.zeta1);
  b.insert(b.begin(), p.zeta2);
  c.insert(c.begin(), p.zeta2);
  c.insert(c.begin(), p.zeta1);
  auto t0 = tau_leading(p.z, zslot);
  auto t1 = tau_leading(a, zslot + 1);
  auto t2 = tau_leading(b, zslot + 1);
  auto t3 = tau_leading(c, zslot + 2);
  if (t1.order + t2.order != t0.order + t3.order) throw PoleError("ratio_limit: tau orders do not balance");
  return t1.coeff * t2.coeff / (t0.coeff * t3.coeff);
}

C ratio(const P& p) { return u_fn(p).ratio(); }

void suite_recursions(const SuiteOptions& o, Report& rep) {
  Runner r("recursions", rep);
  const int L = o.L;
  const int np = std::max(1, o.points);
  for_points(o, 21, L, [&](const P& p, const C& w, int n) {
    // tau recursion
    for (int i = 0; L >= 2 && i < L; ++i)
      for (int j = 0; j < L; ++j) {
        if (i == j) continue;
        if (n > 0 && (i + j) % np != n % np) continue;  // spread pairs across points
        r.check("tau recursion z_i = q z_j", "tau.srecur", pt(p), [&] {
          P s = with_z(p, i, q * p.z[j]);
          C f = (L % 2) ? C(-1) : C(1);
          for (int l = 0; l < L; ++l)
            if (l != i && l != j) f *= kfunc(p.z[j], p.z[l]);
          return tau(s.z) == f * tau(drop(s, {i, j}).z);
        });
      }
    // eigenvector recursions, normalization-free ratio checks included
    for (int i = 1; L >= 3 && i < L; ++i)
      r.check(idx("psi bulk recursion i=", i), "psi.recur_bulk", pt(p),
              [&] { return psi_recursion_check(RecursionKind::bulk, i, with_z(p, i, q * p.z[i - 1])); });
    if (L >= 2) {
      r.check("psi left recursion", "psi.recur_left", pt(p),
              [&] { return psi_recursion_check(RecursionKind::left, 0, with_z(p, 0, q * p.zeta1)); });
      r.check("psi right recursion", "psi.recur_right", pt(p),
              [&] { return psi_recursion_check(RecursionKind::right, L, with_z(p, L - 1, p.zeta2 / q)); });
    }
    // Y bulk and boundary recursions
    for (int i = 0; L >= 3 && i < L; ++i)
      for (int j = 0; j < L; ++j) {
        if (i == j) continue;
        Lazy<C> rhs([&] { return closed_Y(w, drop(p, {i, j})); });
        for (const C& v : shifted(p.z[j]))
          r.check("Y bulk recursion", "Y.recur_bulk", pt(with_z(p, i, v), w),
                  [&] { return closed_Y(w, with_z(p, i, v), {i}) == rhs.get(); });
      }
    for (int i = 0; L >= 2 && i < L; ++i)
      for (int sg = 0; sg < 2; ++sg) {
        C v1 = sg ? inv(q * p.zeta1) : q * p.zeta1;
        r.check("Y left boundary recursion", "Y.recur_bound_left", pt(with_z(p, i, v1), w), [&] {
          P red = drop(p, {i});
          red.zeta1 = v1;
          return closed_Y(w, with_z(p, i, v1), {i}) == closed_Y(w, red);
        });
        C v2 = sg ? inv(p.zeta2 / q) : p.zeta2 / q;
        r.check("Y right boundary recursion", "Y.recur_bound_right", pt(with_z(p, i, v2), w), [&] {
          P red = drop(p, {i});
          red.zeta2 = v2;
          return closed_Y(w, with_z(p, i, v2), {i}) == closed_Y(w, red);
        });
      }
    // X bulk and boundary recursions; every k shares one evaluation of each side
    using Xs = std::vector<C>;
    for (int i = 0; L >= 3 && i < L; ++i)
      for (int j = 0; j < L; ++j) {
        if (i == j) continue;
        Lazy<Xs> rhs([&] { return closed_X_all(drop(p, {i, j})); });
        for (const C& v : shifted(p.z[j])) {
          Lazy<Xs> lhs([&] { return closed_X_all(with_z(p, i, v), {i}); });
          for (int k = 0; k < L; ++k) {
            if (i == k || j == k) continue;
            int kk = k - (i < k) - (j < k);
            r.check(idx("X bulk recursion k=", k + 1), "X.recur_bulk", pt(with_z(p, i, v)),
                    [&] { return lhs.get()[k] == rhs.get()[kk]; });
          }
        }
      }
    for (int i = 0; L >= 2 && i < L; ++i)
      for (int sg = 0; sg < 2; ++sg) {
        C v1 = sg ? inv(q / p.zeta1) : q / p.zeta1;
        C v2 = sg ? inv(q * p.zeta2) : q * p.zeta2;
        Lazy<Xs> lhs1([&] { return closed_X_all(with_z(p, i, v1), {i}); });
        Lazy<Xs> rhs1([&] {
          P red = drop(p, {i});
          red.zeta1 = v1;
          return closed_X_all(red);
        });
        Lazy<Xs> lhs2([&] { return closed_X_all(with_z(p, i, v2), {i}); });
        Lazy<Xs> rhs2([&] {
          P red = drop(p, {i});
          red.zeta2 = v2;
          return closed_X_all(red);
        });
        for (int k = 0; k < L; ++k) {
          if (i == k) continue;
          int kk = k - (i < k);
          r.check(idx("X left boundary recursion k=", k + 1), "X.recur_bound_left", pt(with_z(p, i, v1)),
                  [&] { return lhs1.get()[k] == rhs1.get()[kk]; });
          r.check(idx("X right boundary recursion k=", k + 1), "X.recur_bound_right", pt(with_z(p, i, v2)),
                  [&] { return lhs2.get()[k] == rhs2.get()[kk]; });
        }
      }
    // Y at w on a rapidity gives X
    for (int i = 0; i < L; ++i) {
      C X = closed_X(i + 1, p), Xs = closed_X(i + 1, swap_zeta(p));
      r.check("Y(w=z_i) = X(i)", "YtoX.plus", pt(p, p.z[i]), [&] { return closed_Y(p.z[i], p, {i}) == X; });
      r.check("Y(w=1/z_i) = -X(i)", "YtoX.minus", pt(p, inv(p.z[i])), [&] { return closed_Y(inv(p.z[i]), p, {i}) == -X; });
      r.check("Y(w=q z_i) = -X(i) swapped", "YtoX.q_plus", pt(p, q * p.z[i]),
              [&] { return closed_Y(q * p.z[i], p, {i}) == -Xs; });
      r.check("Y(w=q/z_i) = X(i) swapped", "YtoX.q_minus", pt(p, q / p.z[i]),
              [&] { return closed_Y(q / p.z[i], p, {i}) == Xs; });
    }
    // X at z_i next to z_k gives Y of the smaller system
    for (int k = 0; L >= 3 && k < L; ++k)
      for (int i = 0; i < L; ++i) {
        if (i == k) continue;
        const C zk = p.z[k];
        P red = drop(p, {i, k});
        C Y = closed_Y(zk, red), Yinv = closed_Y(inv(zk), red);
        r.check("X(z_i=z_k/q) = Y_{L-2}(z_k)", "XtoY.over_q", pt(with_z(p, i, zk / q)),
                [&] { return closed_X(k + 1, with_z(p, i, zk / q), {i}) == Y; });
        r.check("X(z_i=q/z_k) = Y_{L-2}(z_k)", "XtoY.over_q_inv", pt(with_z(p, i, q / zk)),
                [&] { return closed_X(k + 1, with_z(p, i, q / zk), {i}) == Y; });
        r.check("X(z_i=q z_k) = -Y_{L-2}(1/z_k)", "XtoY.times_q", pt(with_z(p, i, q * zk)),
                [&] { return closed_X(k + 1, with_z(p, i, q * zk), {i}) == -Yinv; });
        r.check("X(z_i=1/(q z_k)) = -Y_{L-2}(1/z_k)", "XtoY.times_q_inv", pt(with_z(p, i, inv(q * zk))),
                [&] { return closed_X(k + 1, with_z(p, i, inv(q * zk)), {i}) == -Yinv; });
      }
    // symmetries of the closed forms
    for (int k = 0; k < L; ++k) {
      r.check(idx("X antisymmetric in z_k, k=", k + 1), "X.antisym", pt(p),
              [&] { return closed_X(k + 1, with_z(p, k, inv(p.z[k]))) == -closed_X(k + 1, p); });
      r.check(idx("X vanishes at z_k = 1, k=", k + 1), "X.antisym_fixed", pt(with_z(p, k, C(1))),
              [&] { return closed_X(k + 1, with_z(p, k, C(1)), {k}).is_zero(); });
    }
    r.check("Y(w) = Y(q/w) with zeta swapped", "Y.sym", pt(p, w),
            [&] { return closed_Y(w, p) == closed_Y(q / w, swap_zeta(p)); });
    r.check("Y dummy slot forms agree", "Y.dummy_slot", pt(p, w),
            [&] { return closed_Y(w, p) == closed_Y(w, p, {}, DummySlot::q_over_v); });
    // u recursions: ratio limits and derivatives
    if (L >= 3) {
      P s = with_z(p, L - 1, q * p.z[L - 2]);
      r.check("u bulk recursion (ratio)", "u.recur_bulk", pt(s),
              [&] { return ratio_limit(s, L - 1) == ratio(drop(s, {L - 2, L - 1})); });
      for (int k = 1; k <= L - 2; ++k)
        r.check(idx("u bulk recursion (derivative) k=", k), "u.recur_bulk_deriv", pt(s),
                [&] { return u_log_deriv(k, s, {L - 1}) == u_log_deriv(k, drop(s, {L - 2, L - 1})); });
    }
    if (L >= 2) {
      P s = with_z(p, 0, q * p.zeta1);
      P red = drop(s, {0});
      red.zeta1 = q * p.zeta1;
      r.check("u left recursion (ratio)", "u.recur_left", pt(s),
              [&] { return ratio_limit(s, 0) * ratio(red) * -kfunc(p.zeta1, p.zeta2) == C(1); });
      for (int k = 2; k <= L; ++k)
        r.check(idx("u left recursion (derivative) k=", k), "u.recur_left_deriv", pt(s),
                [&] { return u_log_deriv(k, s, {0}) == -u_log_deriv(k - 1, red); });
      P t = with_z(p, L - 1, p.zeta2 / q);
      P red2 = drop(t, {L - 1});
      red2.zeta2 = p.zeta2 / q;
      r.check("u right recursion (ratio)", "u.recur_right", pt(t),
              [&] { return ratio_limit(t, L - 1) * ratio(red2) * -kfunc(p.zeta2 / q, p.zeta1) == C(1); });
      for (int k = 1; k <= L - 1; ++k)
        r.check(idx("u right recursion (derivative) k=", k), "u.recur_right_deriv", pt(t),
                [&] { return u_log_deriv(k, t, {L - 1}) == -u_log_deriv(k, red2); });
    }
    // specialization chains behind the Y <-> X relations
    r.check("Y(w) = Y(q/w) without swapping zeta", "chain.Ysym_closed", pt(p, w),
            [&] { return closed_Y(w, p) == closed_Y(q / w, p); });
    for (int i = 0; i < L; ++i)
      r.check(idx("dummy pair at v=z_i removes z_i, i=", i + 1), "chain.dummy_removal", pt(p, w), [&] {
        // theta_w u_{L+2}(z, q/v, w) at v = z_i, versus theta_w u_L(z with z_i -> w)
        P ext = p;
        ext.z.push_back(q / p.z[i]);
        ext.z.push_back(w);
        C lhs = u_log_deriv(L + 2, ext, {i});
        C rhs = u_log_deriv(i + 1, with_z(p, i, w));
        return lhs == rhs;
      });
    // oracle route, small sizes only
    if (L <= 3) {
      StatePair<C> st = StatePair<C>::solve(p);
      for (int k = 1; k <= L; ++k) {
        C X = oracle_X(k, st, o.conv);
        r.check(idx("oracle Y(w=z_k) = oracle X, k=", k), "recur1.oracle", pt(p, p.z[k - 1]),
                [&] { return oracle_Y_all(p.z[k - 1], st, o.conv)[0] == X; });
        r.check(idx("oracle Y(w=1/z_k) = -oracle X, k=", k), "YtoX.oracle_minus", pt(p, inv(p.z[k - 1])),
                [&] { return oracle_Y_all(inv(p.z[k - 1]), st, o.conv)[0] == -X; });
      }
      StatePair<C> sw = StatePair<C>::solve(swap_zeta(p));
      for (int k = 1; k <= L; ++k) {
        C Xs = oracle_X(k, sw, o.conv);
        r.check(idx("oracle Y(w=q z_k) = -X swapped, k=", k), "YtoX.oracle_q_plus", pt(p, q * p.z[k - 1]),
                [&] { return oracle_Y_all(q * p.z[k - 1], st, o.conv)[0] == -Xs; });
        r.check(idx("oracle Y(w=q/z_k) = X swapped, k=", k), "YtoX.oracle_q_minus", pt(p, q / p.z[k - 1]),
                [&] { return oracle_Y_all(q / p.z[k - 1], st, o.conv)[0] == Xs; });
      }
      if (L >= 2) {
        P s = with_z(p, L - 1, q * p.zeta1);
        P red = drop(s, {L - 1});
        red.zeta1 = q * p.zeta1;
        r.check("oracle Y left boundary recursion", "Y.recur_bound_oracle", pt(s, w), [&] {
          return oracle_Y_all(w, StatePair<C>::solve(s), o.conv)[0] == oracle_Y_all(w, StatePair<C>::solve(red), o.conv)[0];
        });
        P t = with_z(p, 0, p.zeta2 / q);
        P red2 = drop(t, {0});
        red2.zeta2 = p.zeta2 / q;
        r.check("oracle Y right boundary recursion", "Y.recur_bound_oracle", pt(t, w), [&] {
          return oracle_Y_all(w, StatePair<C>::solve(t), o.conv)[0] == oracle_Y_all(w, StatePair<C>::solve(red2), o.conv)[0];
        });
      }
      for (int k = 1; k <= L; ++k)
        r.check(idx("oracle X antisymmetric, k=", k), "X.antisym_oracle", pt(p),
                [&] { return oracle_X(k, with_z(p, k - 1, inv(p.z[k - 1])), o.conv) == -oracle_X(k, st, o.conv); });
    }
  });
}

// ------------------------------------------------------------------ closed vs oracle

void suite_closed(const SuiteOptions& o, Report& rep, bool with_y) {
  Runner r("closed", rep);
  const int L = o.L;
  for_points(o, 31, L, [&](const P& p, const C& w, int) {
    StatePair<C> st = StatePair<C>::solve(p);
    for (int k = 1; k <= L; ++k)
      r.check(idx("oracle X = closed X, k=", k), "closed.X", pt(p),
              [&] { return oracle_X(k, st, o.conv) == closed_X(k, p); });
    if (!with_y) return;
    std::vector<C> ys = oracle_Y_all(w, st, o.conv);
    C cy = closed_Y(w, p);
    for (int k = 1; k <= L + 1; ++k)
      r.check(idx("oracle Y = closed Y, k=", k), "closed.Y", pt(p, w), [&] { return ys[k - 1] == cy; });
  });
}

// ------------------------------------------------------------------ Appendix A

void suite_appendix_a(const SuiteOptions& o, Report& rep) {
  Runner r("appendixA", rep);
  const int L = o.L;
  for_points(o, 41, L, [&](const P& p, const C& w, int) {
    auto mf = marked_forms(w, p, o.conv);
    for (int k = 1; k <= L; ++k)
      r.check(idx("additivity around bottom face k=", k), "appendixA.additivity", pt(p, w), [&] {
        auto lhs = mf.x_bottom[k - 1] - mf.y_bottom[k] - mf.x_middle[k - 1] + mf.y_bottom[k - 1];
        return same_matrix(lhs, Matrix<C>(lhs.rows(), lhs.cols()));
      });
    for (int i = 1; i <= L; ++i)
      r.check(idx("Y(i+1) at w=z_i equals X(i), i=", i), "appendixA.Y_to_X", pt(p, p.z[i - 1]), [&] {
        auto m = marked_forms(p.z[i - 1], p, o.conv);
        return same_matrix(m.y_bottom[i], m.x_bottom[i - 1]);
      });
    for (int i = 1; L >= 3 && i < L; ++i) {
      P s = p;
      s.z[i] = w;
      s.z[i - 1] = w / q;
      r.check(idx("X(i+1) phi_i = phi_i Y_{L-2}, i=", i), "appendixA.X_to_Y", pt(s, w), [&] {
        auto big = marked_forms(w, s, o.conv);
        auto small = marked_forms(w, drop(s, {i - 1, i}), o.conv);
        auto lhs = big.x_bottom[i] * phi_matrix<C>(L, i);
        auto rhs = cap_matrix<C>(L, i).transpose() * small.y_bottom[i - 1];
        return same_matrix(lhs, rhs);
      });
    }
    // expectation-level marker placements
    StatePair<C> st = StatePair<C>::solve(p);
    C norm = st.norm();
    C y = oracle_Y_all(w, st, o.conv)[0];
    for (int k = 1; k <= L + 1; ++k)
      r.check(idx("top-row Y marker equals bottom-row, k=", k), "appendixA.Y_top", pt(p, w), [&] {
        return sandwich(mf.get(MarkedEdge::horizontal(k, MarkedEdge::Level::top)), st) / norm == y;
      });
    for (int k = 1; k <= L; ++k)
      r.check(idx("middle X marker equals bottom, k=", k), "appendixA.X_mid", pt(p, w), [&] {
        return sandwich(mf.get(MarkedEdge::column(k, MarkedEdge::Level::middle)), st) ==
               sandwich(mf.get(MarkedEdge::column(k, MarkedEdge::Level::bottom)), st);
      });
  });
}

// ------------------------------------------------------------------ Appendix B

template <Scalar S>
struct AppendixB {
  S g1, g2, g2_target, g3, g3_target, triple;
};

// z = zeta1 after the boundary specialization; u free for the bulk triple
template <Scalar S>
AppendixB<S> appendix_b(const S& w, const S& z, const S& u, const S& q) {
  auto b = [](const S& x) { return bracket(x); };
  KWeights<S> K = k_weights(Side::left, w, z, q);
  const S qz = q * z;
  const S A = b(q / (qz * w)) / b(q * q * z * w);
  const S B = b(S(1) / (qz * w)) / b(q * q * z * w);
  const S c1 = b(q * q * z / w) / b(q * w / qz);
  const S c2 = b(qz / w) / b(q * w / qz);
  AppendixB<S> out;
  out.g1 = A * (c1 + c2) * (K.stay + K.reflect) + B * c1 * K.stay;
  out.g2 = B * c2 * (K.stay + K.reflect);
  out.g2_target = kfunc(q / w, qz, q) / kfunc(w / q, qz, q);
  out.g3 = B * c1 * K.reflect;
  out.g3_target = b(S(1) / q) * b(q * q / (w * w)) / kfunc(w / q, qz, q);
  const S qu = q * u;
  out.triple = b(q / qu) / b(q * q * u) * b(q / u) / b(qu) + b(S(1) / qu) / b(q * q * u) * b(S(1) / u) / b(qu) -
               (q + S(1) / q) * b(q / qu) / b(q * q * u) * b(S(1) / u) / b(qu);
  return out;
}

void suite_appendix_b(const SuiteOptions& o, Report& rep) {
  Runner r("appendixB", rep);
  CycloSampler rng(o.seed * 7777 + 5);
  const int n = std::max(o.points, 10);
  for (int t = 0; t < n; ++t) {
    std::vector<C> taken;
    auto draw = [&] {
      for (;;) {
        C x = rng.next();
        if (generic_against(x, taken)) {
          taken.push_back(x);
          return x;
        }
      }
    };
    C w = draw(), z = draw(), u = draw();
    nlohmann::json j{{"w", w}, {"zeta1", z}, {"u", u}, {"q", "omega"}};
    AppendixB<C> v;
    bool ok = true;
    try {
      v = appendix_b(w, z, u, q);
    } catch (const std::exception&) {
      ok = false;
    }
    r.check("first connectivity group vanishes", "appendixB.group1", j, [&] { return ok && v.g1.is_zero(); });
    r.check("second connectivity group", "appendixB.group2", j, [&] { return ok && v.g2 == v.g2_target; });
    r.check("third connectivity group", "appendixB.group3", j, [&] { return ok && v.g3 == v.g3_target; });
    r.check("bulk triple identity", "appendixB.bulk_triple", j, [&] { return ok && v.triple.is_zero(); });
  }
}

// the same identities at generic complex q in the float backend
void suite_appendix_b_generic(const SuiteOptions& o, Report& rep) {
  Runner r("appendixB-generic", rep);
  std::mt19937_64 gen(o.seed * 31337 + 11);
  std::uniform_real_distribution<double> mod(0.75, 1.3), ang(0.2, 2.9), sgn(0.0, 1.0);
  auto draw = [&] { return F(std::polar(mod(gen), ang(gen) * (sgn(gen) < 0.5 ? 1.0 : -1.0))); };
  const int nq = std::max(o.generic_q, 1);
  for (int a = 0; a < nq; ++a) {
    F qq = draw();
    for (int t = 0; t < 2; ++t) {
      F w = draw(), z = draw(), u = draw();
      nlohmann::json j{{"q", qq}, {"w", w}, {"zeta1", z}, {"u", u}};
      auto v = appendix_b(w, z, u, qq);
      double scale = std::max({std::abs(v.g2_target.value()), std::abs(v.g3_target.value()), 1.0});
      r.check("first connectivity group vanishes", "appendixB.group1", j,
              [&] { return std::abs(v.g1.value()) <= 1e-10 * scale; });
      r.check("second connectivity group", "appendixB.group2", j, [&] { return approx_equal(v.g2, v.g2_target, 1e-10); });
      r.check("third connectivity group", "appendixB.group3", j, [&] { return approx_equal(v.g3, v.g3_target, 1e-10); });
      r.check("bulk triple identity", "appendixB.bulk_triple", j,
              [&] { return std::abs(v.triple.value()) <= 1e-10 * scale; });
    }
  }
}

// ------------------------------------------------------------------ structural

void suite_structural(const SuiteOptions& o, Report& rep) {
  Runner r("structural", rep);
  const int L = o.L;
  for_points(o, 51, L, [&](const P& p, const C& w, int n) {
    StatePair<C> st = StatePair<C>::solve(p);
    C Z = z_formula(p);
    r.check("dual sum equals primal sum", "structural.Zstar", pt(p), [&] { return st.dual.sum() == st.psi.sum(); });
    r.check("<psi*|psi> = Z^2", "structural.norm", pt(p), [&] { return st.norm() == Z * Z; });
    if (L <= 3) {
      auto ys = oracle_Y_all(w, st, o.conv);
      for (int k = 2; k <= L + 1; ++k)
        r.check(idx("Y independent of k, k=", k), "structural.Y_k_independent", pt(p, w), [&] { return ys[k - 1] == ys[0]; });
      C w2 = sample_spectral(p, seed_of(o, 52, n));
      for (int k = 1; k <= L; ++k)
        r.check(idx("X independent of w, k=", k), "structural.X_w_independent", pt(p, w), [&] {
          C a = marked_expectation(MarkedEdge::column(k), w, st, o.conv) / st.norm();
          C b = marked_expectation(MarkedEdge::column(k), w2, st, o.conv) / st.norm();
          return a == b && a == oracle_X(k, st, o.conv);
        });
    }
    // reflection covariance of the strip: X^{(k)} maps to X^{(L+1-k)} of the mirrored point
    for (int k = 1; k <= L; ++k)
      r.check(idx("mirror covariance, k=", k), "structural.mirror", pt(p),
              [&] { return closed_X(k, p) == closed_X(L + 1 - k, swapped_reversed(p)); });
    if (L <= 3)
      for (int k = 1; k <= L; ++k)
        r.check(idx("mirror covariance on the oracle, k=", k), "structural.mirror_oracle", pt(p), [&] {
          return oracle_X(k, st, o.conv) == oracle_X(L + 1 - k, swapped_reversed(p), o.conv);
        });
    // W_B invariance of X^{(k)} in the other rapidities
    for (int k = 1; k <= L; ++k)
      for (int i = 0; i < L; ++i) {
        if (i == k - 1) continue;
        r.check(idx("X invariant under z_i -> 1/z_i, k=", k), "structural.X_inversion", pt(p),
                [&] { return closed_X(k, with_z(p, i, inv(p.z[i]))) == closed_X(k, p); });
      }
  });
}

// ------------------------------------------------------------------ backend coherence

template <class A, class B>
bool close(const A& exact, const B& approx, double tol = 1e-10) {
  return approx_equal(F(exact), approx, tol);
}

void suite_backend(const SuiteOptions& o, Report& rep) {
  Runner r("backend", rep);
  const int L = o.L;
  for_points(o, 61, L, [&](const P& p, const C& w, int) {
    auto pf = embed_point(p);
    F wf(w);
    r.check("transfer matrix", "backend.transfer", pt(p, w), [&] {
      auto a = transfer_matrix(w, p);
      auto b = transfer_matrix(wf, pf);
      Matrix<F> ae(a.rows(), a.cols());
      for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) ae(i, j) = F(a(i, j));
      return same_matrix(ae, b, 1e-10);
    });
    r.check("ground state", "backend.ground_state", pt(p), [&] {
      auto a = ground_state(p);
      auto b = ground_state(pf);
      double scale = 0, diff = 0;
      for (std::size_t i = 0; i < a.psi.size(); ++i) {
        scale = std::max(scale, std::abs(F(a.psi[i]).value()));
        diff = std::max(diff, std::abs(F(a.psi[i]).value() - b.psi[i].value()));
      }
      return diff <= 1e-10 * scale;
    });
    for (int k = 1; k <= L; ++k)
      r.check(idx("closed X, k=", k), "backend.closed_X", pt(p), [&] { return close(closed_X(k, p), closed_X(k, pf)); });
    r.check("closed Y", "backend.closed_Y", pt(p, w), [&] { return close(closed_Y(w, p), closed_Y(wf, pf)); });
    // the coincidence-safe float path used for homogeneous points
    r.check("tau via complete symmetric functions", "backend.tau_stable", pt(p),
            [&] { return close(tau(p.z), tau_stable(pf.z)); });
    for (int k = 1; k <= L; ++k)
      r.check(idx("stable closed X, k=", k), "backend.closed_X_stable", pt(p),
              [&] { return close(closed_X(k, p), closed_X_stable(k, pf)); });
    r.check("stable closed Y", "backend.closed_Y_stable", pt(p, w),
            [&] { return close(closed_Y(w, p), closed_Y_stable(wf, pf)); });
    if (L <= 3) {
      StatePair<C> se = StatePair<C>::solve(p);
      StatePair<F> sf = StatePair<F>::solve(pf);
      for (int k = 1; k <= L; ++k)
        r.check(idx("oracle X, k=", k), "backend.oracle_X", pt(p),
                [&] { return close(oracle_X(k, se, o.conv), oracle_X(k, sf, o.conv)); });
      r.check("oracle Y", "backend.oracle_Y", pt(p, w),
              [&] { return close(oracle_Y_all(w, se, o.conv)[0], oracle_Y_all(wf, sf, o.conv)[0]); });
    }
    // log-derivative of tau against a Richardson-improved central difference
    std::vector<C> zs = p.z;
    zs.push_back(p.zeta1);
    std::vector<F> zf;
    for (const auto& x : zs) zf.push_back(F(x));
    for (int s = 0; s < static_cast<int>(zs.size()); ++s)
      r.check(idx("log_deriv_tau vs finite difference, slot=", s), "backend.log_deriv_fd", pt(p), [&] {
        auto tau_at = [&](double t) {
          auto v = zf;
          v[s] = zf[s] * F(std::exp(t));
          return tau(v).value();
        };
        // z d/dz log tau = d/dt log tau(z e^t) at t = 0; log of the ratio stays off the branch cut
        auto cd = [&](double h) { return std::log(tau_at(h) / tau_at(-h)) / (2 * h); };
        // two Richardson levels; one level leaves ~1e-7 near close rapidities
        double h = 2e-3;
        auto a = cd(h), b = cd(h / 2), c = cd(h / 4);
        auto ab = (4.0 * b - a) / 3.0, bc = (4.0 * c - b) / 3.0;
        std::complex<double> fd = (16.0 * bc - ab) / 15.0;
        F exact(log_deriv_tau(s, zs));
        double err = std::abs(fd - exact.value()) / std::max(1.0, std::abs(exact.value()));
        std::ostringstream os;
        os << "relative error " << std::scientific << err;
        r.note = os.str();
        return err <= 1e-8;
      });
  });
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"all", "transfer", "qkz", "recursions", "closed", "appendixA", "appendixB", "appendixB-generic", "structural",
          "backend"};
}

bool is_suite(const std::string& name) {
  auto n = suite_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

Report run_suite(const std::string& name, const SuiteOptions& opt) {
  if (!is_suite(name)) throw std::invalid_argument("unknown suite: " + name);
  if (opt.L < 1) throw std::invalid_argument("suite: L must be at least 1");
  Report rep;
  const bool all = name == "all";
  if (all || name == "transfer") suite_transfer(opt, rep);
  if (all || name == "qkz") suite_qkz(opt, rep);
  if (all || name == "recursions") suite_recursions(opt, rep);
  if (all || name == "closed") suite_closed(opt, rep, opt.L <= 4);
  if (all || name == "appendixA") suite_appendix_a(opt, rep);
  if (all || name == "appendixB") suite_appendix_b(opt, rep);
  if (name == "appendixB-generic") suite_appendix_b_generic(opt, rep);
  if (all || name == "structural") suite_structural(opt, rep);
  if (all || name == "backend") suite_backend(opt, rep);
  return rep;
}

Report relation_suite(int L, std::uint64_t seed, const CrossingConvention& conv) {
  SuiteOptions o;
  o.L = L;
  o.seed = seed;
  o.conv = conv;
  return run_suite("all", o);
}

}  // namespace lc
