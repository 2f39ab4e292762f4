#include "loopcurrent/yangbaxter.hpp"

#include <map>
#include <stdexcept>

#include "loopcurrent/parallel.hpp"

namespace lc {

template <Scalar S>
RWeights<S> r_weights(const S& z, const S& w, const S& q) {
  S den = bracket(q * w / z);
  if (den.is_zero()) throw PoleError("r_weights: [q w/z] vanishes");
  return {bracket(q * z / w) / den, bracket(z / w) / den};
}

template <Scalar S>
KWeights<S> k_weights(Side side, const S& w, const S& zeta, const S& q) {
  if (side == Side::right) {
    S den = kfunc(S(1) / w, zeta, q);
    if (den.is_zero()) throw PoleError("k_weights: k(1/w, zeta) vanishes");
    return {kfunc(w, zeta, q) / den, -bracket(q) * bracket(w * w) / den, side};
  }
  S den = kfunc(w / q, zeta, q);
  if (den.is_zero()) throw PoleError("k_weights: k(w/q, zeta) vanishes");
  return {kfunc(q / w, zeta, q) / den, -bracket(q) * bracket(q * q / (w * w)) / den, side};
}

template <Scalar S>
RowWeights<S> row_weights(const S& w, const ModelPoint<S>& p, const S& q) {
  RowWeights<S> rw;
  for (const S& zi : p.z) {
    rw.bottom.push_back(r_weights(zi, w, q));
    rw.top.push_back(r_weights(S(1) / w, zi, q));
  }
  rw.left = k_weights(Side::left, w, p.zeta1, q);
  rw.right = k_weights(Side::right, w, p.zeta2, q);
  rw.loop = loop_weight(q);
  return rw;
}

RowConfig RowConfig::decode(int L, std::uint64_t code) {
  std::uint32_t mask = (1u << L) - 1u;
  RowConfig c;
  c.bottom = static_cast<std::uint32_t>(code) & mask;
  c.top = static_cast<std::uint32_t>(code >> L) & mask;
  c.left_reflect = (code >> (2 * L)) & 1u;
  c.right_reflect = (code >> (2 * L + 1)) & 1u;
  return c;
}

template <Scalar S>
S config_weight(const RowWeights<S>& rw, const RowConfig& c) {
  S x = c.left_reflect ? rw.left.reflect : rw.left.stay;
  x *= c.right_reflect ? rw.right.reflect : rw.right.stay;
  for (std::size_t i = 0; i < rw.bottom.size(); ++i) {
    x *= ((c.bottom >> i) & 1u) ? rw.bottom[i].w2 : rw.bottom[i].w1;
    x *= ((c.top >> i) & 1u) ? rw.top[i].w1 : rw.top[i].w2;
  }
  return x;
}

std::vector<MarkedEdge> RowLayout::labels() const {
  std::vector<MarkedEdge> lab(nodes());
  using Lv = MarkedEdge::Level;
  for (int i = 0; i < L_; ++i) {
    lab[s(i)] = MarkedEdge::column(i + 1, Lv::bottom);
    lab[m(i)] = MarkedEdge::column(i + 1, Lv::middle);
    lab[t(i)] = MarkedEdge::column(i + 1, Lv::top);
  }
  for (int v = 0; v <= L_; ++v) {
    lab[hb(v)] = MarkedEdge::horizontal(v + 1, Lv::bottom);
    lab[ht(v)] = MarkedEdge::horizontal(v + 1, Lv::top);
  }
  return lab;
}

// Bottom face i has sites s_i below, m_i above, vertical edges hb_i (west) and hb_{i+1} (east).
// Top face i has m_i below, t_i above, ht_i and ht_{i+1}. Tile a joins the lower strand to the
// west edge and the upper strand to the east edge; the other tile does the opposite.
void RowLayout::wire(StrandGraph& g, const RowConfig& c) const {
  for (int i = 0; i < L_; ++i) {
    if ((c.bottom >> i) & 1u) {
      g.link({s(i), 1}, {hb(i), 1});
      g.link({m(i), 0}, {hb(i + 1), 0});
    } else {
      g.link({s(i), 1}, {hb(i + 1), 0});
      g.link({m(i), 0}, {hb(i), 1});
    }
    if ((c.top >> i) & 1u) {
      g.link({m(i), 1}, {ht(i), 1});
      g.link({t(i), 0}, {ht(i + 1), 0});
    } else {
      g.link({m(i), 1}, {ht(i + 1), 0});
      g.link({t(i), 0}, {ht(i), 1});
    }
  }
  if (c.left_reflect) {
    g.to_boundary({hb(0), 0}, kLeft);
    g.to_boundary({ht(0), 0}, kLeft);
  } else {
    g.link({hb(0), 0}, {ht(0), 0});
  }
  if (c.right_reflect) {
    g.to_boundary({hb(L_), 1}, kRight);
    g.to_boundary({ht(L_), 1}, kRight);
  } else {
    g.link({hb(L_), 1}, {ht(L_), 1});
  }
}

namespace {

void attach(StrandGraph& g, const std::vector<int>& partner, int first_node, int port) {
  for (int i = 0; i < static_cast<int>(partner.size()); ++i) {
    int p = partner[i];
    if (p == kLeft || p == kRight)
      g.to_boundary({first_node + i, port}, p);
    else if (p > i)
      g.link({first_node + i, port}, {first_node + p, port});
  }
}

template <Scalar S>
S loop_power(const S& loop, int n) {
  return n == 0 ? S(1) : ipow(loop, n);
}

template <Scalar S>
bool is_one(const S& x) {
  if constexpr (ScalarTraits<S>::exact)
    return x == S(1);
  else
    return x.value() == std::complex<double>(1.0, 0.0);
}

// read the pattern left on a row of open ports
std::vector<int> read_open_ports(const StrandGraph& g, int first_node, int L, int port) {
  std::vector<int> partner(L, kLeft);
  for (int i = 0; i < L; ++i) {
    auto w = g.walk({first_node + i, port}, [](int, int) {});
    if (w.end_kind == StrandGraph::kOpenEnd)
      partner[i] = w.end.node - first_node;
    else
      partner[i] = w.end_kind;
  }
  return partner;
}

template <Scalar S>
void add_to(Matrix<S>& m, int i, int j, const S& x) {
  m(i, j) += x;
}

constexpr int kChunks = 16;

}  // namespace

void RowLayout::attach_below(StrandGraph& g, const std::vector<int>& partner) const { attach(g, partner, s(0), 0); }
void RowLayout::attach_above(StrandGraph& g, const std::vector<int>& partner) const { attach(g, partner, t(0), 1); }

// The cut runs through the row from top-left to bottom-right. Before column c (1-based) it holds
// t_1..t_{c-1}, ht_{c-1}, hb_{c-1}, s_c..s_L: L+2 positions.
template <Scalar S>
Matrix<S> transfer_matrix(const S& w, const ModelPoint<S>& p, const S& q) {
  const int L = p.size();
  RowWeights<S> rw = row_weights(w, p, q);
  const std::size_t dim = std::size_t{1} << L;
  Matrix<S> T(dim, dim);
  bool unit_loop = is_one(rw.loop);
  for (const auto& beta : all_patterns(L)) {
    std::map<std::uint32_t, S> cur, next;
    auto bump = [&](std::map<std::uint32_t, S>& into, const std::vector<int>& part, const S& x) {
      auto key = LinkPattern::from_partners(part).index();
      auto it = into.find(key);
      if (it == into.end())
        into.emplace(key, x);
      else
        it->second += x;
    };
    {
      auto bp = beta.partners();
      std::vector<int> stay{1, 0}, refl{kLeft, kLeft};
      for (int x : bp) {
        stay.push_back(x >= 0 ? x + 2 : x);
        refl.push_back(x >= 0 ? x + 2 : x);
      }
      bump(cur, stay, rw.left.stay);
      bump(cur, refl, rw.left.reflect);
    }
    auto step = [&](int pos, const S& ident, const S& emove) {
      next.clear();
      for (const auto& [key, coef] : cur) {
        auto part = LinkPattern(L + 2, key).partners();
        if (!ident.is_zero()) bump(next, part, coef * ident);
        if (!emove.is_zero()) {
          int loops = apply_e(part, pos);
          S x = coef * emove;
          if (loops && !unit_loop) x *= rw.loop;
          bump(next, part, x);
        }
      }
      std::swap(cur, next);
    };
    for (int c = 1; c <= L; ++c) {
      step(c, rw.bottom[c - 1].w1, rw.bottom[c - 1].w2);
      step(c - 1, rw.top[c - 1].w2, rw.top[c - 1].w1);
    }
    for (const auto& [key, coef] : cur) {
      auto part = LinkPattern(L + 2, key).partners();
      if (!rw.right.stay.is_zero()) {
        auto a = part;
        bool loop = join_through(a, L, L + 1);
        S x = coef * rw.right.stay;
        if (loop && !unit_loop) x *= rw.loop;
        auto out = LinkPattern::from_partners(erase_positions(a, L, 2));
        T(out.index(), beta.index()) += x;
      }
      if (!rw.right.reflect.is_zero()) {
        auto a = part;
        for (int x : {L, L + 1}) {
          int y = a[x];
          if (y >= 0 && y != L && y != L + 1) a[y] = kRight;
        }
        a[L] = a[L + 1] = kRight;
        auto out = LinkPattern::from_partners(erase_positions(a, L, 2));
        T(out.index(), beta.index()) += coef * rw.right.reflect;
      }
    }
  }
  return T;
}

template <Scalar S>
Matrix<S> transfer_matrix_enum(const S& w, const ModelPoint<S>& p, const S& q) {
  const int L = p.size();
  RowWeights<S> rw = row_weights(w, p, q);
  const int dim = 1 << L;
  RowLayout lay(L);
  auto pats = all_patterns(L);
  std::vector<std::vector<int>> parts;
  for (const auto& b : pats) parts.push_back(b.partners());
  auto partial = chunked_map<Matrix<S>>(RowConfig::count(L), kChunks, Matrix<S>(dim, dim),
                                        [&](std::int64_t b, std::int64_t e, Matrix<S>& acc) {
    for (std::int64_t code = b; code < e; ++code) {
      RowConfig c = RowConfig::decode(L, code);
      S wt = config_weight(rw, c);
      if (wt.is_zero()) continue;
      for (int j = 0; j < dim; ++j) {
        StrandGraph g(lay.nodes());
        lay.wire(g, c);
        lay.attach_below(g, parts[j]);
        auto out = LinkPattern::from_partners(read_open_ports(g, lay.t(0), L, 1));
        int loops = g.count_loops();
        add_to(acc, out.index(), j, loops ? wt * loop_power(rw.loop, loops) : wt);
      }
    }
  });
  Matrix<S> T(dim, dim);
  for (const auto& m : partial) T = T + m;
  return T;
}

template <Scalar S>
Matrix<S> transfer_matrix_up(const S& w, const ModelPoint<S>& p, const S& q) {
  const int L = p.size();
  RowWeights<S> rw = row_weights(w, p, q);
  const int dim = 1 << L;
  RowLayout lay(L);
  auto pats = all_patterns(L);
  auto partial = chunked_map<Matrix<S>>(RowConfig::count(L), kChunks, Matrix<S>(dim, dim),
                                        [&](std::int64_t b, std::int64_t e, Matrix<S>& acc) {
    for (std::int64_t code = b; code < e; ++code) {
      RowConfig c = RowConfig::decode(L, code);
      S wt = config_weight(rw, c);
      if (wt.is_zero()) continue;
      for (int j = 0; j < dim; ++j) {
        StrandGraph g(lay.nodes());
        lay.wire(g, c);
        lay.attach_above(g, pats[j].partners());
        auto out = LinkPattern::from_partners(read_open_ports(g, lay.s(0), L, 0));
        int loops = g.count_loops();
        add_to(acc, out.index(), j, loops ? wt * loop_power(rw.loop, loops) : wt);
      }
    }
  });
  Matrix<S> U(dim, dim);
  for (const auto& m : partial) U = U + m;
  return U;
}

template <Scalar S>
Matrix<S> reflect_matrix(int L) {
  Matrix<S> m(1 << L, 1 << L);
  for (const auto& a : all_patterns(L)) m(reflect(a).index(), a.index()) = S(1);
  return m;
}

template <Scalar S>
Matrix<S> e_matrix(int L, int i, const S& loop) {
  if (i < 1 || i >= L) throw std::out_of_range("e_matrix: site out of range");
  Matrix<S> m(1 << L, 1 << L);
  for (const auto& a : all_patterns(L)) {
    auto p = a.partners();
    int loops = apply_e(p, i - 1);
    m(LinkPattern::from_partners(p).index(), a.index()) += loops ? loop : S(1);
  }
  return m;
}

template <Scalar S>
Matrix<S> boundary_reflect_matrix(int L, Side side) {
  Matrix<S> m(1 << L, 1 << L);
  for (const auto& a : all_patterns(L)) {
    auto p = a.partners();
    if (side == Side::left)
      send_to_boundary(p, 0, kLeft);
    else
      send_to_boundary(p, L - 1, kRight);
    m(LinkPattern::from_partners(p).index(), a.index()) += S(1);
  }
  return m;
}

template <Scalar S>
Matrix<S> exchange_matrix(int L, int i, const RWeights<S>& r) {
  return r.w1 * Matrix<S>::identity(1 << L) + r.w2 * e_matrix<S>(L, i);
}

template <Scalar S>
Matrix<S> boundary_matrix(int L, const KWeights<S>& k) {
  return k.stay * Matrix<S>::identity(1 << L) + k.reflect * boundary_reflect_matrix<S>(L, k.side);
}

template <Scalar S>
Matrix<S> phi_matrix(int L, int i) {
  if (L < 2 || i < 1 || i > L - 1) throw std::out_of_range("phi_matrix: index out of range");
  Matrix<S> m(1 << L, 1 << (L - 2));
  for (const auto& a : all_patterns(L - 2)) m(phi_insert(a, i).index(), a.index()) = S(1);
  return m;
}

template <Scalar S>
Matrix<S> phi_boundary_matrix(int L, Side side) {
  if (L < 1) throw std::out_of_range("phi_boundary_matrix: size out of range");
  Matrix<S> m(1 << L, 1 << (L - 1));
  for (const auto& a : all_patterns(L - 1))
    m((side == Side::left ? phi_left(a) : phi_right(a)).index(), a.index()) = S(1);
  return m;
}

template <Scalar S>
Matrix<S> cap_matrix(int L, int i, const S& loop) {
  Matrix<S> m(1 << (L - 2), 1 << L);
  for (const auto& a : all_patterns(L)) {
    auto r = cap(a, i);
    m(r.pattern.index(), a.index()) += r.closed_loop ? loop : S(1);
  }
  return m;
}

template <Scalar S>
const Matrix<S>& MarkedForms<S>::get(const MarkedEdge& e) const {
  using K = MarkedEdge::Kind;
  using Lv = MarkedEdge::Level;
  if (e.kind == K::horizontal) {
    if (e.k < 1 || e.k > L + 1 || e.level == Lv::middle) throw std::out_of_range("MarkedForms: bad horizontal marker");
    return e.level == Lv::bottom ? y_bottom[e.k - 1] : y_top[e.k - 1];
  }
  if (e.k < 1 || e.k > L) throw std::out_of_range("MarkedForms: bad column marker");
  if (e.level == Lv::bottom) return x_bottom[e.k - 1];
  if (e.level == Lv::middle) return x_middle[e.k - 1];
  return x_top[e.k - 1];
}

template <Scalar S>
MarkedForms<S> marked_forms(const S& w, const ModelPoint<S>& p, const CrossingConvention& conv) {
  const int L = p.size();
  const int dim = 1 << L;
  RowWeights<S> rw = row_weights(w, p, ScalarTraits<S>::omega());
  RowLayout lay(L);
  auto pats = all_patterns(L);
  std::vector<std::vector<int>> parts;
  for (const auto& b : pats) parts.push_back(b.partners());
  const int n_nodes = lay.nodes();
  // node -> form slot; column nodes first then horizontal
  MarkedForms<S> zero;
  zero.L = L;
  zero.y_bottom.assign(L + 1, Matrix<S>(dim, dim));
  zero.y_top.assign(L + 1, Matrix<S>(dim, dim));
  zero.x_bottom.assign(L, Matrix<S>(dim, dim));
  zero.x_middle.assign(L, Matrix<S>(dim, dim));
  zero.x_top.assign(L, Matrix<S>(dim, dim));
  auto slot = [&](MarkedForms<S>& f, int node) -> Matrix<S>& {
    if (node < L) return f.x_bottom[node];
    if (node < 2 * L) return f.x_middle[node - L];
    if (node < 3 * L) return f.x_top[node - 2 * L];
    if (node < 4 * L + 1) return f.y_bottom[node - 3 * L];
    return f.y_top[node - 4 * L - 1];
  };
  // crossing counts of one (config, alpha, beta) triple; returns false if no left-to-right strand crosses
  // a marked node
  auto trace_counts = [&](const RowConfig& c, int a, int bb, std::vector<int>& count, int& loops) {
    StrandGraph g(n_nodes);
    lay.wire(g, c);
    lay.attach_below(g, parts[bb]);
    lay.attach_above(g, parts[a]);
    Connectivity con = g.trace({}, L);
    std::fill(count.begin(), count.end(), 0);
    bool any = false;
    for (const auto& st : con.strands) {
      if (!st.left_to_right()) continue;
      for (const auto& x : st.crossings) {
        count[x.node] += x.dir * (x.node < 3 * L ? conv.column : conv.horizontal);
        any = true;
      }
    }
    loops = con.loops;
    return any;
  };
  if constexpr (ScalarTraits<S>::exact) {
    if (rw.loop == S(1)) {
      // integer accumulation over a common denominator; no rational arithmetic per term
      const auto total = RowConfig::count(L);
      std::vector<S> wts(total);
      mpz_class D = 1;
      for (std::uint64_t code = 0; code < total; ++code) {
        wts[code] = config_weight(rw, RowConfig::decode(L, code));
        mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), wts[code].a().get_den_mpz_t());
        mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), wts[code].b().get_den_mpz_t());
      }
      std::vector<detail::Zw> acc(static_cast<std::size_t>(n_nodes) * dim * dim);
      std::vector<int> count(n_nodes);
      for (std::uint64_t code = 0; code < total; ++code) {
        const S& wt = wts[code];
        if (wt.is_zero()) continue;
        mpz_class wa = D / wt.a().get_den() * wt.a().get_num();
        mpz_class wb = D / wt.b().get_den() * wt.b().get_num();
        RowConfig c = RowConfig::decode(L, code);
        for (int a = 0; a < dim; ++a)
          for (int bb = 0; bb < dim; ++bb) {
            int loops = 0;
            if (!trace_counts(c, a, bb, count, loops)) continue;
            for (int nd = 0; nd < n_nodes; ++nd) {
              if (!count[nd]) continue;
              detail::Zw& x = acc[(static_cast<std::size_t>(nd) * dim + a) * dim + bb];
              long n = count[nd];
              if (n > 0) {
                mpz_addmul_ui(x.a.get_mpz_t(), wa.get_mpz_t(), static_cast<unsigned long>(n));
                mpz_addmul_ui(x.b.get_mpz_t(), wb.get_mpz_t(), static_cast<unsigned long>(n));
              } else {
                mpz_submul_ui(x.a.get_mpz_t(), wa.get_mpz_t(), static_cast<unsigned long>(-n));
                mpz_submul_ui(x.b.get_mpz_t(), wb.get_mpz_t(), static_cast<unsigned long>(-n));
              }
            }
          }
      }
      MarkedForms<S> out = zero;
      const Rational inv_d = Rational(1) / Rational(D);
      for (int nd = 0; nd < n_nodes; ++nd)
        for (int a = 0; a < dim; ++a)
          for (int bb = 0; bb < dim; ++bb) {
            const detail::Zw& x = acc[(static_cast<std::size_t>(nd) * dim + a) * dim + bb];
            if (!x.is_zero()) slot(out, nd)(a, bb) = CycloNum(Rational(x.a) * inv_d, Rational(x.b) * inv_d);
          }
      return out;
    }
  }
  auto partial = chunked_map<MarkedForms<S>>(RowConfig::count(L), kChunks, zero,
                                             [&](std::int64_t b, std::int64_t e, MarkedForms<S>& acc) {
    std::vector<int> count(n_nodes);
    for (std::int64_t code = b; code < e; ++code) {
      RowConfig c = RowConfig::decode(L, code);
      S wt = config_weight(rw, c);
      if (wt.is_zero()) continue;
      for (int a = 0; a < dim; ++a)
        for (int bb = 0; bb < dim; ++bb) {
          int loops = 0;
          if (!trace_counts(c, a, bb, count, loops)) continue;
          S ww = loops ? wt * loop_power(rw.loop, loops) : wt;
          for (int nd = 0; nd < n_nodes; ++nd)
            if (count[nd]) slot(acc, nd)(a, bb) += ww * S(count[nd]);
        }
    }
  });
  MarkedForms<S> out = zero;
  for (const auto& f : partial) {
    for (int k = 0; k <= L; ++k) {
      out.y_bottom[k] = out.y_bottom[k] + f.y_bottom[k];
      out.y_top[k] = out.y_top[k] + f.y_top[k];
    }
    for (int k = 0; k < L; ++k) {
      out.x_bottom[k] = out.x_bottom[k] + f.x_bottom[k];
      out.x_middle[k] = out.x_middle[k] + f.x_middle[k];
      out.x_top[k] = out.x_top[k] + f.x_top[k];
    }
  }
  return out;
}

template <Scalar S>
S marked_transfer(const MarkedEdge& e, const S& w, const ModelPoint<S>& p, const LinkPattern& alpha,
                  const LinkPattern& beta, const CrossingConvention& conv) {
  const int L = p.size();
  if (alpha.size() != L || beta.size() != L) throw std::invalid_argument("marked_transfer: size mismatch");
  RowWeights<S> rw = row_weights(w, p, ScalarTraits<S>::omega());
  RowLayout lay(L);
  auto labels = lay.labels();
  auto pa = alpha.partners(), pb = beta.partners();
  S total(0);
  for (std::uint64_t code = 0; code < RowConfig::count(L); ++code) {
    RowConfig c = RowConfig::decode(L, code);
    StrandGraph g(lay.nodes());
    lay.wire(g, c);
    lay.attach_below(g, pb);
    lay.attach_above(g, pa);
    Connectivity con = g.trace(labels, L);
    int n = signed_crossings(con, e, conv);
    if (n == 0) continue;
    S wt = config_weight(rw, c);
    if (con.loops) wt *= loop_power(rw.loop, con.loops);
    total += wt * S(n);
  }
  return total;
}

namespace {

// a + b w with a, b integers over a shared denominator
struct ZwVector {
  std::vector<mpz_class> a, b;
  mpz_class den = 1;
};

ZwVector to_zw(const std::vector<CycloNum>& v) {
  ZwVector out;
  for (const auto& x : v) {
    mpz_lcm(out.den.get_mpz_t(), out.den.get_mpz_t(), x.a().get_den_mpz_t());
    mpz_lcm(out.den.get_mpz_t(), out.den.get_mpz_t(), x.b().get_den_mpz_t());
  }
  for (const auto& x : v) {
    mpz_class a = x.a().get_num() * (out.den / x.a().get_den());
    mpz_class b = x.b().get_num() * (out.den / x.b().get_den());
    out.a.push_back(a);
    out.b.push_back(b);
  }
  return out;
}

}  // namespace

template <Scalar S>
std::vector<S> horizontal_current_sums(const S& w, const ModelPoint<S>& p, const std::vector<S>& up,
                                       const std::vector<S>& down, const CrossingConvention& conv) {
  const int L = p.size();
  const int dim = 1 << L;
  if (static_cast<int>(up.size()) != dim || static_cast<int>(down.size()) != dim)
    throw std::invalid_argument("horizontal_current_sums: vector size mismatch");
  RowWeights<S> rw = row_weights(w, p, ScalarTraits<S>::omega());
  RowLayout lay(L);
  std::vector<std::vector<int>> parts;
  for (const auto& b : all_patterns(L)) parts.push_back(b.partners());
  std::vector<S> pair_weight(static_cast<std::size_t>(dim) * dim);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) pair_weight[a * dim + b] = up[a] * down[b];
  const int first_hb = lay.hb(0), last_hb = lay.hb(L);

  if constexpr (ScalarTraits<S>::exact) {
    ZwVector pw = to_zw(pair_weight);
    CycloNum inv_den{Rational(1) / Rational(pw.den)};
    auto partial = chunked_map<std::vector<S>>(RowConfig::count(L), kChunks, std::vector<S>(L + 1, S(0)),
                                               [&](std::int64_t b, std::int64_t e, std::vector<S>& acc) {
      std::vector<mpz_class> ka(L + 1), kb(L + 1);
      std::vector<int> count(L + 1);
      for (std::int64_t code = b; code < e; ++code) {
        RowConfig c = RowConfig::decode(L, code);
        S wt = config_weight(rw, c);
        if (wt.is_zero()) continue;
        for (int k = 0; k <= L; ++k) ka[k] = 0, kb[k] = 0;
        for (int a = 0; a < dim; ++a)
          for (int bb = 0; bb < dim; ++bb) {
            std::size_t pi = static_cast<std::size_t>(a) * dim + bb;
            if (sgn(pw.a[pi]) == 0 && sgn(pw.b[pi]) == 0) continue;
            StrandGraph g(lay.nodes());
            lay.wire(g, c);
            lay.attach_below(g, parts[bb]);
            lay.attach_above(g, parts[a]);
            Connectivity con = g.trace({}, L);
            std::fill(count.begin(), count.end(), 0);
            for (const auto& st : con.strands) {
              if (!st.left_to_right()) continue;
              for (const auto& x : st.crossings)
                if (x.node >= first_hb && x.node <= last_hb) count[x.node - first_hb] += x.dir;
            }
            for (int k = 0; k <= L; ++k) {
              if (!count[k]) continue;
              long n = count[k] * conv.horizontal;
              ka[k] += pw.a[pi] * n;
              kb[k] += pw.b[pi] * n;
            }
          }
        for (int k = 0; k <= L; ++k)
          if (sgn(ka[k]) || sgn(kb[k])) acc[k] += wt * CycloNum(Rational(ka[k]), Rational(kb[k])) * inv_den;
      }
    });
    std::vector<S> out(L + 1, S(0));
    for (const auto& v : partial)
      for (int k = 0; k <= L; ++k) out[k] += v[k];
    return out;
  } else {
    auto partial = chunked_map<std::vector<S>>(RowConfig::count(L), kChunks, std::vector<S>(L + 1, S(0)),
                                               [&](std::int64_t b, std::int64_t e, std::vector<S>& acc) {
      std::vector<int> count(L + 1);
      for (std::int64_t code = b; code < e; ++code) {
        RowConfig c = RowConfig::decode(L, code);
        S wt = config_weight(rw, c);
        std::vector<S> loc(L + 1, S(0));
        for (int a = 0; a < dim; ++a)
          for (int bb = 0; bb < dim; ++bb) {
            StrandGraph g(lay.nodes());
            lay.wire(g, c);
            lay.attach_below(g, parts[bb]);
            lay.attach_above(g, parts[a]);
            Connectivity con = g.trace({}, L);
            std::fill(count.begin(), count.end(), 0);
            for (const auto& st : con.strands) {
              if (!st.left_to_right()) continue;
              for (const auto& x : st.crossings)
                if (x.node >= first_hb && x.node <= last_hb) count[x.node - first_hb] += x.dir;
            }
            for (int k = 0; k <= L; ++k)
              if (count[k]) loc[k] += pair_weight[a * dim + bb] * S(double(count[k] * conv.horizontal));
          }
        for (int k = 0; k <= L; ++k) acc[k] += wt * loc[k];
      }
    });
    std::vector<S> out(L + 1, S(0));
    for (const auto& v : partial)
      for (int k = 0; k <= L; ++k) out[k] += v[k];
    return out;
  }
}

int kappa_X(int k, const LinkPattern& alpha, const LinkPattern& beta, const CrossingConvention& conv) {
  if (k < 1 || k > alpha.size()) throw std::out_of_range("kappa_X: k out of range");
  return signed_crossings(glue(alpha, beta), MarkedEdge::column(k), conv);
}

#define LC_INSTANTIATE(S)                                                                                   \
  template RWeights<S> r_weights(const S&, const S&, const S&);                                           \
  template KWeights<S> k_weights(Side, const S&, const S&, const S&);                                     \
  template RowWeights<S> row_weights(const S&, const ModelPoint<S>&, const S&);                           \
  template S config_weight(const RowWeights<S>&, const RowConfig&);                                       \
  template Matrix<S> transfer_matrix(const S&, const ModelPoint<S>&, const S&);                           \
  template Matrix<S> transfer_matrix_enum(const S&, const ModelPoint<S>&, const S&);                      \
  template Matrix<S> transfer_matrix_up(const S&, const ModelPoint<S>&, const S&);                        \
  template Matrix<S> reflect_matrix<S>(int);                                                              \
  template Matrix<S> e_matrix(int, int, const S&);                                                        \
  template Matrix<S> boundary_reflect_matrix<S>(int, Side);                                               \
  template Matrix<S> exchange_matrix(int, int, const RWeights<S>&);                                       \
  template Matrix<S> boundary_matrix(int, const KWeights<S>&);                                            \
  template Matrix<S> phi_matrix<S>(int, int);                                                             \
  template Matrix<S> phi_boundary_matrix<S>(int, Side);                                                   \
  template Matrix<S> cap_matrix(int, int, const S&);                                                      \
  template struct MarkedForms<S>;                                                                         \
  template MarkedForms<S> marked_forms(const S&, const ModelPoint<S>&, const CrossingConvention&);        \
  template S marked_transfer(const MarkedEdge&, const S&, const ModelPoint<S>&, const LinkPattern&,       \
                             const LinkPattern&, const CrossingConvention&);                              \
  template std::vector<S> horizontal_current_sums(const S&, const ModelPoint<S>&, const std::vector<S>&,   \
                                                  const std::vector<S>&, const CrossingConvention&);

LC_INSTANTIATE(CycloNum)
LC_INSTANTIATE(ComplexApprox)

}  // namespace lc
