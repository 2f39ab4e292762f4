#include "loopcurrent/linkpat.hpp"

#include <stdexcept>

namespace lc {

LinkPattern::LinkPattern(int size, std::uint32_t index) : size_(size), bits_(index) {
  if (size < 0 || size > 31) throw std::invalid_argument("LinkPattern: size out of range");
  if (size < 32 && (static_cast<std::uint64_t>(index) >> size) != 0)
    throw std::invalid_argument("LinkPattern: index out of range");
}

LinkPattern LinkPattern::parse(std::string_view word) {
  if (word.size() > 31) throw std::invalid_argument("LinkPattern: word too long");
  std::uint32_t bits = 0;
  for (char c : word) {
    if (c != '(' && c != ')') throw std::invalid_argument("LinkPattern: expected '(' or ')'");
    bits = (bits << 1) | (c == '(' ? 1u : 0u);
  }
  return LinkPattern(static_cast<int>(word.size()), bits);
}

LinkPattern LinkPattern::from_partners(const std::vector<int>& partner) {
  std::string w;
  for (int i = 0; i < static_cast<int>(partner.size()); ++i) {
    int p = partner[i];
    if (p == kLeft)
      w += ')';
    else if (p == kRight)
      w += '(';
    else if (p > i)
      w += '(';
    else if (p >= 0 && p < i)
      w += ')';
    else
      throw std::invalid_argument("LinkPattern: bad partner array");
  }
  LinkPattern out = parse(w);
  if (out.partners() != partner) throw std::invalid_argument("LinkPattern: partner array is not planar");
  return out;
}

std::string LinkPattern::str() const {
  std::string w(size_, ')');
  for (int i = 0; i < size_; ++i)
    if (is_open(i)) w[i] = '(';
  return w;
}

std::vector<int> LinkPattern::partners() const {
  std::vector<int> p(size_, kLeft);
  std::vector<int> stack;
  for (int i = 0; i < size_; ++i) {
    if (is_open(i)) {
      stack.push_back(i);
    } else if (!stack.empty()) {
      int j = stack.back();
      stack.pop_back();
      p[i] = j;
      p[j] = i;
    }
  }
  for (int j : stack) p[j] = kRight;
  return p;
}

std::vector<LinkPattern> all_patterns(int L) {
  std::vector<LinkPattern> out;
  out.reserve(std::size_t{1} << L);
  for (std::uint32_t i = 0; i < (1u << L); ++i) out.emplace_back(L, i);
  return out;
}

LinkPattern phi_insert(const LinkPattern& alpha, int i) {
  if (i < 1 || i > alpha.size() + 1) throw std::out_of_range("phi_insert: index out of range");
  std::string w = alpha.str();
  w.insert(static_cast<std::size_t>(i - 1), "()");
  return LinkPattern::parse(w);
}

LinkPattern phi_left(const LinkPattern& alpha) { return LinkPattern::parse(")" + alpha.str()); }
LinkPattern phi_right(const LinkPattern& alpha) { return LinkPattern::parse(alpha.str() + "("); }

LinkPattern reflect(const LinkPattern& alpha) {
  std::string w = alpha.str();
  std::string r(w.rbegin(), w.rend());
  for (char& c : r) c = (c == '(') ? ')' : '(';
  return LinkPattern::parse(r);
}

bool join_through(std::vector<int>& partner, int a, int b) {
  int pa = partner[a], pb = partner[b];
  if (pa == b) return true;
  if (pa >= 0) partner[pa] = pb;
  if (pb >= 0) partner[pb] = pa;
  return false;
}

int apply_e(std::vector<int>& partner, int j) {
  bool loop = join_through(partner, j, j + 1);
  partner[j] = j + 1;
  partner[j + 1] = j;
  return loop ? 1 : 0;
}

void send_to_boundary(std::vector<int>& partner, int p, int side) {
  int q = partner[p];
  if (q >= 0 && q != p) partner[q] = side;
  partner[p] = side;
}

std::vector<int> erase_positions(const std::vector<int>& partner, int from, int count) {
  std::vector<int> out;
  out.reserve(partner.size() - count);
  for (int i = 0; i < static_cast<int>(partner.size()); ++i) {
    if (i >= from && i < from + count) continue;
    int p = partner[i];
    if (p >= from && p < from + count) throw std::logic_error("erase_positions: dangling reference");
    out.push_back(p >= from + count ? p - count : p);
  }
  return out;
}

CapResult cap(const LinkPattern& alpha, int i) {
  if (i < 1 || i >= alpha.size()) throw std::out_of_range("cap: index out of range");
  auto p = alpha.partners();
  bool loop = join_through(p, i - 1, i);
  return {LinkPattern::from_partners(erase_positions(p, i - 1, 2)), loop};
}

Connectivity StrandGraph::trace(std::vector<MarkedEdge> labels, int sites) const {
  Connectivity c;
  c.sites = sites;
  c.node_edge = std::move(labels);
  int n = nodes();
  std::vector<char> seen(n, 0);
  for (int side : {kLeftSlot, kRightSlot}) {
    for (int s = 0; s < 2 * n; ++s) {
      if (link_[s] != side || seen[s / 2]) continue;
      Strand st;
      st.from = side == kLeftSlot ? kLeft : kRight;
      Walk w = walk(Port{s / 2, s % 2}, [&](int node, int dir) {
        seen[node] = 1;
        st.crossings.push_back({node, dir});
      });
      if (w.end_kind == kOpenEnd) throw std::logic_error("StrandGraph::trace: open port");
      st.to = w.end_kind;
      c.strands.push_back(std::move(st));
    }
  }
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    ++c.loops;
    int cur = s, port = 0;
    do {
      seen[cur] = 1;
      ++c.loop_nodes;
      int nxt = link_[2 * cur + 1 - port];
      if (nxt < 0) throw std::logic_error("StrandGraph::trace: loop touches a boundary");
      cur = nxt / 2;
      port = nxt % 2;
    } while (cur != s);
  }
  return c;
}

int StrandGraph::count_loops() const {
  int n = nodes();
  std::vector<char> seen(n, 0);
  for (int s = 0; s < 2 * n; ++s) {
    if (link_[s] >= 0 || seen[s / 2]) continue;
    walk(Port{s / 2, s % 2}, [&](int node, int) { seen[node] = 1; });
  }
  int loops = 0;
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    ++loops;
    int cur = s, port = 0;
    do {
      seen[cur] = 1;
      int nxt = link_[2 * cur + 1 - port];
      cur = nxt / 2;
      port = nxt % 2;
    } while (cur != s);
  }
  return loops;
}

Connectivity glue(const LinkPattern& alpha, const LinkPattern& beta) {
  if (alpha.size() != beta.size()) throw std::invalid_argument("glue: size mismatch");
  int L = alpha.size();
  StrandGraph g(L);
  auto attach = [&](const std::vector<int>& p, int port) {
    for (int i = 0; i < L; ++i) {
      if (p[i] == kLeft || p[i] == kRight)
        g.to_boundary({i, port}, p[i]);
      else if (p[i] > i)
        g.link({i, port}, {p[i], port});
    }
  };
  attach(beta.partners(), 0);
  attach(alpha.partners(), 1);
  std::vector<MarkedEdge> labels;
  for (int i = 0; i < L; ++i) labels.push_back(MarkedEdge::column(i + 1));
  return g.trace(std::move(labels), L);
}

int signed_crossings(const Connectivity& c, const MarkedEdge& e, const CrossingConvention& conv) {
  int sign = e.kind == MarkedEdge::Kind::column ? conv.column : conv.horizontal;
  int total = 0;
  for (const auto& st : c.strands) {
    if (!st.left_to_right()) continue;
    for (const auto& x : st.crossings)
      if (c.node_edge[x.node] == e) total += x.dir;
  }
  return sign * total;
}

}  // namespace lc
