#pragma once

#include <cstdint>
#include <vector>

#include "loopcurrent/linalg.hpp"
#include "loopcurrent/linkpat.hpp"
#include "loopcurrent/numfield.hpp"

namespace lc {

// boundary parameters and column rapidities
template <Scalar S>
struct ModelPoint {
  S zeta1{1}, zeta2{1};
  std::vector<S> z;
  int size() const { return static_cast<int>(z.size()); }
};

template <Scalar S>
ModelPoint<S> swapped_reversed(const ModelPoint<S>& p) {
  return {p.zeta2, p.zeta1, std::vector<S>(p.z.rbegin(), p.z.rend())};
}

template <Scalar S>
ModelPoint<ComplexApprox> embed_point(const ModelPoint<S>& p) {
  ModelPoint<ComplexApprox> out{ComplexApprox(p.zeta1), ComplexApprox(p.zeta2), {}};
  for (const auto& x : p.z) out.z.push_back(ComplexApprox(x));
  return out;
}

template <Scalar S>
struct RWeights {
  S w1, w2;
};

enum class Side { left, right };

template <Scalar S>
struct KWeights {
  S stay, reflect;
  Side side = Side::right;
};

// w1 = [qz/w]/[qw/z], w2 = [z/w]/[qw/z]
template <Scalar S>
RWeights<S> r_weights(const S& z, const S& w, const S& q);
template <Scalar S>
RWeights<S> r_weights(const S& z, const S& w) {
  return r_weights(z, w, ScalarTraits<S>::omega());
}

// right: K_r(w, zeta); left: K_l(w, zeta) = K_r(q/w, zeta)
template <Scalar S>
KWeights<S> k_weights(Side side, const S& w, const S& zeta, const S& q);
template <Scalar S>
KWeights<S> k_weights(Side side, const S& w, const S& zeta) {
  return k_weights(side, w, zeta, ScalarTraits<S>::omega());
}

// every local weight of the double row at spectral parameter w
template <Scalar S>
struct RowWeights {
  std::vector<RWeights<S>> bottom;  // R(z_i, w)
  std::vector<RWeights<S>> top;     // R(1/w, z_i)
  KWeights<S> left, right;
  S loop{1};
};

template <Scalar S>
RowWeights<S> row_weights(const S& w, const ModelPoint<S>& p, const S& q);

template <Scalar S>
S loop_weight(const S& q) {
  return -(q + S(1) / q);
}

// one double-row configuration; bit set = tile a (bottom strand to the left edge), or K reflect
struct RowConfig {
  std::uint32_t bottom = 0, top = 0;
  bool left_reflect = false, right_reflect = false;
  static RowConfig decode(int L, std::uint64_t code);
  static std::uint64_t count(int L) { return std::uint64_t{1} << (2 * L + 2); }
};

template <Scalar S>
S config_weight(const RowWeights<S>& rw, const RowConfig& c);

// node numbering and wiring of one double row; geometry is described at wire()
class RowLayout {
 public:
  explicit RowLayout(int L) : L_(L) {}
  int L() const { return L_; }
  int nodes() const { return 5 * L_ + 2; }
  int s(int i) const { return i; }
  int m(int i) const { return L_ + i; }
  int t(int i) const { return 2 * L_ + i; }
  int hb(int v) const { return 3 * L_ + v; }
  int ht(int v) const { return 4 * L_ + 1 + v; }
  std::vector<MarkedEdge> labels() const;
  void wire(StrandGraph& g, const RowConfig& c) const;
  // downward pattern below the row (site ports 0), upward pattern above (top ports 1)
  void attach_below(StrandGraph& g, const std::vector<int>& partner) const;
  void attach_above(StrandGraph& g, const std::vector<int>& partner) const;

 private:
  int L_;
};

// production builder: sweep an auxiliary strand through the double row, acting on (L+2)-site cuts
template <Scalar S>
Matrix<S> transfer_matrix(const S& w, const ModelPoint<S>& p, const S& q);
template <Scalar S>
Matrix<S> transfer_matrix(const S& w, const ModelPoint<S>& p) {
  return transfer_matrix(w, p, ScalarTraits<S>::omega());
}

// oracle: sum over all 2^(2L+2) row configurations
template <Scalar S>
Matrix<S> transfer_matrix_enum(const S& w, const ModelPoint<S>& p, const S& q);
template <Scalar S>
Matrix<S> transfer_matrix_enum(const S& w, const ModelPoint<S>& p) {
  return transfer_matrix_enum(w, p, ScalarTraits<S>::omega());
}

// the same row acting on upward patterns (attached on top, read off at the bottom sites)
template <Scalar S>
Matrix<S> transfer_matrix_up(const S& w, const ModelPoint<S>& p, const S& q);
template <Scalar S>
Matrix<S> transfer_matrix_up(const S& w, const ModelPoint<S>& p) {
  return transfer_matrix_up(w, p, ScalarTraits<S>::omega());
}

// --- local operators on the 2^L pattern space (columns = input pattern)

template <Scalar S>
Matrix<S> reflect_matrix(int L);
// e_i on sites i, i+1 (1-based)
template <Scalar S>
Matrix<S> e_matrix(int L, int i, const S& loop = S(1));
// the reflect move of a boundary K at site 1 (left) or L (right)
template <Scalar S>
Matrix<S> boundary_reflect_matrix(int L, Side side);
// w1 Id + w2 e_i
template <Scalar S>
Matrix<S> exchange_matrix(int L, int i, const RWeights<S>& r);
template <Scalar S>
Matrix<S> boundary_matrix(int L, const KWeights<S>& k);
// phi_i from size L-2 to size L (1-based interior i), phi_0 and phi_L from size L-1 to L
template <Scalar S>
Matrix<S> phi_matrix(int L, int i);
template <Scalar S>
Matrix<S> phi_boundary_matrix(int L, Side side);
// upward action of phi_i: size L to size L-2, closed loops weighted by `loop`
template <Scalar S>
Matrix<S> cap_matrix(int L, int i, const S& loop = S(1));

// --- marked operators, stored as bilinear forms M(alpha, beta): alpha upward above, beta downward below

template <Scalar S>
struct MarkedForms {
  int L = 0;
  // index [k-1] for the marker at position k
  std::vector<Matrix<S>> y_bottom, y_top;             // horizontal, k = 1..L+1
  std::vector<Matrix<S>> x_bottom, x_middle, x_top;  // column, k = 1..L
  const Matrix<S>& get(const MarkedEdge& e) const;
};

template <Scalar S>
MarkedForms<S> marked_forms(const S& w, const ModelPoint<S>& p, const CrossingConvention& conv = {});

template <Scalar S>
S marked_transfer(const MarkedEdge& e, const S& w, const ModelPoint<S>& p, const LinkPattern& alpha,
                  const LinkPattern& beta, const CrossingConvention& conv = {});

// Sum over alpha, beta of up[alpha] * M_k(alpha, beta) * down[beta] for all horizontal markers k
// at once; returns index k-1. Enumerates full (alpha, config, beta) triples.
template <Scalar S>
std::vector<S> horizontal_current_sums(const S& w, const ModelPoint<S>& p, const std::vector<S>& up,
                                       const std::vector<S>& down, const CrossingConvention& conv = {});

int kappa_X(int k, const LinkPattern& alpha, const LinkPattern& beta, const CrossingConvention& conv = {});

}  // namespace lc
