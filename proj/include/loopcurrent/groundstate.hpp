#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "loopcurrent/linkpat.hpp"
#include "loopcurrent/numfield.hpp"
#include "loopcurrent/yangbaxter.hpp"

namespace lc {

// kernel of T(w0) - 1 is not one-dimensional
struct DegeneracyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <Scalar S>
struct StateVector {
  ModelPoint<S> point;
  std::vector<S> psi;  // indexed by LinkPattern::index()
  int size() const { return point.size(); }
  const S& operator[](const LinkPattern& a) const { return psi[a.index()]; }
  S sum() const {
    S s(0);
    for (const auto& x : psi) s += x;
    return s;
  }
};

// components psi*_alpha over upward patterns alpha
template <Scalar S>
using DualStateVector = StateVector<S>;

// probe spectral parameters that avoid every weight pole of the row at p
template <Scalar S>
std::vector<S> probe_values(const ModelPoint<S>& p, int count, std::uint64_t seed = 0);

// (zeta1, zeta2, z_1..z_L) drawn so that no two parameters x, y satisfy (x/y)^6 = 1 or (xy)^6 = 1 and
// no x^6 = 1; this keeps every weight, tau and eigenvector computation off its special loci
ModelPoint<CycloNum> sample_point(int L, std::uint64_t seed);
// a spectral parameter generic with respect to p in the same sense
CycloNum sample_spectral(const ModelPoint<CycloNum>& p, std::uint64_t seed);
bool generic_against(const CycloNum& x, const std::vector<CycloNum>& taken);

// eigenvalue-1 vector of T, normalized so the components sum to z_formula(p)
template <Scalar S>
StateVector<S> ground_state(const ModelPoint<S>& p);

// psi*_alpha(zeta1, zeta2; z) = psi_{reflect alpha}(zeta2, zeta1; z reversed)
template <Scalar S>
DualStateVector<S> dual_state(const ModelPoint<S>& p);

enum class RecursionKind { bulk, left, right };

struct RecursionReport {
  bool vanishing = false;     // components outside the image of phi are zero
  bool proportional = false;  // image components equal factor * smaller system
  bool ratios = false;        // normalization-free ratios agree
  bool ok() const { return vanishing && proportional && ratios; }
};

// p must already sit on the specialization: bulk z_{i+1} = q z_i (1 <= i < L), left z_1 = q zeta1,
// right z_L = zeta2 / q
template <Scalar S>
RecursionReport psi_recursion_report(RecursionKind kind, int i, const ModelPoint<S>& p);

template <Scalar S>
bool psi_recursion_check(RecursionKind kind, int i, const ModelPoint<S>& p) {
  return psi_recursion_report(kind, i, p).ok();
}

nlohmann::json state_to_json(const StateVector<CycloNum>& s);

}  // namespace lc
