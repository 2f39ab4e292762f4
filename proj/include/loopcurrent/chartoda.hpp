#pragma once

#include <vector>

#include "loopcurrent/numfield.hpp"
#include "loopcurrent/yangbaxter.hpp"

namespace lc {

struct PartitionShape {
  std::vector<int> parts;  // weakly decreasing, non-negative
  int n() const { return static_cast<int>(parts.size()); }
  // lambda_j = floor((L - j) / 2), j = 1..L
  static PartitionShape staircase(int L);
};

// bialternant ratio det[x_i^(l_j+n-j+1) - x_i^-(..)] / det[x_i^(n-j+1) - x_i^-(n-j+1)]
template <Scalar S>
S sympchar(const PartitionShape& lambda, const std::vector<S>& x);

// the same character as a determinant of complete symmetric functions in x^{+-1}; no division by the
// Weyl denominator, so coincident arguments and x = 1 are fine
template <Scalar S>
S sympchar_complete(const PartitionShape& lambda, const std::vector<S>& x);

// value of sympchar at x = (1, ..., 1), product over positive roots of C_n
Rational weyl_dim(const PartitionShape& lambda, int n);

// staircase character at squared arguments
template <Scalar S>
S tau(const std::vector<S>& z);

// Regular part of z_slot d/dz_slot log tau. Slots listed in `approach` are treated as limits: each
// determinant is replaced by its first non-vanishing Taylor coefficient in those variables. `pole`
// receives the order of the simple-pole term z/(z - z0) in the slot variable (0 off the approach set).
template <Scalar S>
S log_deriv_tau(int slot, const std::vector<S>& z, const std::vector<int>& approach = {}, int* pole = nullptr);

// tau(z) ~ coeff * t^order as z_slot -> z_slot + t
template <Scalar S>
struct TauLeading {
  S coeff;
  int order = 0;
};
template <Scalar S>
TauLeading<S> tau_leading(const std::vector<S>& z, int slot);

// the four tau factors of the wave function u_L; u itself is never formed
template <Scalar S>
struct TauBundle {
  S tau_L, tau_zeta1, tau_zeta2, tau_both;
  // exp(u_L)
  S ratio() const { return tau_zeta1 * tau_zeta2 / (tau_L * tau_both); }
};

template <Scalar S>
TauBundle<S> u_fn(const ModelPoint<S>& p);

// sum of +-log_deriv_tau over the four factors at z slot k (1-based); no c_L prefactor
template <Scalar S>
S u_log_deriv(int k, const ModelPoint<S>& p, const std::vector<int>& approach = {});

// approach holds 0-based indices into p.z that were specialized onto a coincidence
template <Scalar S>
S closed_X(int k, const ModelPoint<S>& p, const std::vector<int>& approach = {});

// closed_X for k = 1..L (index k-1); the Taylor leading terms are shared across k
template <Scalar S>
std::vector<S> closed_X_all(const ModelPoint<S>& p, const std::vector<int>& approach = {});

// dummy slot written as v/q (default) or as q/v; both must agree
enum class DummySlot { v_over_q, q_over_v };
template <Scalar S>
S closed_Y(const S& w, const ModelPoint<S>& p, const std::vector<int>& approach = {},
           DummySlot dummy = DummySlot::v_over_q);

template <Scalar S>
S z_formula(const ModelPoint<S>& p);

// float evaluation that stays well conditioned at coincident arguments: tau through complete symmetric
// functions, slot derivatives from Taylor coefficients sampled on a small circle
ComplexApprox tau_stable(const std::vector<ComplexApprox>& z);
ComplexApprox closed_X_stable(int k, const ModelPoint<ComplexApprox>& p);
ComplexApprox closed_Y_stable(const ComplexApprox& w, const ModelPoint<ComplexApprox>& p);

// coincident rapidities in the float backend: perturb z_i -> z_i (1 + eps c_i), evaluate with the
// stable path and Richardson-extrapolate
struct HomogeneousValue {
  ComplexApprox value;
  double error_estimate = 0;
};
HomogeneousValue closed_X_homogeneous(int k, const ModelPoint<ComplexApprox>& p, double eps);
HomogeneousValue closed_Y_homogeneous(const ComplexApprox& w, const ModelPoint<ComplexApprox>& p, double eps);

}  // namespace lc
