#include "loopcurrent/groundstate.hpp"

#include <cmath>

#include "loopcurrent/chartoda.hpp"
#include "loopcurrent/linalg.hpp"

namespace lc {

namespace {

template <Scalar S>
S from_cyclo(const CycloNum& x) {
  if constexpr (ScalarTraits<S>::exact)
    return x;
  else
    return ComplexApprox(x);
}

template <Scalar S>
bool same_vector(const std::vector<S>& a, const std::vector<S>& b) {
  if (a.size() != b.size()) return false;
  if constexpr (ScalarTraits<S>::exact) {
    return a == b;
  } else {
    double scale = 0, diff = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      scale = std::max({scale, std::abs(a[i].value()), std::abs(b[i].value())});
      diff = std::max(diff, std::abs(a[i].value() - b[i].value()));
    }
    return diff <= 1e-8 * std::max(scale, 1e-300);
  }
}

template <Scalar S>
bool same_scalar(const S& a, const S& b, double scale) {
  if constexpr (ScalarTraits<S>::exact) {
    (void)scale;
    return a == b;
  } else {
    return std::abs(a.value() - b.value()) <= 1e-8 * std::max(scale, 1e-300);
  }
}

}  // namespace

bool generic_against(const CycloNum& x, const std::vector<CycloNum>& taken) {
  if (x.is_zero()) return false;
  auto sixth_root_of_one = [](const CycloNum& y) { return ipow(y, 6) == CycloNum(1); };
  if (sixth_root_of_one(x)) return false;
  for (const auto& y : taken)
    if (sixth_root_of_one(x / y) || sixth_root_of_one(x * y)) return false;
  return true;
}

ModelPoint<CycloNum> sample_point(int L, std::uint64_t seed) {
  if (L < 0) throw std::invalid_argument("sample_point: negative size");
  CycloSampler rng(seed);
  std::vector<CycloNum> taken;
  for (int tries = 0; static_cast<int>(taken.size()) < L + 2; ++tries) {
    if (tries > 100000) throw SamplingError("sample_point: budget exhausted");
    CycloNum x = rng.next();
    if (generic_against(x, taken)) taken.push_back(x);
  }
  return {taken[0], taken[1], std::vector<CycloNum>(taken.begin() + 2, taken.end())};
}

CycloNum sample_spectral(const ModelPoint<CycloNum>& p, std::uint64_t seed) {
  std::vector<CycloNum> taken = p.z;
  taken.push_back(p.zeta1);
  taken.push_back(p.zeta2);
  CycloSampler rng(seed ^ 0xa5a5a5a5ULL);
  for (int tries = 0; tries < 100000; ++tries) {
    CycloNum x = rng.next();
    if (generic_against(x, taken)) return x;
  }
  throw SamplingError("sample_spectral: budget exhausted");
}

template <Scalar S>
std::vector<S> probe_values(const ModelPoint<S>& p, int count, std::uint64_t seed) {
  CycloSampler rng(0x5eed0000ULL + seed);
  std::vector<S> out;
  for (int tries = 0; static_cast<int>(out.size()) < count; ++tries) {
    if (tries > 10000) throw SamplingError("probe_values: no admissible spectral parameter found");
    S w = from_cyclo<S>(rng.next());
    try {
      row_weights(w, p, ScalarTraits<S>::omega());
    } catch (const DomainError&) {
      continue;
    }
    bool dup = false;
    for (const auto& x : out) dup = dup || same_scalar(x, w, 1.0);
    if (!dup) out.push_back(w);
  }
  return out;
}

template <Scalar S>
StateVector<S> ground_state(const ModelPoint<S>& p) {
  const int L = p.size();
  if (L < 1) throw std::invalid_argument("ground_state: need at least one site");
  const int dim = 1 << L;
  auto probes = probe_values(p, 4);
  std::vector<S> psi;
  std::size_t used = 0;
  std::size_t last_dim = 0;
  for (; used < 3; ++used) {
    Matrix<S> A = transfer_matrix(probes[used], p) - Matrix<S>::identity(dim);
    if constexpr (ScalarTraits<S>::exact) {
      if (auto line = kernel_line(A)) {
        psi = std::move(*line);
        break;
      }
    }
    auto ns = nullspace(A);
    last_dim = ns.size();
    if (ns.size() == 1) {
      psi = std::move(ns[0]);
      break;
    }
  }
  if (psi.empty())
    throw DegeneracyError("ground_state: eigenvalue-1 space has dimension " + std::to_string(last_dim) +
                          " at every probe (parameters too special)");
  S s(0);
  for (const auto& x : psi) s += x;
  if (s.is_zero()) throw DomainError("ground_state: component sum vanishes, cannot normalize");
  S Z = z_formula(p);
  if (Z.is_zero()) throw DomainError("ground_state: Z_L vanishes at this point");
  S f = Z / s;
  for (auto& x : psi) x *= f;
  // independent probe
  const S& w1 = probes[used + 1];
  if (!same_vector(transfer_matrix(w1, p).apply(psi), psi))
    throw std::logic_error("ground_state: eigenvector fails at an independent spectral parameter");
  return {p, std::move(psi)};
}

template <Scalar S>
DualStateVector<S> dual_state(const ModelPoint<S>& p) {
  StateVector<S> g = ground_state(swapped_reversed(p));
  DualStateVector<S> d{p, std::vector<S>(g.psi.size())};
  for (const auto& a : all_patterns(p.size())) d.psi[a.index()] = g[reflect(a)];
  return d;
}

template <Scalar S>
RecursionReport psi_recursion_report(RecursionKind kind, int i, const ModelPoint<S>& p) {
  const int L = p.size();
  const S q = ScalarTraits<S>::omega();
  ModelPoint<S> red = p;
  S factor(1);
  std::vector<LinkPattern> image;  // phi applied to each reduced pattern, by reduced index
  double scale = 1;
  if (kind == RecursionKind::bulk) {
    if (i < 1 || i >= L) throw std::out_of_range("psi_recursion: i out of range");
    const S& zi = p.z[i - 1];
    if (!same_scalar(p.z[i], q * zi, std::abs(ComplexApprox(embed_point(p).z[i]).value())))
      throw std::invalid_argument("psi_recursion: point is not on z_{i+1} = q z_i");
    red.z.erase(red.z.begin() + (i - 1), red.z.begin() + (i + 1));
    S k1 = kfunc(zi, p.zeta1), k2 = kfunc(zi, p.zeta2);
    factor = k1 * k1 * k2 * k2;
    for (int j = 0; j < L; ++j) {
      if (j == i - 1 || j == i) continue;
      S kj = kfunc(zi, p.z[j]);
      factor *= kj * kj * kj * kj;
    }
    for (const auto& a : all_patterns(L - 2)) image.push_back(phi_insert(a, i));
  } else if (kind == RecursionKind::left) {
    if (!same_scalar(p.z[0], q * p.zeta1, 1.0)) throw std::invalid_argument("psi_recursion: point is not on z_1 = q zeta1");
    red.zeta1 = q * p.zeta1;
    red.z.erase(red.z.begin());
    factor = -kfunc(p.zeta1, p.zeta2);
    for (int j = 1; j < L; ++j) {
      S kj = kfunc(p.zeta1, p.z[j]);
      factor *= kj * kj;
    }
    for (const auto& a : all_patterns(L - 1)) image.push_back(phi_left(a));
  } else {
    if (!same_scalar(p.z[L - 1], p.zeta2 / q, 1.0))
      throw std::invalid_argument("psi_recursion: point is not on z_L = zeta2 / q");
    red.zeta2 = p.zeta2 / q;
    red.z.pop_back();
    S inv = S(1) / p.zeta2;
    factor = -kfunc(inv, p.zeta1);
    for (int j = 0; j < L - 1; ++j) {
      S kj = kfunc(inv, p.z[j]);
      factor *= kj * kj;
    }
    for (const auto& a : all_patterns(L - 1)) image.push_back(phi_right(a));
  }
  StateVector<S> big = ground_state(p);
  StateVector<S> small = ground_state(red);
  for (const auto& x : big.psi) scale = std::max(scale, ScalarTraits<S>::magnitude(x));

  RecursionReport rep;
  std::vector<char> in_image(big.psi.size(), 0);
  for (const auto& b : image) in_image[b.index()] = 1;
  rep.vanishing = true;
  for (std::size_t a = 0; a < big.psi.size(); ++a)
    if (!in_image[a] && !same_scalar(big.psi[a], S(0), scale)) rep.vanishing = false;
  rep.proportional = true;
  for (std::size_t a = 0; a < image.size(); ++a)
    if (!same_scalar(big.psi[image[a].index()], factor * small.psi[a], scale)) rep.proportional = false;
  rep.ratios = true;
  std::size_t ref = 0;
  while (ref < small.psi.size() && small.psi[ref].is_zero()) ++ref;
  if (ref == small.psi.size()) {
    rep.ratios = false;
  } else {
    const S& big_ref = big.psi[image[ref].index()];
    double sc = scale * ScalarTraits<S>::magnitude(small.psi[ref]);
    for (std::size_t a = 0; a < image.size(); ++a)
      if (!same_scalar(big.psi[image[a].index()] * small.psi[ref], big_ref * small.psi[a], std::max(sc, 1e-300)))
        rep.ratios = false;
  }
  return rep;
}

nlohmann::json state_to_json(const StateVector<CycloNum>& s) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& a : all_patterns(s.size())) j[a.str()] = s[a];
  return j;
}

#define LC_INSTANTIATE(S)                                                                  \
  template std::vector<S> probe_values(const ModelPoint<S>&, int, std::uint64_t);          \
  template StateVector<S> ground_state(const ModelPoint<S>&);                              \
  template DualStateVector<S> dual_state(const ModelPoint<S>&);                            \
  template RecursionReport psi_recursion_report(RecursionKind, int, const ModelPoint<S>&);

LC_INSTANTIATE(CycloNum)
LC_INSTANTIATE(ComplexApprox)

}  // namespace lc
