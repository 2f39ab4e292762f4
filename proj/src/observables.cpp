#include "loopcurrent/observables.hpp"

namespace lc {

template <Scalar S>
S oracle_X(int k, const StatePair<S>& st, const CrossingConvention& conv) {
  const int L = st.psi.size();
  if (k < 1 || k > L) throw std::out_of_range("oracle_X: k out of range");
  auto pats = all_patterns(L);
  S acc(0);
  for (const auto& a : pats) {
    const S& da = st.dual[a];
    if (da.is_zero()) continue;
    S row(0);
    for (const auto& b : pats) {
      int kap = kappa_X(k, a, b, conv);
      if (kap) row += S(kap) * st.psi[b];
    }
    acc += da * row;
  }
  return acc / st.norm();
}

template <Scalar S>
S oracle_X(int k, const ModelPoint<S>& p, const CrossingConvention& conv) {
  return oracle_X(k, StatePair<S>::solve(p), conv);
}

template <Scalar S>
std::vector<S> oracle_Y_all(const S& w, const StatePair<S>& st, const CrossingConvention& conv) {
  auto sums = horizontal_current_sums(w, st.psi.point, st.dual.psi, st.psi.psi, conv);
  S n = st.norm();
  for (auto& x : sums) x /= n;
  return sums;
}

template <Scalar S>
S oracle_Y(const S& w, int k, const ModelPoint<S>& p, const CrossingConvention& conv) {
  if (k < 1 || k > p.size() + 1) throw std::out_of_range("oracle_Y: k out of range");
  return oracle_Y_all(w, StatePair<S>::solve(p), conv)[k - 1];
}

template <Scalar S>
S marked_expectation(const MarkedEdge& e, const S& w, const StatePair<S>& st, const CrossingConvention& conv) {
  const MarkedForms<S> forms = marked_forms(w, st.psi.point, conv);
  return sandwich(forms.get(e), st);
}

template <Scalar S>
S sandwich(const Matrix<S>& m, const StatePair<S>& st) {
  S acc(0);
  const int dim = static_cast<int>(st.psi.psi.size());
  for (int a = 0; a < dim; ++a) {
    if (st.dual.psi[a].is_zero()) continue;
    S row(0);
    for (int b = 0; b < dim; ++b)
      if (!m(a, b).is_zero()) row += m(a, b) * st.psi.psi[b];
    acc += st.dual.psi[a] * row;
  }
  return acc;
}

std::string to_string(Observable o) { return o == Observable::X ? "X" : "Y"; }
std::string to_string(Route r) { return r == Route::oracle ? "oracle" : "closed"; }

template <Scalar S>
nlohmann::json point_to_json(const ModelPoint<S>& p) {
  nlohmann::json z = nlohmann::json::array();
  for (const auto& x : p.z) z.push_back(x);
  return {{"zeta1", p.zeta1}, {"zeta2", p.zeta2}, {"z", z}};
}

template <Scalar S>
nlohmann::json result_to_json(const CurrentResult<S>& r) {
  nlohmann::json j;
  j["kind"] = to_string(r.kind);
  j["k"] = r.k;
  if (r.w) j["w"] = *r.w;
  j["L"] = r.L;
  j["route"] = to_string(r.route);
  j["backend"] = ScalarTraits<S>::name;
  j["params"] = point_to_json(r.params);
  j["value"] = r.value;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

#define LC_INSTANTIATE(S)                                                                              \
  template S oracle_X(int, const StatePair<S>&, const CrossingConvention&);                            \
  template S oracle_X(int, const ModelPoint<S>&, const CrossingConvention&);                           \
  template std::vector<S> oracle_Y_all(const S&, const StatePair<S>&, const CrossingConvention&);      \
  template S oracle_Y(const S&, int, const ModelPoint<S>&, const CrossingConvention&);                 \
  template S marked_expectation(const MarkedEdge&, const S&, const StatePair<S>&, const CrossingConvention&); \
  template S sandwich(const Matrix<S>&, const StatePair<S>&);                                          \
  template nlohmann::json point_to_json(const ModelPoint<S>&);                                         \
  template nlohmann::json result_to_json(const CurrentResult<S>&);

LC_INSTANTIATE(CycloNum)
LC_INSTANTIATE(ComplexApprox)

}  // namespace lc
