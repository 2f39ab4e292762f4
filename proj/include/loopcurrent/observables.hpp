#pragma once

#include <optional>
#include <string>
#include <vector>

#include "loopcurrent/groundstate.hpp"
#include "loopcurrent/linkpat.hpp"
#include "loopcurrent/yangbaxter.hpp"

namespace lc {

// primal and dual eigenvectors at one parameter point, solved once and reused
template <Scalar S>
struct StatePair {
  StateVector<S> psi;
  DualStateVector<S> dual;
  S norm() const { return dual.sum() * psi.sum(); }  // equals Z_L^2 under the chosen normalization
  static StatePair solve(const ModelPoint<S>& p) { return {ground_state(p), dual_state(p)}; }
};

template <Scalar S>
S oracle_X(int k, const StatePair<S>& st, const CrossingConvention& conv = {});
template <Scalar S>
S oracle_X(int k, const ModelPoint<S>& p, const CrossingConvention& conv = {});

// index k-1 for k = 1..L+1
template <Scalar S>
std::vector<S> oracle_Y_all(const S& w, const StatePair<S>& st, const CrossingConvention& conv = {});
template <Scalar S>
S oracle_Y(const S& w, int k, const ModelPoint<S>& p, const CrossingConvention& conv = {});

// sum_{alpha,beta} psi*_alpha <alpha| M |beta> psi_beta for an arbitrary marked edge (no normalization)
template <Scalar S>
S marked_expectation(const MarkedEdge& e, const S& w, const StatePair<S>& st, const CrossingConvention& conv = {});

// psi* . M . psi for a form already built
template <Scalar S>
S sandwich(const Matrix<S>& m, const StatePair<S>& st);

enum class Observable { X, Y };
enum class Route { oracle, closed };

std::string to_string(Observable o);
std::string to_string(Route r);

template <Scalar S>
struct CurrentResult {
  Observable kind = Observable::X;
  int k = 0;            // column (X) or horizontal position (Y)
  std::optional<S> w;   // Y only
  int L = 0;
  Route route = Route::oracle;
  ModelPoint<S> params;
  S value;
  std::string note;
};

template <Scalar S>
nlohmann::json point_to_json(const ModelPoint<S>& p);
template <Scalar S>
nlohmann::json result_to_json(const CurrentResult<S>& r);

}  // namespace lc
