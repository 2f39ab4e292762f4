#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "loopcurrent/chartoda.hpp"
#include "loopcurrent/groundstate.hpp"
#include "loopcurrent/observables.hpp"
#include "loopcurrent/suites.hpp"

using namespace lc;

namespace {

// bad flag values, caps, malformed numbers: exit 2
struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// oracle and closed routes disagree: exit 1
struct IdentityFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr int kCapOracle = 5;
constexpr int kCapExactClosed = 12;
constexpr int kCapFloatClosed = 16;
constexpr int kCapVerify = 6;

struct RunSpec {
  std::string command;
  int L = 0;
  std::string obs = "X";
  std::string k;
  std::string w;
  std::string route;
  std::string backend = "exact";
  std::uint64_t seed = 1;
  std::string z, zeta1, zeta2;
  std::string suite = "all";
  int points = 3;
  std::string out;
  std::string format;
  std::optional<double> homogeneous_eps;
  bool unsafe_size = false;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || c == ';') {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

int parse_int(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw SpecError(std::string("cannot read ") + what + " from '" + s + "'");
  }
}

// "a..b" or "a"; empty means the whole range
std::pair<int, int> parse_range(const std::string& s, int lo, int hi) {
  if (s.empty()) return {lo, hi};
  auto dots = s.find("..");
  int a, b;
  if (dots == std::string::npos) {
    a = b = parse_int(s, "--k");
  } else {
    a = parse_int(s.substr(0, dots), "--k");
    b = parse_int(s.substr(dots + 2), "--k");
  }
  if (a > b || a < lo || b > hi)
    throw SpecError("--k " + s + " is outside " + std::to_string(lo) + ".." + std::to_string(hi));
  return {a, b};
}

template <Scalar S>
S parse_value(const std::string& s) {
  try {
    if constexpr (ScalarTraits<S>::exact)
      return parse_cyclo(s);
    else
      return parse_complex(s);
  } catch (const std::exception& e) {
    throw SpecError("cannot read number '" + s + "': " + e.what());
  }
}

std::string value_text(const CycloNum& x) { return x.str(); }
std::string value_text(const ComplexApprox& x) { return x.str(); }

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

template <Scalar S>
std::string joined(const std::vector<S>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ";" : "") + value_text(v[i]);
  return out;
}

template <Scalar S>
std::string to_csv(const std::vector<CurrentResult<S>>& rows) {
  std::ostringstream os;
  constexpr bool exact = ScalarTraits<S>::exact;
  os << "kind,k,w,L,route,backend," << (exact ? "value" : "value_re,value_im") << ",zeta1,zeta2,z,note\n";
  char buf[64];
  for (const auto& r : rows) {
    os << to_string(r.kind) << ',' << r.k << ',' << (r.w ? csv_escape(value_text(*r.w)) : "") << ',' << r.L << ','
       << to_string(r.route) << ',' << ScalarTraits<S>::name << ',';
    if constexpr (exact) {
      os << csv_escape(r.value.str());
    } else {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g", r.value.re(), r.value.im());
      os << buf;
    }
    os << ',' << csv_escape(value_text(r.params.zeta1)) << ',' << csv_escape(value_text(r.params.zeta2)) << ','
       << csv_escape(joined(r.params.z)) << ',' << csv_escape(r.note) << '\n';
  }
  return os.str();
}

template <Scalar S>
bool agree(const S& a, const S& b) {
  if constexpr (ScalarTraits<S>::exact)
    return a == b;
  else
    return approx_equal(a, b, 1e-9);
}

template <Scalar S>
bool is_unit_fixed_point(const S& x) {
  if constexpr (ScalarTraits<S>::exact)
    return x == S(1) || x == S(-1);
  else
    return x.value() == std::complex<double>(1, 0) || x.value() == std::complex<double>(-1, 0);
}

template <Scalar S>
std::vector<CurrentResult<S>> compute(const RunSpec& rs) {
  constexpr bool exact = ScalarTraits<S>::exact;
  // L from --L, else from --z, else 3
  int L = rs.L;
  std::vector<std::string> zs;
  if (!rs.z.empty()) {
    zs = split_list(rs.z);
    if (L == 0) L = static_cast<int>(zs.size());
    if (static_cast<int>(zs.size()) != L)
      throw SpecError("--z has " + std::to_string(zs.size()) + " entries but L = " + std::to_string(L));
  }
  if (L == 0) L = 3;
  if (L < 1) throw SpecError("L must be at least 1");
  if (rs.obs != "X" && rs.obs != "Y") throw SpecError("--obs must be X or Y");
  const Observable obs = rs.obs == "X" ? Observable::X : Observable::Y;
  std::string route = rs.route.empty() ? "closed" : rs.route;
  if (route != "oracle" && route != "closed" && route != "both") throw SpecError("--route must be oracle, closed or both");
  const bool want_oracle = route != "closed", want_closed = route != "oracle";
  if (!rs.unsafe_size) {
    if (want_oracle && L > kCapOracle)
      throw SpecError("L = " + std::to_string(L) + " exceeds the oracle cap " + std::to_string(kCapOracle) +
                      " (pass --unsafe-size to override)");
    int cap = exact ? kCapExactClosed : kCapFloatClosed;
    if (want_closed && L > cap)
      throw SpecError("L = " + std::to_string(L) + " exceeds the " + (exact ? "exact" : "float") +
                      " closed-form cap " + std::to_string(cap) + " (pass --unsafe-size to override)");
  }
  const bool homogeneous = rs.homogeneous_eps.has_value();
  if (homogeneous) {
    if (exact) throw SpecError("--homogeneous-eps needs --backend complex");
    if (route != "closed") throw SpecError("--homogeneous-eps needs --route closed");
    if (!(*rs.homogeneous_eps > 0 && *rs.homogeneous_eps < 0.1)) throw SpecError("--homogeneous-eps must lie in (0, 0.1)");
  }
  auto [k_lo, k_hi] = parse_range(rs.k, 1, obs == Observable::X ? L : L + 1);

  // sampled point first, then explicit overrides
  ModelPoint<CycloNum> base = sample_point(L, rs.seed);
  ModelPoint<S> p;
  S w{};
  if constexpr (exact) {
    p = base;
  } else {
    p = embed_point(base);
  }
  if (!rs.zeta1.empty()) p.zeta1 = parse_value<S>(rs.zeta1);
  if (!rs.zeta2.empty()) p.zeta2 = parse_value<S>(rs.zeta2);
  for (int i = 0; i < static_cast<int>(zs.size()); ++i) p.z[i] = parse_value<S>(zs[i]);
  if (homogeneous && zs.empty())
    for (auto& x : p.z) x = p.z[0];
  if (obs == Observable::Y) {
    if (!rs.w.empty())
      w = parse_value<S>(rs.w);
    else
      w = S(sample_spectral(base, rs.seed));
  }
  for (const auto& x : p.z)
    if (x.is_zero()) throw SpecError("spectral parameters must be nonzero");
  if (p.zeta1.is_zero() || p.zeta2.is_zero()) throw SpecError("boundary parameters must be nonzero");

  std::vector<CurrentResult<S>> rows;
  std::optional<StatePair<S>> st;
  std::vector<S> oracle_ys;
  std::optional<S> closed_y;
  std::string closed_y_note;
  auto state = [&]() -> const StatePair<S>& {
    if (!st) st = StatePair<S>::solve(p);
    return *st;
  };
  char buf[96];
  for (int k = k_lo; k <= k_hi; ++k) {
    std::optional<S> ov, cv;
    std::string onote, cnote;
    if (obs == Observable::X) {
      const bool fixed = is_unit_fixed_point(p.z[k - 1]);
      if (want_oracle) {
        ov = oracle_X(k, state());
        if (fixed) onote = "antisymmetry fixed point";
      }
      if (want_closed) {
        if (fixed) {
          cv = S(0);
          cnote = "antisymmetry fixed point";
        } else if constexpr (!exact) {
          if (homogeneous) {
            HomogeneousValue h = closed_X_homogeneous(k, p, *rs.homogeneous_eps);
            cv = h.value;
            std::snprintf(buf, sizeof buf, "homogeneous limit, Richardson error estimate %.3e", h.error_estimate);
            cnote = buf;
          } else {
            cv = closed_X(k, p);
          }
        } else {
          cv = closed_X(k, p);
        }
      }
    } else {
      if (want_oracle) {
        if (oracle_ys.empty()) oracle_ys = oracle_Y_all(w, state());
        ov = oracle_ys[k - 1];
      }
      if (want_closed) {
        if (!closed_y) {
          if constexpr (!exact) {
            if (homogeneous) {
              HomogeneousValue h = closed_Y_homogeneous(w, p, *rs.homogeneous_eps);
              closed_y = h.value;
              std::snprintf(buf, sizeof buf, "homogeneous limit, Richardson error estimate %.3e", h.error_estimate);
              closed_y_note = buf;
            } else {
              closed_y = closed_Y(w, p);
            }
          } else {
            closed_y = closed_Y(w, p);
          }
        }
        cv = closed_y;
        cnote = closed_y_note;
      }
    }
    std::optional<S> wopt;
    if (obs == Observable::Y) wopt = w;
    if (ov) rows.push_back({obs, k, wopt, L, Route::oracle, p, *ov, onote});
    if (cv) rows.push_back({obs, k, wopt, L, Route::closed, p, *cv, cnote});
    if (ov && cv && !agree(*ov, *cv))
      throw IdentityFailure(to_string(obs) + " at k = " + std::to_string(k) + ": oracle " + value_text(*ov) +
                            " differs from closed " + value_text(*cv));
  }
  return rows;
}

template <Scalar S>
std::string render(const std::vector<CurrentResult<S>>& rows, const std::string& format) {
  if (format == "csv") return to_csv(rows);
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : rows) j.push_back(result_to_json(r));
  return j.dump(2) + "\n";
}

void emit(const RunSpec& rs, const std::string& text) {
  if (rs.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(rs.out, std::ios::binary);
  if (!f) throw SpecError("cannot open --out " + rs.out);
  f << text;
}

int run_compute(const RunSpec& rs, bool profile) {
  std::string format = rs.format.empty() ? (profile ? "csv" : "json") : rs.format;
  if (format != "json" && format != "csv") throw SpecError("--format must be json or csv");
  std::string text;
  if (rs.backend == "exact")
    text = render(compute<CycloNum>(rs), format);
  else if (rs.backend == "complex")
    text = render(compute<ComplexApprox>(rs), format);
  else
    throw SpecError("--backend must be exact or complex");
  emit(rs, text);
  return 0;
}

int run_verify(const RunSpec& rs) {
  std::string format = rs.format.empty() ? "json" : rs.format;
  if (format != "json" && format != "csv") throw SpecError("--format must be json or csv");
  if (!is_suite(rs.suite)) {
    std::string names;
    for (const auto& n : suite_names()) names += (names.empty() ? "" : ", ") + n;
    throw SpecError("unknown suite '" + rs.suite + "' (one of: " + names + ")");
  }
  SuiteOptions o;
  o.L = rs.L == 0 ? 3 : rs.L;
  if (o.L < 1) throw SpecError("L must be at least 1");
  if (o.L > kCapVerify && !rs.unsafe_size)
    throw SpecError("L = " + std::to_string(o.L) + " exceeds the verify cap " + std::to_string(kCapVerify) +
                    " (pass --unsafe-size to override)");
  if (rs.points < 1) throw SpecError("--points must be positive");
  o.seed = rs.seed;
  o.points = rs.points;
  Report rep = run_suite(rs.suite, o);
  emit(rs, format == "csv" ? rep.to_csv() : rep.to_json().dump(2) + "\n");
  std::cerr << rep.entries.size() << " checks, " << rep.failures() << " failed\n";
  return rep.all_pass() ? 0 : 1;
}

void add_common(CLI::App* sub, RunSpec& rs) {
  sub->add_option("--L", rs.L, "system size (number of columns)");
  sub->add_option("--seed", rs.seed, "seed for sampled parameters");
  sub->add_option("--out", rs.out, "write output here instead of stdout");
  sub->add_option("--format", rs.format, "json or csv");
  sub->add_flag("--unsafe-size", rs.unsafe_size, "lift the default size caps");
}

void add_point(CLI::App* sub, RunSpec& rs) {
  sub->add_option("--obs", rs.obs, "X (vertical current) or Y (horizontal current)");
  sub->add_option("--k", rs.k, "column or position, a or a..b");
  sub->add_option("--w", rs.w, "spectral parameter for Y");
  sub->add_option("--route", rs.route, "oracle, closed or both");
  sub->add_option("--backend", rs.backend, "exact or complex");
  sub->add_option("--z", rs.z, "comma separated z_1..z_L");
  sub->add_option("--zeta1", rs.zeta1, "left boundary parameter");
  sub->add_option("--zeta2", rs.zeta2, "right boundary parameter");
  sub->add_option("--homogeneous-eps", rs.homogeneous_eps, "perturbation size for coincident z (complex backend)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact boundary-to-boundary current of the inhomogeneous completely packed O(1) loop model"};
  app.require_subcommand(1);
  RunSpec rs;
  auto* compute_cmd = app.add_subcommand("compute", "evaluate X or Y by the oracle and/or closed route");
  auto* verify_cmd = app.add_subcommand("verify", "run identity suites; exit 1 on any failure");
  auto* profile_cmd = app.add_subcommand("profile", "tabulate the current across k");
  for (auto* sub : {compute_cmd, verify_cmd, profile_cmd}) add_common(sub, rs);
  add_point(compute_cmd, rs);
  add_point(profile_cmd, rs);
  verify_cmd->add_option("--suite", rs.suite, "suite name, or all");
  verify_cmd->add_option("--points", rs.points, "random points per suite");
  verify_cmd->add_option("--backend", rs.backend, "ignored; suites pick their own backends");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "invalid arguments: " << e.what() << "\n";
    return 2;
  }
  try {
    if (*compute_cmd) return run_compute(rs, false);
    if (*profile_cmd) return run_compute(rs, true);
    return run_verify(rs);
  } catch (const SpecError& e) {
    std::cerr << "invalid spec: " << e.what() << "\n";
    return 2;
  } catch (const IdentityFailure& e) {
    std::cerr << "identity failure: " << e.what() << "\n";
    return 1;
  } catch (const ConfluenceError& e) {
    std::cerr << "domain error: " << e.what() << " (coincident z: try --backend complex --homogeneous-eps)\n";
    return 3;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 3;
  } catch (const DegeneracyError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 3;
  } catch (const SamplingError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 3;
  }
}
