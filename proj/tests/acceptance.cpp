// Acceptance runner: one PASS/FAIL line per criterion, non-zero exit when any selected criterion fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "loopcurrent/suites.hpp"

namespace {

struct Step {
  std::string suite;
  int L;
  int points;
};

struct Criterion {
  int id;
  std::string title;
  double budget_s;
  std::vector<Step> steps;
};

std::vector<Criterion> criteria() {
  std::vector<Criterion> c;
  c.push_back({1, "oracle = closed form, X and Y, L=2,3", 30, {{"closed", 2, 10}, {"closed", 3, 10}}});
  c.push_back({2, "oracle = closed form, X and Y at L=4, X at L=5", 600, {{"closed", 4, 5}, {"closed", 5, 5}}});
  Criterion t{3, "transfer matrix identities, L<=4", 300, {}};
  for (int L = 1; L <= 4; ++L) t.steps.push_back({"transfer", L, 3});
  c.push_back(t);
  Criterion k{4, "qKZ and dual qKZ, L<=4", 120, {}};
  for (int L = 1; L <= 4; ++L) k.steps.push_back({"qkz", L, 5});
  c.push_back(k);
  Criterion r{5, "closed-form recursions, L<=6", 120, {}};
  for (int L = 1; L <= 6; ++L) r.steps.push_back({"recursions", L, 5});
  c.push_back(r);
  Criterion a{6, "appendix identities (operators, boundary weights, generic q)", 60, {}};
  for (int L = 1; L <= 3; ++L) a.steps.push_back({"appendixA", L, 3});
  a.steps.push_back({"appendixB", 1, 10});
  a.steps.push_back({"appendixB-generic", 1, 5});
  c.push_back(a);
  Criterion b{7, "float backend coherence and finite differences, L<=4", 60, {}};
  for (int L = 1; L <= 4; ++L) b.steps.push_back({"backend", L, 3});
  c.push_back(b);
  Criterion s{8, "structural checks", 120, {}};
  for (int L = 1; L <= 4; ++L) s.steps.push_back({"structural", L, 3});
  c.push_back(s);
  return c;
}

bool run(const Criterion& c, std::uint64_t seed, bool verbose) {
  auto t0 = std::chrono::steady_clock::now();
  std::size_t checks = 0, failed = 0;
  std::string first_failure;
  for (const auto& st : c.steps) {
    lc::SuiteOptions o;
    o.L = st.L;
    o.seed = seed;
    o.points = st.points;
    o.generic_q = st.points;
    lc::Report rep = lc::run_suite(st.suite, o);
    checks += rep.entries.size();
    for (const auto& e : rep.entries) {
      if (e.pass) continue;
      ++failed;
      if (first_failure.empty())
        first_failure = e.suite + " L=" + std::to_string(st.L) + ": " + e.name + (e.detail.empty() ? "" : " (" + e.detail + ")");
      if (verbose) std::cerr << "  fail " << e.suite << " L=" << st.L << " " << e.name << " " << e.point.dump() << "\n";
    }
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool in_time = secs <= c.budget_s;
  bool pass = failed == 0 && checks > 0 && in_time;
  std::printf("%s criterion %d: %s; %zu checks, %zu failed, %.1f s (budget %.0f s)\n", pass ? "PASS" : "FAIL", c.id,
              c.title.c_str(), checks, failed, secs, c.budget_s);
  if (!first_failure.empty()) std::printf("  first failure: %s\n", first_failure.c_str());
  if (!in_time) std::printf("  over the time budget\n");
  std::fflush(stdout);
  return pass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int which = 0;
  std::uint64_t seed = 2024;
  bool verbose = false;
  app.add_option("--criterion", which, "criterion number, 0 for all")->check(CLI::Range(0, 8));
  app.add_option("--seed", seed, "base seed");
  app.add_flag("-v,--verbose", verbose, "list every failing check");
  CLI11_PARSE(app, argc, argv);

  bool ok = true;
  for (const auto& c : criteria())
    if (which == 0 || which == c.id) ok = run(c, seed, verbose) && ok;
  return ok ? 0 : 1;
}
