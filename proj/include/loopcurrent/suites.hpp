#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "loopcurrent/linkpat.hpp"

namespace lc {

struct CheckEntry {
  std::string suite;
  std::string name;
  std::string tag;  // short identity label, e.g. "qkz.exchange"
  nlohmann::json point;
  bool pass = false;
  std::string detail;  // exception text or extra info
};

struct Report {
  std::vector<CheckEntry> entries;
  bool all_pass() const;
  std::size_t failures() const;
  void append(const Report& other);
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

struct SuiteOptions {
  int L = 3;
  std::uint64_t seed = 1;
  int points = 3;
  CrossingConvention conv{};
  // appendixB: number of generic complex q values for the float half
  int generic_q = 5;
};

// named suites: transfer, qkz, recursions, closed, appendixA, appendixB, appendixB-generic, structural,
// backend; "all" runs everything except appendixB-generic
std::vector<std::string> suite_names();
bool is_suite(const std::string& name);
Report run_suite(const std::string& name, const SuiteOptions& opt);

Report relation_suite(int L, std::uint64_t seed, const CrossingConvention& conv = {});

}  // namespace lc
