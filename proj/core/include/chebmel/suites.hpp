#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace chebmel {

struct SuiteCase {
  std::string name;
  double value = 0.0;    // residual / error / 0-1 flag
  double allowed = 0.0;  // its tolerance
  bool pass = false;
};

struct SuiteResult {
  std::string suite;
  bool pass = false;
  double worst_ratio = 0.0;  // max value/allowed over the cases
  std::vector<SuiteCase> cases;
};

std::vector<std::string> identity_suite_names();

/// Runs one of the named identity batteries: lemma2.6, prop2, eq24, eq37,
/// lemma2.9, prop6, prop6.1, appendixA1.
SuiteResult run_identity_suite(const std::string& name,
                               std::uint64_t seed = 20240817);

}  // namespace chebmel
