#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cavity::acceptance {

struct Result {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;  // measured values against the pinned tolerances
  double seconds = 0.0;
  // set when the only failing sub-check is the documented sign conflict of C'(N=1)
  bool known_failure = false;
};

// Runs every criterion, printing one PASS/FAIL line each as it finishes.
std::vector<Result> run_all(std::ostream& out);

// 0 when every failure is a known one
int exit_code(const std::vector<Result>& results);

}  // namespace cavity::acceptance
