#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace cavity {

// Violated precondition on physical input (negative length, L(t) <= 0, bad index).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A numerical method failed to reach its target (quadrature, series, root bracket).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mode sum not converged at the requested truncation.
class TruncationError : public NumericError {
 public:
  using NumericError::NumericError;
};

// Two routes to the same quantity disagree beyond tolerance.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RootSearchError : public NumericError {
 public:
  using NumericError::NumericError;
};

// %.6g for messages; std::to_string rounds small values to 0.000000
inline std::string fmt_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace cavity
