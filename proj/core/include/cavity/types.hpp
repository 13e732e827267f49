#pragma once

#include <complex>
#include <string>
#include <vector>

namespace cavity {

using cplx = std::complex<double>;

enum class BasisKind { box, kummer, hermite };

// Expansion coefficients of one initial level. coeffs[k] belongs to quantum
// number first_index + k (1 for box/kummer, 0 for hermite).
struct SpectralState {
  BasisKind basis = BasisKind::box;
  int source_level = 1;
  int first_index = 1;
  std::vector<cplx> coeffs;

  double norm2() const {
    double s = 0.0;
    for (const auto& c : coeffs) s += std::norm(c);
    return s;
  }
  int n_max() const { return first_index + static_cast<int>(coeffs.size()) - 1; }
  cplx at(int n) const { return coeffs.at(static_cast<std::size_t>(n - first_index)); }
};

struct RawIntegral {
  std::string label;
  double value;
};

struct ForceBreakdown {
  double adiabatic = 0.0;
  double non_adiabatic = 0.0;
  double total = 0.0;
  std::vector<RawIntegral> raw;

  static ForceBreakdown from_parts(double ad, double nonad, std::vector<RawIntegral> raw = {}) {
    return {ad, nonad, ad + nonad, std::move(raw)};
  }
  double raw_value(const std::string& label) const {
    for (const auto& r : raw)
      if (r.label == label) return r.value;
    return 0.0;
  }
};

// instantaneous: full phases at time t. time_averaged: interference terms
// replaced by their t = 0 values (cos -> 1), geometry at L(0), Ldot(0).
enum class EvalMode { instantaneous, time_averaged };

// One observation of a single-level trajectory.
struct TrajectorySample {
  double t = 0.0;
  double L = 0.0;
  double Ldot = 0.0;
  double tau = 0.0;
  double energy = 0.0;
  ForceBreakdown force;
  double fd_force = 0.0;  // -dE/dL at frozen state
  double norm2 = 0.0;
};

struct CoefficientResult {
  double value = 0.0;
  double tail_estimate = 0.0;
  int n_max = 0;
};

}  // namespace cavity
