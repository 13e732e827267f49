#pragma once

#include <vector>

#include "cavity/quadrature.hpp"
#include "cavity/schedule.hpp"
#include "cavity/types.hpp"

namespace cavity {

// Physicists' Hermite polynomial by the three-term recurrence.
double hermite_polynomial(int n, double z);

// Normalized oscillator eigenfunction of width sqrt(hbar):
// (pi hbar)^(-1/4) (2^n n!)^(-1/2) exp(-y^2/(2 hbar)) H_n(y/sqrt(hbar)),
// evaluated with the normalized recurrence (no factorials).
double hermite_Y(int n, double y, double hbar = 1.0);

// Levels 0..nMax-1 sampled on Gauss-Hermite nodes. The trap engine works
// with the unit-width oscillator (width = 1).
class HermiteBasis {
 public:
  explicit HermiteBasis(int nMax, double width = 1.0, int nodes = 0);

  int n_max() const { return nMax_; }
  double width() const { return width_; }
  const QuadratureRule& rule() const { return rule_; }
  double value_at_node(int n, std::size_t k) const { return Y_[static_cast<std::size_t>(n) * rule_.nodes.size() + k]; }

 private:
  int nMax_;
  double width_;
  QuadratureRule rule_;  // nodes in y, folded weights
  std::vector<double> Y_;
};

// c_n = int Y_l Y_n exp(-i alpha y^2 / 2), n = 0..nMax-1, by Gauss-Hermite
// quadrature; odd n + l vanish by parity. Throws NumericError for norm
// deficit > 1e-8.
SpectralState softwall_coefficients(int level, const WallSchedule& s, const HermiteBasis& basis);

// c_n(tau) = c_n(0) exp(-i (n + 1/2) tau / hbar)
SpectralState softwall_propagate(const SpectralState& c, double tau, double hbar);

struct SoftIntegrals {
  double k0;
  double im_k1;
  double k2;
  double kinetic;  // int |phi_y|^2
  double potential;  // int y^2 |phi|^2
};

// Ladder-operator matrix elements of y, y^2, d/dy in the oscillator basis.
SoftIntegrals soft_integrals(const SpectralState& c);

struct SoftEnergyForce {
  double energy;
  ForceBreakdown force;
};

// E = K0/(2L^2) + hbar Ldot Im K1 / L + hbar^2 Ldot^2 K2 / 2,
// F = K0/L^3 + hbar Ldot Im K1 / L^2, checked against -dE/dL (1e-6 relative,
// step 1e-5 L_ref); throws ConsistencyError on mismatch.
SoftEnergyForce softwall_energy_force(const SpectralState& c, double L, double Ldot, double hbar, double L_ref);

class SoftWallEngine {
 public:
  SoftWallEngine(const WallSchedule& s, int level, int nMax = 64);

  const SpectralState& initial_state() const { return c0_; }
  const WallSchedule& schedule() const { return schedule_; }

  TrajectorySample sample(double t, EvalMode mode = EvalMode::instantaneous) const;

 private:
  WallSchedule schedule_;
  HermiteBasis basis_;
  SpectralState c0_;
};

}  // namespace cavity
