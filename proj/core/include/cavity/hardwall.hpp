#pragma once

#include <vector>

#include "cavity/occupation.hpp"
#include "cavity/schedule.hpp"
#include "cavity/types.hpp"

namespace cavity {

struct JValues {
  double j1, j2, j3;
};

// J1 = 2 int y sin(l pi y) cos(n pi y), J2 = 2 int y^2 sin sin, J3 = 2 int y^4 sin sin
JValues j_integrals(int n, int l);

class JTable {
 public:
  explicit JTable(int nMax);
  int n_max() const { return n_; }
  double j1(int n, int l) const { return j1_[idx(n, l)]; }
  double j2(int n, int l) const { return j2_[idx(n, l)]; }
  double j3(int n, int l) const { return j3_[idx(n, l)]; }

 private:
  std::size_t idx(int n, int l) const { return static_cast<std::size_t>(n - 1) * n_ + (l - 1); }
  int n_;
  std::vector<double> j1_, j2_, j3_;
};

// alpha = hbar * Ldot0 * L0, the gauge-phase rate at t = 0.
double gauge_rate(const WallSchedule& s);

// c_n(0) = 2 int_0^1 sin(l pi y) sin(n pi y) exp(-i alpha y^2 / 2) dy, n = 1..nMax,
// by adaptive quadrature. Throws TruncationError if the norm deficit exceeds 1e-8.
SpectralState initial_coefficients(int level, const WallSchedule& s, int nMax);

// Second-order expansion path: c_n ~ delta - i alpha J2/2 - alpha^2 J3/8 and
// the O(alpha^2) pair product c*_{n'} c_n built from it.
cplx expanded_coefficient(int n, int level, double alpha);
cplx expanded_pair_product(int n_prime, int n, int level, double alpha);

// c_n(tau) = c_n(0) exp(-i n^2 pi^2 tau / (2 hbar))
SpectralState propagate(const SpectralState& c, double tau, double hbar);

struct EnergyBreakdown {
  double energy;
  double i0;
  double im_i1;
  double i2;
};

EnergyBreakdown energy_expectation(const SpectralState& c, double L, double Ldot, const JTable& J, double hbar);

// Operator route: adiabatic I0/L^3, non-adiabatic hbar Ldot Im I1 / L^2.
ForceBreakdown force_operator(const SpectralState& c, double L, double Ldot, const JTable& J, double hbar);

// -dE/dL by central difference (step dL) at frozen state and Ldot.
double force_energy_route(const SpectralState& c, double L, double Ldot, const JTable& J, double hbar, double dL);

// Operator route checked against the energy route (dL = 1e-5 L_ref, 1e-6
// relative); throws ConsistencyError on mismatch.
ForceBreakdown force_exact(const SpectralState& c, double L, double Ldot, const JTable& J, double hbar,
                           double L_ref);

struct TimeWindow {
  double lower;
  double upper;
  bool contains(double t) const { return t > lower && t < upper; }
};

// (10 hbar / dE, 0.1 L0 / |Ldot0|) with dE the spacing above the highest
// occupied level.
TimeWindow time_window(const WallSchedule& s, const OccupationModel& occ);

// Linear-wall trajectory of one initial level.
class HardWallEngine {
 public:
  HardWallEngine(const WallSchedule& s, int level, int nMax = 64);

  const WallSchedule& schedule() const { return schedule_; }
  const SpectralState& initial_state() const { return c0_; }
  const JTable& table() const { return J_; }
  int level() const { return level_; }

  SpectralState state_at(double t) const;
  TrajectorySample sample(double t, EvalMode mode = EvalMode::instantaneous) const;

 private:
  WallSchedule schedule_;
  int level_;
  JTable J_;
  SpectralState c0_;
};

// Exact-route coefficient C' (double sum over occupied levels plus
// the diagonal J3 term), with an analytic 1/n^4 tail estimate. Thermal
// weights are taken at the level energies of a box of length L0.
CoefficientResult nonadiabatic_coefficient_exact(const OccupationModel& occ, int nMax, double hbar = 1.0,
                                                 double L0 = 1.0);

}  // namespace cavity
