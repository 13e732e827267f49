#pragma once

#include <Eigen/Dense>

#include "cavity/kummer.hpp"
#include "cavity/schedule.hpp"
#include "cavity/types.hpp"

namespace cavity {

// (hbar B)^2 for a schedule; exactly 0 for fixed and linear kinds.
double schedule_hbar_b2(const WallSchedule& s);

// Jbar_k(n, l) = sqrt(2) int y^p phi_n sin(l pi y), p = 0, 2, 4 for k = 0, 2, 3
double jbar(int k, int n, int level, const KummerBasis& basis);

// c_n(0) = sqrt(2) int phi_n sin(l pi y) exp(-i alpha y^2 / 2) on the basis grid.
// Throws TruncationError when the norm deficit exceeds 1e-6.
SpectralState sqrtlaw_coefficients(int level, const WallSchedule& s, const KummerBasis& basis);

// c_{n'}(0) c_n(0)^* to O(alpha^2) from c_n ~ Jbar0 - i alpha Jbar2/2 - alpha^2 Jbar3/8
cplx sqrtlaw_pair_product(int n_prime, int n, int level, double alpha, const KummerBasis& basis);

// c_n(tau) = c_n(0) exp(-i K_n tau / hbar)
SpectralState sqrtlaw_propagate(const SpectralState& c, double tau, double hbar, const KummerBasis& basis);

// Matrices of y^2 and y d/dy in the basis, built once per basis.
struct KummerMatrices {
  Eigen::MatrixXd y2;   // int y^2 phi_n phi_m
  Eigen::MatrixXd ydy;  // int y phi_n phi_m'
  explicit KummerMatrices(const KummerBasis& basis);
};

// F = Ibar0/L^3 + hbar Ldot Im Ibar1 / L^2 at geometry (L, Ldot); raw Ibar0, ImIbar1, Ibar2.
ForceBreakdown sqrtlaw_force(const SpectralState& c, double L, double Ldot, double hbar, const KummerBasis& basis,
                             const KummerMatrices& mats);
double sqrtlaw_energy(const SpectralState& c, double L, double Ldot, double hbar, const KummerBasis& basis,
                      const KummerMatrices& mats);

class SqrtLawEngine {
 public:
  SqrtLawEngine(const WallSchedule& s, int level, int nMax = 64);

  const KummerBasis& basis() const { return basis_; }
  const SpectralState& initial_state() const { return c0_; }
  const WallSchedule& schedule() const { return schedule_; }
  int level() const { return level_; }

  TrajectorySample sample(double t, EvalMode mode = EvalMode::instantaneous) const;

 private:
  WallSchedule schedule_;
  int level_;
  KummerBasis basis_;
  KummerMatrices mats_;
  SpectralState c0_;
};

}  // namespace cavity
