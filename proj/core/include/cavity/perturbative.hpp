#pragma once

#include <Eigen/Dense>

#include "cavity/occupation.hpp"
#include "cavity/schedule.hpp"
#include "cavity/types.hpp"

namespace cavity {

// gamma_{lm} = (-1)^{l+m+1} 2 l m / (l^2 - m^2), zero on the diagonal
double gamma(int l, int m);

class GammaMatrix {
 public:
  explicit GammaMatrix(int nMax);
  int n_max() const { return static_cast<int>(g_.rows()); }
  double operator()(int l, int m) const { return g_(l - 1, m - 1); }
  const Eigen::MatrixXd& matrix() const { return g_; }

 private:
  Eigen::MatrixXd g_;
};

// Density-matrix expansion rho = f + eps g1 + eps^2 diag(g2), eps = Ldot(0)/L(0),
// energies and occupations frozen at t = 0.
class PerturbativeModel {
 public:
  PerturbativeModel(const WallSchedule& s, const OccupationModel& occ, int nMax);

  int n_max() const { return nMax_; }
  double epsilon() const { return eps_; }
  double energy0(int n) const { return E0_[n - 1]; }
  double weight(int n) const { return f_[n - 1]; }
  const WallSchedule& schedule() const { return schedule_; }

  cplx g1(int n, int m, double t) const;
  double g2(int n, double t) const;
  // g2 with (1 - cos) replaced by its time average 1
  double g2_dephased(int n) const;

  Eigen::MatrixXcd g1_matrix(double t) const;
  Eigen::MatrixXcd density_matrix(double t) const;

 private:
  WallSchedule schedule_;
  int nMax_;
  double eps_;
  std::vector<double> E0_, f_;
};

cplx g1_element(int n, int m, double t, const WallSchedule& s, const OccupationModel& occ);
double g2_diagonal(int n, double t, const WallSchedule& s, const OccupationModel& occ, int nMax);

// (n pi)^2/L^3 delta_mn + i hbar Ldot/L^2 gamma_mn
cplx force_matrix_element(int m, int n, double L, double Ldot, double hbar = 1.0);

struct PerturbativeForce {
  double s1 = 0.0;
  double s2 = 0.0;  // instantaneous, from g1
  double s3 = 0.0;  // instantaneous, from g2
  double s2_reduced = 0.0;  // time-averaged closed forms
  double s3_reduced = 0.0;
  double s2_dephased = 0.0;  // (1 - cos) -> 1 limit of s2 and s3 at t = 0 geometry
  double s3_dephased = 0.0;
  double energy = 0.0;  // sum_n rho_nn E_n(t)
  double tail_estimate = 0.0;
  bool in_window = true;

  double total() const { return s1 + s2 + s3; }
  double total_reduced() const { return s1 + s2_reduced + s3_reduced; }
  ForceBreakdown breakdown(EvalMode mode) const;
};

// s1_at_initial selects L(0) instead of L(t) in the adiabatic term.
PerturbativeForce perturbative_force(const OccupationModel& occ, const WallSchedule& s, double t, int nMax,
                                     bool s1_at_initial = false);

// C = (48 hbar^2/pi^2) sum_{n>m} m^2 n^2 (f_n - f_m)/(n^2 - m^2)^3 with an
// analytic tail bound; thermal weights at box length L0.
CoefficientResult coefficient_C(const OccupationModel& occ, int nMax, double hbar = 1.0, double L0 = 1.0);

}  // namespace cavity
