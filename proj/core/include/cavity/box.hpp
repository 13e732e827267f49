#pragma once

#include "cavity/occupation.hpp"

namespace cavity {

// Stationary box level n >= 1 on [0, L].
struct BoxLevel {
  int n;
  double L;
  double energy;

  double operator()(double x) const;
  double derivative(double x) const;
};

double box_energy(int n, double L);
BoxLevel box_eigensystem(int n, double L);

// Adiabatic hard-wall force sum_n f_n (n pi)^2 / L^3. nMax is doubled until
// the relative change falls below 1e-8; throws TruncationError beyond
// max_levels.
double adiabatic_force(const OccupationModel& occ, double L, int nMax = 64, int max_levels = 1 << 16);

}  // namespace cavity
