#include "cavity/box.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cavity/errors.hpp"

namespace cavity {

using std::numbers::pi;

double box_energy(int n, double L) {
  if (n < 1) throw DomainError("box level index must be >= 1, got " + std::to_string(n));
  if (!(L > 0.0)) throw DomainError("box length must be positive");
  return n * n * pi * pi / (2.0 * L * L);
}

BoxLevel box_eigensystem(int n, double L) { return {n, L, box_energy(n, L)}; }

double BoxLevel::operator()(double x) const {
  if (x < 0.0 || x > L) return 0.0;
  return std::sqrt(2.0 / L) * std::sin(n * pi * x / L);
}

double BoxLevel::derivative(double x) const {
  if (x < 0.0 || x > L) return 0.0;
  return std::sqrt(2.0 / L) * (n * pi / L) * std::cos(n * pi * x / L);
}

namespace {

double partial_force(const OccupationModel& occ, double L, int nMax) {
  double s = 0.0;
  for (int n = 1; n <= nMax; ++n) {
    const double f = occ.weight(n, box_energy(n, L));
    s += f * double(n) * n;
  }
  return s * pi * pi / (L * L * L);
}

}  // namespace

double adiabatic_force(const OccupationModel& occ, double L, int nMax, int max_levels) {
  if (!(L > 0.0)) throw DomainError("adiabatic_force: L must be positive");
  if (nMax < 1) throw DomainError("adiabatic_force: nMax must be >= 1");
  if (occ.mode == OccupationModel::Mode::zero_temperature) {
    if (occ.N > nMax) throw TruncationError("adiabatic_force: nMax below particle number");
    return partial_force(occ, L, nMax);
  }
  double prev = partial_force(occ, L, nMax);
  for (int n = 2 * nMax; n <= max_levels; n *= 2) {
    const double cur = partial_force(occ, L, n);
    if (std::abs(cur - prev) <= 1e-8 * std::abs(cur)) return cur;
    prev = cur;
  }
  throw TruncationError("adiabatic_force: thermal sum not converged by " + std::to_string(max_levels) + " levels");
}

}  // namespace cavity
