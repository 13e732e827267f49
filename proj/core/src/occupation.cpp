#include "cavity/occupation.hpp"

#include <cmath>
#include <string>

#include "cavity/errors.hpp"

namespace cavity {

OccupationModel OccupationModel::zero_temperature(int N) {
  if (N < 1) throw DomainError("occupation: particle number N must be >= 1, got " + std::to_string(N));
  OccupationModel m;
  m.mode = Mode::zero_temperature;
  m.N = N;
  return m;
}

OccupationModel OccupationModel::fermi_dirac(double beta, double mu) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("occupation: beta must be positive and finite");
  if (!std::isfinite(mu)) throw DomainError("occupation: mu must be finite");
  OccupationModel m;
  m.mode = Mode::finite_temperature;
  m.beta = beta;
  m.mu = mu;
  return m;
}

double OccupationModel::weight(int rank, double energy) const {
  if (rank < 1) throw DomainError("occupation: rank must be >= 1");
  if (mode == Mode::zero_temperature) return rank <= N ? 1.0 : 0.0;
  const double x = beta * (energy - mu);
  if (x > 0.0) {
    const double e = std::exp(-x);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(x));
}

std::vector<double> occupation_weights(const OccupationModel& m, const std::vector<double>& energies) {
  std::vector<double> f(energies.size());
  for (std::size_t i = 0; i < energies.size(); ++i) f[i] = m.weight(static_cast<int>(i) + 1, energies[i]);
  return f;
}

}  // namespace cavity
