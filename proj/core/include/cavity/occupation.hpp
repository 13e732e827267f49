#pragma once

#include <vector>

namespace cavity {

// Occupation of single-particle levels. Zero temperature fills the lowest N
// levels by index; finite temperature is Fermi-Dirac in the level energy.
struct OccupationModel {
  enum class Mode { zero_temperature, finite_temperature };

  Mode mode = Mode::zero_temperature;
  int N = 1;
  double beta = 0.0;
  double mu = 0.0;

  static OccupationModel zero_temperature(int N);
  static OccupationModel fermi_dirac(double beta, double mu);

  // rank is 1-based position in the spectrum, energy the level energy
  double weight(int rank, double energy) const;
};

inline double occupation_weight(const OccupationModel& m, int rank, double energy) {
  return m.weight(rank, energy);
}

// Weights for ranks 1..count at energies E[0..count-1].
std::vector<double> occupation_weights(const OccupationModel& m, const std::vector<double>& energies);

}  // namespace cavity
