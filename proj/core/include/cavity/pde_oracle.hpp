#pragma once

#include <vector>

#include "cavity/schedule.hpp"
#include "cavity/types.hpp"

namespace cavity {

enum class OracleGeometry { box, trap };

struct OracleConfig {
  OracleGeometry geometry = OracleGeometry::box;
  WallSchedule schedule;
  int level = 1;  // box: n >= 1, trap: n >= 0
  int grid_points = 2048;  // interior points
  double dt = 1e-4;
  double y_max = 8.0;  // trap half-width in y
};

// Scaled, ungauged wavefunction on interior grid points; zero beyond them.
struct GridWavefunction {
  double t = 0.0;
  double y_lo = 0.0;  // boundary coordinate (0 for box, -y_max for trap)
  double h = 0.0;
  std::vector<cplx> values;

  double y(std::size_t j) const { return y_lo + h * static_cast<double>(j + 1); }
  double norm2() const;
};

// Crank-Nicolson for i hbar phi_t = H(t) phi with
// H = (1/L^2)(-d^2/2 + V) + i hbar (Ldot/L)(y d/dy + 1/2), V = 0 (box) or y^2/2 (trap).
// Second-order centred differences; the dilation operator is discretized
// antisymmetrically so each step is unitary.
class PdeOracle {
 public:
  explicit PdeOracle(const OracleConfig& cfg);

  const GridWavefunction& state() const { return psi_; }
  const OracleConfig& config() const { return cfg_; }

  // Steps of dt until t (the last step is shortened). Throws NumericError on
  // norm drift beyond 1e-10 per unit time.
  void advance_to(double t);

 private:
  void step(double dt);

  OracleConfig cfg_;
  GridWavefunction psi_;
  double norm0_;
  std::vector<cplx> lower_, diag_, upper_, rhs_, scratch_;
};

std::vector<GridWavefunction> integrate(const OracleConfig& cfg, const std::vector<double>& times);

struct OracleObservables {
  double energy;
  ForceBreakdown force;
};

// Integrals of the gauged wavefunction by grid quadrature with fourth-order
// differences: box gives I0, ImI1, I2; trap gives K0, ImK1, K2.
OracleObservables observables(const GridWavefunction& psi, const WallSchedule& s, OracleGeometry geometry);

// |<a|b>|^2 / (<a|a><b|b>) on a common grid
double fidelity(const GridWavefunction& a, const std::vector<cplx>& b);

// Exact scaled, ungauged wavefunction from expansion coefficients at the
// current geometry: exp(+i hbar Ldot L y^2/2) sum_n c_n chi_n(y).
std::vector<cplx> reconstruct_on_grid(const SpectralState& c, const GridWavefunction& grid, double L, double Ldot,
                                      double hbar);

}  // namespace cavity
