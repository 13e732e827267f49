#include "cavity/pde_oracle.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cavity/errors.hpp"
#include "cavity/softwall.hpp"

namespace cavity {

using std::numbers::pi;

double GridWavefunction::norm2() const {
  double s = 0.0;
  for (const auto& v : values) s += std::norm(v);
  return s * h;
}

PdeOracle::PdeOracle(const OracleConfig& cfg) : cfg_(cfg) {
  const int N = cfg.grid_points;
  if (N < 8) throw DomainError("PdeOracle: need at least 8 grid points");
  if (!(cfg.dt > 0.0)) throw DomainError("PdeOracle: dt must be positive");
  psi_.values.resize(N);
  if (cfg.geometry == OracleGeometry::box) {
    if (cfg.level < 1) throw DomainError("PdeOracle: box level must be >= 1");
    psi_.y_lo = 0.0;
    psi_.h = 1.0 / (N + 1);
    for (int j = 0; j < N; ++j) psi_.values[j] = std::sqrt(2.0) * std::sin(cfg.level * pi * psi_.y(j));
  } else {
    if (cfg.level < 0) throw DomainError("PdeOracle: trap level must be >= 0");
    if (cfg.schedule.kind == WallSchedule::Kind::sqrt_law)
      throw DomainError("PdeOracle: trap geometry supports fixed or linear schedules");
    psi_.y_lo = -cfg.y_max;
    psi_.h = 2.0 * cfg.y_max / (N + 1);
    for (int j = 0; j < N; ++j) psi_.values[j] = hermite_Y(cfg.level, psi_.y(j));
    const double edge = std::abs(hermite_Y(cfg.level, cfg.y_max));
    if (edge > 1e-12)
      throw NumericError("PdeOracle: trap boundary amplitude " + fmt_num(edge) + " exceeds 1e-12");
  }
  norm0_ = psi_.norm2();
  lower_.resize(N);
  diag_.resize(N);
  upper_.resize(N);
  rhs_.resize(N);
  scratch_.resize(N);
}

void PdeOracle::step(double dt) {
  const int N = cfg_.grid_points;
  const double hbar = cfg_.schedule.hbar;
  const auto g = eval_length(cfg_.schedule, psi_.t + 0.5 * dt);
  const double h = psi_.h;
  const double kin = 1.0 / (2.0 * g.L * g.L * h * h);
  const double dil = hbar * g.Ldot / g.L / (4.0 * h);
  const bool trap = cfg_.geometry == OracleGeometry::trap;
  const cplx mu(0.0, 0.5 * dt / hbar);  // (i dt / 2 hbar)

  // H row j: off(j,j-1) = -kin - i dil (y_j + y_{j-1}), off(j,j+1) = -kin + i dil (y_j + y_{j+1})
  for (int j = 0; j < N; ++j) {
    const double y = psi_.y(j);
    const double v = trap ? 0.5 * y * y / (g.L * g.L) : 0.0;
    const cplx hd = 2.0 * kin + v;
    const cplx hl = cplx(-kin, -dil * (y + (y - h)));
    const cplx hu = cplx(-kin, dil * (y + (y + h)));
    diag_[j] = 1.0 + mu * hd;
    lower_[j] = mu * hl;
    upper_[j] = mu * hu;
    cplx r = (1.0 - mu * hd) * psi_.values[j];
    if (j > 0) r -= mu * hl * psi_.values[j - 1];
    if (j + 1 < N) r -= mu * hu * psi_.values[j + 1];
    rhs_[j] = r;
  }
  // Thomas algorithm
  scratch_[0] = upper_[0] / diag_[0];
  rhs_[0] /= diag_[0];
  for (int j = 1; j < N; ++j) {
    const cplx den = diag_[j] - lower_[j] * scratch_[j - 1];
    if (std::abs(den) < 1e-300) throw NumericError("PdeOracle: singular tridiagonal system");
    scratch_[j] = upper_[j] / den;
    rhs_[j] = (rhs_[j] - lower_[j] * rhs_[j - 1]) / den;
  }
  psi_.values[N - 1] = rhs_[N - 1];
  for (int j = N - 2; j >= 0; --j) psi_.values[j] = rhs_[j] - scratch_[j] * psi_.values[j + 1];
  psi_.t += dt;
}

void PdeOracle::advance_to(double t) {
  if (t < psi_.t) throw DomainError("PdeOracle: cannot integrate backwards");
  const double t_start = psi_.t;
  while (psi_.t < t) {
    const double remaining = t - psi_.t;
    if (remaining <= 1e-12 * cfg_.dt) break;
    step(remaining < cfg_.dt * (1.0 + 1e-9) ? remaining : cfg_.dt);
  }
  psi_.t = t;
  const double drift = std::abs(psi_.norm2() - norm0_) / norm0_;
  const double span = std::max(1.0, t - t_start);
  if (drift > 1e-10 * std::max(1.0, t) && drift > 1e-10 * span)
    throw NumericError("PdeOracle: norm drift " + fmt_num(drift) + " beyond 1e-10 per unit time");
}

std::vector<GridWavefunction> integrate(const OracleConfig& cfg, const std::vector<double>& times) {
  PdeOracle o(cfg);
  std::vector<GridWavefunction> out;
  out.reserve(times.size());
  for (double t : times) {
    o.advance_to(t);
    out.push_back(o.state());
  }
  return out;
}

namespace {

// fourth-order centred derivative at the interior points and both walls
// (index -1 and N); odd reflection beyond the walls.
std::vector<cplx> derivative(const std::vector<cplx>& f, double h) {
  const int N = static_cast<int>(f.size());
  auto at = [&](int j) -> cplx {
    if (j >= 0 && j < N) return f[j];
    if (j == -1 || j == N) return 0.0;
    if (j < -1) return -f[-j - 2];
    return -f[2 * N - j];
  };
  std::vector<cplx> d(N + 2);
  for (int j = -1; j <= N; ++j) d[j + 1] = (8.0 * (at(j + 1) - at(j - 1)) - (at(j + 2) - at(j - 2))) / (12.0 * h);
  return d;
}

}  // namespace

OracleObservables observables(const GridWavefunction& psi, const WallSchedule& s, OracleGeometry geometry) {
  const auto g = eval_length(s, psi.t);
  const double hbar = s.hbar;
  const double beta = 0.5 * hbar * g.Ldot * g.L;
  const std::size_t N = psi.values.size();
  std::vector<cplx> phi(N);
  for (std::size_t j = 0; j < N; ++j) {
    const double y = psi.y(j);
    phi[j] = std::polar(1.0, -beta * y * y) * psi.values[j];
  }
  const auto dphi = derivative(phi, psi.h);
  // trapezoid including the walls, where only |phi_y|^2 survives
  double kin = 0.5 * (std::norm(dphi.front()) + std::norm(dphi.back())), y2 = 0.0;
  cplx i1 = 0.0;
  for (std::size_t j = 0; j < N; ++j) {
    const double y = psi.y(j);
    kin += std::norm(dphi[j + 1]);
    y2 += y * y * std::norm(phi[j]);
    i1 += y * std::conj(phi[j]) * dphi[j + 1];
  }
  kin *= psi.h;
  y2 *= psi.h;
  i1 *= psi.h;
  const double L = g.L, Ld = g.Ldot;
  OracleObservables out;
  if (geometry == OracleGeometry::box) {
    out.energy = kin / (2.0 * L * L) + hbar * Ld / L * i1.imag() + 0.5 * hbar * hbar * Ld * Ld * y2;
    out.force = ForceBreakdown::from_parts(kin / (L * L * L), hbar * Ld * i1.imag() / (L * L),
                                           {{"I0", kin}, {"ImI1", i1.imag()}, {"I2", y2}});
  } else {
    const double k0 = kin + y2;
    out.energy = k0 / (2.0 * L * L) + hbar * Ld / L * i1.imag() + 0.5 * hbar * hbar * Ld * Ld * y2;
    out.force = ForceBreakdown::from_parts(k0 / (L * L * L), hbar * Ld * i1.imag() / (L * L),
                                           {{"K0", k0}, {"ImK1", i1.imag()}, {"K2", y2}});
  }
  return out;
}

double fidelity(const GridWavefunction& a, const std::vector<cplx>& b) {
  if (b.size() != a.values.size()) throw DomainError("fidelity: grid size mismatch");
  cplx ov = 0.0;
  double na = 0.0, nb = 0.0;
  for (std::size_t j = 0; j < b.size(); ++j) {
    ov += std::conj(a.values[j]) * b[j];
    na += std::norm(a.values[j]);
    nb += std::norm(b[j]);
  }
  return std::norm(ov) / (na * nb);
}

std::vector<cplx> reconstruct_on_grid(const SpectralState& c, const GridWavefunction& grid, double L, double Ldot,
                                      double hbar) {
  if (c.basis == BasisKind::kummer) throw DomainError("reconstruct_on_grid: kummer states are not supported");
  const double beta = 0.5 * hbar * Ldot * L;
  std::vector<cplx> out(grid.values.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double y = grid.y(j);
    cplx s = 0.0;
    for (std::size_t k = 0; k < c.coeffs.size(); ++k) {
      const int n = c.first_index + static_cast<int>(k);
      const double chi =
          c.basis == BasisKind::hermite ? hermite_Y(n, y) : std::sqrt(2.0) * std::sin(n * pi * y);
      s += c.coeffs[k] * chi;
    }
    out[j] = std::polar(1.0, beta * y * y) * s;
  }
  return out;
}

}  // namespace cavity
