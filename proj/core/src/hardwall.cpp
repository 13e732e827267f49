#include "cavity/hardwall.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "cavity/box.hpp"
#include "cavity/errors.hpp"
#include "cavity/quadrature.hpp"

namespace cavity {

using std::numbers::pi;

namespace {

double parity(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

void check_index(int n, const char* what) {
  if (n < 1) throw DomainError(std::string(what) + ": index must be >= 1, got " + std::to_string(n));
}

}  // namespace

JValues j_integrals(int n, int l) {
  check_index(n, "j_integrals");
  check_index(l, "j_integrals");
  const double pi2 = pi * pi;
  if (n == l) {
    const double nn = double(n) * n;
    return {-1.0 / (2.0 * n * pi), 1.0 / 3.0 - 1.0 / (2.0 * nn * pi2),
            0.2 - 1.0 / (nn * pi2) + 3.0 / (2.0 * nn * nn * pi2 * pi2)};
  }
  const double nn = double(n) * n, ll = double(l) * l;
  const double d = nn - ll, d2 = d * d;
  const double s = parity(n + l);
  const double j1 = -s * 2.0 * l / ((ll - nn) * pi);
  const double j2 = s * 8.0 * n * l / (d2 * pi2);
  const double j3 = s * (16.0 * n * l / (d2 * pi2) - 192.0 * n * l * (nn + ll) / (d2 * d2 * pi2 * pi2));
  return {j1, j2, j3};
}

JTable::JTable(int nMax) : n_(nMax) {
  if (nMax < 1) throw DomainError("JTable: nMax must be >= 1");
  const std::size_t sz = static_cast<std::size_t>(nMax) * nMax;
  j1_.resize(sz);
  j2_.resize(sz);
  j3_.resize(sz);
  for (int n = 1; n <= nMax; ++n)
    for (int l = 1; l <= nMax; ++l) {
      const auto v = j_integrals(n, l);
      j1_[idx(n, l)] = v.j1;
      j2_[idx(n, l)] = v.j2;
      j3_[idx(n, l)] = v.j3;
    }
}

double gauge_rate(const WallSchedule& s) { return s.hbar * s.Ldot0 * s.L0; }

SpectralState initial_coefficients(int level, const WallSchedule& s, int nMax) {
  check_index(level, "initial_coefficients");
  if (s.kind == WallSchedule::Kind::sqrt_law)
    throw DomainError("initial_coefficients: hard-wall exact engine needs a fixed or linear schedule");
  if (level > nMax) throw DomainError("initial_coefficients: level exceeds nMax");
  const double alpha = gauge_rate(s);
  SpectralState st;
  st.basis = BasisKind::box;
  st.source_level = level;
  st.first_index = 1;
  st.coeffs.resize(nMax);
  for (int n = 1; n <= nMax; ++n) {
    if (alpha == 0.0) {
      st.coeffs[n - 1] = n == level ? 1.0 : 0.0;
      continue;
    }
    auto f = [&](double y) {
      return cplx(2.0 * std::sin(level * pi * y) * std::sin(n * pi * y)) * std::polar(1.0, -0.5 * alpha * y * y);
    };
    st.coeffs[n - 1] = integrate(f, 0.0, 1.0, 1e-12).value;
  }
  const double deficit = 1.0 - st.norm2();
  if (deficit > 1e-8)
    throw TruncationError("initial_coefficients: norm deficit " + fmt_num(deficit) + " at nMax = " +
                          std::to_string(nMax) + " exceeds 1e-8");
  return st;
}

cplx expanded_coefficient(int n, int level, double alpha) {
  const auto v = j_integrals(n, level);
  const double d = n == level ? 1.0 : 0.0;
  return {d - alpha * alpha * v.j3 / 8.0, -alpha * v.j2 / 2.0};
}

cplx expanded_pair_product(int n_prime, int n, int level, double alpha) {
  const auto a = j_integrals(n_prime, level), b = j_integrals(n, level);
  const double dp = n_prime == level ? 1.0 : 0.0, d = n == level ? 1.0 : 0.0;
  const double re = dp * d + alpha * alpha * (0.25 * a.j2 * b.j2 - 0.125 * (a.j3 * d + dp * b.j3));
  const double im = 0.5 * alpha * (a.j2 * d - dp * b.j2);
  return {re, im};
}

SpectralState propagate(const SpectralState& c, double tau, double hbar) {
  SpectralState out = c;
  for (std::size_t k = 0; k < c.coeffs.size(); ++k) {
    const double n = c.first_index + static_cast<double>(k);
    out.coeffs[k] = c.coeffs[k] * std::polar(1.0, -n * n * pi * pi * tau / (2.0 * hbar));
  }
  return out;
}

namespace {

struct Integrals {
  double i0;
  cplx i1;
  double i2;
};

Integrals integrals(const SpectralState& c, const JTable& J) {
  const int nMax = c.n_max();
  if (nMax > J.n_max()) throw DomainError("JTable smaller than coefficient vector");
  Integrals r{0.0, 0.0, 0.0};
  cplx i2 = 0.0;
  for (int n = 1; n <= nMax; ++n) {
    const cplx cn = c.coeffs[n - 1];
    r.i0 += std::norm(cn) * double(n) * n;
    if (cn == 0.0) continue;
    for (int np = 1; np <= nMax; ++np) {
      const cplx prod = std::conj(c.coeffs[np - 1]) * cn;
      r.i1 += prod * (n * pi * J.j1(n, np));
      i2 += prod * J.j2(n, np);
    }
  }
  r.i0 *= pi * pi;
  r.i2 = i2.real();
  return r;
}

double energy_from(const Integrals& I, double L, double Ldot, double hbar) {
  return I.i0 / (2.0 * L * L) + hbar * Ldot / L * I.i1.imag() + 0.5 * hbar * hbar * Ldot * Ldot * I.i2;
}

}  // namespace

EnergyBreakdown energy_expectation(const SpectralState& c, double L, double Ldot, const JTable& J, double hbar) {
  const auto I = integrals(c, J);
  return {energy_from(I, L, Ldot, hbar), I.i0, I.i1.imag(), I.i2};
}

ForceBreakdown force_operator(const SpectralState& c, double L, double Ldot, const JTable& J, double hbar) {
  const auto I = integrals(c, J);
  return ForceBreakdown::from_parts(I.i0 / (L * L * L), hbar * Ldot * I.i1.imag() / (L * L),
                                    {{"I0", I.i0}, {"ImI1", I.i1.imag()}, {"I2", I.i2}});
}

double force_energy_route(const SpectralState& c, double L, double Ldot, const JTable& J, double hbar, double dL) {
  const auto I = integrals(c, J);
  return -(energy_from(I, L + dL, Ldot, hbar) - energy_from(I, L - dL, Ldot, hbar)) / (2.0 * dL);
}

ForceBreakdown force_exact(const SpectralState& c, double L, double Ldot, const JTable& J, double hbar,
                           double L_ref) {
  auto F = force_operator(c, L, Ldot, J, hbar);
  const double fd = force_energy_route(c, L, Ldot, J, hbar, 1e-5 * L_ref);
  if (std::abs(fd - F.total) > 1e-6 * std::abs(F.total))
    throw ConsistencyError("hard-wall force: operator route " + fmt_num(F.total) +
                           " disagrees with -dE/dL route " + fmt_num(fd));
  F.raw.push_back({"F_fd", fd});
  return F;
}

TimeWindow time_window(const WallSchedule& s, const OccupationModel& occ) {
  int top = 1;
  if (occ.mode == OccupationModel::Mode::zero_temperature) {
    top = occ.N;
  } else {
    for (int n = 1; n < 1 << 20; ++n) {
      if (occ.weight(n, box_energy(n, s.L0)) < 0.5) break;
      top = n;
    }
  }
  const double dE = box_energy(top + 1, s.L0) - box_energy(top, s.L0);
  const double upper = s.Ldot0 == 0.0 ? std::numeric_limits<double>::infinity() : 0.1 * s.L0 / std::abs(s.Ldot0);
  return {10.0 * s.hbar / dE, upper};
}

HardWallEngine::HardWallEngine(const WallSchedule& s, int level, int nMax)
    : schedule_(s), level_(level), J_(nMax), c0_(initial_coefficients(level, s, nMax)) {}

SpectralState HardWallEngine::state_at(double t) const {
  return propagate(c0_, scaled_time(schedule_, t), schedule_.hbar);
}

TrajectorySample HardWallEngine::sample(double t, EvalMode mode) const {
  TrajectorySample out;
  out.t = t;
  const double hbar = schedule_.hbar;
  SpectralState c;
  if (mode == EvalMode::instantaneous) {
    const auto g = eval_length(schedule_, t);
    out.L = g.L;
    out.Ldot = g.Ldot;
    out.tau = scaled_time(schedule_, t);
    c = propagate(c0_, out.tau, hbar);
  } else {
    out.L = schedule_.L0;
    out.Ldot = schedule_.Ldot0;
    out.tau = 0.0;
    c = c0_;
  }
  out.energy = energy_expectation(c, out.L, out.Ldot, J_, hbar).energy;
  out.force = force_exact(c, out.L, out.Ldot, J_, hbar, schedule_.L0);
  out.fd_force = out.force.raw_value("F_fd");
  out.norm2 = c.norm2();
  return out;
}

CoefficientResult nonadiabatic_coefficient_exact(const OccupationModel& occ, int nMax, double hbar, double L0) {
  int top = occ.mode == OccupationModel::Mode::zero_temperature ? occ.N : 1;
  if (occ.mode == OccupationModel::Mode::finite_temperature)
    for (int n = 1; n <= nMax; ++n)
      if (occ.weight(n, box_energy(n, L0)) > 1e-18) top = n;
  if (nMax < 4 * top) throw TruncationError("nonadiabatic_coefficient_exact: nMax must be >= 4 x highest occupied index");
  const double pi2 = pi * pi;
  double total = 0.0, tail = 0.0;
  for (int n = 1; n <= top; ++n) {
    const double f = occ.weight(n, box_energy(n, L0));
    if (f == 0.0) continue;
    const double nn = double(n) * n;
    double inner = 0.0;
    for (int m = nMax; m >= 1; --m) {
      if (m == n) continue;
      const double mm = double(m) * m, d = mm - nn;
      inner += mm * nn / (d * d * d) + mm * mm * nn / (d * d * d * d);
    }
    inner *= 16.0 / pi2;
    const double diag = pi2 / 4.0 * (nn / 5.0 - 1.0 / pi2 + 3.0 / (2.0 * nn * pi2 * pi2));
    total += f * (inner - diag);
    // summand -> (nn + nn)/m^4 for m >> n; integral tail beyond nMax
    const double M = nMax + 0.5;
    tail += f * 16.0 / pi2 * 2.0 * nn / (3.0 * M * M * M);
  }
  CoefficientResult r{hbar * hbar * total, hbar * hbar * tail, nMax};
  if (r.tail_estimate > 1e-6 * std::abs(r.value))
    throw TruncationError("nonadiabatic_coefficient_exact: tail estimate " + fmt_num(r.tail_estimate) +
                          " exceeds 1e-6 |C'| at nMax = " + std::to_string(nMax));
  return r;
}

}  // namespace cavity
