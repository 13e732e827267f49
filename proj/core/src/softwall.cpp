#include "cavity/softwall.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cavity/errors.hpp"

namespace cavity {

double hermite_polynomial(int n, double z) {
  if (n < 0) throw DomainError("hermite_polynomial: n must be >= 0");
  double hm = 1.0, h = 2.0 * z;
  if (n == 0) return hm;
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * z * h - 2.0 * k * hm;
    hm = h;
    h = next;
  }
  return h;
}

double hermite_Y(int n, double y, double hbar) {
  if (n < 0) throw DomainError("hermite_Y: n must be >= 0");
  if (!(hbar > 0.0)) throw DomainError("hermite_Y: hbar must be positive");
  const double z = y / std::sqrt(hbar);
  double hm = 0.0, h = std::pow(std::numbers::pi * hbar, -0.25) * std::exp(-0.5 * z * z);
  for (int k = 0; k < n; ++k) {
    const double next = std::sqrt(2.0 / (k + 1)) * z * h - std::sqrt(double(k) / (k + 1)) * hm;
    hm = h;
    h = next;
  }
  return h;
}

HermiteBasis::HermiteBasis(int nMax, double width, int nodes) : nMax_(nMax), width_(width) {
  if (nMax < 1) throw DomainError("HermiteBasis: nMax must be >= 1");
  if (nodes <= 0) nodes = 2 * nMax + 40;
  const auto gh = gauss_hermite(nodes);
  const double s = std::sqrt(width);
  rule_.nodes.resize(nodes);
  rule_.weights.resize(nodes);
  for (int k = 0; k < nodes; ++k) {
    rule_.nodes[k] = s * gh.nodes[k];
    rule_.weights[k] = s * gh.weights[k];
  }
  Y_.resize(static_cast<std::size_t>(nMax) * nodes);
  for (int k = 0; k < nodes; ++k) {
    const double z = gh.nodes[k];
    double hm = 0.0, h = std::pow(std::numbers::pi * width, -0.25) * std::exp(-0.5 * z * z);
    for (int n = 0; n < nMax; ++n) {
      Y_[static_cast<std::size_t>(n) * nodes + k] = h;
      const double next = std::sqrt(2.0 / (n + 1)) * z * h - std::sqrt(double(n) / (n + 1)) * hm;
      hm = h;
      h = next;
    }
  }
}

SpectralState softwall_coefficients(int level, const WallSchedule& s, const HermiteBasis& basis) {
  if (s.kind == WallSchedule::Kind::sqrt_law)
    throw DomainError("softwall: only fixed or linear confining-length schedules are supported");
  if (level < 0 || level >= basis.n_max()) throw DomainError("softwall_coefficients: level outside basis");
  const double alpha = s.hbar * s.Ldot0 * s.L0;
  const auto& r = basis.rule();
  SpectralState st;
  st.basis = BasisKind::hermite;
  st.source_level = level;
  st.first_index = 0;
  st.coeffs.assign(basis.n_max(), 0.0);
  for (int n = level % 2; n < basis.n_max(); n += 2) {
    cplx c = 0.0;
    for (std::size_t k = 0; k < r.nodes.size(); ++k) {
      const double y = r.nodes[k];
      c += r.weights[k] * basis.value_at_node(level, k) * basis.value_at_node(n, k) *
           std::polar(1.0, -0.5 * alpha * y * y);
    }
    st.coeffs[n] = c;
  }
  const double deficit = 1.0 - st.norm2();
  if (std::abs(deficit) > 1e-8)
    throw NumericError("softwall_coefficients: norm deficit " + fmt_num(deficit) +
                       " exceeds 1e-8; raise nMax or the quadrature degree");
  return st;
}

SpectralState softwall_propagate(const SpectralState& c, double tau, double hbar) {
  SpectralState out = c;
  for (std::size_t k = 0; k < c.coeffs.size(); ++k) {
    const double n = c.first_index + static_cast<double>(k);
    out.coeffs[k] = c.coeffs[k] * std::polar(1.0, -(n + 0.5) * tau / hbar);
  }
  return out;
}

SoftIntegrals soft_integrals(const SpectralState& c) {
  const auto& v = c.coeffs;
  const std::size_t N = v.size();
  double occ = 0.0, nrm = 0.0;
  cplx a2 = 0.0;
  for (std::size_t n = 0; n < N; ++n) {
    const double p = std::norm(v[n]);
    nrm += p;
    occ += p * double(n);
    if (n + 2 < N) a2 += std::conj(v[n]) * v[n + 2] * std::sqrt((n + 1.0) * (n + 2.0));
  }
  SoftIntegrals r;
  r.k0 = 2.0 * occ + nrm;
  r.im_k1 = a2.imag();
  r.k2 = a2.real() + occ + 0.5 * nrm;
  r.potential = r.k2;
  r.kinetic = occ + 0.5 * nrm - a2.real();
  return r;
}

namespace {

double soft_energy(const SoftIntegrals& K, double L, double Ldot, double hbar) {
  return K.k0 / (2.0 * L * L) + hbar * Ldot / L * K.im_k1 + 0.5 * hbar * hbar * Ldot * Ldot * K.k2;
}

}  // namespace

SoftEnergyForce softwall_energy_force(const SpectralState& c, double L, double Ldot, double hbar, double L_ref) {
  const auto K = soft_integrals(c);
  SoftEnergyForce out;
  out.energy = soft_energy(K, L, Ldot, hbar);
  out.force = ForceBreakdown::from_parts(K.k0 / (L * L * L), hbar * Ldot * K.im_k1 / (L * L),
                                         {{"K0", K.k0}, {"ImK1", K.im_k1}, {"K2", K.k2}});
  const double dL = 1e-5 * L_ref;
  const double fd = -(soft_energy(K, L + dL, Ldot, hbar) - soft_energy(K, L - dL, Ldot, hbar)) / (2.0 * dL);
  if (std::abs(fd - out.force.total) > 1e-6 * std::abs(out.force.total))
    throw ConsistencyError("soft-wall force: operator route " + fmt_num(out.force.total) +
                           " disagrees with -dE/dL route " + fmt_num(fd));
  out.force.raw.push_back({"F_fd", fd});
  return out;
}

SoftWallEngine::SoftWallEngine(const WallSchedule& s, int level, int nMax)
    : schedule_(s), basis_(nMax), c0_(softwall_coefficients(level, s, basis_)) {}

TrajectorySample SoftWallEngine::sample(double t, EvalMode mode) const {
  TrajectorySample out;
  out.t = t;
  const double hbar = schedule_.hbar;
  SpectralState c;
  if (mode == EvalMode::instantaneous) {
    const auto g = eval_length(schedule_, t);
    out.L = g.L;
    out.Ldot = g.Ldot;
    out.tau = scaled_time(schedule_, t);
    c = softwall_propagate(c0_, out.tau, hbar);
  } else {
    out.L = schedule_.L0;
    out.Ldot = schedule_.Ldot0;
    c = c0_;
  }
  const auto ef = softwall_energy_force(c, out.L, out.Ldot, hbar, schedule_.L0);
  out.energy = ef.energy;
  out.force = ef.force;
  out.fd_force = ef.force.raw_value("F_fd");
  out.norm2 = c.norm2();
  return out;
}

}  // namespace cavity
