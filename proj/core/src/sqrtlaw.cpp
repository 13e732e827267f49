#include "cavity/sqrtlaw.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cavity/errors.hpp"

namespace cavity {

using std::numbers::pi;

double schedule_hbar_b2(const WallSchedule& s) {
  if (s.kind != WallSchedule::Kind::sqrt_law) return 0.0;
  return s.hbar * s.hbar * s.B2();
}

double jbar(int k, int n, int level, const KummerBasis& basis) {
  if (k != 0 && k != 2 && k != 3) throw DomainError("jbar: k must be 0, 2 or 3");
  if (level < 1) throw DomainError("jbar: level must be >= 1");
  const int p = k == 0 ? 0 : (k == 2 ? 2 : 4);
  const auto& g = basis.grid();
  double s = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const double y = g.nodes[i];
    s += g.weights[i] * std::pow(y, p) * basis.value_at_node(n, i) * std::sin(level * pi * y);
  }
  return std::sqrt(2.0) * s;
}

namespace {

void check_consistent(const WallSchedule& s, const KummerBasis& basis) {
  const double hb2 = schedule_hbar_b2(s);
  if (std::abs(hb2 - basis.hbar_b2()) > 1e-12 * std::max(1.0, std::abs(hb2)))
    throw DomainError("sqrt-law: schedule (hbar B)^2 = " + fmt_num(hb2) + " does not match basis value " +
                      fmt_num(basis.hbar_b2()));
}

}  // namespace

SpectralState sqrtlaw_coefficients(int level, const WallSchedule& s, const KummerBasis& basis) {
  check_consistent(s, basis);
  if (level < 1 || level > basis.n_max()) throw DomainError("sqrtlaw_coefficients: level outside basis");
  const double alpha = s.hbar * s.L0 * s.Ldot0;
  const auto& g = basis.grid();
  std::vector<cplx> w(g.nodes.size());
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const double y = g.nodes[i];
    w[i] = g.weights[i] * std::sqrt(2.0) * std::sin(level * pi * y) * std::polar(1.0, -0.5 * alpha * y * y);
  }
  SpectralState st;
  st.basis = BasisKind::kummer;
  st.source_level = level;
  st.first_index = 1;
  st.coeffs.resize(basis.n_max());
  for (int n = 1; n <= basis.n_max(); ++n) {
    cplx c = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) c += basis.value_at_node(n, i) * w[i];
    st.coeffs[n - 1] = c;
  }
  const double deficit = 1.0 - st.norm2();
  if (deficit > 1e-6)
    throw TruncationError("sqrtlaw_coefficients: norm deficit " + fmt_num(deficit) + " exceeds 1e-6");
  return st;
}

cplx sqrtlaw_pair_product(int n_prime, int n, int level, double alpha, const KummerBasis& basis) {
  const double a0 = jbar(0, n_prime, level, basis), a2 = jbar(2, n_prime, level, basis),
               a3 = jbar(3, n_prime, level, basis);
  const double b0 = jbar(0, n, level, basis), b2 = jbar(2, n, level, basis), b3 = jbar(3, n, level, basis);
  const double re = a0 * b0 + alpha * alpha * (0.25 * a2 * b2 - 0.125 * (a3 * b0 + a0 * b3));
  const double im = -0.5 * alpha * (a2 * b0 - a0 * b2);
  return {re, im};
}

SpectralState sqrtlaw_propagate(const SpectralState& c, double tau, double hbar, const KummerBasis& basis) {
  SpectralState out = c;
  for (std::size_t k = 0; k < c.coeffs.size(); ++k)
    out.coeffs[k] = c.coeffs[k] * std::polar(1.0, -basis.root(static_cast<int>(k) + 1) * tau / hbar);
  return out;
}

KummerMatrices::KummerMatrices(const KummerBasis& basis) {
  const int N = basis.n_max();
  const auto& g = basis.grid();
  const std::size_t Q = g.nodes.size();
  Eigen::MatrixXd U(Q, N), dU(Q, N);
  for (int n = 1; n <= N; ++n)
    for (std::size_t i = 0; i < Q; ++i) {
      U(i, n - 1) = basis.value_at_node(n, i);
      dU(i, n - 1) = basis.derivative_at_node(n, i);
    }
  Eigen::VectorXd wy(Q), wy2(Q);
  for (std::size_t i = 0; i < Q; ++i) {
    wy(i) = g.weights[i] * g.nodes[i];
    wy2(i) = wy(i) * g.nodes[i];
  }
  y2 = U.transpose() * wy2.asDiagonal() * U;
  ydy = U.transpose() * wy.asDiagonal() * dU;
}

namespace {

struct Ibar {
  double i0, im_i1, i2;
};

Ibar ibar(const SpectralState& c, const KummerBasis& basis, const KummerMatrices& mats) {
  const int N = basis.n_max();
  Eigen::VectorXcd v(N);
  for (int n = 0; n < N; ++n) v(n) = c.coeffs[n];
  double diag = 0.0;
  for (int n = 0; n < N; ++n) diag += 2.0 * std::norm(v(n)) * basis.root(n + 1);
  const double y2 = (v.adjoint() * mats.y2 * v)(0, 0).real();
  const cplx i1 = (v.adjoint() * mats.ydy * v)(0, 0);
  return {diag + basis.omega2() * y2, i1.imag(), y2};
}

}  // namespace

ForceBreakdown sqrtlaw_force(const SpectralState& c, double L, double Ldot, double hbar, const KummerBasis& basis,
                             const KummerMatrices& mats) {
  const auto I = ibar(c, basis, mats);
  return ForceBreakdown::from_parts(I.i0 / (L * L * L), hbar * Ldot * I.im_i1 / (L * L),
                                    {{"Ibar0", I.i0}, {"ImIbar1", I.im_i1}, {"Ibar2", I.i2}});
}

double sqrtlaw_energy(const SpectralState& c, double L, double Ldot, double hbar, const KummerBasis& basis,
                      const KummerMatrices& mats) {
  const auto I = ibar(c, basis, mats);
  return I.i0 / (2.0 * L * L) + hbar * Ldot / L * I.im_i1 + 0.5 * hbar * hbar * Ldot * Ldot * I.i2;
}

SqrtLawEngine::SqrtLawEngine(const WallSchedule& s, int level, int nMax)
    : schedule_(s),
      level_(level),
      basis_(schedule_hbar_b2(s), nMax),
      mats_(basis_),
      c0_(sqrtlaw_coefficients(level, s, basis_)) {}

TrajectorySample SqrtLawEngine::sample(double t, EvalMode mode) const {
  TrajectorySample out;
  out.t = t;
  const double hbar = schedule_.hbar;
  SpectralState c;
  if (mode == EvalMode::instantaneous) {
    const auto g = eval_length(schedule_, t);
    out.L = g.L;
    out.Ldot = g.Ldot;
    out.tau = scaled_time(schedule_, t);
    c = sqrtlaw_propagate(c0_, out.tau, hbar, basis_);
  } else {
    out.L = schedule_.L0;
    out.Ldot = schedule_.Ldot0;
    c = c0_;
  }
  out.energy = sqrtlaw_energy(c, out.L, out.Ldot, hbar, basis_, mats_);
  out.force = sqrtlaw_force(c, out.L, out.Ldot, hbar, basis_, mats_);
  const double dL = 1e-5 * schedule_.L0;
  out.fd_force = -(sqrtlaw_energy(c, out.L + dL, out.Ldot, hbar, basis_, mats_) -
                   sqrtlaw_energy(c, out.L - dL, out.Ldot, hbar, basis_, mats_)) /
                 (2.0 * dL);
  if (std::abs(out.fd_force - out.force.total) > 1e-6 * std::abs(out.force.total))
    throw ConsistencyError("sqrt-law force: operator route disagrees with -dE/dL route");
  out.force.raw.push_back({"F_fd", out.fd_force});
  out.norm2 = c.norm2();
  return out;
}

}  // namespace cavity
