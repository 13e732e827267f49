#include "cavity/perturbative.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <numbers>
#include <string>

#include "cavity/box.hpp"
#include "cavity/errors.hpp"
#include "cavity/hardwall.hpp"

namespace cavity {

using std::numbers::pi;

double gamma(int l, int m) {
  if (l < 1 || m < 1) throw DomainError("gamma: indices must be >= 1");
  if (l == m) return 0.0;
  const double s = ((l + m + 1) % 2 == 0) ? 1.0 : -1.0;
  return s * 2.0 * l * m / (double(l) * l - double(m) * m);
}

GammaMatrix::GammaMatrix(int nMax) : g_(nMax, nMax) {
  if (nMax < 1) throw DomainError("GammaMatrix: nMax must be >= 1");
  for (int l = 1; l <= nMax; ++l)
    for (int m = 1; m <= nMax; ++m) g_(l - 1, m - 1) = gamma(l, m);
}

PerturbativeModel::PerturbativeModel(const WallSchedule& s, const OccupationModel& occ, int nMax)
    : schedule_(s), nMax_(nMax), eps_(s.Ldot0 / s.L0), E0_(nMax), f_(nMax) {
  if (nMax < 2) throw DomainError("PerturbativeModel: nMax must be >= 2");
  for (int n = 1; n <= nMax; ++n) {
    E0_[n - 1] = box_energy(n, s.L0);
    f_[n - 1] = occ.weight(n, E0_[n - 1]);
  }
}

cplx PerturbativeModel::g1(int n, int m, double t) const {
  if (n == m) return 0.0;
  const double df = weight(n) - weight(m);
  if (df == 0.0) return 0.0;
  const double hbar = schedule_.hbar;
  const double dE = energy0(n) - energy0(m);
  // solves dg/dt = (dE/(i hbar)) g + gamma_mn (f_n - f_m), g(0) = 0
  const cplx bracket = 1.0 - std::polar(1.0, -dE * t / hbar);
  return cplx(0.0, -hbar * gamma(m, n) * df / dE) * bracket;
}

double PerturbativeModel::g2(int n, double t) const {
  const double hbar = schedule_.hbar;
  double s = 0.0;
  for (int l = 1; l <= nMax_; ++l) {
    if (l == n) continue;
    const double df = weight(n) - weight(l);
    if (df == 0.0) continue;
    const double dE = energy0(n) - energy0(l), g = gamma(n, l), r = hbar / dE;
    s += g * g * df * r * r * (1.0 - std::cos(dE * t / hbar));
  }
  return -2.0 * s;
}

double PerturbativeModel::g2_dephased(int n) const {
  const double hbar = schedule_.hbar;
  double s = 0.0;
  for (int l = 1; l <= nMax_; ++l) {
    if (l == n) continue;
    const double df = weight(n) - weight(l);
    if (df == 0.0) continue;
    const double g = gamma(n, l), r = hbar / (energy0(n) - energy0(l));
    s += g * g * df * r * r;
  }
  return -2.0 * s;
}

Eigen::MatrixXcd PerturbativeModel::g1_matrix(double t) const {
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(nMax_, nMax_);
  for (int n = 1; n <= nMax_; ++n)
    for (int m = 1; m <= nMax_; ++m) g(n - 1, m - 1) = g1(n, m, t);
  return g;
}

Eigen::MatrixXcd PerturbativeModel::density_matrix(double t) const {
  Eigen::MatrixXcd rho = eps_ * g1_matrix(t);
  for (int n = 1; n <= nMax_; ++n) rho(n - 1, n - 1) += weight(n) + eps_ * eps_ * g2(n, t);
  return rho;
}

cplx g1_element(int n, int m, double t, const WallSchedule& s, const OccupationModel& occ) {
  return PerturbativeModel(s, occ, std::max({n, m, 2})).g1(n, m, t);
}

double g2_diagonal(int n, double t, const WallSchedule& s, const OccupationModel& occ, int nMax) {
  if (n > nMax) throw DomainError("g2_diagonal: n exceeds nMax");
  return PerturbativeModel(s, occ, nMax).g2(n, t);
}

cplx force_matrix_element(int m, int n, double L, double Ldot, double hbar) {
  if (m < 1 || n < 1) throw DomainError("force_matrix_element: indices must be >= 1");
  if (m == n) return double(n) * n * pi * pi / (L * L * L);
  return {0.0, hbar * Ldot / (L * L) * gamma(m, n)};
}

ForceBreakdown PerturbativeForce::breakdown(EvalMode mode) const {
  const bool inst = mode == EvalMode::instantaneous;
  const double nonad = inst ? s2 + s3 : s2_reduced + s3_reduced;
  return ForceBreakdown::from_parts(s1, nonad,
                                    {{"S1", s1},
                                     {"S2", inst ? s2 : s2_reduced},
                                     {"S3", inst ? s3 : s3_reduced},
                                     {"S2_dephased", s2_dephased},
                                     {"S3_dephased", s3_dephased}});
}

namespace {

// sum_{n>m} m^2 n^2 (f_n - f_m)/(n^2 - m^2)^3 over levels 1..nMax
double reduced_sum(const PerturbativeModel& P) {
  double s = 0.0;
  for (int m = 1; m <= P.n_max(); ++m) {
    const double fm = P.weight(m);
    for (int n = m + 1; n <= P.n_max(); ++n) {
      const double df = P.weight(n) - fm;
      if (df == 0.0) continue;
      const double mm = double(m) * m, nn = double(n) * n, d = nn - mm;
      s += mm * nn / (d * d * d) * df;
    }
  }
  return s;
}

}  // namespace

PerturbativeForce perturbative_force(const OccupationModel& occ, const WallSchedule& s, double t, int nMax,
                                     bool s1_at_initial) {
  const PerturbativeModel P(s, occ, nMax);
  const auto g = eval_length(s, t);
  const double hbar = s.hbar, eps = P.epsilon();
  PerturbativeForce out;

  const double Ls1 = s1_at_initial ? s.L0 : g.L;
  for (int n = 1; n <= nMax; ++n) out.s1 += P.weight(n) * double(n) * n * pi * pi / (Ls1 * Ls1 * Ls1);

  // S2: eps sum_{m != n} g1_nm F_mn; pair (n,m) + (m,n) is real
  double s2 = 0.0;
  for (int m = 1; m <= nMax; ++m)
    for (int n = m + 1; n <= nMax; ++n) {
      if (P.weight(n) == P.weight(m)) continue;
      s2 += 2.0 * (P.g1(n, m, t) * force_matrix_element(m, n, g.L, g.Ldot, hbar)).real();
    }
  out.s2 = eps * s2;

  double s3 = 0.0, e = 0.0;
  for (int n = 1; n <= nMax; ++n) {
    const double g2 = P.g2(n, t);
    s3 += g2 * double(n) * n * pi * pi / (g.L * g.L * g.L);
    e += (P.weight(n) + eps * eps * g2) * box_energy(n, g.L);
  }
  out.s3 = eps * eps * s3;
  out.energy = e;

  double s3d = 0.0;
  for (int n = 1; n <= nMax; ++n) s3d += P.g2_dephased(n) * double(n) * n * pi * pi / (s.L0 * s.L0 * s.L0);
  out.s3_dephased = eps * eps * s3d;

  const double R = reduced_sum(P);
  const double pref = hbar * hbar * s.Ldot0 * s.Ldot0 / (pi * pi * s.L0);
  out.s2_reduced = 16.0 * pref * R;
  out.s3_reduced = 32.0 * pref * R;
  out.s2_dephased = out.s2_reduced;

  // tail of the pair sums beyond nMax, (1 - cos) <= 2
  const double M = nMax + 0.5;
  double tail = 0.0;
  for (int m = 1; m <= nMax; ++m) {
    const double fm = P.weight(m);
    if (fm == 0.0) continue;
    const double mm = double(m) * m, q = 1.0 - mm / (M * M);
    tail += fm * mm / (3.0 * M * M * M * q * q * q);
  }
  out.tail_estimate = 2.0 * 48.0 * pref * tail * std::max(1.0, std::pow(s.L0 / g.L, 3));
  const double scale = 48.0 * pref * std::abs(R);
  if (s.Ldot0 != 0.0 && out.tail_estimate > 1e-6 * scale)
  {
    std::ostringstream msg;
    msg << "perturbative_force: truncation tail " << out.tail_estimate << " exceeds 1e-6 of |S2+S3| = " << scale
        << " at nMax = " << nMax;
    throw TruncationError(msg.str());
  }
  out.in_window = time_window(s, occ).contains(t);
  return out;
}

CoefficientResult coefficient_C(const OccupationModel& occ, int nMax, double hbar, double L0) {
  if (nMax < 2) throw DomainError("coefficient_C: nMax must be >= 2");
  std::vector<double> f(nMax + 1);
  for (int n = 1; n <= nMax; ++n) f[n] = occ.weight(n, box_energy(n, L0));
  double sum = 0.0, tail = 0.0;
  const double M = nMax + 0.5;
  for (int m = 1; m <= nMax; ++m) {
    if (f[m] == 0.0) continue;
    double partial = 0.0;
    for (int n = m + 1; n <= nMax; ++n) {
      const double df = f[n] - f[m];
      if (df == 0.0) continue;
      const double mm = double(m) * m, nn = double(n) * n, d = nn - mm;
      const double term = mm * nn / (d * d * d) * df;
      partial += term;
      if (std::abs(term) < 1e-16 * std::abs(partial) && f[n] == 0.0) break;
    }
    sum += partial;
    const double mm = double(m) * m, q = 1.0 - mm / (M * M);
    if (q > 0.0) tail += f[m] * mm / (3.0 * M * M * M * q * q * q);
  }
  // levels above nMax still carry weight at finite temperature
  tail += f[nMax] * double(nMax) * nMax;
  const double pref = 48.0 * hbar * hbar / (pi * pi);
  CoefficientResult r{pref * sum, pref * tail, nMax};
  if (r.tail_estimate > 1e-6 * std::abs(r.value))
    throw TruncationError("coefficient_C: tail bound " + fmt_num(r.tail_estimate) + " exceeds 1e-6 |C| at nMax = " +
                          std::to_string(nMax));
  return r;
}

}  // namespace cavity
