#include <cmath>
#include <numbers>

#include "cavity/box.hpp"
#include "cavity/errors.hpp"
#include "cavity/hardwall.hpp"
#include "cavity/perturbative.hpp"
#include "cavity/quadrature.hpp"
#include "doctest.h"
#include "oracles/ode_oracle.hpp"
#include "support/gen.hpp"

using namespace cavity;
using std::numbers::pi;

namespace {

// -L <psi_l | d psi_m / dL> for box states on [0, L]
double gamma_quad(int l, int m, double L) {
  auto f = [&](double x) {
    const double norm = std::sqrt(2.0 / L);
    const double psi_l = norm * std::sin(l * pi * x / L);
    const double dpsi_m = -0.5 / L * norm * std::sin(m * pi * x / L) -
                          norm * std::cos(m * pi * x / L) * m * pi * x / (L * L);
    return psi_l * dpsi_m;
  };
  return -L * integrate(f, 0.0, L, 1e-13).value;
}

// int psi_m F psi_n dx with F = -(1/L) d^2/dx^2 + (i hbar Ldot / L^2)(x d/dx + 1/2)
cplx force_quad(int m, int n, double L, double Ldot, double hbar) {
  auto f = [&](double x) {
    const double k = n * pi / L, norm = std::sqrt(2.0 / L);
    const double pm = norm * std::sin(m * pi * x / L);
    const double pn = norm * std::sin(k * x), dpn = norm * k * std::cos(k * x), d2pn = -k * k * pn;
    return pm * (cplx(-d2pn / L, 0.0) + cplx(0.0, hbar * Ldot / (L * L)) * (x * dpn + 0.5 * pn));
  };
  return integrate(f, 0.0, L, 1e-12).value;
}

std::vector<double> zero_t_weights(int N, int nMax) {
  std::vector<double> f(nMax, 0.0);
  for (int n = 0; n < std::min(N, nMax); ++n) f[n] = 1.0;
  return f;
}

}  // namespace

TEST_CASE("gamma examples and quadrature oracle") {
  CHECK(gamma(1, 1) == 0.0);
  CHECK(gamma(1, 2) == doctest::Approx(-4.0 / 3.0).epsilon(1e-15));
  CHECK(gamma(2, 1) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(std::abs(gamma_quad(1, 2, 1.0) - (-4.0 / 3.0)) < 1e-10);
  double worst = 0.0;
  for (int l = 1; l <= 10; ++l)
    for (int m = 1; m <= 10; ++m) worst = std::max(worst, std::abs(gamma(l, m) - gamma_quad(l, m, 1.7)));
  CHECK(worst < 1e-10);
}

TEST_CASE("gamma matrix is antisymmetric with zero diagonal") {
  for (int nMax : {1, 2, 7, 50}) {
    const GammaMatrix G(nMax);
    CHECK((G.matrix() + G.matrix().transpose()).cwiseAbs().maxCoeff() == 0.0);
    for (int l = 1; l <= nMax; ++l) CHECK(G(l, l) == 0.0);
  }
}

TEST_CASE("first-order correction trivial cases") {
  const auto s = WallSchedule::linear(1.0, 0.01);
  const auto one = OccupationModel::zero_temperature(1);
  CHECK(g1_element(2, 1, 0.0, s, one) == cplx(0.0, 0.0));
  CHECK(g1_element(3, 2, 0.4, s, one) == cplx(0.0, 0.0));
  CHECK(g1_element(2, 2, 0.4, s, one) == cplx(0.0, 0.0));
  CHECK(g2_diagonal(1, 0.0, s, one, 16) == 0.0);
  CHECK(g2_diagonal(3, 0.7, s, OccupationModel::zero_temperature(40), 16) == 0.0);
}

TEST_CASE("first and second order match the ODE oracle on two levels") {
  const auto s = WallSchedule::linear(1.0, 0.01);
  const auto occ = OccupationModel::zero_temperature(1);
  const auto h = oracle::integrate_hierarchy(2, 1.0, 1.0, zero_t_weights(1, 2), 0.1);
  CHECK(std::abs(g1_element(2, 1, 0.1, s, occ) - h.g1(1, 0)) < 1e-8);
  CHECK(std::abs(g1_element(1, 2, 0.1, s, occ) - h.g1(0, 1)) < 1e-8);
  CHECK(std::abs(g2_diagonal(1, 0.1, s, occ, 2) - h.g2(0, 0).real()) < 1e-8);
  CHECK(std::abs(h.g2(0, 0).imag()) < 1e-10);
}

TEST_CASE("first and second order match the ODE oracle on the full truncation") {
  const int nMax = 16;
  const auto s = WallSchedule::linear(1.0, 0.01);
  for (int N : {1, 3}) {
    const auto occ = OccupationModel::zero_temperature(N);
    const PerturbativeModel P(s, occ, nMax);
    const auto h = oracle::integrate_hierarchy(nMax, 1.0, 1.0, zero_t_weights(N, nMax), 0.1);
    CHECK((P.g1_matrix(0.1) - h.g1).cwiseAbs().maxCoeff() < 1e-8);
    for (int n = 1; n <= nMax; ++n) CHECK(std::abs(P.g2(n, 0.1) - h.g2(n - 1, n - 1).real()) < 1e-8);
  }
}

TEST_CASE("force matrix elements") {
  CHECK(std::abs(force_matrix_element(3, 3, 1.0, 0.2) - 9.0 * pi * pi) < 1e-12);
  CHECK(force_matrix_element(1, 2, 1.0, 0.0) == cplx(0.0, 0.0));
  CHECK(force_matrix_element(1, 2, 1.0, 0.1).real() == 0.0);
  double worst = 0.0;
  for (int m = 1; m <= 8; ++m)
    for (int n = 1; n <= 8; ++n)
      worst = std::max(worst, std::abs(force_matrix_element(m, n, 1.3, 0.07, 1.0) - force_quad(m, n, 1.3, 0.07, 1.0)));
  CHECK(worst < 1e-10);
}

TEST_CASE("density matrix is Hermitian and trace preserving") {
  gen::for_all(0x9e0001, 12, [](gen::Stream& g) {
    const auto s = WallSchedule::linear(g.uniform(0.5, 2.0), g.uniform(-0.2, 0.2));
    const auto occ = g.coin() ? OccupationModel::zero_temperature(g.integer(1, 5))
                              : OccupationModel::fermi_dirac(g.log_uniform(0.01, 1.0), g.uniform(0.0, 100.0));
    const PerturbativeModel P(s, occ, 24);
    const double t = g.uniform(0.0, 3.0);
    const auto rho = P.density_matrix(t);
    CHECK((rho - rho.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
    double fsum = 0.0, g2sum = 0.0;
    for (int n = 1; n <= 24; ++n) {
      fsum += P.weight(n);
      g2sum += P.g2(n, t);
    }
    CHECK(std::abs(rho.trace().real() - fsum) < 1e-10);
    CHECK(std::abs(rho.trace().imag()) < 1e-14);
    CHECK(std::abs(g2sum) < 1e-10);
  });
}

TEST_CASE("static wall gives the adiabatic force and no corrections") {
  const auto occ = OccupationModel::zero_temperature(2);
  const auto F = perturbative_force(occ, WallSchedule::linear(1.3, 0.0), 0.5, 64);
  CHECK(F.s2 == 0.0);
  CHECK(F.s3 == 0.0);
  CHECK(F.s2_reduced == 0.0);
  CHECK(F.total() == doctest::Approx(adiabatic_force(occ, 1.3)).epsilon(1e-14));
  const PerturbativeModel P(WallSchedule::linear(1.0, 0.0), occ, 8);
  CHECK(P.density_matrix(0.7).imag().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("reduced forms: third order is twice the second and the sum is C Ldot^2 / L0") {
  for (int N : {1, 2, 5}) {
    const auto occ = OccupationModel::zero_temperature(N);
    const auto s = WallSchedule::linear(1.2, 0.01);
    const auto F = perturbative_force(occ, s, 1.0, 1024);
    CHECK(std::abs(F.s3_reduced - 2.0 * F.s2_reduced) <= 1e-10 * std::abs(F.s3_reduced));
    const double C = coefficient_C(occ, 10000).value;
    CHECK(F.s2_reduced + F.s3_reduced == doctest::Approx(C * 0.01 * 0.01 / 1.2).epsilon(2e-6));
    // the t-averaged instantaneous third order has the opposite sign to the reduced closed form
    CHECK(F.s3_dephased == doctest::Approx(-F.s3_reduced).epsilon(1e-6));
  }
}

TEST_CASE("coefficient C regression and ordering") {
  const auto c1 = coefficient_C(OccupationModel::zero_temperature(1), 10000);
  CHECK(c1.value == doctest::Approx(-0.848018).epsilon(1e-6));
  CHECK(c1.value == doctest::Approx(-0.848018224535).epsilon(1e-10));
  CHECK(c1.tail_estimate < 1e-6 * std::abs(c1.value));
  const double c2 = coefficient_C(OccupationModel::zero_temperature(2), 10000).value;
  const double c3 = coefficient_C(OccupationModel::zero_temperature(3), 10000).value;
  const double c5 = coefficient_C(OccupationModel::zero_temperature(5), 10000).value;
  CHECK(c2 == doctest::Approx(-1.810022780670617).epsilon(1e-9));
  CHECK(c3 == doctest::Approx(-2.793135916730227).epsilon(1e-9));
  CHECK(c5 == doctest::Approx(-4.777557784745217).epsilon(1e-9));
  CHECK(c2 < c1.value);
  CHECK(c3 < c2);
  CHECK(c1.value < 0.0);
  CHECK(coefficient_C(OccupationModel::zero_temperature(1), 10000, 2.0).value ==
        doctest::Approx(4.0 * c1.value).epsilon(1e-14));
  CHECK_THROWS_AS(coefficient_C(OccupationModel::zero_temperature(1), 20), TruncationError);
}

TEST_CASE("property: thermal C is negative") {
  gen::for_all(0x9e0002, 10, [](gen::Stream& g) {
    const auto occ = OccupationModel::fermi_dirac(g.log_uniform(0.05, 5.0), g.uniform(5.0, 200.0));
    CHECK(coefficient_C(occ, 4000).value < 0.0);
  });
}

TEST_CASE("perturbative truncation tail is reported") {
  CHECK_THROWS_AS(perturbative_force(OccupationModel::zero_temperature(1), WallSchedule::linear(1.0, 0.01), 1.0, 32),
                  TruncationError);
}

TEST_CASE("window flag") {
  const auto s = WallSchedule::linear(1.0, 0.01);
  CHECK(perturbative_force(OccupationModel::zero_temperature(1), s, 1.0, 256).in_window);
  CHECK_FALSE(perturbative_force(OccupationModel::zero_temperature(1), s, 0.05, 256).in_window);
}

TEST_CASE("cross-route: perturbative and exact non-adiabatic forces share sign and quadratic scaling") {
  const auto occ = OccupationModel::zero_temperature(1);
  double prev_exact = 0.0, prev_pert = 0.0;
  for (double v : {2e-3, 4e-3}) {
    const auto s = WallSchedule::linear(1.0, v);
    const double exact = HardWallEngine(s, 1).sample(0.0, EvalMode::time_averaged).force.non_adiabatic;
    const auto P = perturbative_force(occ, s, 1.0, 512);
    const double pert = P.s2_reduced + P.s3_reduced;
    CHECK(exact < 0.0);
    CHECK(pert < 0.0);
    // reduced closed forms are exactly three times the exact-engine value
    CHECK(pert / exact == doctest::Approx(3.0).epsilon(1e-4));
    if (prev_exact != 0.0) {
      CHECK(exact / prev_exact == doctest::Approx(4.0).epsilon(1e-4));
      CHECK(pert / prev_pert == doctest::Approx(4.0).epsilon(1e-10));
    }
    prev_exact = exact;
    prev_pert = pert;
  }
}

TEST_CASE("cross-route: instantaneous second plus third order tracks the exact engine at small velocity") {
  const double v = 1e-3;
  const auto s = WallSchedule::linear(1.0, v);
  const double t = 1.0;
  const auto P = perturbative_force(OccupationModel::zero_temperature(1), s, t, 512);
  const auto g = eval_length(s, t);
  const auto ex = HardWallEngine(s, 1, 128).sample(t);
  const double exact_excess = ex.force.total - pi * pi / (g.L * g.L * g.L);
  // both are O(v); leading terms must agree to O(v^2) relative
  CHECK(std::abs(exact_excess - (P.s2 + P.s3)) < 0.05 * std::abs(exact_excess) + 1e-9);
}
