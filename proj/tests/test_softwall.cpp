#include <cmath>
#include <numbers>

#include "cavity/errors.hpp"
#include "cavity/quadrature.hpp"
#include "cavity/softwall.hpp"
#include "doctest.h"
#include "support/gen.hpp"

using namespace cavity;
using std::numbers::pi;

namespace {

// H_n from the Rodrigues form: d^n/dz^n exp(-z^2) = P_n(z) exp(-z^2) with
// P_{n+1} = P_n' - 2 z P_n, and H_n = (-1)^n P_n. Exact integer coefficients.
std::vector<double> rodrigues_coefficients(int n) {
  std::vector<double> P{1.0};
  for (int k = 0; k < n; ++k) {
    std::vector<double> next(P.size() + 1, 0.0);
    for (std::size_t j = 1; j < P.size(); ++j) next[j - 1] += j * P[j];
    for (std::size_t j = 0; j < P.size(); ++j) next[j + 1] -= 2.0 * P[j];
    P = next;
  }
  if (n % 2) for (auto& c : P) c = -c;
  return P;
}

double eval_poly(const std::vector<double>& c, double z) {
  double s = 0.0;
  for (std::size_t j = c.size(); j-- > 0;) s = s * z + c[j];
  return s;
}

double rodrigues_Y(int n, double y, double hbar) {
  const double z = y / std::sqrt(hbar);
  return std::pow(pi * hbar, -0.25) / std::sqrt(std::pow(2.0, n) * std::tgamma(n + 1.0)) * std::exp(-0.5 * z * z) *
         eval_poly(rodrigues_coefficients(n), z);
}

SpectralState random_state(gen::Stream& g, int nMax) {
  SpectralState c;
  c.basis = BasisKind::hermite;
  c.first_index = 0;
  c.coeffs.resize(nMax);
  double norm = 0.0;
  for (auto& x : c.coeffs) {
    x = cplx(g.uniform(-1, 1), g.uniform(-1, 1));
    norm += std::norm(x);
  }
  for (auto& x : c.coeffs) x /= std::sqrt(norm);
  return c;
}

}  // namespace

TEST_CASE("hermite polynomial and function examples") {
  CHECK(hermite_polynomial(2, 1.5) == doctest::Approx(4.0 * 2.25 - 2.0).epsilon(1e-15));
  CHECK(hermite_polynomial(0, 3.0) == 1.0);
  const double n0 = integrate([](double y) { return hermite_Y(0, y) * hermite_Y(0, y); }, -12.0, 12.0).value;
  CHECK(n0 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(hermite_Y(-1, 0.0), DomainError);
}

TEST_CASE("recurrence agrees with the Rodrigues form for n <= 8") {
  for (double hbar : {1.0, 0.5}) {
    for (int n = 0; n <= 8; ++n) {
      const auto poly = rodrigues_coefficients(n);
      for (int k = 0; k < 20; ++k) {
        const double y = -4.0 + 8.0 * k / 19.0;
        CHECK(hermite_polynomial(n, y) == doctest::Approx(eval_poly(poly, y)).epsilon(1e-12).scale(1.0));
        const double ref = rodrigues_Y(n, y, hbar);
        CHECK(std::abs(hermite_Y(n, y, hbar) - ref) <= 1e-10 * std::max(1.0, std::abs(ref)));
      }
    }
  }
}

TEST_CASE("oscillator functions are orthonormal and have definite parity") {
  double worst = 0.0;
  for (int n = 0; n <= 20; ++n)
    for (int m = n; m <= 20; ++m) {
      const double s = integrate([&](double y) { return hermite_Y(n, y) * hermite_Y(m, y); }, -14.0, 14.0).value;
      worst = std::max(worst, std::abs(s - (n == m ? 1.0 : 0.0)));
    }
  CHECK(worst < 1e-10);
  gen::for_all(0x6b0001, 100, [](gen::Stream& g) {
    const int n = g.integer(0, 60);
    const double y = g.uniform(-8, 8);
    CHECK(hermite_Y(n, -y) == (n % 2 ? -1.0 : 1.0) * hermite_Y(n, y));
  });
}

TEST_CASE("basis samples match point evaluation") {
  const HermiteBasis B(16);
  const auto& r = B.rule();
  for (int n : {0, 5, 15})
    for (std::size_t k = 0; k < r.nodes.size(); k += 7) CHECK(B.value_at_node(n, k) == doctest::Approx(hermite_Y(n, r.nodes[k])));
}

TEST_CASE("soft-wall coefficients") {
  const HermiteBasis B(64);
  const auto still = softwall_coefficients(2, WallSchedule::linear(1.0, 0.0), B);
  for (int n = 0; n < 64; ++n) CHECK(std::abs(still.at(n) - (n == 2 ? 1.0 : 0.0)) < 1e-13);
  for (int l : {0, 1, 4}) {
    const auto c = softwall_coefficients(l, WallSchedule::linear(1.0, 0.2), B);
    CHECK(1.0 - c.norm2() < 1e-8);
    for (int n = 0; n < 64; ++n)
      if ((n + l) % 2) CHECK(c.at(n) == cplx(0.0, 0.0));
  }
  CHECK_THROWS_AS(softwall_coefficients(0, WallSchedule::sqrt_law(0.1, 0.2, 1.0), B), DomainError);
  CHECK_THROWS_AS(softwall_coefficients(64, WallSchedule::linear(1.0, 0.1), B), DomainError);
}

TEST_CASE("ladder-operator integrals equal direct quadrature") {
  gen::for_all(0x6b0002, 10, [](gen::Stream& g) {
    const int nMax = g.integer(2, 12);
    const auto c = random_state(g, nMax);
    auto phi = [&](double y) {
      cplx s = 0.0;
      for (int n = 0; n < nMax; ++n) s += c.at(n) * hermite_Y(n, y);
      return s;
    };
    auto dphi = [&](double y) {
      cplx s = 0.0;
      for (int n = 0; n < nMax; ++n) {
        const double d = (n > 0 ? std::sqrt(n / 2.0) * hermite_Y(n - 1, y) : 0.0) - std::sqrt((n + 1) / 2.0) * hermite_Y(n + 1, y);
        s += c.at(n) * d;
      }
      return s;
    };
    const double kin = integrate([&](double y) { return std::norm(dphi(y)); }, -14, 14).value;
    const double pot = integrate([&](double y) { return y * y * std::norm(phi(y)); }, -14, 14).value;
    const double im1 = integrate([&](double y) { return (y * std::conj(phi(y)) * dphi(y)).imag(); }, -14, 14).value;
    const auto K = soft_integrals(c);
    CHECK(std::abs(K.kinetic - kin) < 1e-8);
    CHECK(std::abs(K.potential - pot) < 1e-8);
    CHECK(std::abs(K.k0 - (kin + pot)) < 1e-8);
    CHECK(std::abs(K.k2 - pot) < 1e-8);
    CHECK(std::abs(K.im_k1 - im1) < 1e-8);
  });
}

TEST_CASE("virial theorem for stationary states") {
  for (int l = 0; l < 30; ++l) {
    SpectralState c;
    c.basis = BasisKind::hermite;
    c.first_index = 0;
    c.coeffs.assign(32, 0.0);
    c.coeffs[l] = 1.0;
    const auto K = soft_integrals(c);
    CHECK(std::abs(K.kinetic - K.potential) < 1e-10);
    CHECK(K.k0 == doctest::Approx(2.0 * l + 1.0).epsilon(1e-14));
    CHECK(K.im_k1 == 0.0);
  }
}

TEST_CASE("stationary trap energies and adiabatic force") {
  for (double L : {0.5, 1.0, 2.3})
    for (int l : {0, 1, 7}) {
      const auto s = SoftWallEngine(WallSchedule::linear(L, 0.0), l).sample(0.7);
      CHECK(std::abs(s.energy - (l + 0.5) / (L * L)) <= 1e-12 * s.energy);
      CHECK(std::abs(s.force.adiabatic - 2.0 * (l + 0.5) / (L * L * L)) <= 1e-12 * s.force.adiabatic);
      CHECK(s.force.non_adiabatic == 0.0);
    }
}

TEST_CASE("operator and energy routes agree for the trap") {
  gen::for_all(0x6b0003, 20, [](gen::Stream& g) {
    const double L0 = g.uniform(0.5, 2.0), v = g.uniform(-0.1, 0.1);
    const SoftWallEngine eng(WallSchedule::linear(L0, v), g.integer(0, 4));
    const auto s = eng.sample(g.uniform(0.0, 2.0));
    CHECK(std::abs(s.fd_force - s.force.total) <= 1e-6 * std::abs(s.force.total));
  });
}

TEST_CASE("soft-wall non-adiabatic coefficient") {
  for (int l : {0, 1, 3}) {
    double lo = 1e300, hi = -1e300;
    for (double v : {1e-3, 1e-2, 5e-2}) {
      const auto s = SoftWallEngine(WallSchedule::linear(1.3, v), l).sample(0.0, EvalMode::time_averaged);
      const double C = s.force.non_adiabatic * 1.3 / (v * v);
      lo = std::min(lo, C);
      hi = std::max(hi, C);
      const auto r = SoftWallEngine(WallSchedule::linear(1.3, -v), l).sample(0.0, EvalMode::time_averaged);
      CHECK(std::abs(r.force.non_adiabatic - s.force.non_adiabatic) <= 1e-9 * std::abs(s.force.non_adiabatic));
    }
    CHECK(hi < 0.0);
    // frozen from the engine: C_soft = -(l + 1/2)
    CHECK(lo == doctest::Approx(-(l + 0.5)).epsilon(1e-10));
    CHECK(hi == doctest::Approx(-(l + 0.5)).epsilon(1e-10));
  }
}

TEST_CASE("soft-wall quadratic law") {
  const std::vector<double> v{1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2};
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (double x : v) {
    const double F = SoftWallEngine(WallSchedule::linear(1.0, x), 0).sample(0.0, EvalMode::time_averaged).force.non_adiabatic;
    const double lx = std::log(x), ly = std::log(std::abs(F));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(v.size());
  CHECK(std::abs((n * sxy - sx * sy) / (n * sxx - sx * sx) - 2.0) <= 0.05);
}

TEST_CASE("propagation is a pure phase") {
  const HermiteBasis B(32);
  const auto c = softwall_coefficients(1, WallSchedule::linear(1.0, 0.3), B);
  const auto p = softwall_propagate(c, 1.1, 1.0);
  for (int n = 0; n < 32; ++n) {
    CHECK(std::abs(p.at(n)) == doctest::Approx(std::abs(c.at(n))).epsilon(1e-15));
    if (std::abs(c.at(n)) > 1e-6)
      CHECK(std::arg(p.at(n) / c.at(n)) == doctest::Approx(std::remainder(-(n + 0.5) * 1.1, 2 * pi)).epsilon(1e-12));
  }
}
