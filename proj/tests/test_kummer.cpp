#include <cmath>
#include <numbers>

#include "cavity/errors.hpp"
#include "cavity/kummer.hpp"
#include "cavity/quadrature.hpp"
#include "doctest.h"
#include "oracles/galerkin.hpp"
#include "oracles/kummer_mp.hpp"
#include "support/gen.hpp"

using namespace cavity;
using std::numbers::pi;

namespace {

double re_m_mp(double K, double hbarB) {
  using oracle::mp_complex;
  const mp_complex a(0.75, K / hbarB), b(1.5, 0.0), z(0.0, 0.5 * hbarB);
  return static_cast<double>(oracle::kummer_mp(a, b, z).real());
}

// dense sign scan plus bisection of the eigencondition, in 50 digits
double mp_root(double lo, double hi, double step, double hbarB) {
  double a = lo, fa = re_m_mp(a, hbarB);
  for (double b = lo + step; b <= hi; b += step) {
    const double fb = re_m_mp(b, hbarB);
    if ((fa < 0) != (fb < 0)) {
      for (int it = 0; it < 80; ++it) {
        const double m = 0.5 * (a + b), fm = re_m_mp(m, hbarB);
        if ((fm < 0) == (fa < 0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      return 0.5 * (a + b);
    }
    a = b;
    fa = fb;
  }
  return std::nan("");
}

}  // namespace

TEST_CASE("kummer_m identities") {
  CHECK(kummer_m({0.3, 1.2}, {1.5, 0.0}, 0.0) == cplx(1.0, 0.0));
  const cplx z(0.3, 0.4);
  CHECK(std::abs(kummer_m(1.0, 1.0, z) - std::exp(z)) < 1e-14);
  // Kummer's transformation M(a,b,z) = e^z M(b-a,b,-z)
  gen::for_all(0x3c0001, 30, [](gen::Stream& g) {
    const cplx a(g.uniform(-2, 2), g.uniform(-5, 5)), b(g.uniform(0.5, 3), 0.0), w(g.uniform(-2, 2), g.uniform(-2, 2));
    const cplx lhs = kummer_m(a, b, w), rhs = std::exp(w) * kummer_m(b - a, b, -w);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
  });
}

TEST_CASE("kummer_m against the 50-digit series") {
  using oracle::mp_complex;
  const cplx v = kummer_m(0.75, 1.5, cplx(0.0, 0.05));
  const cplx ref = oracle::to_double(oracle::kummer_mp(mp_complex(0.75), mp_complex(1.5), mp_complex(0.0, 0.05)));
  CHECK(std::abs(v - ref) < 1e-15);
  CHECK(std::abs(ref - cplx(0.99956255967502006, 0.024994271348716898)) < 1e-16);
  gen::for_all(0x3c0002, 40, [](gen::Stream& g) {
    const double K = g.uniform(0.5, 60.0), hbarB = g.log_uniform(1e-3, 1.0);
    const cplx a(0.75, K / hbarB), z(0.0, 0.5 * hbarB);
    const cplx ref = oracle::to_double(
        oracle::kummer_mp(mp_complex(a.real(), a.imag()), mp_complex(1.5), mp_complex(z.real(), z.imag())));
    CHECK(std::abs(kummer_m(a, 1.5, z) - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
  });
}

TEST_CASE("kummer_m domain errors") {
  CHECK_THROWS_AS(kummer_m(1.0, 0.0, 0.5), DomainError);
  CHECK_THROWS_AS(kummer_m(1.0, -2.0, 0.5), DomainError);
  CHECK_THROWS_AS(kummer_m(1.0, 1.5, 11.0), DomainError);
}

TEST_CASE("eigencondition equals Re M from the series") {
  gen::for_all(0x3c0003, 30, [](gen::Stream& g) {
    const double hbarB = g.log_uniform(1e-2, 0.5), K = g.uniform(1.0, 40.0);
    const double ref = re_m_mp(K, hbarB);
    CHECK(std::abs(eigencondition(K, hbarB) - ref) < 1e-10);
  });
}

TEST_CASE("semiclassical limit of the roots") {
  const auto K = find_roots(1e-3, 5);
  for (int n = 1; n <= 5; ++n) CHECK(std::abs(K[n - 1] / (n * n * pi * pi / 2.0) - 1.0) <= 1e-3);
  const auto K0 = KummerBasis(0.0, 5).roots();
  CHECK(K0[4] == doctest::Approx(25.0 * pi * pi / 2.0).epsilon(1e-14));
}

TEST_CASE("K1 at hbar B = 0.1 regression") {
  const double ref = mp_root(4.9, 4.97, 1e-3, 0.1);
  CHECK(ref == doctest::Approx(4.93444885613098892).epsilon(1e-13));
  const auto K = find_roots(0.1, 8);
  CHECK(K[0] == doctest::Approx(4.93444885613098892).epsilon(1e-12));
}

TEST_CASE("roots agree with an independent Galerkin eigensolver") {
  for (double hb2 : {1e-2, 0.25, -0.25, -1e-2}) {
    const auto K = find_roots_b2(hb2, 8);
    const auto G = oracle::galerkin_roots(hb2, 80, 8);
    for (int n = 0; n < 8; ++n) CHECK(K[n] == doctest::Approx(G[n]).epsilon(1e-9));
  }
}

TEST_CASE("roots are strictly increasing and move with the sign of B^2") {
  const auto up = find_roots_b2(0.3, 40), down = find_roots_b2(-0.3, 40);
  for (int n = 1; n < 40; ++n) {
    CHECK(up[n] > up[n - 1]);
    CHECK(down[n] > down[n - 1]);
  }
  for (int n = 0; n < 40; ++n) {
    const double free = (n + 1) * (n + 1) * pi * pi / 2.0;
    CHECK(up[n] < free);
    CHECK(down[n] > free);
  }
}

TEST_CASE("root search failures and bad arguments") {
  CHECK_THROWS_AS(find_roots(0.0, 4), DomainError);
  CHECK_THROWS_AS(find_roots(-0.1, 4), DomainError);
  CHECK_THROWS_AS(find_roots(60.0, 3), RootSearchError);
}

TEST_CASE("basis functions: boundary values, sign and orthonormality") {
  const KummerBasis basis = KummerBasis::from_hbarB(0.1, 16);
  for (int n = 1; n <= 16; ++n) {
    CHECK(basis(n, 0.0) == 0.0);
    CHECK(std::abs(basis(n, 1.0)) < 1e-10);
    CHECK(basis.derivative(n, 0.0) > 0.0);
  }
  double worst = 0.0;
  for (int n = 1; n <= 8; ++n)
    for (int m = n; m <= 8; ++m) {
      const double s = integrate([&](double y) { return basis(n, y) * basis(m, y); }, 0.0, 1.0, 1e-12).value;
      worst = std::max(worst, std::abs(s - (n == m ? 1.0 : 0.0)));
    }
  CHECK(worst < 1e-8);
  CHECK_THROWS_AS(basis(17, 0.5), DomainError);
  CHECK_THROWS_AS(basis(1, 1.5), DomainError);
}

TEST_CASE("basis functions satisfy the eigen-equation") {
  const KummerBasis basis(0.2, 6);
  const double w2 = basis.omega2(), h = 1e-4;
  for (int n = 1; n <= 6; ++n)
    for (double y : {0.1, 0.37, 0.8}) {
      const double upp = (basis(n, y + h) - 2.0 * basis(n, y) + basis(n, y - h)) / (h * h);
      CHECK(std::abs(upp + (2.0 * basis.root(n) + w2 * y * y) * basis(n, y)) < 1e-5 * (1.0 + std::abs(upp)));
    }
}

TEST_CASE("completeness: a sine state is reconstructed from 64 basis functions") {
  for (double hbarB : {0.01, 0.1}) {
    const KummerBasis basis = KummerBasis::from_hbarB(hbarB, 64);
    const auto& rule = basis.grid();
    for (int l : {1, 3}) {
      std::vector<double> c(65, 0.0);
      for (int n = 1; n <= 64; ++n)
        for (std::size_t k = 0; k < rule.nodes.size(); ++k)
          c[n] += rule.weights[k] * basis.value_at_node(n, k) * std::sqrt(2.0) * std::sin(l * pi * rule.nodes[k]);
      double err = 0.0;
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        double r = std::sqrt(2.0) * std::sin(l * pi * rule.nodes[k]);
        for (int n = 1; n <= 64; ++n) r -= c[n] * basis.value_at_node(n, k);
        err += rule.weights[k] * r * r;
      }
      CHECK(std::sqrt(err) < 1e-6);
    }
  }
}

TEST_CASE("large nMax basis stays orthonormal on its grid") {
  const KummerBasis basis(0.01, 64);
  const auto& rule = basis.grid();
  double worst = 0.0;
  for (int n : {1, 17, 40, 64})
    for (int m : {1, 17, 40, 64}) {
      double s = 0.0;
      for (std::size_t k = 0; k < rule.nodes.size(); ++k)
        s += rule.weights[k] * basis.value_at_node(n, k) * basis.value_at_node(m, k);
      worst = std::max(worst, std::abs(s - (n == m ? 1.0 : 0.0)));
    }
  CHECK(worst < 1e-10);
  CHECK(std::abs(basis(64, 1.0)) < 1e-10);
}

TEST_CASE("zero field basis is the sine basis at every grid node") {
  // grid boundaries can fall exactly on nodes of high eigenfunctions (14/168 = 5/60)
  const KummerBasis basis(0.0, 64);
  const auto& rule = basis.grid();
  double worst = 0.0;
  for (int n = 1; n <= 64; ++n)
    for (std::size_t k = 0; k < rule.nodes.size(); ++k)
      worst = std::max(worst, std::abs(basis.value_at_node(n, k) - std::sqrt(2.0) * std::sin(n * pi * rule.nodes[k])));
  CHECK(worst < 1e-12);
}
