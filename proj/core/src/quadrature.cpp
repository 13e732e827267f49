#include "cavity/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <array>
#include <mutex>
#include <numbers>

namespace cavity {

namespace {

QuadratureRule build_gauss_legendre(int n) {
  QuadratureRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    r.nodes[i] = -z;
    r.nodes[n - 1 - i] = z;
    r.weights[i] = r.weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
  return r;
}

}  // namespace

const QuadratureRule& gauss_legendre(int n) {
  if (n < 1 || n > 128) throw DomainError("gauss_legendre: order must be in [1, 128]");
  static std::array<QuadratureRule, 129> cache;
  static std::array<std::once_flag, 129> once;
  std::call_once(once[n], [n] { cache[n] = build_gauss_legendre(n); });
  return cache[n];
}

QuadratureRule composite_gauss_legendre(double a, double b, int panels, int order) {
  if (panels < 1) throw DomainError("composite_gauss_legendre: need at least one panel");
  const auto& base = gauss_legendre(order);
  QuadratureRule r;
  r.nodes.reserve(static_cast<std::size_t>(panels) * order);
  r.weights.reserve(r.nodes.capacity());
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    for (int k = 0; k < order; ++k) {
      r.nodes.push_back(lo + 0.5 * h * (base.nodes[k] + 1.0));
      r.weights.push_back(0.5 * h * base.weights[k]);
    }
  }
  return r;
}

QuadratureRule gauss_hermite(int n) {
  if (n < 1) throw DomainError("gauss_hermite: order must be positive");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) J(k, k - 1) = J(k - 1, k) = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("gauss_hermite: eigen solver failed");

  QuadratureRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  // orthonormal Hermite functions h_j(x): returns sum_{j<n} h_j^2, h_n, h_{n-1}
  const double pi_m14 = std::pow(std::numbers::pi, -0.25);
  auto sweep = [&](double x, double& hn, double& hnm1) {
    double hm = 0.0, hc = pi_m14 * std::exp(-0.5 * x * x);
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      s += hc * hc;
      const double next = std::sqrt(2.0 / (j + 1)) * x * hc - std::sqrt(double(j) / (j + 1)) * hm;
      hm = hc;
      hc = next;
    }
    hn = hc;
    hnm1 = hm;
    return s;
  };
  for (int i = 0; i < n; ++i) {
    double x = es.eigenvalues()(i), hn = 0.0, hnm1 = 0.0;
    for (int it = 0; it < 3; ++it) {
      sweep(x, hn, hnm1);
      const double d = std::sqrt(2.0 * n) * hnm1 - x * hn;
      if (d == 0.0) break;
      x -= hn / d;
    }
    r.nodes[i] = x;
    r.weights[i] = 1.0 / sweep(x, hn, hnm1);
  }
  return r;
}

}  // namespace cavity
